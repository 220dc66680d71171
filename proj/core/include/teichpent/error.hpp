#pragma once

#include <stdexcept>
#include <string>

namespace teichpent {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter lies outside the supported (guarded) domain.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Boundary points are not in strictly monotone cyclic order.
class OrderingError : public Error {
public:
    using Error::Error;
};

/// Two boundary points coincide.
class DegeneracyError : public Error {
public:
    using Error::Error;
};

/// Evaluation requested at a pole of the quadratic differential.
class PoleError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature ran out of panels before meeting its tolerance.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double estimate)
        : Error(what), estimate_(estimate) {}
    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

/// A computed polygon fails to close; signals a quadrature or branch bug.
class ConsistencyError : public Error {
public:
    ConsistencyError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// A hexagon class whose turn/label pattern no pentagon can produce.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A nonlinear solve did not converge.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_residual)
        : Error(what), best_residual_(best_residual) {}
    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

/// Newton inversion of a conformal chart diverged near a polygon corner.
class CornerProximityError : public Error {
public:
    using Error::Error;
};

}  // namespace teichpent
