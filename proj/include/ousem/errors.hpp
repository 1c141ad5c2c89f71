#pragma once

#include <stdexcept>
#include <string>

namespace ousem {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Model document does not conform to the schema.
class SchemaViolation : public Error {
public:
    using Error::Error;
};

/// Q is not symmetric positive semidefinite within tolerance.
class NotPSD : public Error {
public:
    using Error::Error;
};

/// A and -A* share an eigenvalue; the Lyapunov equation has no unique solution.
class NoUniqueSolution : public Error {
public:
    using Error::Error;
};

/// Operation requires a reversible model but the symmetry check failed.
class NotSymmetric : public Error {
public:
    using Error::Error;
};

/// Q is numerically singular; lower the truncation or raise precision.
class SingularQ : public Error {
public:
    using Error::Error;
};

/// Q_t is numerically singular (t too small).
class SingularQt : public Error {
public:
    using Error::Error;
};

/// Polynomial degree exceeds the chaos degree cap.
class DegreeOverflow : public Error {
public:
    using Error::Error;
};

/// Gauss-Hermite exactness does not cover the polynomial degree.
class QuadratureOrderTooLow : public Error {
public:
    using Error::Error;
};

/// Tensorized quadrature refuses above the dimension limit; use Monte Carlo.
class QuadratureDimensionExceeded : public Error {
public:
    using Error::Error;
};

/// Detailed-balance test requires a stationary-start ensemble.
class NotStationaryStart : public Error {
public:
    using Error::Error;
};

/// Example-2 grid cannot resolve the requested residual tolerance.
class GridTooCoarse : public Error {
public:
    using Error::Error;
};

} // namespace ousem
