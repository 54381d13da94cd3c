#pragma once

#include <stdexcept>
#include <string>

namespace drumeig {

// Invalid geometry input (self-intersection, non-closed data, bad hole placement, ...).
class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

// Root search could not certify an interval down to the width floor.
class NoConvergenceError : public std::runtime_error {
public:
    NoConvergenceError(const std::string& what, double a, double b, int m_last, double decay_last)
        : std::runtime_error(what), interval_lo(a), interval_hi(b),
          last_degree(m_last), last_decay(decay_last) {}
    double interval_lo;
    double interval_hi;
    int last_degree;
    double last_decay;
};

// Requested an eigenmode at a frequency where the operator is not numerically singular.
class NotAnEigenfrequencyError : public std::runtime_error {
public:
    NotAnEigenfrequencyError(const std::string& what, double kappa, double sigma)
        : std::runtime_error(what), kappa(kappa), sigma_min(sigma) {}
    double kappa;
    double sigma_min;
};

} // namespace drumeig
