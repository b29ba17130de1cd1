#pragma once

#include "mz/rational.hpp"

#include <string>
#include <vector>

namespace mz {

/// Row-major; every row has the same length.
using QMatrix = std::vector<std::vector<Q>>;

int rank(QMatrix m);

QMatrix identity_matrix(int n);
QMatrix multiply(const QMatrix& a, const QMatrix& b);

/// Coefficients of det(x I - m), lowest degree first; monic of degree n.
std::vector<Q> characteristic_polynomial(const QMatrix& m);

struct SpectralEstimate {
    double value = 0;
    /// Certified half-width for the exact method, residual norm for power iteration.
    double error = 0;
    std::string method;
    bool exact = false;
};

/// Largest real root, isolated by a Sturm sequence and bisected to width below tol.
/// Throws when the polynomial has no real root.
SpectralEstimate largest_real_root(const std::vector<Q>& poly, const Q& tol);

/// Throws on negative entries. For nonnegative square matrices the spectral radius is an eigenvalue,
/// so it is the largest real root of the characteristic polynomial.
SpectralEstimate spectral_radius(const QMatrix& m);

}  // namespace mz
