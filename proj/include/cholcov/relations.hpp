#pragma once

// Regression readings of the covariance Cholesky factor. Indices are 0-based
// here: the conditioning prefix {1..j} of the usual 1-based notation is the
// index set {0..j-1}.

#include <vector>

#include "cholcov/linalg.hpp"

namespace cholcov {

/// beta_{i|J} = (Sigma_iJ Sigma_JJ^{-1})^t, ordered like J.
Vector regression_coefficients(const Matrix& sigma, Index i, const std::vector<Index>& conditioning);

/// Convenience for the prefix set {0..len-1}.
Vector prefix_regression_coefficients(const Matrix& sigma, Index i, Index len);

struct DeviationReport {
    double max_deviation = 0.0;
    Index worst_i = 0;  // 0-based
    Index worst_j = 0;
};

/// max_{i>j} |l_ij - beta_{ij|0..j}| with L the unit-lower Cholesky factor.
DeviationReport verify_factor_as_regressions(const Matrix& sigma);

/// Sigma^{-1} = U D^{-1} U^t with U unit upper triangular, built entry by
/// entry from regressions: u_ji = -beta_{ij|0..i-1}; d_ii is the residual
/// variance of that regression.
struct UpperFactor {
    Matrix u;
    Vector d;
};

UpperFactor u_from_sigma(const Matrix& sigma);

/// Checks beta_{ij|0..j} = beta_{ij|0..i-1} + sum_{k=j+1}^{i-1} beta_{ik|0..i-1} beta_{kj|0..j}
/// for all j < i, each coefficient obtained by its own regression.
DeviationReport verify_coefficient_recursion(const Matrix& sigma);

}  // namespace cholcov
