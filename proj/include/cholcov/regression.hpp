#pragma once

// Regression-based factor estimators. Both regress each variable x_i on the
// residuals eps_1..eps_{i-1} of the earlier regressions, then assemble
// T = L sqrt(D) with d_ii = ||eps_i||^2 / N. Columns are used as given (no
// intercept), so callers pass centered or standardized data.

#include <optional>
#include <vector>

#include "cholcov/linalg.hpp"

namespace cholcov {

struct BandConfig {
    int k = 0;  // number of sub-diagonals of L estimated
};

struct LassoConfig {
    double lambda = 0.0;        // penalty on ||l_i||_1 in ||x_i - E l_i||^2 + lambda ||l_i||_1
    double tolerance = 1e-8;    // coordinate descent stops when max |coefficient change| < tolerance
    int max_sweeps = 100000;

    void validate() const;
};

/// Residual variances below this are floored and the residual is dropped from
/// later designs.
inline constexpr double kResidualVarianceFloor = 1e-12;

/// Throws BandTooLarge when k >= min(N - 1, p), SingularDesign for a
/// rank-deficient residual design.
LowerTriangularFactor fit_banded(const Matrix& values, const BandConfig& config);
LowerTriangularFactor fit_banded(const DataSample& data, const BandConfig& config);

struct CoordinateDescentResult {
    Vector beta;
    int sweeps = 0;
    double kkt_residual = 0.0;
};

/// Cyclic coordinate descent on ||y - E b||^2 + lambda ||b||_1 given the Gram
/// matrix E^t E and E^t y. Throws ConvergenceFailure after max_sweeps.
CoordinateDescentResult lasso_coordinate_descent(const Matrix& gram, const Vector& xty, double lambda,
                                                 const LassoConfig& config);

/// Largest violation of the subgradient conditions of the problem above.
double lasso_kkt_residual(const Matrix& gram, const Vector& xty, const Vector& beta, double lambda);

struct LassoFit {
    LowerTriangularFactor factor;
    double max_kkt_residual = 0.0;  // over all row regressions
    int max_sweeps = 0;
};

LassoFit fit_lasso_detailed(const Matrix& values, const LassoConfig& config);
LowerTriangularFactor fit_lasso(const Matrix& values, const LassoConfig& config);
LowerTriangularFactor fit_lasso(const DataSample& data, const LassoConfig& config);

/// Smallest lambda for which every row regression has the all-zero solution:
/// 2 max_{i>j} |x_j^t x_i|.
double lasso_lambda_max(const Matrix& values);

struct BandSelection {
    int k = 0;
    std::vector<int> candidates;
    std::vector<double> cv_score;  // mean held-out NLL
};

/// Cross-validated band choice; ties go to the smaller k. Candidates default
/// to every k valid for the smallest training fold.
BandSelection select_band_k(const Matrix& values, int folds,
                            const std::optional<std::vector<int>>& candidates = std::nullopt);
int select_band_k(const DataSample& data, int folds);

struct LassoSelection {
    double lambda = 0.0;
    std::vector<double> grid;
    std::vector<double> cv_score;
};

struct LassoSelectionConfig {
    int folds = 5;
    int grid_size = 20;
    double grid_ratio = 1e-3;
    std::optional<std::vector<double>> grid;
    LassoConfig solver{};
};

/// The penalty multiplies an unnormalized sum of squares, so fold fits use
/// lambda * N_train / N; the returned lambda applies to all N rows.
LassoSelection select_lasso_lambda(const Matrix& values, const LassoSelectionConfig& config = {});

}  // namespace cholcov
