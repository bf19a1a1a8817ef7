#pragma once

// Dense kernel shared by every estimator: Cholesky factors, triangular solves,
// sample moments and the induced 1-norm.

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cholcov/errors.hpp"

namespace cholcov {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Numerical tolerances used by input validation.
struct NumericTolerances {
    /// Maximum |a_ij - a_ji|, relative to max(1, max |a_ij|).
    double symmetry = 1e-10;
};

/// Lower-triangular T with strictly positive diagonal, so that TT^t is
/// positive definite. Equivalently T = L sqrt(D) with L unit lower triangular.
class LowerTriangularFactor {
public:
    /// Validates the invariants; throws NotPositiveDefinite for a non-positive
    /// diagonal and InvalidArgument for nonzero strictly-upper entries.
    explicit LowerTriangularFactor(Matrix t);

    static LowerTriangularFactor identity(Index p);

    [[nodiscard]] Index dim() const noexcept { return t_.rows(); }
    [[nodiscard]] const Matrix& matrix() const noexcept { return t_; }
    [[nodiscard]] double operator()(Index i, Index j) const { return t_(i, j); }

    /// TT^t.
    [[nodiscard]] Matrix covariance() const;
    /// Unit-diagonal L with T = L sqrt(D).
    [[nodiscard]] Matrix unit_lower() const;
    /// Diagonal of D, i.e. t_ii^2.
    [[nodiscard]] Vector variances() const;
    /// ln det T = sum_i ln t_ii.
    [[nodiscard]] double log_det() const;

    /// T^{-1} b by forward substitution.
    [[nodiscard]] Vector solve(const Vector& b) const;
    [[nodiscard]] Matrix solve(const Matrix& b) const;
    /// T^{-t} b by back substitution.
    [[nodiscard]] Matrix solve_transposed(const Matrix& b) const;

private:
    Matrix t_;
};

/// N x p observations with optional class labels. Labels index into
/// class_names.
struct DataSample {
    Matrix values;
    std::vector<int> labels;
    std::vector<std::string> class_names;
    bool standardized = false;

    [[nodiscard]] Index n() const noexcept { return values.rows(); }
    [[nodiscard]] Index p() const noexcept { return values.cols(); }
    [[nodiscard]] bool has_labels() const noexcept { return !labels.empty(); }
};

enum class Centering {
    SampleMean,      // subtract the column means first
    AssumeZeroMean,  // (1/N) sum_n x_n x_n^t
};

/// Column means and population standard deviations of a training block.
struct Standardization {
    Vector mean;
    Vector scale;

    /// (x - mean) / scale, column-wise.
    [[nodiscard]] Matrix apply(const Matrix& values) const;
};

void require_finite(const Matrix& m, std::string_view what);
void require_square(const Matrix& m, std::string_view what);
[[nodiscard]] bool is_symmetric(const Matrix& m, double tol);
void require_symmetric(const Matrix& m, const NumericTolerances& tol = {});

LowerTriangularFactor cholesky_decompose(const Matrix& sigma, const NumericTolerances& tol = {});

Vector triangular_solve(const LowerTriangularFactor& t, const Vector& b);

/// 1/N divisor in both centering modes.
Matrix sample_covariance(const Matrix& values, Centering centering = Centering::SampleMean);
Matrix sample_covariance(const DataSample& data, Centering centering = Centering::SampleMean);

/// Fits column means and 1/N standard deviations; throws ZeroVariance naming
/// the first constant column.
Standardization fit_standardization(const Matrix& values);

DataSample standardize(const DataSample& data);

/// max_j sum_i |a_ij - b_ij|.
double induced_one_norm_diff(const Matrix& a, const Matrix& b);
double induced_one_norm_diff(const LowerTriangularFactor& a, const LowerTriangularFactor& b);

/// Strictly-lower part of m, zeros elsewhere.
Matrix strictly_lower(const Matrix& m);

}  // namespace cholcov
