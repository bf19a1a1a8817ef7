#include "cholcov/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cholcov {

namespace {

std::string shape(const Matrix& m) {
    std::ostringstream os;
    os << m.rows() << "x" << m.cols();
    return os.str();
}

void require_same_shape(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "shapes " + shape(a) + " and " + shape(b));
    }
}

}  // namespace

LowerTriangularFactor::LowerTriangularFactor(Matrix t) : t_(std::move(t)) {
    require_square(t_, "factor");
    require_finite(t_, "factor");
    const Index p = t_.rows();
    for (Index j = 0; j < p; ++j) {
        for (Index i = 0; i < j; ++i) {
            if (t_(i, j) != 0.0) {
                throw Error(ErrorCode::InvalidArgument, "factor has a nonzero strictly-upper entry");
            }
        }
        if (!(t_(j, j) > 0.0)) {
            throw Error(ErrorCode::NotPositiveDefinite,
                        "factor diagonal entry " + std::to_string(j) + " is not positive");
        }
    }
}

LowerTriangularFactor LowerTriangularFactor::identity(Index p) {
    return LowerTriangularFactor(Matrix::Identity(p, p));
}

Matrix LowerTriangularFactor::covariance() const {
    const Matrix sigma = t_.triangularView<Eigen::Lower>() * t_.transpose();
    return (sigma + sigma.transpose()) * 0.5;
}

Matrix LowerTriangularFactor::unit_lower() const {
    return t_ * t_.diagonal().cwiseInverse().asDiagonal();
}

Vector LowerTriangularFactor::variances() const { return t_.diagonal().array().square(); }

double LowerTriangularFactor::log_det() const { return t_.diagonal().array().log().sum(); }

Vector LowerTriangularFactor::solve(const Vector& b) const {
    if (b.size() != dim()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "rhs length " + std::to_string(b.size()) + " for factor of dimension " +
                        std::to_string(dim()));
    }
    return t_.triangularView<Eigen::Lower>().solve(b);
}

Matrix LowerTriangularFactor::solve(const Matrix& b) const {
    if (b.rows() != dim()) {
        throw Error(ErrorCode::DimensionMismatch, "rhs rows do not match factor dimension");
    }
    return t_.triangularView<Eigen::Lower>().solve(b);
}

Matrix LowerTriangularFactor::solve_transposed(const Matrix& b) const {
    if (b.rows() != dim()) {
        throw Error(ErrorCode::DimensionMismatch, "rhs rows do not match factor dimension");
    }
    return t_.transpose().triangularView<Eigen::Upper>().solve(b);
}

Matrix Standardization::apply(const Matrix& values) const {
    if (values.cols() != mean.size()) {
        throw Error(ErrorCode::DimensionMismatch, "standardization fitted on a different width");
    }
    Matrix out = values.rowwise() - mean.transpose();
    out.array().rowwise() /= scale.transpose().array();
    return out;
}

void require_finite(const Matrix& m, std::string_view what) {
    if (!m.allFinite()) {
        throw Error(ErrorCode::NonFinite, std::string(what) + " has non-finite entries");
    }
}

void require_square(const Matrix& m, std::string_view what) {
    if (m.rows() < 1 || m.rows() != m.cols()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + " must be square and non-empty, got " + shape(m));
    }
}

bool is_symmetric(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = j + 1; i < m.rows(); ++i) {
            if (std::abs(m(i, j) - m(j, i)) > tol * scale) return false;
        }
    }
    return true;
}

void require_symmetric(const Matrix& m, const NumericTolerances& tol) {
    require_square(m, "matrix");
    require_finite(m, "matrix");
    if (!is_symmetric(m, tol.symmetry)) {
        throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric within tolerance");
    }
}

LowerTriangularFactor cholesky_decompose(const Matrix& sigma, const NumericTolerances& tol) {
    require_symmetric(sigma, tol);
    const Index p = sigma.rows();
    Matrix t = Matrix::Zero(p, p);
    // Row-by-row (Cholesky-Banachiewicz), reading only the lower triangle.
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j <= i; ++j) {
            double acc = sigma(i, j);
            for (Index k = 0; k < j; ++k) acc -= t(i, k) * t(j, k);
            if (i == j) {
                if (!(acc > 0.0)) {
                    throw Error(ErrorCode::NotPositiveDefinite,
                                "non-positive pivot at index " + std::to_string(i));
                }
                t(i, i) = std::sqrt(acc);
            } else {
                t(i, j) = acc / t(j, j);
            }
        }
    }
    return LowerTriangularFactor(std::move(t));
}

Vector triangular_solve(const LowerTriangularFactor& t, const Vector& b) { return t.solve(b); }

Matrix sample_covariance(const Matrix& values, Centering centering) {
    if (values.rows() == 0) throw Error(ErrorCode::EmptySample, "sample has no observations");
    const double n = static_cast<double>(values.rows());
    Matrix s;
    if (centering == Centering::SampleMean) {
        const Matrix centered = values.rowwise() - values.colwise().mean();
        s = centered.transpose() * centered / n;
    } else {
        s = values.transpose() * values / n;
    }
    // Products are symmetric up to summation order; make it exact.
    return (s + s.transpose()) * 0.5;
}

Matrix sample_covariance(const DataSample& data, Centering centering) {
    return sample_covariance(data.values, centering);
}

Standardization fit_standardization(const Matrix& values) {
    if (values.rows() == 0) throw Error(ErrorCode::EmptySample, "sample has no observations");
    Standardization st;
    st.mean = values.colwise().mean().transpose();
    st.scale.resize(values.cols());
    const double n = static_cast<double>(values.rows());
    for (Index j = 0; j < values.cols(); ++j) {
        const double var = (values.col(j).array() - st.mean(j)).square().sum() / n;
        const double sd = std::sqrt(var);
        if (!(sd > 1e-12 * std::max(1.0, std::abs(st.mean(j))))) {
            throw Error(ErrorCode::ZeroVariance, "column " + std::to_string(j) + " is constant");
        }
        st.scale(j) = sd;
    }
    return st;
}

DataSample standardize(const DataSample& data) {
    DataSample out = data;
    out.values = fit_standardization(data.values).apply(data.values);
    out.standardized = true;
    return out;
}

double induced_one_norm_diff(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b);
    return (a - b).cwiseAbs().colwise().sum().maxCoeff();
}

double induced_one_norm_diff(const LowerTriangularFactor& a, const LowerTriangularFactor& b) {
    return induced_one_norm_diff(a.matrix(), b.matrix());
}

Matrix strictly_lower(const Matrix& m) {
    Matrix out = m.triangularView<Eigen::StrictlyLower>();
    return out;
}

}  // namespace cholcov
