#include "cholcov/losses.hpp"

namespace cholcov {

namespace {

void require_matching(const LowerTriangularFactor& t, const Matrix& sigma_hat) {
    if (sigma_hat.rows() != t.dim() || sigma_hat.cols() != t.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "reference matrix does not match factor dimension");
    }
}

// T^{-1} S T^{-t}, symmetrized.
Matrix whitened_reference(const LowerTriangularFactor& t, const Matrix& sigma_hat) {
    const Matrix a = t.solve(sigma_hat);                         // T^{-1} S
    const Matrix m = t.solve(Matrix(a.transpose()));             // T^{-1} S T^{-t}
    return (m + m.transpose()) * 0.5;
}

}  // namespace

std::string_view to_string(LossKind kind) noexcept {
    switch (kind) {
        case LossKind::NegativeLogLikelihood: return "nll";
        case LossKind::Frobenius: return "fr";
    }
    return "unknown";
}

Loss::Loss(LossKind kind, Matrix reference, const NumericTolerances& tol)
    : kind_(kind), reference_(std::move(reference)) {
    require_symmetric(reference_, tol);
}

double Loss::value(const LowerTriangularFactor& t) const {
    return kind_ == LossKind::NegativeLogLikelihood ? nll_value(t, reference_)
                                                    : fr_value(t, reference_);
}

Matrix Loss::gradient(const LowerTriangularFactor& t) const { return grad_T(*this, t); }

double nll_value(const LowerTriangularFactor& t, const Matrix& sigma_hat) {
    require_matching(t, sigma_hat);
    return 2.0 * t.log_det() + whitened_reference(t, sigma_hat).trace();
}

double fr_value(const LowerTriangularFactor& t, const Matrix& sigma_hat) {
    require_matching(t, sigma_hat);
    return (t.covariance() - sigma_hat).squaredNorm();
}

Matrix grad_T(const Loss& loss, const LowerTriangularFactor& t) {
    const Matrix& s = loss.reference();
    require_matching(t, s);
    const Index p = t.dim();
    Matrix g;
    if (loss.kind() == LossKind::NegativeLogLikelihood) {
        const Matrix residual = Matrix::Identity(p, p) - whitened_reference(t, s);
        g = 2.0 * t.solve_transposed(residual);
    } else {
        g = 4.0 * (t.covariance() - s) * t.matrix().triangularView<Eigen::Lower>();
    }
    Matrix lower = g.triangularView<Eigen::Lower>();
    return lower;
}

}  // namespace cholcov
