#pragma once

// Smooth matrix losses phi(Sigma(T)) with Sigma(T) = TT^t, and their gradients
// with respect to the lower-triangular factor T.

#include <string_view>

#include "cholcov/linalg.hpp"

namespace cholcov {

enum class LossKind {
    NegativeLogLikelihood,  // ln det(Sigma) + tr(Sigma^{-1} Sigma_hat)
    Frobenius,              // ||Sigma - Sigma_hat||_F^2
};

std::string_view to_string(LossKind kind) noexcept;

/// A loss kind bound to its reference matrix (sample covariance or
/// correlation). The reference must be symmetric.
class Loss {
public:
    Loss(LossKind kind, Matrix reference, const NumericTolerances& tol = {});

    [[nodiscard]] LossKind kind() const noexcept { return kind_; }
    [[nodiscard]] const Matrix& reference() const noexcept { return reference_; }
    [[nodiscard]] Index dim() const noexcept { return reference_.rows(); }

    [[nodiscard]] double value(const LowerTriangularFactor& t) const;
    /// Lower-triangular gradient, see grad_T.
    [[nodiscard]] Matrix gradient(const LowerTriangularFactor& t) const;

private:
    LossKind kind_;
    Matrix reference_;
};

/// ln det(TT^t) + tr((TT^t)^{-1} sigma_hat), using triangular solves only.
double nll_value(const LowerTriangularFactor& t, const Matrix& sigma_hat);

/// sum_ij (sigma_ij - sigma_hat_ij)^2 with Sigma = TT^t.
double fr_value(const LowerTriangularFactor& t, const Matrix& sigma_hat);

/// Gradient of phi(TT^t) over the lower-triangular entries of T (diagonal
/// included); the strictly-upper part is zero.
///
/// Uses grad_T = 2 grad_Sigma T, with
///   NLL: grad_Sigma = Sigma^{-1} - Sigma^{-1} Sigma_hat Sigma^{-1}, which
///        reduces to grad_T = 2 T^{-t} (I - T^{-1} Sigma_hat T^{-t});
///   FR:  grad_Sigma = 2 (Sigma - Sigma_hat), so grad_T = 4 (TT^t - Sigma_hat) T.
Matrix grad_T(const Loss& loss, const LowerTriangularFactor& t);

}  // namespace cholcov
