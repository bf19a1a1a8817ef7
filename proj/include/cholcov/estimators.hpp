#pragma once

// One entry point for the four factor estimators, including per-fit
// hyperparameter selection by cross-validated held-out likelihood.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cholcov/prox_solver.hpp"
#include "cholcov/regression.hpp"

namespace cholcov {

enum class Method {
    Band,     // mband: banded recursive least squares
    Lasso,    // mlasso: recursive lasso on residuals
    ProxNll,  // mglik: penalized Gaussian NLL
    ProxFr,   // mgfrob: penalized Frobenius loss
};

inline constexpr Method kAllMethods[] = {Method::Band, Method::Lasso, Method::ProxNll, Method::ProxFr};

std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view name);

struct MethodOptions {
    int folds = 5;
    std::optional<int> band;                    // fixed k; otherwise cross-validated
    std::optional<std::vector<int>> band_grid;  // candidate k values
    std::optional<double> lambda;               // fixed penalty; otherwise cross-validated
    /// Candidate penalties as fractions of the method's lambda_max. When unset
    /// a log grid of `grid_size` values down to `grid_ratio` is used.
    std::optional<std::vector<double>> lambda_fractions;
    int grid_size = 20;
    double grid_ratio = 1e-3;
    SolverConfig solver{};
    LassoConfig lasso{};
};

struct MethodFit {
    LowerTriangularFactor factor;
    std::string hyperparameter;  // "k=3" or "lambda=0.0125"
};

/// Fits a factor to rows treated as zero-mean (center or standardize first).
MethodFit fit_method(Method method, const Matrix& values, const MethodOptions& options = {});

}  // namespace cholcov
