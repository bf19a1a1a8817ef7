#pragma once

// Proximal gradient descent with backtracking for
//
//     min_T  phi(TT^t) + lambda * ||T||_1,   T lower triangular,
//
// where ||T||_1 sums |t_ij| over the whole lower triangle (diagonal included).

#include <optional>
#include <vector>

#include "cholcov/linalg.hpp"
#include "cholcov/losses.hpp"

namespace cholcov {

struct SolverConfig {
    int max_iters = 500;            // M
    double tolerance = 1e-6;        // stop once the objective decrease drops below this
    double lambda = 0.0;            // l1 penalty
    double backtrack = 0.5;         // step shrink factor alpha
    double initial_step = 1.0;      // step reset at every outer iteration
    double diagonal_floor = 1e-4;   // diagonal entries are clamped to at least this
    double min_step = 1e-16;        // LineSearchStall below this
    bool penalize_diagonal = true;  // false: the l1 term covers strictly-lower entries only

    /// Throws InvalidArgument on an out-of-range field.
    void validate() const;
};

enum class Termination { Converged, MaxIters };

struct IterationRecord {
    double objective;  // f + g after the step
    double loss;       // f
    double penalty;    // g
    double step;       // accepted step size s
    double decrease;   // delta = (f + g)_before - (f + g)_after
};

struct SolverTrace {
    double initial_objective = 0.0;
    std::vector<IterationRecord> iterations;
    Termination termination = Termination::MaxIters;
};

struct SolveResult {
    LowerTriangularFactor factor;
    SolverTrace trace;
};

/// sign(x) * max(|x| - level, 0).
double soft_threshold(double x, double level);

/// Sum of |t_ij| over the lower triangle, optionally without the diagonal.
double lower_l1_norm(const Matrix& t, bool include_diagonal = true);

SolveResult prox_solve(const Loss& loss, const LowerTriangularFactor& init, const SolverConfig& config);

/// cholesky(S), or cholesky(S + 1e-3 I) when S is not numerically PD.
LowerTriangularFactor default_init(const Matrix& sigma_hat);

/// Smallest lambda at which the penalized diagonal solution (every
/// off-diagonal entry zero) meets the off-diagonal optimality conditions.
/// For the FR loss it is capped just below the level where a penalized
/// diagonal entry has no positive stationary point and collapses.
double prox_lambda_max(const Loss& loss, const SolverConfig& config = {});

struct ProxSelectionConfig {
    int folds = 5;
    int grid_size = 20;
    double grid_ratio = 1e-3;              // smallest / largest grid value
    std::optional<std::vector<double>> grid;  // overrides the automatic grid
    SolverConfig solver{};
};

struct ProxSelection {
    double lambda = 0.0;
    std::vector<double> grid;
    std::vector<double> cv_score;  // mean held-out NLL per grid value
};

/// Picks lambda minimizing the mean held-out NLL over interleaved folds. Each
/// fold walks the grid from the largest value down, warm-starting every solve
/// from the previous solution. Rows are treated as zero-mean.
ProxSelection select_prox_lambda(LossKind kind, const Matrix& values, const ProxSelectionConfig& config = {});

}  // namespace cholcov
