#include "cholcov/prox_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "cholcov/cross_validation.hpp"

namespace cholcov {

void SolverConfig::validate() const {
    if (max_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_iters must be >= 1");
    if (!(tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorCode::InvalidArgument, "lambda must be finite and >= 0");
    }
    if (!(backtrack > 0.0 && backtrack < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "backtracking factor must lie in (0, 1)");
    }
    if (!(initial_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "initial step must be positive");
    if (!(diagonal_floor > 0.0)) throw Error(ErrorCode::InvalidArgument, "diagonal floor must be positive");
    if (!(min_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "min_step must be positive");
}

double soft_threshold(double x, double level) {
    if (x > level) return x - level;
    if (x < -level) return x + level;
    return 0.0;
}

double lower_l1_norm(const Matrix& t, bool include_diagonal) {
    double acc = 0.0;
    for (Index j = 0; j < t.cols(); ++j) {
        for (Index i = include_diagonal ? j : j + 1; i < t.rows(); ++i) acc += std::abs(t(i, j));
    }
    return acc;
}

namespace {

// Gradient step, soft-thresholding of the lower triangle at `level`, then the
// diagonal clamp that keeps TT^t positive definite.
Matrix proximal_step(const Matrix& t, const Matrix& grad, double step, double level, double floor,
                     bool penalize_diagonal) {
    const Index p = t.rows();
    Matrix out = Matrix::Zero(p, p);
    for (Index j = 0; j < p; ++j) {
        for (Index i = j; i < p; ++i) {
            const double moved = t(i, j) - step * grad(i, j);
            out(i, j) = (i == j && !penalize_diagonal) ? moved : soft_threshold(moved, level);
        }
        out(j, j) = std::max(out(j, j), floor);
    }
    return out;
}

}  // namespace

SolveResult prox_solve(const Loss& loss, const LowerTriangularFactor& init, const SolverConfig& config) {
    config.validate();
    if (init.dim() != loss.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "initial factor does not match loss dimension");
    }

    LowerTriangularFactor current = init;
    double f = loss.value(current);
    double g = config.lambda * lower_l1_norm(current.matrix(), config.penalize_diagonal);

    SolverTrace trace;
    trace.initial_objective = f + g;
    trace.iterations.reserve(static_cast<std::size_t>(std::min(config.max_iters, 4096)));

    for (int iter = 0; iter < config.max_iters; ++iter) {
        const Matrix& t = current.matrix();
        const Matrix grad = loss.gradient(current);

        double step = config.initial_step;
        for (;;) {
            Matrix candidate =
                proximal_step(t, grad, step, step * config.lambda, config.diagonal_floor, config.penalize_diagonal);
            LowerTriangularFactor next(std::move(candidate));
            const double f_next = loss.value(next);
            const double g_next = config.lambda * lower_l1_norm(next.matrix(), config.penalize_diagonal);

            const Matrix diff = next.matrix() - t;
            const double nu = diff.squaredNorm() / (2.0 * step) + diff.cwiseProduct(grad).sum();

            if (f_next + g_next <= f + g && f_next <= f + nu) {
                const double decrease = (f + g) - (f_next + g_next);
                trace.iterations.push_back({f_next + g_next, f_next, g_next, step, decrease});
                current = std::move(next);
                f = f_next;
                g = g_next;
                break;
            }
            step *= config.backtrack;
            if (step < config.min_step) {
                throw Error(ErrorCode::LineSearchStall,
                            "step size underflow at iteration " + std::to_string(iter));
            }
        }

        if (trace.iterations.back().decrease < config.tolerance) {
            trace.termination = Termination::Converged;
            break;
        }
    }
    return {std::move(current), std::move(trace)};
}

LowerTriangularFactor default_init(const Matrix& sigma_hat) {
    require_symmetric(sigma_hat);
    const double scale = std::max(1.0, sigma_hat.diagonal().cwiseAbs().maxCoeff());
    try {
        LowerTriangularFactor t = cholesky_decompose(sigma_hat);
        if (t.matrix().diagonal().array().square().minCoeff() > 1e-10 * scale) return t;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotPositiveDefinite) throw;
    }
    const Index p = sigma_hat.rows();
    double jitter = 1e-3;
    for (;;) {
        try {
            return cholesky_decompose(sigma_hat + jitter * Matrix::Identity(p, p));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NotPositiveDefinite || jitter > 1e6 * scale) throw;
        }
        jitter *= 10.0;
    }
}

namespace {

template <class Fn>
double bisect_increasing(Fn&& fn, double lo, double hi) {
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (fn(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Level above which the penalized FR diagonal has no interior minimum:
// max over t of -4t(t^2 - s) is (8 / (3 sqrt 3)) s^1.5.
double fr_collapse_level(double s) { return 8.0 / (3.0 * std::sqrt(3.0)) * std::pow(s, 1.5); }

// Stationary diagonal entry of phi(t^2) + lambda t reached from t = sqrt(s).
double penalized_diagonal(LossKind kind, double s, double lambda, double floor) {
    const double root = std::sqrt(s);
    if (lambda <= 0.0) return root;
    double t = 0.0;
    if (kind == LossKind::Frobenius) {
        if (lambda >= fr_collapse_level(s)) return floor;
        t = bisect_increasing([&](double x) { return 4.0 * x * (x * x - s) + lambda; }, std::sqrt(s / 3.0), root);
    } else {
        t = bisect_increasing([&](double x) { return lambda * x * x * x + 2.0 * x * x - 2.0 * s; }, 0.0, root);
    }
    return std::max(t, floor);
}

}  // namespace

double prox_lambda_max(const Loss& loss, const SolverConfig& config) {
    const Matrix& s = loss.reference();
    const Index p = loss.dim();
    if ((s.diagonal().array() <= 0.0).any()) {
        throw Error(ErrorCode::NotPositiveDefinite, "reference has a non-positive diagonal");
    }
    if (p == 1) return 0.0;

    // Off-diagonal gradient excess at the penalized diagonal solution.
    const auto excess = [&](double lambda) {
        Matrix d = Matrix::Zero(p, p);
        for (Index i = 0; i < p; ++i) {
            d(i, i) = config.penalize_diagonal ? penalized_diagonal(loss.kind(), s(i, i), lambda, config.diagonal_floor)
                                               : std::sqrt(s(i, i));
        }
        const Matrix grad = loss.gradient(LowerTriangularFactor(std::move(d)));
        return strictly_lower(grad).cwiseAbs().maxCoeff() - lambda;
    };

    double cap = std::numeric_limits<double>::infinity();
    if (loss.kind() == LossKind::Frobenius && config.penalize_diagonal) {
        for (Index i = 0; i < p; ++i) cap = std::min(cap, 0.999 * fr_collapse_level(s(i, i)));
    }
    if (excess(0.0) <= 0.0) return 0.0;
    double hi = std::max(excess(0.0), std::numeric_limits<double>::min());
    while (excess(hi) > 0.0) {
        if (hi >= cap) return cap;
        hi *= 2.0;
    }
    // excess is positive at 0 and non-positive at hi.
    double lo = 0.0;
    for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    return std::min(hi, cap);
}

ProxSelection select_prox_lambda(LossKind kind, const Matrix& values, const ProxSelectionConfig& config) {
    config.solver.validate();
    const KFold kfold(values.rows(), config.folds);

    ProxSelection out;
    if (config.grid) {
        out.grid = *config.grid;
        if (out.grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty lambda grid");
        std::sort(out.grid.begin(), out.grid.end(), std::greater<>());
    } else {
        const Loss full(kind, sample_covariance(values, Centering::AssumeZeroMean));
        double hi = prox_lambda_max(full, config.solver);
        if (!(hi > 0.0)) hi = 1.0;
        out.grid = log_spaced_grid(hi, config.grid_ratio, config.grid_size);
    }
    out.cv_score.assign(out.grid.size(), 0.0);

    for (int fold = 0; fold < kfold.folds(); ++fold) {
        const FoldSplit split = kfold.split(values, fold);
        const Loss loss(kind, sample_covariance(split.train, Centering::AssumeZeroMean));
        LowerTriangularFactor warm = default_init(loss.reference());
        for (std::size_t g = 0; g < out.grid.size(); ++g) {
            SolverConfig cfg = config.solver;
            cfg.lambda = out.grid[g];
            double score = std::numeric_limits<double>::infinity();
            try {
                SolveResult res = prox_solve(loss, warm, cfg);
                score = heldout_nll(res.factor, split.test);
                // A diagonal on the floor is a trap for later solves (T = 0 is
                // stationary for the FR loss), so restart from scratch instead.
                const bool collapsed = res.factor.matrix().diagonal().minCoeff() <= config.solver.diagonal_floor;
                warm = collapsed ? default_init(loss.reference()) : std::move(res.factor);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::LineSearchStall) throw;
            }
            out.cv_score[g] += std::isfinite(score) ? score / kfold.folds()
                                                    : std::numeric_limits<double>::infinity();
        }
    }

    std::size_t best = 0;
    for (std::size_t g = 1; g < out.grid.size(); ++g) {
        if (out.cv_score[g] < out.cv_score[best]) best = g;
    }
    out.lambda = out.grid[best];
    return out;
}

}  // namespace cholcov
