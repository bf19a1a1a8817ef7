#include "cholcov/regression.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "cholcov/cross_validation.hpp"
#include "cholcov/prox_solver.hpp"

namespace cholcov {

void LassoConfig::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorCode::InvalidArgument, "lasso lambda must be finite and >= 0");
    }
    if (!(tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "lasso tolerance must be positive");
    if (max_sweeps < 1) throw Error(ErrorCode::InvalidArgument, "lasso max_sweeps must be >= 1");
}

namespace {

// Shared recursion. `solve_row` receives the design of usable earlier
// residuals and returns the coefficients of x_i on them.
template <typename RowSolver>
LowerTriangularFactor recursive_fit(const Matrix& values, int band, RowSolver&& solve_row) {
    const Index n = values.rows();
    const Index p = values.cols();
    const double dn = static_cast<double>(n);

    Matrix eps(n, p);
    Matrix l = Matrix::Identity(p, p);
    Vector d(p);
    std::vector<bool> usable(static_cast<std::size_t>(p), true);

    for (Index i = 0; i < p; ++i) {
        const Index start = std::max<Index>(0, i - band);
        std::vector<Index> cols;
        for (Index j = start; j < i; ++j) {
            if (usable[static_cast<std::size_t>(j)]) cols.push_back(j);
        }

        Vector residual = values.col(i);
        if (!cols.empty()) {
            Matrix design(n, static_cast<Index>(cols.size()));
            for (std::size_t c = 0; c < cols.size(); ++c) design.col(static_cast<Index>(c)) = eps.col(cols[c]);
            const Vector coef = solve_row(design, residual, i);
            residual -= design * coef;
            for (std::size_t c = 0; c < cols.size(); ++c) l(i, cols[c]) = coef(static_cast<Index>(c));
        }
        eps.col(i) = residual;

        const double x2 = values.col(i).squaredNorm() / dn;
        double di = residual.squaredNorm() / dn;
        if (di <= kResidualVarianceFloor * x2 || di < kResidualVarianceFloor) {
            usable[static_cast<std::size_t>(i)] = false;
            di = std::max(di, kResidualVarianceFloor);
        }
        d(i) = di;
    }

    Matrix t = l * d.cwiseSqrt().asDiagonal();
    Matrix lower = t.triangularView<Eigen::Lower>();
    return LowerTriangularFactor(std::move(lower));
}

Vector least_squares(const Matrix& design, const Vector& y) {
    Matrix gram = design.transpose() * design;
    gram = (gram + gram.transpose()) * 0.5;
    const Vector rhs = design.transpose() * y;
    try {
        const LowerTriangularFactor chol = cholesky_decompose(gram);
        const double max_diag = gram.diagonal().maxCoeff();
        if (chol.matrix().diagonal().array().square().minCoeff() <= 1e-12 * max_diag) {
            throw Error(ErrorCode::SingularDesign, "residual design is numerically rank-deficient");
        }
        return chol.solve_transposed(chol.solve(rhs));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NotPositiveDefinite) {
            throw Error(ErrorCode::SingularDesign, "residual design is rank-deficient");
        }
        throw;
    }
}

void require_rows(const Matrix& values, Index min_rows) {
    if (values.rows() < min_rows) {
        throw Error(ErrorCode::InvalidArgument,
                    "need at least " + std::to_string(min_rows) + " observations");
    }
    if (values.cols() < 1) throw Error(ErrorCode::InvalidArgument, "sample has no variables");
    require_finite(values, "sample");
}

}  // namespace

LowerTriangularFactor fit_banded(const Matrix& values, const BandConfig& config) {
    require_rows(values, 1);
    const Index limit = std::min<Index>(values.rows() - 1, values.cols());
    if (config.k < 0) throw Error(ErrorCode::InvalidArgument, "band must be >= 0");
    if (config.k >= limit) {
        throw Error(ErrorCode::BandTooLarge, "band " + std::to_string(config.k) +
                                                 " must be smaller than min(N - 1, p) = " +
                                                 std::to_string(limit));
    }
    return recursive_fit(values, config.k,
                         [](const Matrix& design, const Vector& y, Index) { return least_squares(design, y); });
}

LowerTriangularFactor fit_banded(const DataSample& data, const BandConfig& config) {
    return fit_banded(data.values, config);
}

double lasso_kkt_residual(const Matrix& gram, const Vector& xty, const Vector& beta, double lambda) {
    const Vector grad = -2.0 * (xty - gram * beta);
    double worst = 0.0;
    for (Index j = 0; j < beta.size(); ++j) {
        double v;
        if (beta(j) != 0.0) {
            v = std::abs(grad(j) + lambda * (beta(j) > 0.0 ? 1.0 : -1.0));
        } else {
            v = std::max(0.0, std::abs(grad(j)) - lambda);
        }
        worst = std::max(worst, v);
    }
    return worst;
}

CoordinateDescentResult lasso_coordinate_descent(const Matrix& gram, const Vector& xty, double lambda,
                                                 const LassoConfig& config) {
    config.validate();
    const Index m = gram.rows();
    if (gram.cols() != m || xty.size() != m) {
        throw Error(ErrorCode::DimensionMismatch, "gram and rhs sizes differ");
    }
    CoordinateDescentResult out;
    out.beta = Vector::Zero(m);
    // r = E^t y - G beta, kept current after every coordinate move.
    Vector r = xty;
    const double half = 0.5 * lambda;
    for (int sweep = 1; sweep <= config.max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (Index j = 0; j < m; ++j) {
            const double gjj = gram(j, j);
            if (!(gjj > 0.0)) continue;
            const double old = out.beta(j);
            const double updated = soft_threshold(r(j) + gjj * old, half) / gjj;
            const double delta = updated - old;
            if (delta != 0.0) {
                out.beta(j) = updated;
                r.noalias() -= gram.col(j) * delta;
                max_change = std::max(max_change, std::abs(delta));
            }
        }
        if (max_change < config.tolerance) {
            out.sweeps = sweep;
            out.kkt_residual = lasso_kkt_residual(gram, xty, out.beta, lambda);
            return out;
        }
    }
    throw Error(ErrorCode::ConvergenceFailure,
                "coordinate descent did not converge in " + std::to_string(config.max_sweeps) + " sweeps");
}

LassoFit fit_lasso_detailed(const Matrix& values, const LassoConfig& config) {
    config.validate();
    require_rows(values, 2);
    double worst_kkt = 0.0;
    int worst_sweeps = 0;
    const auto solver = [&](const Matrix& design, const Vector& y, Index) {
        Matrix gram = design.transpose() * design;
        gram = (gram + gram.transpose()) * 0.5;
        const Vector xty = design.transpose() * y;
        CoordinateDescentResult cd = lasso_coordinate_descent(gram, xty, config.lambda, config);
        worst_kkt = std::max(worst_kkt, cd.kkt_residual);
        worst_sweeps = std::max(worst_sweeps, cd.sweeps);
        return cd.beta;
    };
    const Index band = values.cols();
    LowerTriangularFactor t = recursive_fit(values, static_cast<int>(band), solver);
    return {std::move(t), worst_kkt, worst_sweeps};
}

LowerTriangularFactor fit_lasso(const Matrix& values, const LassoConfig& config) {
    return fit_lasso_detailed(values, config).factor;
}

LowerTriangularFactor fit_lasso(const DataSample& data, const LassoConfig& config) {
    return fit_lasso(data.values, config);
}

double lasso_lambda_max(const Matrix& values) {
    const Matrix cross = values.transpose() * values;
    return 2.0 * strictly_lower(cross).cwiseAbs().maxCoeff();
}

BandSelection select_band_k(const Matrix& values, int folds, const std::optional<std::vector<int>>& candidates) {
    const KFold kfold(values.rows(), folds);
    const Index limit = std::min<Index>(kfold.min_train_size() - 1, values.cols());

    BandSelection out;
    if (candidates) {
        for (int k : *candidates) {
            if (k >= 0 && k < limit) out.candidates.push_back(k);
        }
        std::sort(out.candidates.begin(), out.candidates.end());
        out.candidates.erase(std::unique(out.candidates.begin(), out.candidates.end()), out.candidates.end());
        if (out.candidates.empty()) {
            throw Error(ErrorCode::InvalidArgument, "no candidate band is valid for the training folds");
        }
    } else {
        for (int k = 0; k < limit; ++k) out.candidates.push_back(k);
        if (out.candidates.empty()) {
            throw Error(ErrorCode::BandTooLarge, "training folds are too small for any band");
        }
    }
    out.cv_score.assign(out.candidates.size(), 0.0);

    for (int fold = 0; fold < folds; ++fold) {
        const FoldSplit split = kfold.split(values, fold);
        for (std::size_t c = 0; c < out.candidates.size(); ++c) {
            double score = std::numeric_limits<double>::infinity();
            try {
                score = heldout_nll(fit_banded(split.train, BandConfig{out.candidates[c]}), split.test);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::SingularDesign) throw;
            }
            out.cv_score[c] += std::isfinite(score) ? score / folds : std::numeric_limits<double>::infinity();
        }
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < out.candidates.size(); ++c) {
        if (out.cv_score[c] < out.cv_score[best]) best = c;
    }
    out.k = out.candidates[best];
    return out;
}

int select_band_k(const DataSample& data, int folds) { return select_band_k(data.values, folds).k; }

LassoSelection select_lasso_lambda(const Matrix& values, const LassoSelectionConfig& config) {
    config.solver.validate();
    const KFold kfold(values.rows(), config.folds);

    LassoSelection out;
    if (config.grid) {
        out.grid = *config.grid;
        if (out.grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty lambda grid");
        std::sort(out.grid.begin(), out.grid.end(), std::greater<>());
    } else {
        double hi = lasso_lambda_max(values);
        if (!(hi > 0.0)) hi = 1.0;
        out.grid = log_spaced_grid(hi, config.grid_ratio, config.grid_size);
    }
    out.cv_score.assign(out.grid.size(), 0.0);

    const double n = static_cast<double>(values.rows());
    for (int fold = 0; fold < kfold.folds(); ++fold) {
        const FoldSplit split = kfold.split(values, fold);
        const double shrink = static_cast<double>(split.train.rows()) / n;
        for (std::size_t g = 0; g < out.grid.size(); ++g) {
            LassoConfig cfg = config.solver;
            cfg.lambda = out.grid[g] * shrink;
            double score = std::numeric_limits<double>::infinity();
            try {
                score = heldout_nll(fit_lasso(split.train, cfg), split.test);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::ConvergenceFailure) throw;
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
