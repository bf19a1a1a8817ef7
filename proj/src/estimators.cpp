#include "cholcov/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace cholcov {

namespace {

std::string format_hyper(const char* name, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%.6g", name, value);
    return buf;
}

std::vector<double> scaled(const std::vector<double>& fractions, double hi) {
    std::vector<double> out;
    out.reserve(fractions.size());
    for (double f : fractions) {
        if (!(f > 0.0)) throw Error(ErrorCode::ConfigError, "lambda grid fractions must be positive");
        out.push_back(f * hi);
    }
    return out;
}

}  // namespace

std::string_view to_string(Method method) noexcept {
    switch (method) {
        case Method::Band: return "mband";
        case Method::Lasso: return "mlasso";
        case Method::ProxNll: return "mglik";
        case Method::ProxFr: return "mgfrob";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (Method m : kAllMethods) {
        if (lower == to_string(m)) return m;
    }
    throw Error(ErrorCode::ConfigError, "unknown method '" + std::string(name) + "'");
}

MethodFit fit_method(Method method, const Matrix& values, const MethodOptions& options) {
    switch (method) {
        case Method::Band: {
            int k = 0;
            if (options.band) {
                k = *options.band;
            } else {
                k = select_band_k(values, options.folds, options.band_grid).k;
            }
            return {fit_banded(values, BandConfig{k}), "k=" + std::to_string(k)};
        }
        case Method::Lasso: {
            LassoConfig cfg = options.lasso;
            if (options.lambda) {
                cfg.lambda = *options.lambda;
            } else {
                LassoSelectionConfig sel;
                sel.folds = options.folds;
                sel.grid_size = options.grid_size;
                sel.grid_ratio = options.grid_ratio;
                sel.solver = options.lasso;
                if (options.lambda_fractions) sel.grid = scaled(*options.lambda_fractions, lasso_lambda_max(values));
                cfg.lambda = select_lasso_lambda(values, sel).lambda;
            }
            return {fit_lasso(values, cfg), format_hyper("lambda", cfg.lambda)};
        }
        case Method::ProxNll:
        case Method::ProxFr: {
            const LossKind kind = method == Method::ProxNll ? LossKind::NegativeLogLikelihood : LossKind::Frobenius;
            const Loss loss(kind, sample_covariance(values, Centering::AssumeZeroMean));
            SolverConfig cfg = options.solver;
            if (options.lambda) {
                cfg.lambda = *options.lambda;
            } else {
                ProxSelectionConfig sel;
                sel.folds = options.folds;
                sel.grid_size = options.grid_size;
                sel.grid_ratio = options.grid_ratio;
                sel.solver = options.solver;
                if (options.lambda_fractions) sel.grid = scaled(*options.lambda_fractions, prox_lambda_max(loss, options.solver));
                cfg.lambda = select_prox_lambda(kind, values, sel).lambda;
            }
            SolveResult res = prox_solve(loss, default_init(loss.reference()), cfg);
            return {std::move(res.factor), format_hyper("lambda", cfg.lambda)};
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown method");
}

}  // namespace cholcov
