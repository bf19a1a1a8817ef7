#include "cholcov/simulate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace cholcov {

std::string_view to_string(ScenarioKind kind) noexcept {
    switch (kind) {
        case ScenarioKind::AR1: return "AR1";
        case ScenarioKind::Banded4: return "BANDED4";
        case ScenarioKind::Dense05: return "DENSE05";
        case ScenarioKind::RandomSparse: return "RANDOM_SPARSE";
    }
    return "UNKNOWN";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (ScenarioKind k : {ScenarioKind::AR1, ScenarioKind::Banded4, ScenarioKind::Dense05, ScenarioKind::RandomSparse}) {
        if (upper == to_string(k)) return k;
    }
    throw Error(ErrorCode::ConfigError, "unknown scenario '" + std::string(name) + "'");
}

void ScenarioSpec::validate() const {
    if (p < 2) throw Error(ErrorCode::ConfigError, "scenario dimension p must be >= 2");
    if (n < 2) throw Error(ErrorCode::ConfigError, "scenario sample size N must be >= 2");
    if (kind == ScenarioKind::RandomSparse && (density_numerator < 1 || density_numerator > p)) {
        throw Error(ErrorCode::ConfigError, "density numerator must lie in [1, p]");
    }
}

double ScenarioSpec::target_density() const {
    return static_cast<double>(density_numerator) / static_cast<double>(p);
}

Matrix fixed_sigma(ScenarioKind kind, Index p) {
    if (p < 2) throw Error(ErrorCode::InvalidArgument, "p must be >= 2");
    Matrix sigma = Matrix::Identity(p, p);
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < p; ++j) {
            if (i == j) continue;
            const Index gap = i > j ? i - j : j - i;
            switch (kind) {
                case ScenarioKind::AR1:
                    sigma(i, j) = std::pow(0.7, static_cast<double>(gap));
                    break;
                case ScenarioKind::Banded4:
                    sigma(i, j) = gap == 1 ? 0.4 : (gap <= 3 ? 0.2 : (gap == 4 ? 0.1 : 0.0));
                    break;
                case ScenarioKind::Dense05:
                    sigma(i, j) = 0.5;
                    break;
                case ScenarioKind::RandomSparse:
                    throw Error(ErrorCode::InvalidArgument, "RANDOM_SPARSE has no fixed covariance");
            }
        }
    }
    // PD is checked, not assumed.
    (void)cholesky_decompose(sigma);
    return sigma;
}

LowerTriangularFactor random_sparse_cholesky(Index p, double density, Rng& rng) {
    if (p < 2) throw Error(ErrorCode::InvalidArgument, "p must be >= 2");
    if (!(density > 0.0 && density <= 1.0)) throw Error(ErrorCode::InvalidArgument, "density must lie in (0, 1]");
    std::bernoulli_distribution keep(density);
    std::uniform_real_distribution<double> magnitude(0.1, 1.0);
    std::bernoulli_distribution negative(0.5);
    std::uniform_real_distribution<double> diagonal(0.5, 1.5);

    Matrix t = Matrix::Zero(p, p);
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < i; ++j) {
            if (keep(rng)) {
                const double v = magnitude(rng);
                t(i, j) = negative(rng) ? -v : v;
            }
        }
        t(i, i) = diagonal(rng);
    }
    return LowerTriangularFactor(std::move(t));
}

DataSample sample_gaussian(const LowerTriangularFactor& t, Index n, Rng& rng) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample size must be >= 1");
    std::normal_distribution<double> normal(0.0, 1.0);
    const Index p = t.dim();
    Matrix z(n, p);
    // Row-major fill order keeps the stream layout independent of Eigen storage.
    for (Index r = 0; r < n; ++r) {
        for (Index c = 0; c < p; ++c) z(r, c) = normal(rng);
    }
    DataSample out;
    out.values = z * t.matrix().transpose();
    return out;
}

Matrix random_spd(Index p, Rng& rng) {
    if (p < 1) throw Error(ErrorCode::InvalidArgument, "p must be >= 1");
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix a(p, p);
    for (Index r = 0; r < p; ++r) {
        for (Index c = 0; c < p; ++c) a(r, c) = normal(rng);
    }
    Matrix sigma = a * a.transpose() / static_cast<double>(p) + 0.1 * Matrix::Identity(p, p);
    return 0.5 * (sigma + sigma.transpose());
}

LowerTriangularFactor scenario_truth(const ScenarioSpec& spec, Rng& rng) {
    spec.validate();
    if (spec.kind == ScenarioKind::RandomSparse) {
        return random_sparse_cholesky(spec.p, spec.target_density(), rng);
    }
    return cholesky_decompose(fixed_sigma(spec.kind, spec.p));
}

}  // namespace cholcov
