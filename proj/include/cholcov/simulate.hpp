#pragma once

// Ground-truth generators: three fixed covariance structures and random sparse
// Cholesky factors, plus Gaussian sampling through a factor.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "cholcov/linalg.hpp"

namespace cholcov {

using Rng = std::mt19937_64;

enum class ScenarioKind {
    AR1,           // sigma_ij = 0.7^|i-j|
    Banded4,       // unit diagonal, 0.4 / 0.2 / 0.1 on sub-diagonals 1 / 2-3 / 4
    Dense05,       // unit diagonal, 0.5 elsewhere
    RandomSparse,  // random sparse factor with density i / p
};

std::string_view to_string(ScenarioKind kind) noexcept;
/// Accepts the canonical names (AR1, BANDED4, DENSE05, RANDOM_SPARSE) in any case.
ScenarioKind parse_scenario_kind(std::string_view name);

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::AR1;
    Index p = 30;
    int density_numerator = 1;  // RANDOM_SPARSE only: target density = numerator / p
    Index n = 200;
    std::uint64_t seed = 0;

    void validate() const;
    [[nodiscard]] double target_density() const;
};

/// Throws NotPositiveDefinite if the requested structure is not PD at this p.
Matrix fixed_sigma(ScenarioKind kind, Index p);

/// Each strictly-lower entry is nonzero independently with probability
/// `density`, drawn uniformly from +-[0.1, 1.0]; diagonal uniform on [0.5, 1.5].
LowerTriangularFactor random_sparse_cholesky(Index p, double density, Rng& rng);

/// n rows, each T z with z ~ N(0, I).
DataSample sample_gaussian(const LowerTriangularFactor& t, Index n, Rng& rng);

/// A A^t / p + 0.1 I with A standard normal: well spread but not ill-conditioned.
Matrix random_spd(Index p, Rng& rng);

/// The true factor of a scenario: Cholesky of the fixed Sigma, or a fresh
/// random sparse factor drawn from rng.
LowerTriangularFactor scenario_truth(const ScenarioSpec& spec, Rng& rng);

}  // namespace cholcov
