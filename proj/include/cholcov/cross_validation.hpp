#pragma once

#include <vector>

#include "cholcov/linalg.hpp"

namespace cholcov {

struct FoldSplit {
    Matrix train;
    Matrix test;
};

/// Interleaved assignment: row r goes to fold r % folds. Deterministic and
/// keeps every fold spread over the whole sample.
class KFold {
public:
    KFold(Index n, int folds);

    [[nodiscard]] int folds() const noexcept { return folds_; }
    [[nodiscard]] FoldSplit split(const Matrix& values, int fold) const;
    /// Smallest training-set size over all folds.
    [[nodiscard]] Index min_train_size() const noexcept { return n_ - (n_ + folds_ - 1) / folds_; }

private:
    Index n_;
    int folds_;
};

/// Gaussian NLL (zero mean) of held-out rows under Sigma = TT^t, using the
/// 1/N uncentered second-moment matrix of the rows.
double heldout_nll(const LowerTriangularFactor& t, const Matrix& test_values);

/// `count` values from `hi` down to `hi * ratio`, log-spaced, descending.
std::vector<double> log_spaced_grid(double hi, double ratio, int count);

}  // namespace cholcov
