#include "cholcov/cross_validation.hpp"

#include <cmath>

#include "cholcov/losses.hpp"

namespace cholcov {

KFold::KFold(Index n, int folds) : n_(n), folds_(folds) {
    if (folds < 2) throw Error(ErrorCode::InvalidArgument, "cross-validation needs at least 2 folds");
    if (n < folds) {
        throw Error(ErrorCode::InvalidArgument,
                    "cross-validation needs at least as many rows as folds");
    }
}

FoldSplit KFold::split(const Matrix& values, int fold) const {
    if (values.rows() != n_) throw Error(ErrorCode::DimensionMismatch, "fold plan built for another sample");
    const Index test_rows = (n_ - fold + folds_ - 1) / folds_;
    FoldSplit out{Matrix(n_ - test_rows, values.cols()), Matrix(test_rows, values.cols())};
    Index tr = 0;
    Index te = 0;
    for (Index r = 0; r < n_; ++r) {
        if (r % folds_ == fold) {
            out.test.row(te++) = values.row(r);
        } else {
            out.train.row(tr++) = values.row(r);
        }
    }
    return out;
}

double heldout_nll(const LowerTriangularFactor& t, const Matrix& test_values) {
    return nll_value(t, sample_covariance(test_values, Centering::AssumeZeroMean));
}

std::vector<double> log_spaced_grid(double hi, double ratio, int count) {
    if (!(hi > 0.0) || !(ratio > 0.0) || ratio > 1.0 || count < 1) {
        throw Error(ErrorCode::InvalidArgument, "invalid grid specification");
    }
    std::vector<double> grid(static_cast<std::size_t>(count));
    const double lhi = std::log(hi);
    const double llo = std::log(hi * ratio);
    for (int i = 0; i < count; ++i) {
        const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        grid[static_cast<std::size_t>(i)] = std::exp(lhi + f * (llo - lhi));
    }
    return grid;
}

}  // namespace cholcov
