#include "cholcov/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace cholcov {

SupportComparison support_metrics(const Matrix& truth, const Matrix& estimate, double zero_tol) {
    if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols() || truth.rows() != truth.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "support comparison needs equal square shapes");
    }
    if (!(zero_tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "zero tolerance must be >= 0");

    SupportComparison out;
    const Index p = truth.rows();
    for (Index j = 0; j < p; ++j) {
        for (Index i = j + 1; i < p; ++i) {
            const bool t = std::abs(truth(i, j)) > zero_tol;
            const bool e = std::abs(estimate(i, j)) > zero_tol;
            if (t && e) ++out.tp;
            else if (e) ++out.fp;
            else if (t) ++out.fn;
        }
    }
    if (out.tp + out.fn == 0) throw Error(ErrorCode::UndefinedMetric, "truth has no nonzero entries (TPR undefined)");
    if (out.tp + out.fp == 0) throw Error(ErrorCode::UndefinedMetric, "estimate has no nonzero entries (TDR undefined)");
    out.tpr = static_cast<double>(out.tp) / static_cast<double>(out.tp + out.fn);
    out.tdr = static_cast<double>(out.tp) / static_cast<double>(out.tp + out.fp);
    out.f1 = out.tpr + out.tdr > 0.0 ? 2.0 * out.tpr * out.tdr / (out.tpr + out.tdr) : 0.0;
    return out;
}

SupportComparison support_metrics(const LowerTriangularFactor& truth, const LowerTriangularFactor& estimate,
                                  double zero_tol) {
    return support_metrics(truth.matrix(), estimate.matrix(), zero_tol);
}

ClassificationReport classification_metrics(const std::vector<int>& truth, const std::vector<int>& predicted,
                                             const std::vector<int>& classes) {
    if (truth.size() != predicted.size()) {
        throw Error(ErrorCode::DimensionMismatch, "label vectors differ in length");
    }
    if (truth.empty()) throw Error(ErrorCode::EmptySample, "no labels to score");
    const auto position = [&](int label) {
        const auto it = std::find(classes.begin(), classes.end(), label);
        if (it == classes.end()) throw Error(ErrorCode::LabelMismatch, "label " + std::to_string(label) + " not in class set");
        return static_cast<std::size_t>(it - classes.begin());
    };

    const std::size_t k = classes.size();
    ClassificationReport report;
    report.confusion.assign(k, std::vector<long>(k, 0));
    long correct = 0;
    for (std::size_t r = 0; r < truth.size(); ++r) {
        const std::size_t a = position(truth[r]);
        const std::size_t b = position(predicted[r]);
        ++report.confusion[a][b];
        if (a == b) ++correct;
    }
    const auto total = static_cast<long>(truth.size());
    report.accuracy = static_cast<double>(correct) / static_cast<double>(total);

    for (std::size_t c = 0; c < k; ++c) {
        long tp = report.confusion[c][c];
        long fn = 0;
        long fp = 0;
        for (std::size_t o = 0; o < k; ++o) {
            if (o == c) continue;
            fn += report.confusion[c][o];
            fp += report.confusion[o][c];
        }
        const long tn = total - tp - fn - fp;
        ClassScores scores;
        scores.label = classes[c];
        if (tn + fp > 0) scores.tnr = static_cast<double>(tn) / static_cast<double>(tn + fp);
        if (2 * tp + fp + fn > 0) scores.f1 = 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
        report.per_class.push_back(scores);
    }
    return report;
}

}  // namespace cholcov
