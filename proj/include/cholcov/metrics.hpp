#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cholcov/linalg.hpp"

namespace cholcov {

/// Support recovery over strictly-lower entries. The diagonal is excluded:
/// every estimator keeps it nonzero.
struct SupportComparison {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    double tpr = 0.0;
    double tdr = 0.0;
    double f1 = 0.0;  // 0 when tpr + tdr = 0
};

inline constexpr double kSolverZeroTolerance = 1e-8;

/// An entry is nonzero iff |m_ij| > zero_tol. Throws UndefinedMetric when the
/// truth or the estimate has no nonzero strictly-lower entry.
SupportComparison support_metrics(const Matrix& truth, const Matrix& estimate, double zero_tol = kSolverZeroTolerance);
SupportComparison support_metrics(const LowerTriangularFactor& truth, const LowerTriangularFactor& estimate,
                                  double zero_tol = kSolverZeroTolerance);

struct ClassScores {
    int label = 0;
    std::optional<double> tnr;  // undefined when every row belongs to the class
    std::optional<double> f1;   // undefined when the class is neither present nor predicted
};

struct ClassificationReport {
    std::vector<ClassScores> per_class;
    double accuracy = 0.0;
    /// confusion[a][b]: rows with true class a predicted as b (class order as given).
    std::vector<std::vector<long>> confusion;
};

/// One-vs-rest TNR and F1 per class, global accuracy. Throws LabelMismatch
/// for labels outside `classes`, DimensionMismatch for unequal lengths.
ClassificationReport classification_metrics(const std::vector<int>& truth, const std::vector<int>& predicted,
                                             const std::vector<int>& classes);

}  // namespace cholcov
