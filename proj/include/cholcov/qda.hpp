#pragma once

// Quadratic discriminant analysis with each class covariance represented by
// an estimated Cholesky factor.

#include <cstdint>
#include <string>
#include <vector>

#include "cholcov/estimators.hpp"
#include "cholcov/metrics.hpp"

namespace cholcov {

struct ClassModel {
    int label = 0;
    Vector mean;
    LowerTriangularFactor factor;
    double prior = 0.0;
    std::string hyperparameter;
};

struct EstimatorSpec {
    Method method = Method::Band;
    MethodOptions options{};
};

/// One model per distinct label (ascending). Rows of each class are centered
/// at the class mean before the factor is fitted. Needs >= 2 rows per class;
/// estimator errors are rethrown with the class id prefixed.
std::vector<ClassModel> fit_qda(const DataSample& data, const EstimatorSpec& estimator);

/// ln prior - sum_i ln t_ii - 0.5 ||T^{-1}(x - mean)||^2.
double log_joint(const ClassModel& model, const Vector& x);

/// Argmax of log_joint; ties go to the smallest label.
int classify(const std::vector<ClassModel>& models, const Vector& x);

struct EvaluationOptions {
    bool standardize = true;  // statistics come from the training rows only
    unsigned threads = 1;     // 0 = hardware concurrency
};

struct Evaluation {
    ClassificationReport report;
    std::vector<int> classes;
    std::vector<int> truth;
    std::vector<int> predicted;
    long fits = 0;  // number of fit_qda calls
};

/// Leave-one-out: N fits, each on the other N - 1 rows.
Evaluation evaluate_loocv(const DataSample& data, const EstimatorSpec& estimator, const EvaluationOptions& options = {});

struct StratifiedSplit {
    std::vector<Index> train;
    std::vector<Index> test;
};

/// Per class, round(fraction * n_c) shuffled rows go to training. Throws
/// InvalidArgument unless 0 < fraction < 1 and ClassMissingInSplit when a
/// class would be absent from either side.
StratifiedSplit stratified_split(const std::vector<int>& labels, double fraction, std::uint64_t seed);

Evaluation evaluate_split(const DataSample& data, const EstimatorSpec& estimator, double fraction, std::uint64_t seed,
                          const EvaluationOptions& options = {});

}  // namespace cholcov
