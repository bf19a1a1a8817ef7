#include "cholcov/qda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "cholcov/parallel.hpp"

namespace cholcov {

namespace {

std::vector<int> distinct_labels(const std::vector<int>& labels) {
    std::vector<int> out(labels);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Matrix take_rows(const Matrix& values, const std::vector<Index>& rows) {
    Matrix out(static_cast<Index>(rows.size()), values.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = values.row(rows[r]);
    return out;
}

DataSample subset(const DataSample& data, const std::vector<Index>& rows) {
    DataSample out;
    out.values = take_rows(data.values, rows);
    out.labels.reserve(rows.size());
    for (Index r : rows) out.labels.push_back(data.labels[static_cast<std::size_t>(r)]);
    out.class_names = data.class_names;
    out.standardized = data.standardized;
    return out;
}

void require_labels(const DataSample& data) {
    if (!data.has_labels()) throw Error(ErrorCode::ConfigError, "classification needs labelled rows");
    if (data.labels.size() != static_cast<std::size_t>(data.n())) {
        throw Error(ErrorCode::DimensionMismatch, "label count differs from row count");
    }
}

// Fits on `train`, standardizing with its statistics, and predicts `test`.
std::vector<int> fit_predict(const DataSample& train, const Matrix& test, const EstimatorSpec& estimator,
                             bool standardize_rows) {
    DataSample fit_on = train;
    Matrix eval = test;
    if (standardize_rows) {
        const Standardization st = fit_standardization(train.values);
        fit_on.values = st.apply(train.values);
        fit_on.standardized = true;
        eval = st.apply(test);
    }
    const std::vector<ClassModel> models = fit_qda(fit_on, estimator);
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(eval.rows()));
    for (Index r = 0; r < eval.rows(); ++r) out.push_back(classify(models, eval.row(r).transpose()));
    return out;
}

}  // namespace

std::vector<ClassModel> fit_qda(const DataSample& data, const EstimatorSpec& estimator) {
    require_labels(data);
    require_finite(data.values, "class data");
    const std::vector<int> classes = distinct_labels(data.labels);
    const double n = static_cast<double>(data.n());

    std::vector<ClassModel> models;
    models.reserve(classes.size());
    for (int c : classes) {
        std::vector<Index> rows;
        for (std::size_t r = 0; r < data.labels.size(); ++r) {
            if (data.labels[r] == c) rows.push_back(static_cast<Index>(r));
        }
        if (rows.size() < 2) {
            throw Error(ErrorCode::EmptySample, "class " + std::to_string(c) + " has fewer than 2 training rows");
        }
        Matrix x = take_rows(data.values, rows);
        const Vector mean = x.colwise().mean().transpose();
        x.rowwise() -= mean.transpose();
        try {
            MethodFit fit = fit_method(estimator.method, x, estimator.options);
            models.push_back(ClassModel{c, mean, std::move(fit.factor), static_cast<double>(rows.size()) / n,
                                        std::move(fit.hyperparameter)});
        } catch (const Error& e) {
            throw Error(e.code(), "class " + std::to_string(c) + ": " + e.message());
        }
    }
    return models;
}

double log_joint(const ClassModel& model, const Vector& x) {
    if (x.size() != model.factor.dim() || model.mean.size() != x.size()) {
        throw Error(ErrorCode::DimensionMismatch, "observation dimension differs from the class model");
    }
    const Vector z = model.factor.solve(Vector(x - model.mean));
    return std::log(model.prior) - model.factor.log_det() - 0.5 * z.squaredNorm();
}

int classify(const std::vector<ClassModel>& models, const Vector& x) {
    if (models.empty()) throw Error(ErrorCode::InvalidArgument, "no class models");
    int best_label = 0;
    double best = -std::numeric_limits<double>::infinity();
    bool first = true;
    for (const ClassModel& m : models) {
        const double v = log_joint(m, x);
        if (first || v > best || (v == best && m.label < best_label)) {
            best = v;
            best_label = m.label;
            first = false;
        }
    }
    return best_label;
}

Evaluation evaluate_loocv(const DataSample& data, const EstimatorSpec& estimator, const EvaluationOptions& options) {
    require_labels(data);
    const Index n = data.n();
    const std::vector<int> classes = distinct_labels(data.labels);
    if (n < static_cast<Index>(classes.size()) + 1) {
        throw Error(ErrorCode::EmptySample, "LOOCV needs more rows than classes");
    }

    Evaluation out;
    out.classes = classes;
    out.truth = data.labels;
    out.predicted.assign(static_cast<std::size_t>(n), 0);
    parallel_for(static_cast<std::size_t>(n), options.threads, [&](std::size_t held) {
        std::vector<Index> rows;
        rows.reserve(static_cast<std::size_t>(n - 1));
        for (Index r = 0; r < n; ++r) {
            if (static_cast<std::size_t>(r) != held) rows.push_back(r);
        }
        const Matrix test = data.values.row(static_cast<Index>(held));
        out.predicted[held] = fit_predict(subset(data, rows), test, estimator, options.standardize).front();
    });
    out.fits = n;
    out.report = classification_metrics(out.truth, out.predicted, classes);
    return out;
}

StratifiedSplit stratified_split(const std::vector<int>& labels, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "split fraction must lie strictly between 0 and 1");
    }
    std::map<int, std::vector<Index>> by_class;
    for (std::size_t r = 0; r < labels.size(); ++r) by_class[labels[r]].push_back(static_cast<Index>(r));

    std::mt19937_64 rng(seed);
    StratifiedSplit out;
    for (auto& [label, rows] : by_class) {
        std::shuffle(rows.begin(), rows.end(), rng);
        const auto n_train = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(rows.size())));
        if (n_train == 0 || n_train >= rows.size()) {
            throw Error(ErrorCode::ClassMissingInSplit,
                        "class " + std::to_string(label) + " would be missing from the " +
                            (n_train == 0 ? "training" : "test") + " split");
        }
        out.train.insert(out.train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_train));
        out.test.insert(out.test.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_train), rows.end());
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

Evaluation evaluate_split(const DataSample& data, const EstimatorSpec& estimator, double fraction, std::uint64_t seed,
                          const EvaluationOptions& options) {
    require_labels(data);
    const StratifiedSplit split = stratified_split(data.labels, fraction, seed);
    const DataSample train = subset(data, split.train);
    const DataSample test = subset(data, split.test);

    Evaluation out;
    out.classes = distinct_labels(data.labels);
    out.truth = test.labels;
    out.predicted = fit_predict(train, test.values, estimator, options.standardize);
    out.fits = 1;
    out.report = classification_metrics(out.truth, out.predicted, out.classes);
    return out;
}

}  // namespace cholcov
