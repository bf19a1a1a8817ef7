#include "cholcov/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "cholcov/parallel.hpp"

namespace cholcov {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
    if (std::isnan(v)) return "NaN";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

nlohmann::json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

struct Scores {
    double f1 = kNaN;
    double tpr = kNaN;
    double tdr = kNaN;
};

Scores score_support(const Matrix& truth, const Matrix& estimate) {
    try {
        const SupportComparison s = support_metrics(truth, estimate);
        return {s.f1, s.tpr, s.tdr};
    } catch (const Error& e) {
        if (e.code() != ErrorCode::UndefinedMetric) throw;
        return {};
    }
}

double lower_density(const Matrix& t) {
    const Index p = t.rows();
    long nonzero = 0;
    for (Index j = 0; j < p; ++j) {
        for (Index i = j + 1; i < p; ++i) nonzero += t(i, j) != 0.0;
    }
    return static_cast<double>(nonzero) / static_cast<double>(p * (p - 1) / 2);
}

ExperimentResult evaluate_method(Method method, const SimulationConfig& config, const ReplicateData& data,
                                 int replicate) {
    ExperimentResult row;
    row.method = std::string(to_string(method));
    row.scenario = std::string(to_string(config.scenario));
    row.p = config.p;
    row.n = config.n;
    row.density = lower_density(data.truth.matrix());
    row.replicate = replicate;
    row.seed = config.seed + static_cast<std::uint64_t>(replicate);

    const auto start = std::chrono::steady_clock::now();
    try {
        MethodFit fit = fit_method(method, data.sample.values, config.options);
        const auto stop = std::chrono::steady_clock::now();
        if (config.timing) row.wall_time_s = std::chrono::duration<double>(stop - start).count();
        row.hyperparameter = fit.hyperparameter;

        const Scores t = score_support(data.truth.matrix(), fit.factor.matrix());
        row.f1_T = t.f1;
        row.tpr_T = t.tpr;
        row.tdr_T = t.tdr;
        const Matrix sigma = data.truth.covariance();
        const Matrix sigma_hat = fit.factor.covariance();
        const Scores s = score_support(sigma, sigma_hat);
        row.f1_Sigma = s.f1;
        row.tpr_Sigma = s.tpr;
        row.tdr_Sigma = s.tdr;
        row.norm_diff = induced_one_norm_diff(fit.factor.matrix(), data.truth.matrix());
        row.norm_diff_Sigma = induced_one_norm_diff(sigma_hat, sigma);
    } catch (const Error& e) {
        row.f1_T = row.tpr_T = row.tdr_T = row.f1_Sigma = kNaN;
        row.tpr_Sigma = row.tdr_Sigma = row.norm_diff = row.norm_diff_Sigma = kNaN;
        row.status = std::string(to_string(e.code()));
    }
    return row;
}

}  // namespace

void SimulationConfig::validate() const {
    ScenarioSpec{scenario, p, density_numerator, n, seed}.validate();
    if (replicates < 1) throw Error(ErrorCode::ConfigError, "replicates must be >= 1");
    if (methods.empty()) throw Error(ErrorCode::ConfigError, "at least one method is required");
}

ReplicateData draw_replicate(const SimulationConfig& config, int replicate) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(replicate);
    const ScenarioSpec spec{config.scenario, config.p, config.density_numerator, config.n, seed};
    Rng rng(seed);
    Matrix t = scenario_truth(spec, rng).matrix();
    const double cutoff = kTruthRelativeZero * t.cwiseAbs().maxCoeff();
    t = t.unaryExpr([cutoff](double v) { return std::abs(v) <= cutoff ? 0.0 : v; });
    DataSample sample = sample_gaussian(LowerTriangularFactor(t), config.n, rng);
    if (config.standardize) {
        const Vector sd = (t.rowwise().squaredNorm()).cwiseSqrt();
        t = sd.cwiseInverse().asDiagonal() * t;
        sample = standardize(sample);
    }
    return {LowerTriangularFactor(std::move(t)), std::move(sample)};
}

std::vector<ExperimentResult> run_simulation(const SimulationConfig& config, const ResultSink& sink) {
    config.validate();
    const std::size_t reps = static_cast<std::size_t>(config.replicates);
    std::vector<std::vector<ExperimentResult>> per_rep(reps);
    parallel_for(reps, config.threads, [&](std::size_t r) {
        const ReplicateData data = draw_replicate(config, static_cast<int>(r));
        for (Method m : config.methods) per_rep[r].push_back(evaluate_method(m, config, data, static_cast<int>(r)));
    });
    std::vector<ExperimentResult> out;
    out.reserve(reps * config.methods.size());
    for (auto& rows : per_rep) {
        for (auto& row : rows) {
            if (sink) sink(row);
            out.push_back(std::move(row));
        }
    }
    return out;
}

void write_results_csv(std::ostream& out, const std::vector<ExperimentResult>& rows) {
    out << "method,scenario,p,n,density,replicate,seed,f1_T,tpr_T,tdr_T,f1_Sigma,norm_diff,wall_time_s,"
           "hyperparameter,tpr_Sigma,tdr_Sigma,norm_diff_Sigma,status\n";
    for (const ExperimentResult& r : rows) {
        out << r.method << ',' << r.scenario << ',' << r.p << ',' << r.n << ',' << fmt(r.density) << ','
            << r.replicate << ',' << r.seed << ',' << fmt(r.f1_T) << ',' << fmt(r.tpr_T) << ',' << fmt(r.tdr_T)
            << ',' << fmt(r.f1_Sigma) << ',' << fmt(r.norm_diff) << ',' << fmt(r.wall_time_s) << ','
            << csv_field(r.hyperparameter) << ',' << fmt(r.tpr_Sigma) << ',' << fmt(r.tdr_Sigma) << ','
            << fmt(r.norm_diff_Sigma) << ',' << csv_field(r.status) << '\n';
    }
}

void write_results_json(std::ostream& out, const std::vector<ExperimentResult>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ExperimentResult& r : rows) {
        arr.push_back({{"method", r.method},
                       {"scenario", r.scenario},
                       {"p", r.p},
                       {"n", r.n},
                       {"density", json_number(r.density)},
                       {"replicate", r.replicate},
                       {"seed", r.seed},
                       {"f1_T", json_number(r.f1_T)},
                       {"tpr_T", json_number(r.tpr_T)},
                       {"tdr_T", json_number(r.tdr_T)},
                       {"f1_Sigma", json_number(r.f1_Sigma)},
                       {"norm_diff", json_number(r.norm_diff)},
                       {"wall_time_s", json_number(r.wall_time_s)},
                       {"hyperparameter", r.hyperparameter},
                       {"tpr_Sigma", json_number(r.tpr_Sigma)},
                       {"tdr_Sigma", json_number(r.tdr_Sigma)},
                       {"norm_diff_Sigma", json_number(r.norm_diff_Sigma)},
                       {"status", r.status}});
    }
    out << arr.dump(2) << '\n';
}

void ClassificationConfig::validate() const {
    if (methods.empty()) throw Error(ErrorCode::ConfigError, "at least one method is required");
    if (!csv.label_column) throw Error(ErrorCode::ConfigError, "classification needs a label column");
    if (protocol == Protocol::Split && !(split_fraction > 0.0 && split_fraction < 1.0)) {
        throw Error(ErrorCode::ConfigError, "split fraction must lie strictly between 0 and 1");
    }
}

std::vector<ClassificationResult> run_classification(const ClassificationConfig& config, const DataSample& data) {
    config.validate();
    if (!data.has_labels()) throw Error(ErrorCode::ConfigError, "dataset has no label column");
    std::vector<ClassificationResult> out;
    const EvaluationOptions eval{true, config.threads};
    for (Method m : config.methods) {
        const EstimatorSpec spec{m, config.options};
        try {
            Evaluation e = config.protocol == Protocol::LeaveOneOut
                               ? evaluate_loocv(data, spec, eval)
                               : evaluate_split(data, spec, config.split_fraction, config.seed, eval);
            out.push_back({std::string(to_string(m)), std::move(e)});
        } catch (const Error& e) {
            throw Error(e.code(), std::string(to_string(m)) + ": " + e.message());
        }
    }
    return out;
}

std::vector<ClassificationResult> run_classification(const ClassificationConfig& config) {
    config.validate();
    return run_classification(config, ingest_csv(config.dataset, config.csv));
}

namespace {

std::string class_name(int label, const std::vector<std::string>& names) {
    if (label >= 0 && static_cast<std::size_t>(label) < names.size()) return names[static_cast<std::size_t>(label)];
    return std::to_string(label);
}

}  // namespace

void write_classification_csv(std::ostream& out, const std::vector<ClassificationResult>& rows,
                              const std::vector<std::string>& class_names) {
    out << "method,class,tnr,f1,accuracy,fits\n";
    for (const ClassificationResult& r : rows) {
        for (const ClassScores& c : r.evaluation.report.per_class) {
            out << r.method << ',' << csv_field(class_name(c.label, class_names)) << ','
                << fmt(c.tnr.value_or(kNaN)) << ',' << fmt(c.f1.value_or(kNaN)) << ','
                << fmt(r.evaluation.report.accuracy) << ',' << r.evaluation.fits << '\n';
        }
    }
}

void write_classification_json(std::ostream& out, const std::vector<ClassificationResult>& rows,
                               const std::vector<std::string>& class_names) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ClassificationResult& r : rows) {
        nlohmann::json classes = nlohmann::json::array();
        for (const ClassScores& c : r.evaluation.report.per_class) {
            classes.push_back({{"class", class_name(c.label, class_names)},
                               {"tnr", json_number(c.tnr.value_or(kNaN))},
                               {"f1", json_number(c.f1.value_or(kNaN))}});
        }
        arr.push_back({{"method", r.method},
                       {"accuracy", r.evaluation.report.accuracy},
                       {"fits", r.evaluation.fits},
                       {"classes", classes}});
    }
    out << arr.dump(2) << '\n';
}

}  // namespace cholcov
