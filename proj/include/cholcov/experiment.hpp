#pragma once

// Replicated simulation runs and real-data classification runs, with their
// CSV and JSON result tables.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cholcov/estimators.hpp"
#include "cholcov/io.hpp"
#include "cholcov/qda.hpp"
#include "cholcov/simulate.hpp"

namespace cholcov {

struct SimulationConfig {
    ScenarioKind scenario = ScenarioKind::AR1;
    Index p = 30;
    Index n = 200;
    int density_numerator = 1;  // RANDOM_SPARSE only
    std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
    int replicates = 20;
    std::uint64_t seed = 0;  // replicate r uses seed + r
    MethodOptions options{};
    unsigned threads = 1;  // 0 = hardware concurrency
    bool timing = false;   // wall_time_s is 0 unless set, keeping output reproducible
    /// Standardize each sample before fitting. Estimates are then compared
    /// with the correlation-scale truth diag(Sigma)^{-1/2} T, whose support
    /// equals that of T.
    bool standardize = false;

    void validate() const;
};

/// One row per (replicate, method). Support metrics are NaN when undefined;
/// a failed fit leaves every metric NaN and names the error in `status`.
struct ExperimentResult {
    std::string method;
    std::string scenario;
    Index p = 0;
    Index n = 0;
    double density = 0.0;  // fraction of nonzero strictly-lower entries of the true T
    int replicate = 0;
    std::uint64_t seed = 0;
    double f1_T = 0.0;
    double tpr_T = 0.0;
    double tdr_T = 0.0;
    double f1_Sigma = 0.0;
    double norm_diff = 0.0;  // induced 1-norm of T_hat - T
    double wall_time_s = 0.0;
    std::string hyperparameter;
    double tpr_Sigma = 0.0;
    double tdr_Sigma = 0.0;
    double norm_diff_Sigma = 0.0;
    std::string status = "ok";
};

/// Entries of the true factor below this fraction of its largest entry are
/// rounding residue and are zeroed before scoring.
inline constexpr double kTruthRelativeZero = 1e-12;

using ResultSink = std::function<void(const ExperimentResult&)>;

/// Replicates run on a worker pool; results (and sink calls) come back in
/// replicate order, methods in configured order within a replicate.
std::vector<ExperimentResult> run_simulation(const SimulationConfig& config, const ResultSink& sink = {});

/// Truth and one sample for replicate r, as run_simulation draws them. With
/// standardization on, `truth` is already on the correlation scale and
/// `sample` is standardized.
struct ReplicateData {
    LowerTriangularFactor truth;
    DataSample sample;
};
ReplicateData draw_replicate(const SimulationConfig& config, int replicate);

void write_results_csv(std::ostream& out, const std::vector<ExperimentResult>& rows);
void write_results_json(std::ostream& out, const std::vector<ExperimentResult>& rows);

enum class Protocol { LeaveOneOut, Split };

struct ClassificationConfig {
    std::string dataset;  // CSV path
    CsvOptions csv{false, -1};
    Protocol protocol = Protocol::LeaveOneOut;
    double split_fraction = 0.5;
    std::uint64_t seed = 0;
    std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
    MethodOptions options{};
    unsigned threads = 1;

    void validate() const;
};

struct ClassificationResult {
    std::string method;
    Evaluation evaluation;
};

/// Errors from a method's fits are rethrown prefixed with the method name.
std::vector<ClassificationResult> run_classification(const ClassificationConfig& config, const DataSample& data);
std::vector<ClassificationResult> run_classification(const ClassificationConfig& config);

/// Long format: one row per (method, class) plus the method's accuracy.
void write_classification_csv(std::ostream& out, const std::vector<ClassificationResult>& rows,
                              const std::vector<std::string>& class_names);
void write_classification_json(std::ostream& out, const std::vector<ClassificationResult>& rows,
                               const std::vector<std::string>& class_names);

}  // namespace cholcov
