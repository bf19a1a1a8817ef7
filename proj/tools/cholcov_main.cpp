// cholcov: command-line front end for simulation, classification, one-shot
// estimation and the factor identity checks.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cholcov/estimators.hpp"
#include "cholcov/experiment.hpp"
#include "cholcov/io.hpp"
#include "cholcov/qda.hpp"
#include "cholcov/relations.hpp"
#include "cholcov/simulate.hpp"

namespace {

using namespace cholcov;

struct CommonFlags {
    std::vector<std::string> methods{"mband", "mlasso", "mglik", "mgfrob"};
    std::uint64_t seed = 1;
    std::vector<double> lambda_grid;
    std::vector<int> k_grid;
    int folds = 5;
    int max_iters = 500;
    double tolerance = 1e-6;
    bool free_diagonal = false;
    unsigned threads = 1;
    std::string out = "-";
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--methods", f.methods, "Estimators: mband, mlasso, mglik, mgfrob")->delimiter(',');
    cmd->add_option("--seed", f.seed, "Base seed")->envname("CHOLCOV_SEED");
    cmd->add_option("--lambda-grid", f.lambda_grid, "Penalty grid as fractions of each method's lambda_max")
        ->delimiter(',');
    cmd->add_option("--k-grid", f.k_grid, "Candidate band widths for mband")->delimiter(',');
    cmd->add_option("--folds", f.folds, "Cross-validation folds")->check(CLI::Range(2, 1000));
    cmd->add_option("--max-iters", f.max_iters, "Proximal solver iteration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--tolerance", f.tolerance, "Proximal solver stopping tolerance")->check(CLI::PositiveNumber);
    cmd->add_flag("--no-diagonal-penalty", f.free_diagonal, "Leave the diagonal of T out of the l1 penalty");
    cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
    cmd->add_option("--out", f.out, "Output file, - for stdout");
    cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<Method> out;
    for (const std::string& n : names) out.push_back(parse_method(n));
    return out;
}

MethodOptions method_options(const CommonFlags& f) {
    MethodOptions o;
    o.folds = f.folds;
    if (!f.lambda_grid.empty()) o.lambda_fractions = f.lambda_grid;
    if (!f.k_grid.empty()) o.band_grid = f.k_grid;
    o.solver.max_iters = f.max_iters;
    o.solver.tolerance = f.tolerance;
    o.solver.penalize_diagonal = !f.free_diagonal;
    return o;
}

// Writes to stdout for "-", else to the named file.
template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path == "-") {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    const auto dir = std::filesystem::path(path).parent_path();
    if (!dir.empty() && !std::filesystem::is_directory(dir)) {
        throw Error(ErrorCode::IoError, "directory '" + dir.string() + "' does not exist");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    fn(out);
    if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

int run_verify(int count, int p_max, std::uint64_t seed, double tol) {
    Rng rng(seed);
    std::uniform_int_distribution<int> dim(2, p_max);
    double worst_regressions = 0.0;
    double worst_recursion = 0.0;
    for (int m = 0; m < count; ++m) {
        const Matrix sigma = random_spd(dim(rng), rng);
        worst_regressions = std::max(worst_regressions, verify_factor_as_regressions(sigma).max_deviation);
        worst_recursion = std::max(worst_recursion, verify_coefficient_recursion(sigma).max_deviation);
    }
    const bool ok = worst_regressions <= tol && worst_recursion <= tol;
    std::printf("factor-as-regressions max deviation: %.3e\n", worst_regressions);
    std::printf("coefficient-recursion max deviation: %.3e\n", worst_recursion);
    std::printf("%s (%d matrices, p in [2, %d], tolerance %.1e)\n", ok ? "PASS" : "FAIL", count, p_max, tol);
    return ok ? 0 : 1;
}

std::string sanitize(std::string s) {
    for (char& c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse Cholesky factor estimation for covariance matrices"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML or INI file with option values; subcommand options go in a [simulate] etc. section");

    // simulate
    CommonFlags sim_flags;
    std::string scenario = "AR1";
    std::vector<long> p_grid{30, 100};
    long n = 200;
    std::vector<int> density{1};
    int replicates = 20;
    bool timing = false;
    bool sim_standardize = false;
    auto* sim = app.add_subcommand("simulate", "Replicated simulation over scenarios and dimensions");
    sim->add_option("--scenario", scenario, "AR1, BANDED4, DENSE05 or RANDOM_SPARSE");
    sim->add_option("--p", p_grid, "Dimensions")->delimiter(',');
    sim->add_option("--n", n, "Sample size")->check(CLI::Range(2L, 100000000L));
    sim->add_option("--density", density, "RANDOM_SPARSE density numerators i (density i/p)")->delimiter(',');
    sim->add_option("--replicates", replicates, "Replicates per configuration")->check(CLI::PositiveNumber);
    sim->add_flag("--standardize", sim_standardize, "Standardize every sample before fitting");
    sim->add_flag("--timing", timing, "Record wall-clock fit times (output is then not reproducible)");
    add_common(sim, sim_flags);

    // classify
    CommonFlags cls_flags;
    std::string data_path;
    bool header = false;
    int label_column = -1;
    std::string protocol = "loocv";
    double fraction = 0.5;
    auto* cls = app.add_subcommand("classify", "QDA on a labelled CSV dataset");
    cls->add_option("--data", data_path, "Dataset CSV")->required();
    cls->add_flag("--header", header, "First line is a header");
    cls->add_option("--label-column", label_column, "Label column (negative counts from the end)");
    cls->add_option("--protocol", protocol, "loocv or split")->check(CLI::IsMember({"loocv", "split"}));
    cls->add_option("--split-fraction", fraction, "Training fraction for --protocol split");
    add_common(cls, cls_flags);

    // estimate
    CommonFlags est_flags;
    std::string est_data;
    bool est_header = false;
    std::optional<int> est_label;
    std::string est_method = "mglik";
    std::optional<double> fixed_lambda;
    std::optional<int> fixed_k;
    bool est_standardize = false;
    std::string out_dir;
    auto* est = app.add_subcommand("estimate", "Fit one factor to a CSV and write T and Sigma");
    est->add_option("--data", est_data, "Dataset CSV")->required();
    est->add_flag("--header", est_header, "First line is a header");
    est->add_option("--label-column", est_label, "Fit one factor per class using this label column");
    est->add_option("--method", est_method, "mband, mlasso, mglik or mgfrob");
    est->add_option("--lambda", fixed_lambda, "Fixed penalty (skips cross-validation)");
    est->add_option("--k", fixed_k, "Fixed band width for mband (skips cross-validation)");
    est->add_flag("--standardize", est_standardize, "Scale columns to unit variance before fitting");
    est->add_option("--out-dir", out_dir, "Directory for the matrix CSVs")->required();
    add_common(est, est_flags);

    // verify
    int verify_count = 100;
    int verify_p_max = 10;
    std::uint64_t verify_seed = 1;
    double verify_tol = 1e-10;
    auto* ver = app.add_subcommand("verify", "Check the regression identities of the Cholesky factor");
    ver->add_option("--count", verify_count, "Random SPD matrices")->check(CLI::PositiveNumber);
    ver->add_option("--p-max", verify_p_max, "Largest dimension")->check(CLI::Range(2, 200));
    ver->add_option("--seed", verify_seed, "Seed")->envname("CHOLCOV_SEED");
    ver->add_option("--tolerance", verify_tol, "Maximum allowed deviation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*sim) {
            const std::vector<Method> methods = parse_methods(sim_flags.methods);
            const ScenarioKind kind = parse_scenario_kind(scenario);
            std::vector<ExperimentResult> all;
            for (long p : p_grid) {
                const std::vector<int> numerators = kind == ScenarioKind::RandomSparse ? density : std::vector<int>{1};
                for (int d : numerators) {
                    SimulationConfig cfg;
                    cfg.scenario = kind;
                    cfg.p = p;
                    cfg.n = n;
                    cfg.density_numerator = d;
                    cfg.methods = methods;
                    cfg.replicates = replicates;
                    cfg.seed = sim_flags.seed;
                    cfg.options = method_options(sim_flags);
                    cfg.threads = sim_flags.threads;
                    cfg.timing = timing;
                    cfg.standardize = sim_standardize;
                    auto rows = run_simulation(cfg);
                    all.insert(all.end(), rows.begin(), rows.end());
                }
            }
            with_output(sim_flags.out, [&](std::ostream& os) {
                if (sim_flags.format == "json") write_results_json(os, all);
                else write_results_csv(os, all);
            });
        } else if (*cls) {
            ClassificationConfig cfg;
            cfg.dataset = data_path;
            cfg.csv = CsvOptions{header, label_column};
            cfg.protocol = protocol == "split" ? Protocol::Split : Protocol::LeaveOneOut;
            cfg.split_fraction = fraction;
            cfg.seed = cls_flags.seed;
            cfg.methods = parse_methods(cls_flags.methods);
            cfg.options = method_options(cls_flags);
            cfg.threads = cls_flags.threads;
            const DataSample data = ingest_csv(cfg.dataset, cfg.csv);
            const auto rows = run_classification(cfg, data);
            with_output(cls_flags.out, [&](std::ostream& os) {
                if (cls_flags.format == "json") write_classification_json(os, rows, data.class_names);
                else write_classification_csv(os, rows, data.class_names);
            });
        } else if (*est) {
            if (!std::filesystem::is_directory(out_dir)) {
                throw Error(ErrorCode::IoError, "directory '" + out_dir + "' does not exist");
            }
            const Method method = parse_method(est_method);
            MethodOptions options = method_options(est_flags);
            options.lambda = fixed_lambda;
            options.band = fixed_k;
            DataSample data = ingest_csv(est_data, CsvOptions{est_header, est_label});
            if (est_standardize) data = standardize(data);

            auto write_pair = [&](const Matrix& values, const std::string& label) {
                Matrix centered = values;
                centered.rowwise() -= values.colwise().mean();
                const MethodFit fit = fit_method(method, centered, options);
                const std::string stem = (std::filesystem::path(out_dir) /
                                          (std::string(to_string(method)) +
                                           (label == "all" ? "" : "_class-" + sanitize(label))))
                                             .string();
                emit_matrix(fit.factor.matrix(), {fit.factor.dim(), "T", std::string(to_string(method)), label},
                            stem + "_T.csv");
                emit_matrix(fit.factor.covariance(),
                            {fit.factor.dim(), "Sigma", std::string(to_string(method)), label}, stem + "_Sigma.csv");
                std::cout << "class=" << label << ',' << fit.hyperparameter << ",T=" << stem << "_T.csv\n";
            };
            if (data.has_labels()) {
                for (std::size_t c = 0; c < data.class_names.size(); ++c) {
                    std::vector<Index> rows;
                    for (std::size_t r = 0; r < data.labels.size(); ++r) {
                        if (data.labels[r] == static_cast<int>(c)) rows.push_back(static_cast<Index>(r));
                    }
                    Matrix sub(static_cast<Index>(rows.size()), data.p());
                    for (std::size_t r = 0; r < rows.size(); ++r) sub.row(static_cast<Index>(r)) = data.values.row(rows[r]);
                    write_pair(sub, data.class_names[c]);
                }
            } else {
                write_pair(data.values, "all");
            }
        } else if (*ver) {
            return run_verify(verify_count, verify_p_max, verify_seed, verify_tol);
        }
    } catch (const Error& e) {
        std::cerr << "error: code=" << to_string(e.code()) << " message=\"" << e.message() << "\"\n";
        return e.code() == ErrorCode::ConfigError ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: code=Internal message=\"" << e.what() << "\"\n";
        return 1;
    }
    return 0;
}
