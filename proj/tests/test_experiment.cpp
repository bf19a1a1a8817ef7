#include <doctest.h>
#include <json.hpp>

#include <sstream>

#include "cholcov/experiment.hpp"
#include "temp_dir.hpp"

using namespace cholcov;

namespace {

SimulationConfig quick(ScenarioKind kind, Index p, int replicates) {
    SimulationConfig c;
    c.scenario = kind;
    c.p = p;
    c.n = 200;
    c.replicates = replicates;
    c.seed = 11;
    c.options.band = 2;
    c.options.lambda = 0.05;
    return c;
}

std::string csv_of(const std::vector<ExperimentResult>& rows) {
    std::ostringstream s;
    write_results_csv(s, rows);
    return s.str();
}

}  // namespace

TEST_CASE("method names") {
    for (Method m : kAllMethods) CHECK(parse_method(to_string(m)) == m);
    CHECK(parse_method("MGLIK") == Method::ProxNll);
    try {
        (void)parse_method("mridge");
        FAIL("expected ConfigError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigError);
    }
}

TEST_CASE("fit_method reports the hyperparameter it used") {
    Rng rng(3);
    const DataSample d = sample_gaussian(cholesky_decompose(fixed_sigma(ScenarioKind::AR1, 5)), 100, rng);
    MethodOptions o;
    o.band = 1;
    o.lambda = 0.25;
    CHECK(fit_method(Method::Band, d.values, o).hyperparameter == "k=1");
    CHECK(fit_method(Method::Lasso, d.values, o).hyperparameter == "lambda=0.25");
    CHECK(fit_method(Method::ProxFr, d.values, o).hyperparameter == "lambda=0.25");
    MethodOptions grid;
    grid.folds = 3;
    grid.lambda_fractions = std::vector<double>{0.5, 0.1};
    CHECK(fit_method(Method::ProxNll, d.values, grid).hyperparameter.rfind("lambda=", 0) == 0);
    grid.lambda_fractions = std::vector<double>{-1.0};
    CHECK_THROWS_AS((void)fit_method(Method::Lasso, d.values, grid), Error);
}

TEST_CASE("AR1 at p = 30 with four methods and twenty replicates gives 80 rows") {
    const SimulationConfig c = quick(ScenarioKind::AR1, 30, 20);
    int sunk = 0;
    const auto rows = run_simulation(c, [&](const ExperimentResult&) { ++sunk; });
    CHECK(rows.size() == 80);
    CHECK(sunk == 80);
    CHECK(rows[0].method == "mband");
    CHECK(rows[3].method == "mgfrob");
    CHECK(rows[4].replicate == 1);
    CHECK(rows[4].seed == 12);
    for (const auto& r : rows) {
        CHECK(r.status == "ok");
        CHECK(r.wall_time_s == 0.0);
        CHECK(r.norm_diff >= 0.0);
    }
}

TEST_CASE("simulation output is byte-identical across runs and thread counts") {
    SimulationConfig c = quick(ScenarioKind::RandomSparse, 10, 4);
    c.density_numerator = 2;
    c.options = MethodOptions{};
    c.options.folds = 3;
    c.options.grid_size = 4;
    const std::string a = csv_of(run_simulation(c));
    c.threads = 3;
    const std::string b = csv_of(run_simulation(c));
    CHECK(a == b);
    CHECK(a.rfind("method,scenario,p,n,density,replicate,seed,f1_T,tpr_T,tdr_T,f1_Sigma,norm_diff,wall_time_s,", 0) == 0);
    CHECK(std::count(a.begin(), a.end(), '\n') == 17);
}

TEST_CASE("replicate draws follow seed + r") {
    SimulationConfig c = quick(ScenarioKind::RandomSparse, 8, 3);
    const ReplicateData r1 = draw_replicate(c, 1);
    c.seed += 1;
    const ReplicateData r0 = draw_replicate(c, 0);
    CHECK(r1.truth.matrix() == r0.truth.matrix());
    CHECK(r1.sample.values == r0.sample.values);
}

TEST_CASE("standardized replicates use the correlation-scale truth") {
    SimulationConfig c = quick(ScenarioKind::AR1, 6, 1);
    c.standardize = true;
    const ReplicateData r = draw_replicate(c, 0);
    CHECK((r.truth.covariance().diagonal().array() - 1.0).abs().maxCoeff() <= 1e-12);
    CHECK((r.sample.values.colwise().mean().array()).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("a failing fit yields NaN metrics and its error code") {
    SimulationConfig c = quick(ScenarioKind::AR1, 5, 1);
    c.methods = {Method::Band};
    c.options.band = 5;
    const auto rows = run_simulation(c);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].status == "BandTooLarge");
    CHECK(std::isnan(rows[0].f1_T));
    CHECK(csv_of(rows).find("NaN") != std::string::npos);
    std::ostringstream js;
    write_results_json(js, rows);
    const auto parsed = nlohmann::json::parse(js.str());
    CHECK(parsed[0]["f1_T"].is_null());
    CHECK(parsed[0]["status"] == "BandTooLarge");
}

TEST_CASE("simulation config validation") {
    SimulationConfig c;
    c.replicates = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = SimulationConfig{};
    c.methods.clear();
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("classification runs over a CSV") {
    testsupport::TempDir dir;
    Rng rng(5);
    std::normal_distribution<double> normal;
    std::ostringstream csv;
    for (int r = 0; r < 40; ++r) {
        const bool b = r % 2 == 1;
        csv << normal(rng) + (b ? 3.0 : 0.0) << ',' << normal(rng) << ',' << normal(rng) << ',' << (b ? "rock" : "mine")
            << '\n';
    }
    ClassificationConfig c;
    c.dataset = dir.write("d.csv", csv.str());
    c.methods = {Method::Band, Method::Lasso};
    c.options.folds = 3;
    c.options.band_grid = std::vector<int>{0, 1};
    c.options.grid_size = 3;
    const auto rows = run_classification(c);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].evaluation.fits == 40);
    CHECK(rows[0].evaluation.report.accuracy >= 0.8);

    std::ostringstream out;
    write_classification_csv(out, rows, {"mine", "rock"});
    const std::string text = out.str();
    CHECK(text.rfind("method,class,tnr,f1,accuracy,fits\nmband,mine,", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);

    c.protocol = Protocol::Split;
    const auto split = run_classification(c);
    CHECK(split[0].evaluation.fits == 1);
    CHECK(split[0].evaluation.truth.size() == 20);

    c.csv.label_column.reset();
    try {
        (void)run_classification(c);
        FAIL("expected ConfigError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigError);
    }
}
