#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "quasiboot/analysis.hpp"
#include "quasiboot/distributions.hpp"
#include "quasiboot/errors.hpp"
#include "quasiboot/experiment.hpp"
#include "quasiboot/io.hpp"

using namespace quasiboot;

namespace {

ExperimentConfig small_coverage() {
    ExperimentConfig c;
    c.kind = ExperimentKind::coverage;
    c.n = 10;
    c.p = 2;
    c.reps = 60;
    c.boot = 100;
    c.levels = {0.9, 0.5};
    c.x_dist = "chisq1c";
    c.scheme = "bernmix(b=0.276)";
    c.seed = 17;
    c.threads = 1;
    return c;
}

bool tables_equal(const CoverageTable& a, const CoverageTable& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (size_t i = 0; i < a.rows.size(); ++i) {
        const CoverageRow& x = a.rows[i];
        const CoverageRow& y = b.rows[i];
        if (x.kind != y.kind || x.n != y.n || x.p != y.p ||
            x.x_dist != y.x_dist || x.scheme != y.scheme ||
            x.level != y.level || x.frequency != y.frequency ||
            x.mc_se != y.mc_se || x.reps != y.reps || x.boot != y.boot ||
            x.seed != y.seed)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("experiment kind names round-trip") {
    for (ExperimentKind k :
         {ExperimentKind::coverage, ExperimentKind::cdf,
          ExperimentKind::regression, ExperimentKind::weights_check,
          ExperimentKind::moment_fit})
        CHECK(experiment_kind_from_string(to_string(k)) == k);
    CHECK(experiment_kind_from_string("weights_check") ==
          ExperimentKind::weights_check);
    CHECK(experiment_kind_from_string("moment_fit") ==
          ExperimentKind::moment_fit);
    CHECK_THROWS_AS(experiment_kind_from_string("tableau"), ConfigError);
}

TEST_CASE("coverage results do not depend on the thread count") {
    ExperimentConfig c = small_coverage();
    const CoverageTable t1 = run_coverage(c);
    c.threads = 2;
    const CoverageTable t2 = run_coverage(c);
    c.threads = 8;
    const CoverageTable t8 = run_coverage(c);
    CHECK(tables_equal(t1, t2));
    CHECK(tables_equal(t1, t8));
    REQUIRE(t1.rows.size() == 2);
    CHECK(t1.rows[0].kind == "coverage");
    CHECK(t1.rows[0].x_dist == "chisq1c");
    CHECK(t1.rows[0].scheme == "bernmix(b=0.276)");
}

TEST_CASE("cdf results do not depend on the thread count") {
    ExperimentConfig c;
    c.kind = ExperimentKind::cdf;
    c.n = 8;
    c.p = 1;
    c.reps = 80;
    c.x_dist = "lognormal(sigma=1,std)";
    c.seed = 23;
    c.threads = 1;
    const CdfDataset d1 = run_cdf_experiment(c);
    c.threads = 3;
    const CdfDataset d3 = run_cdf_experiment(c);
    CHECK(d1.values_sn == d3.values_sn);
    CHECK(d1.values_syn == d3.values_syn);
    CHECK(d1.ks_sn_syn == d3.ks_sn_syn);
    CHECK(d1.ks_sn_ref == d3.ks_sn_ref);
    CHECK(d1.ks_syn_ref == d3.ks_syn_ref);
}

TEST_CASE("regression coverage does not depend on the thread count") {
    ExperimentConfig c;
    c.kind = ExperimentKind::regression;
    c.n = 8;
    c.p = 2;
    c.reps = 50;
    c.boot = 80;
    c.levels = {0.9};
    c.error_dist = "chisq1c";
    c.scheme = "expmix";
    c.seed = 29;
    for (const std::string design : {"fourier", "gaussian"}) {
        c.design = design;
        c.threads = 1;
        const CoverageTable t1 = run_regression_coverage(c);
        c.threads = 4;
        const CoverageTable t4 = run_regression_coverage(c);
        CHECK(tables_equal(t1, t4));
        CHECK(t1.rows[0].kind == "regression");
        CHECK(t1.rows[0].x_dist == "chisq1c");  // error law in the x column
    }
}

TEST_CASE("adding a level reuses the same replicate sets") {
    ExperimentConfig c = small_coverage();
    const CoverageTable base = run_coverage(c);
    c.levels = {0.95, 0.9, 0.5};
    const CoverageTable wider = run_coverage(c);
    REQUIRE(wider.rows.size() == 3);
    // rows for the shared levels are bit-identical
    CHECK(wider.rows[1].frequency == base.rows[0].frequency);
    CHECK(wider.rows[2].frequency == base.rows[1].frequency);
}

TEST_CASE("the seed changes the draws") {
    ExperimentConfig c = small_coverage();
    c.reps = 200;
    const CoverageTable a = run_coverage(c);
    c.seed = 18;
    const CoverageTable b = run_coverage(c);
    CHECK_FALSE(tables_equal(a, b));
}

TEST_CASE("degenerate point-mass data is always covered") {
    ExperimentConfig c = small_coverage();
    c.x_dist = "atomic(nodes=[0],probs=[1])";
    c.reps = 25;
    const CoverageTable t = run_coverage(c);
    for (const CoverageRow& row : t.rows) {
        CHECK(row.frequency == 1.0);
        CHECK(row.mc_se == 0.0);
    }
}

TEST_CASE("coverage frequency is monotone in the level") {
    ExperimentConfig c = small_coverage();
    c.levels = {0.975, 0.95, 0.9, 0.8, 0.7, 0.6, 0.5};
    c.reps = 300;
    const CoverageTable t = run_coverage(c);
    for (size_t i = 1; i < t.rows.size(); ++i)
        CHECK(t.rows[i - 1].frequency >= t.rows[i].frequency);
    for (const CoverageRow& row : t.rows) {
        CHECK(row.mc_se ==
              std::sqrt(row.frequency * (1.0 - row.frequency) / row.reps));
    }
}

TEST_CASE("coverage CSV round-trips exactly") {
    ExperimentConfig c = small_coverage();
    const CoverageTable t = run_coverage(c);
    const std::string text = coverage_csv(t);
    const CoverageTable back = parse_coverage_csv(text);
    CHECK(tables_equal(t, back));
    // header is pinned
    CHECK(text.rfind("kind,n,p,x_dist,scheme,level,frequency,mc_se,R,B,seed",
                     0) == 0);
    CHECK_THROWS_AS(parse_coverage_csv("level,frequency\n0.9,0.95\n"), IoError);
}

TEST_CASE("cdf dataset is internally consistent") {
    ExperimentConfig c;
    c.kind = ExperimentKind::cdf;
    c.n = 20;
    c.p = 1;
    c.reps = 400;
    c.x_dist = "lognormal(sigma=1,std)";
    c.seed = 31;
    c.threads = 1;
    const CdfDataset d = run_cdf_experiment(c);
    CHECK(d.statistic == "signed");
    CHECK(d.reference == "normal");
    CHECK(d.y_dist.rfind("conv(", 0) == 0);  // the fitted surrogate, resolved
    REQUIRE(static_cast<int>(d.values_sn.size()) == 400);
    REQUIRE(static_cast<int>(d.values_syn.size()) == 400);
    CHECK(std::is_sorted(d.values_sn.begin(), d.values_sn.end()));
    CHECK(std::is_sorted(d.values_syn.begin(), d.values_syn.end()));

    // KS fields equal fresh recomputations along the runner's own path
    const EmpiricalCdf fx(d.values_sn);
    const EmpiricalCdf fy(d.values_syn);
    const double vx = dist_variance(DistributionSpec::parse(d.x_dist));
    const auto reference = [&](double t) {
        return normal_cdf(t / std::sqrt(vx));
    };
    CHECK(d.ks_sn_syn == ks_two_sample(fx, fy));
    CHECK(d.ks_sn_ref == ks_to_reference(fx, reference));
    CHECK(d.ks_syn_ref == ks_to_reference(fy, reference));

    // y resolves to a parseable spec that matches x to third order
    const DistributionSpec y = DistributionSpec::parse(d.y_dist);
    const MomentVector mx = raw_moments(DistributionSpec::parse(d.x_dist), 3);
    const MomentVector my = raw_moments(y, 3);
    for (int k = 0; k <= 3; ++k)
        CHECK(my[k] == doctest::Approx(mx[k]).scale(1.0).epsilon(1e-9));
}

TEST_CASE("cdf squared-norm branch references the chi-square law") {
    ExperimentConfig c;
    c.kind = ExperimentKind::cdf;
    c.n = 12;
    c.p = 3;
    c.reps = 150;
    c.x_dist = "gauss(mean=0,var=2)";
    c.y_dist = "gauss(mean=0,var=2)";  // exact: S_n ~ N(0, 2 I_3) for any n
    c.seed = 37;
    c.threads = 1;
    const CdfDataset d = run_cdf_experiment(c);
    CHECK(d.statistic == "norm_sq");
    CHECK(d.reference == "chisq");
    // Gaussian data hit their own reference: both KS distances stay small
    // (R = 150: the 0.1% Kolmogorov critical value is ~0.16)
    CHECK(d.ks_sn_ref < 0.15);
    CHECK(d.ks_syn_ref < 0.15);
    for (const double v : d.values_sn) CHECK(v >= 0.0);
}

TEST_CASE("surrogate tracks the sample law better than the normal limit") {
    ExperimentConfig c;
    c.kind = ExperimentKind::cdf;
    c.n = 50;
    c.p = 1;
    c.reps = 4000;
    c.x_dist = "lognormal(sigma=1,std)";
    c.seed = 41;
    c.threads = 1;
    const CdfDataset d = run_cdf_experiment(c);
    CHECK(d.ks_sn_syn < d.ks_sn_ref);
}

TEST_CASE("budget guard refuses oversized runs unless forced") {
    ExperimentConfig c = small_coverage();
    c.reps = 10;
    c.boot = 10;
    c.budget = 1000;  // cost = 10*10*10*2 = 2000
    CHECK_THROWS_AS(run_coverage(c), BudgetExceeded);
    c.force = true;
    CHECK_NOTHROW(run_coverage(c));

    ExperimentConfig r = c;
    r.kind = ExperimentKind::regression;
    r.design = "fourier";
    r.force = false;
    CHECK_THROWS_AS(run_regression_coverage(r), BudgetExceeded);

    ExperimentConfig d;
    d.kind = ExperimentKind::cdf;
    d.n = 10;
    d.p = 1;
    d.reps = 100;
    d.x_dist = "lognormal(sigma=1,std)";
    d.budget = 100;  // cost = 2*100*10 = 2000
    CHECK_THROWS_AS(run_cdf_experiment(d), BudgetExceeded);
    d.force = true;
    CHECK_NOTHROW(run_cdf_experiment(d));
}

TEST_CASE("invalid experiment configs are rejected") {
    ExperimentConfig c = small_coverage();
    c.levels = {1.0};
    CHECK_THROWS_AS(run_coverage(c), ConfigError);
    c = small_coverage();
    c.levels.clear();
    CHECK_THROWS_AS(run_coverage(c), ConfigError);
    c = small_coverage();
    c.n = 0;
    CHECK_THROWS_AS(run_coverage(c), ConfigError);
    c = small_coverage();
    c.boot = 0;
    CHECK_THROWS_AS(run_coverage(c), ConfigError);
    ExperimentConfig r = small_coverage();
    r.kind = ExperimentKind::regression;
    r.design = "hadamard";
    CHECK_THROWS_AS(run_regression_coverage(r), ConfigError);
    ExperimentConfig d;
    d.kind = ExperimentKind::cdf;
    d.x_dist = "atomic(nodes=[0],probs=[1])";  // zero variance
    d.reps = 10;
    CHECK_THROWS_AS(run_cdf_experiment(d), ConfigError);
}

TEST_CASE("config text parsing") {
    SUBCASE("empty text keeps the defaults") {
        const ParsedConfig pc = parse_config_text("");
        CHECK_FALSE(pc.kind_set);
        CHECK(pc.config.n == 50);
        CHECK(pc.config.p == 5);
        CHECK(pc.config.reps == 0);
        CHECK(pc.config.boot == 1000);
        CHECK(pc.config.levels.size() == 8);
        CHECK(pc.config.x_dist == "chisq1c");
        CHECK(pc.config.scheme == "bernmix(b=0.276)");
        CHECK(pc.config.seed == 1);
        CHECK(pc.config.threads == 0);
        CHECK(pc.config.budget == 500'000'000'000ull);
        CHECK_FALSE(pc.config.force);
    }
    SUBCASE("all keys, comments, and whitespace") {
        const std::string text =
            "# an experiment\n"
            "kind = cdf\n"
            "n=25\n"
            "p = 3\n"
            "reps=500\n"
            "boot = 77\n"
            "levels = 0.9, 0.5\n"
            "x_dist = lognormal(sigma=1,std)\n"
            "scheme = expmix\n"
            "y_dist = gauss(mean=0,var=1)\n"
            "design = fourier\n"
            "error_dist = chisq1c\n"
            "theta_star = 1.5\n"
            "residual_mode = true\n"
            "seed = 99\n"
            "threads = auto\n"
            "out = result.csv\n"
            "tol = 1e-8\n"
            "order = 6\n"
            "shape = 4.15\n"
            "budget = 1000\n"
            "force = true\n";
        const ParsedConfig pc = parse_config_text(text);
        CHECK(pc.kind_set);
        CHECK(pc.config.kind == ExperimentKind::cdf);
        CHECK(pc.config.n == 25);
        CHECK(pc.config.p == 3);
        CHECK(pc.config.reps == 500);
        CHECK(pc.config.boot == 77);
        REQUIRE(pc.config.levels.size() == 2);
        CHECK(pc.config.levels[0] == 0.9);
        CHECK(pc.config.levels[1] == 0.5);
        CHECK(pc.config.x_dist == "lognormal(sigma=1,std)");
        CHECK(pc.config.scheme == "expmix");
        CHECK(pc.config.y_dist == "gauss(mean=0,var=1)");
        CHECK(pc.config.design == "fourier");
        CHECK(pc.config.error_dist == "chisq1c");
        CHECK(pc.config.theta_star == 1.5);
        CHECK(pc.config.residual_mode);
        CHECK(pc.config.seed == 99);
        CHECK(pc.config.threads == 0);
        CHECK(pc.config.out == "result.csv");
        CHECK(pc.config.tol == 1e-8);
        CHECK(pc.config.order == 6);
        CHECK(pc.config.shape == 4.15);
        CHECK(pc.config.budget == 1000);
        CHECK(pc.config.force);
    }
    SUBCASE("rejections") {
        CHECK_THROWS_AS(parse_config_text("bogus_key = 1\n"), ConfigError);
        CHECK_THROWS_AS(parse_config_text("n\n"), ConfigError);
        CHECK_THROWS_AS(parse_config_text("n = twelve\n"), ConfigError);
        CHECK_THROWS_AS(parse_config_text("levels = 0.9, nope\n"), ConfigError);
        CHECK_THROWS_AS(parse_config_text("kind = tableau\n"), ConfigError);
        CHECK_THROWS_AS(parse_config_text("force = maybe\n"), ConfigError);
    }
    SUBCASE("default repetition counts by kind") {
        ExperimentConfig c;
        c.kind = ExperimentKind::coverage;
        CHECK(c.resolved_reps() == 7000);
        c.kind = ExperimentKind::regression;
        CHECK(c.resolved_reps() == 7000);
        c.kind = ExperimentKind::cdf;
        CHECK(c.resolved_reps() == 15000);
        c.reps = 123;
        CHECK(c.resolved_reps() == 123);
    }
}

TEST_CASE("sidecar path derivation") {
    CHECK(sidecar_path("runs/figure.csv") == "runs/figure.json");
    CHECK(sidecar_path("data.bin") == "data.bin.json");
}

TEST_CASE("statistical sanity: nominal coverage under Gaussian data") {
    // Gaussian data, p = 1: T = |S_n| is exactly pivotal, and the weighted
    // bootstrap quantile at n = 100 is close to the truth, so empirical
    // coverage should track the level well inside +-0.06
    ExperimentConfig c;
    c.kind = ExperimentKind::coverage;
    c.n = 100;
    c.p = 1;
    c.reps = 1000;
    c.boot = 500;
    c.levels = {0.9, 0.5};
    c.x_dist = "gauss(mean=0,var=1)";
    c.scheme = "bernmix(b=0.276)";
    c.seed = 47;
    c.threads = 1;
    const CoverageTable t = run_coverage(c);
    CHECK(std::abs(t.rows[0].frequency - 0.9) < 0.06);
    CHECK(std::abs(t.rows[1].frequency - 0.5) < 0.06);
}

TEST_CASE("statistical sanity: wild bootstrap coverage in regression") {
    ExperimentConfig c;
    c.kind = ExperimentKind::regression;
    c.n = 100;
    c.p = 3;
    c.reps = 1500;
    c.boot = 400;
    c.levels = {0.9, 0.8};
    c.error_dist = "chisq1c";
    c.scheme = "bernmix(b=0.276)";
    c.design = "fourier";
    c.theta_star = 1.0;
    c.seed = 53;
    c.threads = 1;
    const CoverageTable t = run_regression_coverage(c);
    CHECK(std::abs(t.rows[0].frequency - 0.9) < 0.05);
    CHECK(std::abs(t.rows[1].frequency - 0.8) < 0.05);

    // residual reweighting changes the replicate law but stays near nominal
    c.residual_mode = true;
    const CoverageTable tr = run_regression_coverage(c);
    CHECK(std::abs(tr.rows[0].frequency - 0.9) < 0.05);
    CHECK(tr.rows[0].frequency != t.rows[0].frequency);
}
