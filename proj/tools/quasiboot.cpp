// Command-line front end: run experiments described by key=value config
// files, with a handful of common overrides.
//
// Exit codes: 0 success, 1 check reported a failure, 2 configuration or
// usage error, 3 run refused by the work budget.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "quasiboot/analysis.hpp"
#include "quasiboot/errors.hpp"
#include "quasiboot/experiment.hpp"
#include "quasiboot/io.hpp"
#include "quasiboot/moment_match.hpp"
#include "quasiboot/weights.hpp"

namespace {

using namespace quasiboot;

struct CliOverrides {
    std::string config_path;
    std::uint64_t seed = 0;
    int threads = -1;
    std::string out;
    int reps = 0;
    int boot = 0;
    bool force = false;
};

void add_common_options(CLI::App* sub, CliOverrides& o) {
    sub->add_option("--config", o.config_path, "key=value config file")
        ->required();
    sub->add_option("--seed", o.seed, "override master seed");
    sub->add_option("--threads", o.threads, "override thread count (0 = auto)");
    sub->add_option("--out", o.out, "override output path");
    sub->add_option("--reps", o.reps, "override repetition count");
    sub->add_option("--boot", o.boot, "override bootstrap replicates");
    sub->add_flag("--force", o.force, "ignore the work budget");
}

ExperimentConfig load_config(const CLI::App* sub, const CliOverrides& o,
                             ExperimentKind kind) {
    ParsedConfig parsed = load_config_file(o.config_path);
    if (parsed.kind_set && parsed.config.kind != kind)
        throw ConfigError(o.config_path + ": kind=" +
                          to_string(parsed.config.kind) +
                          " does not match subcommand " + to_string(kind));
    ExperimentConfig c = parsed.config;
    c.kind = kind;
    if (sub->count("--seed")) c.seed = o.seed;
    if (sub->count("--threads")) {
        if (o.threads < 0) throw ConfigError("--threads must be >= 0");
        c.threads = o.threads;
    }
    if (sub->count("--out")) c.out = o.out;
    if (sub->count("--reps")) c.reps = o.reps;
    if (sub->count("--boot")) c.boot = o.boot;
    if (o.force) c.force = true;
    return c;
}

void emit_coverage(const ExperimentConfig& c, const CoverageTable& table) {
    const std::string csv = coverage_csv(table);
    if (c.out.empty()) {
        std::cout << csv;
    } else {
        write_text_file(c.out, csv);
        std::cout << "wrote " << c.out << " (" << table.rows.size()
                  << " rows)\n";
    }
}

int cmd_coverage(const ExperimentConfig& c) {
    emit_coverage(c, run_coverage(c));
    return 0;
}

int cmd_regression(const ExperimentConfig& c) {
    emit_coverage(c, run_regression_coverage(c));
    return 0;
}

int cmd_cdf(const ExperimentConfig& c) {
    const CdfDataset d = run_cdf_experiment(c);
    const std::string json = cdf_json(d);
    if (c.out.empty()) {
        std::cout << json;
    } else {
        write_text_file(c.out, cdf_csv(d));
        write_text_file(sidecar_path(c.out), json);
        std::cout << "wrote " << c.out << " and " << sidecar_path(c.out)
                  << " (" << d.reps << " repetitions)\n";
    }
    return 0;
}

int cmd_weights_check(const ExperimentConfig& c) {
    const WeightScheme scheme = WeightScheme::parse(c.scheme);
    const SchemeValidation v = validate_scheme(scheme, c.tol);
    const auto flag = [](bool ok) { return ok ? "ok" : "FAIL"; };
    std::cout << "scheme: " << scheme.to_string() << "\n"
              << "  E e   = " << format_double(v.m1) << "  (" << flag(v.mean_ok)
              << ")\n"
              << "  E e^2 = " << format_double(v.m2) << "  ("
              << flag(v.variance_ok) << ")\n"
              << "  E e^3 = " << format_double(v.m3) << "  ("
              << flag(v.third_moment_ok) << ")\n"
              << "  E e^4 = " << format_double(v.m4) << "  ("
              << flag(v.fourth_finite) << ")\n"
              << (v.all_ok() ? "all conditions hold\n"
                             : "conditions violated\n");
    return v.all_ok() ? 0 : 1;
}

int cmd_moment_fit(const ExperimentConfig& c) {
    const DistributionSpec x = DistributionSpec::parse(c.x_dist);
    if (c.order < 3) throw ConfigError("moment-fit needs order >= 3");
    const MomentVector m = raw_moments(x, c.order);
    const GaussianParetoSplit split = fit_gaussian_pareto_split(m, c.shape);
    const double gap = verify_match(x, split.model, 3);

    nlohmann::ordered_json j;
    j["x_dist"] = x.to_string();
    j["var_z"] = split.model.var_z;
    j["residual_moments"] = split.model.residual_moments.m;
    j["pareto"] = split.pareto.to_string();
    j["convolution"] = split.convolution.to_string();
    j["match_gap_k3"] = gap;
    const std::string json = j.dump(2) + "\n";
    std::cout << json;
    if (!c.out.empty()) {
        write_text_file(c.out, json);
        std::cout << "wrote " << c.out << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted-bootstrap Monte Carlo experiments"};
    app.require_subcommand(1);

    CliOverrides o;
    CLI::App* coverage =
        app.add_subcommand("coverage", "bootstrap confidence-set coverage");
    CLI::App* cdf =
        app.add_subcommand("cdf", "statistic law vs quasi-Gaussian surrogate");
    CLI::App* regression =
        app.add_subcommand("regression", "wild-bootstrap coverage");
    CLI::App* weights =
        app.add_subcommand("weights-check", "weight-scheme moment conditions");
    CLI::App* fit =
        app.add_subcommand("moment-fit", "Gaussian + Pareto moment split");
    for (CLI::App* sub : {coverage, cdf, regression, weights, fit})
        add_common_options(sub, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (coverage->parsed())
            return cmd_coverage(
                load_config(coverage, o, ExperimentKind::coverage));
        if (cdf->parsed())
            return cmd_cdf(load_config(cdf, o, ExperimentKind::cdf));
        if (regression->parsed())
            return cmd_regression(
                load_config(regression, o, ExperimentKind::regression));
        if (weights->parsed())
            return cmd_weights_check(
                load_config(weights, o, ExperimentKind::weights_check));
        if (fit->parsed())
            return cmd_moment_fit(
                load_config(fit, o, ExperimentKind::moment_fit));
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
