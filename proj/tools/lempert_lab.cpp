// lempert-lab: experiment runner and ad-hoc estimator CLI.
//
// Exit codes: 0 success, 2 usage error, 3 uncertified estimate,
// 4 row-level assertion failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "lempert/experiments.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitUncertified = 3;
constexpr int kExitAssertion = 4;

lempert::json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return lempert::json::parse(in);  // parse_error reports line/column
}

int cmd_run(const std::string& id, std::uint64_t seed, bool seed_set, const std::string& out_path,
            const std::string& config_path) {
    lempert::ExperimentConfig cfg;
    if (!config_path.empty()) {
        lempert::json j = parse_json_file(config_path);
        if (!j.contains("experiment_id")) j["experiment_id"] = id;
        cfg = lempert::experiment_config_from_json(j);
        if (cfg.experiment_id != id) {
            std::cerr << "error: config is for experiment '" << cfg.experiment_id << "'\n";
            return kExitUsage;
        }
    } else {
        cfg = lempert::default_experiment_config(id);
    }
    if (seed_set) {
        cfg.seed = seed;
        cfg.optimizer.seed = seed;
    }
    if (!out_path.empty()) cfg.output_path = out_path;
    if (cfg.output_path.empty()) cfg.output_path = id + ".jsonl";

    const auto outcome = lempert::run_experiment(cfg);
    lempert::write_result_rows(cfg.output_path, outcome.rows);

    for (const auto& row : outcome.rows) {
        std::cout << lempert::result_row_to_json(row).dump() << "\n";
    }
    if (!outcome.failures.empty()) {
        std::cerr << "assertion failures:\n";
        for (const auto& f : outcome.failures) std::cerr << "  " << f << "\n";
        return kExitAssertion;
    }
    std::cerr << outcome.rows.size() << " rows written to " << cfg.output_path << "\n";
    return 0;
}

lempert::Domain parse_domain_arg(const std::string& text) {
    if (!text.empty() && text.front() == '{') {
        return lempert::domain_from_json(lempert::json::parse(text));
    }
    return lempert::domain_from_json(lempert::json{{"kind", text}});
}

std::vector<lempert::Complex> parse_point_arg(const std::string& text) {
    if (!text.empty() && (text.front() == '[' || text.front() == '{')) {
        const auto j = lempert::json::parse(text);
        std::vector<lempert::Complex> out;
        if (j.is_array()) {
            for (const auto& c : j) out.push_back(lempert::complex_from_json(c));
        } else {
            out.push_back(lempert::complex_from_json(j));
        }
        return out;
    }
    return {lempert::Complex(std::stod(text), 0.0)};
}

int cmd_estimate(const std::string& domain_arg, const std::string& poles_path,
                 const std::string& z_arg, const std::string& config_path,
                 const lempert::OptimizerConfig& overrides) {
    lempert::Domain domain = lempert::Domain::unit_disc();
    lempert::PoleSpec spec;
    std::vector<lempert::Complex> z;
    lempert::OptimizerConfig opt = overrides;
    std::string output_path;

    if (!config_path.empty()) {
        const auto j = parse_json_file(config_path);
        if (j.contains("domain")) domain = lempert::domain_from_json(j.at("domain"));
        if (j.contains("poles")) spec = lempert::pole_spec_from_json(j.at("poles"));
        if (j.contains("z")) {
            for (const auto& c : j.at("z")) z.push_back(lempert::complex_from_json(c));
        }
        if (j.contains("optimizer")) lempert::optimizer_from_json(j.at("optimizer"), opt);
        if (j.contains("output")) output_path = j.at("output").get<std::string>();
    }
    if (!domain_arg.empty()) domain = parse_domain_arg(domain_arg);
    if (!poles_path.empty()) spec = lempert::pole_spec_from_json(parse_json_file(poles_path));
    if (!z_arg.empty()) z = parse_point_arg(z_arg);

    if (spec.poles.empty()) {
        std::cerr << "error: non-empty pole set required\n";
        return kExitUsage;
    }
    if (z.empty()) {
        std::cerr << "error: evaluation point --z required\n";
        return kExitUsage;
    }

    const auto est = lempert::estimate_lempert(domain, spec, z, opt);
    const std::string record = lempert::estimate_to_json(est, &spec).dump();
    std::cout << record << "\n";
    if (!output_path.empty()) {
        std::ofstream out(output_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file '" + output_path + "'");
        out << record << "\n";
    }
    return est.certified ? 0 : kExitUncertified;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multipole Lempert function experiments"};
    app.require_subcommand(1);

    std::string run_id;
    std::uint64_t run_seed = 42;
    std::string run_out;
    std::string run_config;
    auto* run = app.add_subcommand("run", "reproduce a named experiment");
    run->add_option("experiment", run_id, "experiment id")->required();
    auto* seed_opt = run->add_option("--seed", run_seed, "rng seed");
    run->add_option("--out", run_out, "output path (line-delimited records)");
    run->add_option("--config", run_config, "experiment config file (JSON)");

    std::string est_domain;
    std::string est_poles;
    std::string est_z;
    std::string est_config;
    lempert::OptimizerConfig est_opt;
    auto* est = app.add_subcommand("estimate", "estimate l_D(p, z) for an ad-hoc spec");
    est->add_option("--domain", est_domain, "domain descriptor (kind name or JSON)");
    est->add_option("--poles", est_poles, "poles file (JSON list of {point, weight})");
    est->add_option("--z", est_z, "evaluation point (real number or JSON)");
    est->add_option("--config", est_config, "config file with {domain, poles, optimizer, output}");
    est->add_option("--restarts", est_opt.restarts, "optimizer restarts");
    est->add_option("--seed", est_opt.seed, "rng seed");
    est->add_option("--free-degrees", est_opt.free_degrees, "free coefficients per component");
    est->add_option("--iterations", est_opt.max_iterations, "simplex iterations per restart");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (run->parsed()) {
            return cmd_run(run_id, run_seed, seed_opt->count() > 0, run_out, run_config);
        }
        return cmd_estimate(est_domain, est_poles, est_z, est_config, est_opt);
    } catch (const lempert::json::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
