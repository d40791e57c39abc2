#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lempert/serialize.hpp"

namespace lempert {

/// One reproduction run. Unknown ids are rejected by run_experiment; the
/// default constants below are mirrored by the files under configs/ so that
/// golden outputs stay stable.
struct ExperimentConfig {
    std::string experiment_id;
    std::uint64_t seed = 42;
    std::string output_path;  // empty: "<experiment_id>.jsonl"
    OptimizerConfig optimizer;
    json params = json::object();
};

struct ResultRow {
    std::string experiment_id;
    std::string case_label;
    double estimate = 1.0;
    std::optional<double> oracle;
    double gap = 0.0;  // estimate - oracle when an oracle exists
    bool certified = false;
    std::uint64_t seed = 0;
    double runtime_ms = 0.0;
};

struct ExperimentOutcome {
    std::vector<ResultRow> rows;
    std::vector<std::string> failures;  // violated row-level assertions
};

inline json result_row_to_json(const ResultRow& r) {
    json j{{"case", r.case_label},
           {"certified", r.certified},
           {"estimate", r.estimate},
           {"experiment_id", r.experiment_id},
           {"gap", r.gap},
           {"runtime_ms", r.runtime_ms},
           {"seed", r.seed}};
    if (r.oracle) j["oracle"] = *r.oracle;
    return j;
}

inline const std::vector<std::string>& experiment_ids() {
    static const std::vector<std::string> ids{
        "disc-oracle",         "remark2-bidisc",      "example4-product",
        "covering-counterexample", "theorem1-truncation", "monotonicity-suite"};
    return ids;
}

inline ExperimentConfig default_experiment_config(const std::string& id) {
    ExperimentConfig cfg;
    cfg.experiment_id = id;
    cfg.optimizer.seed = cfg.seed;
    if (id == "disc-oracle") {
        cfg.optimizer.restarts = 6;
        cfg.optimizer.max_iterations = 200;
        cfg.optimizer.free_degrees = 26;
        cfg.params = {{"cases", 20},        {"max_poles", 5},   {"pole_radius", 0.85},
                      {"tolerance", 1e-2},  {"weight_max", 2.0}, {"weight_min", 0.05},
                      {"z_radius", 0.6}};
    } else if (id == "remark2-bidisc") {
        cfg.optimizer.restarts = 2;
        cfg.optimizer.max_iterations = 150;
        cfg.optimizer.free_degrees = 45;
        cfg.params = {{"a1", 0.3}, {"a2", 0.6}, {"tolerance", 1e-2}};
    } else if (id == "example4-product") {
        cfg.optimizer.restarts = 2;
        cfg.optimizer.max_iterations = 150;
        cfg.optimizer.free_degrees = 30;
        cfg.params = {{"b_modulus", 0.65}, {"count", 8}, {"tolerance", 1e-2}, {"w", 0.1}};
    } else if (id == "covering-counterexample") {
        cfg.optimizer.restarts = 2;
        cfg.optimizer.max_iterations = 100;
        cfg.optimizer.free_degrees = 50;
        cfg.params = {{"a1", 0.5}, {"a2", -0.5}, {"branch_bound", 50}, {"tolerance", 1e-2},
                      {"z", 0.25}};
    } else if (id == "theorem1-truncation") {
        cfg.optimizer.restarts = 4;
        cfg.optimizer.max_iterations = 150;
        cfg.optimizer.free_degrees = 4;
        cfg.params = {{"m_max", 8}, {"stop_scan_m_max", 40}, {"t", 0.9}, {"tolerance", 1e-2}};
    } else if (id == "monotonicity-suite") {
        cfg.optimizer.restarts = 4;
        cfg.optimizer.max_iterations = 200;
        cfg.optimizer.free_degrees = 45;
        cfg.params = {{"a1", 0.3}, {"a2", 0.6}, {"tolerance", 1e-2}};
    } else {
        throw std::domain_error("unknown experiment id '" + id + "'");
    }
    return cfg;
}

namespace detail {

inline ResultRow make_row(const ExperimentConfig& cfg, std::string label, const Estimate& est,
                          std::optional<double> oracle) {
    ResultRow r;
    r.experiment_id = cfg.experiment_id;
    r.case_label = std::move(label);
    r.estimate = est.value;
    r.oracle = oracle;
    r.gap = oracle ? est.value - *oracle : 0.0;
    r.certified = est.certified;
    r.seed = cfg.seed;
    r.runtime_ms = est.runtime_ms;
    return r;
}

inline void check_row(const ResultRow& r, double tolerance, std::vector<std::string>& failures) {
    if (!r.certified) {
        failures.push_back(r.case_label + ": estimate not certified");
        return;
    }
    if (!r.oracle) return;
    if (r.gap < -1e-12) {
        failures.push_back(r.case_label + ": estimate below the oracle (soundness violation)");
    }
    if (std::abs(r.gap) > tolerance * std::abs(*r.oracle)) {
        std::ostringstream os;
        os << r.case_label << ": |gap| " << std::abs(r.gap) << " exceeds tolerance";
        failures.push_back(os.str());
    }
}

inline ExperimentOutcome run_disc_oracle(const ExperimentConfig& cfg) {
    ExperimentOutcome out;
    const int cases = cfg.params.value("cases", 20);
    const int max_poles = cfg.params.value("max_poles", 5);
    const double pole_radius = cfg.params.value("pole_radius", 0.85);
    const double z_radius = cfg.params.value("z_radius", 0.6);
    const double wmin = cfg.params.value("weight_min", 0.05);
    const double wmax = cfg.params.value("weight_max", 2.0);
    const double tol = cfg.params.value("tolerance", 1e-2);

    const Domain disc = Domain::unit_disc();
    std::mt19937_64 rng(cfg.seed);
    for (int i = 0; i < cases; ++i) {
        const int npoles = 1 + static_cast<int>(uniform01(rng) * max_poles) % max_poles;
        const Complex z = std::polar(z_radius * std::sqrt(uniform01(rng)),
                                     2.0 * std::numbers::pi * uniform01(rng));
        PoleSpec spec;
        while (static_cast<int>(spec.size()) < npoles) {
            const Complex a = std::polar(pole_radius * std::sqrt(uniform01(rng)),
                                         2.0 * std::numbers::pi * uniform01(rng));
            bool ok = std::abs(a - z) > 0.05;
            for (const auto& p : spec.poles) ok = ok && std::abs(a - p.point[0]) > 0.02;
            if (ok) spec.poles.push_back({{a}, wmin + (wmax - wmin) * uniform01(rng)});
        }
        const double oracle = lempert_disc_oracle(spec.as_disc_pairs(), z);
        OptimizerConfig opt = cfg.optimizer;
        opt.seed = cfg.seed + static_cast<std::uint64_t>(i);
        const Estimate est = estimate_lempert(disc, spec, std::vector<Complex>{z}, opt);
        std::ostringstream label;
        label << "case-" << i << "-poles-" << npoles;
        out.rows.push_back(make_row(cfg, label.str(), est, oracle));
        check_row(out.rows.back(), tol, out.failures);
    }
    return out;
}

inline ExperimentOutcome run_remark2_bidisc(const ExperimentConfig& cfg) {
    ExperimentOutcome out;
    const double a1 = cfg.params.value("a1", 0.3);
    const double a2 = cfg.params.value("a2", 0.6);
    const double tol = cfg.params.value("tolerance", 1e-2);
    const Domain bidisc = Domain::polydisc(2);
    const std::vector<Complex> origin{Complex(0, 0), Complex(0, 0)};

    // poles A x {a1} = {(a1,a1),(a2,a1)}; the product property forces |a1|
    const double pair_oracle =
        lempert_product_oracle({{a1, 1.0}, {a2, 1.0}}, a1, 0.0, 0.0);
    const double single_oracle = lempert_product_oracle({{a1, 1.0}}, a1, 0.0, 0.0);

    const PoleSpec pair = PoleSpec::finite({{{a1, a1}, 1.0}, {{a2, a1}, 1.0}});
    const PoleSpec single = PoleSpec::finite({{{a1, a1}, 1.0}});

    const Estimate pair_est = estimate_lempert(bidisc, pair, origin, cfg.optimizer);
    const Estimate single_est = estimate_lempert(bidisc, single, origin, cfg.optimizer);

    out.rows.push_back(make_row(cfg, "pair", pair_est, pair_oracle));
    out.rows.push_back(make_row(cfg, "single", single_est, single_oracle));
    for (const auto& r : out.rows) check_row(r, tol, out.failures);
    if (pair_oracle != single_oracle) {
        out.failures.push_back("oracles differ: inclusion of the second pole must not move the value");
    }
    return out;
}

inline ExperimentOutcome run_example4_product(const ExperimentConfig& cfg) {
    ExperimentOutcome out;
    const double b_mod = cfg.params.value("b_modulus", 0.65);
    const int count = cfg.params.value("count", 8);
    const double w = cfg.params.value("w", 0.1);
    const double tol = cfg.params.value("tolerance", 1e-2);
    const Domain bidisc = Domain::polydisc(2);
    const std::vector<Complex> at{Complex(0, 0), Complex(w, 0)};

    for (int m = 1; m <= count; ++m) {
        std::vector<std::pair<Complex, double>> B;
        PoleSpec spec;
        for (int j = 0; j < m; ++j) {
            const Complex b = std::polar(b_mod, 2.0 * std::numbers::pi * j / count);
            B.emplace_back(b, 1.0);
            spec.poles.push_back({{b, Complex(0, 0)}, 1.0});
        }
        const double oracle = lempert_product_oracle(B, Complex(0, 0), Complex(0, 0), w);
        const Estimate est = estimate_lempert(bidisc, spec, at, cfg.optimizer);
        std::ostringstream label;
        label << "m=" << m;
        out.rows.push_back(make_row(cfg, label.str(), est, oracle));
        check_row(out.rows.back(), tol, out.failures);
        if (std::pow(b_mod, m) < w && oracle != w) {
            out.failures.push_back(label.str() + ": oracle must equal |w| once the product drops below it");
        }
    }
    return out;
}

inline ExperimentOutcome run_covering_counterexample(const ExperimentConfig& cfg) {
    ExperimentOutcome out;
    const double a1 = cfg.params.value("a1", 0.5);
    const double a2 = cfg.params.value("a2", -0.5);
    const double zv = cfg.params.value("z", 0.25);
    const int K = cfg.params.value("branch_bound", 50);
    const double tol = cfg.params.value("tolerance", 1e-2);
    const Domain dstar = Domain::punctured_disc();
    const std::vector<Complex> z{Complex(zv, 0)};

    const auto o1 = lempert_punctured_oracle({{a1, 1.0}}, zv, K);
    const auto o2 = lempert_punctured_oracle({{a2, 1.0}}, zv, K);
    const auto opair = lempert_punctured_oracle({{a1, 1.0}, {a2, 1.0}}, zv, K);
    if (!o1.converged || !o2.converged || !opair.converged) {
        out.failures.push_back("lift brute force did not stabilize under K -> K+5");
    }

    const Estimate e1 =
        estimate_lempert(dstar, PoleSpec::finite({{{a1}, 1.0}}), z, cfg.optimizer);
    const Estimate e2 =
        estimate_lempert(dstar, PoleSpec::finite({{{a2}, 1.0}}), z, cfg.optimizer);
    const Estimate epair =
        estimate_lempert(dstar, PoleSpec::finite({{{a1}, 1.0}, {{a2}, 1.0}}), z, cfg.optimizer);

    out.rows.push_back(make_row(cfg, "single-a1", e1, o1.value));
    out.rows.push_back(make_row(cfg, "single-a2", e2, o2.value));
    out.rows.push_back(make_row(cfg, "pair", epair, opair.value));
    for (const auto& r : out.rows) check_row(r, tol, out.failures);

    if (std::abs(opair.value - o1.value * o2.value) > 1e-12) {
        out.failures.push_back("pair oracle must factor into the single-pole oracles");
    }
    if (!(opair.value < std::min(o1.value, o2.value))) {
        out.failures.push_back("pair oracle must lie strictly below both singles");
    }
    return out;
}

inline ExperimentOutcome run_theorem1_truncation(const ExperimentConfig& cfg) {
    ExperimentOutcome out;
    const double t = cfg.params.value("t", 0.9);
    const int m_max = cfg.params.value("m_max", 8);
    const int stop_m_max = cfg.params.value("stop_scan_m_max", 40);
    const double tol = cfg.params.value("tolerance", 1e-2);
    const Domain disc = Domain::unit_disc();
    const std::vector<Complex> z{Complex(0, 0)};

    const PoleSpec spec = PoleSpec::schedule_one_minus_inv_jsq(t, m_max);
    const ScanResult scan = finite_truncation_scan(disc, spec, z, m_max, cfg.optimizer);

    double partial = 1.0;
    for (std::size_t m = 0; m < scan.estimates.size(); ++m) {
        partial *= 1.0 - (1.0 - t) / (static_cast<double>(m + 1) * (m + 1));
        std::ostringstream label;
        label << "m=" << (m + 1);
        out.rows.push_back(make_row(cfg, label.str(), scan.estimates[m], partial));
        check_row(out.rows.back(), tol, out.failures);
        if (m > 0 && scan.estimates[m].value > scan.estimates[m - 1].value) {
            out.failures.push_back(label.str() + ": sequence not nonincreasing");
        }
    }

    // separate longer scan exercising the stopping rule
    const ScanResult stopping = finite_truncation_scan(
        disc, PoleSpec::schedule_one_minus_inv_jsq(t, stop_m_max), z, stop_m_max, cfg.optimizer);
    ResultRow stop_row;
    stop_row.experiment_id = cfg.experiment_id;
    std::ostringstream label;
    label << "stop-at-m=" << stopping.estimates.size();
    stop_row.case_label = label.str();
    stop_row.estimate = stopping.estimates.back().value;
    stop_row.certified = stopping.estimates.back().certified;
    stop_row.seed = cfg.seed;
    out.rows.push_back(stop_row);
    if (!stopping.stopped_early) {
        out.failures.push_back("stopping rule did not trigger within the long scan");
    } else {
        const std::size_t n = stopping.estimates.size();
        const double diff = std::abs(stopping.estimates[n - 2].value - stopping.estimates[n - 1].value);
        if (!(diff < cfg.optimizer.scan_stop_tol)) {
            out.failures.push_back("stopping rule fired without a sub-tolerance step");
        }
    }
    return out;
}

inline ExperimentOutcome run_monotonicity_suite(const ExperimentConfig& cfg) {
    ExperimentOutcome out;
    const double a1 = cfg.params.value("a1", 0.3);
    const double a2 = cfg.params.value("a2", 0.6);
    const double tol = cfg.params.value("tolerance", 1e-2);
    const Domain disc = Domain::unit_disc();
    const std::vector<Complex> zero{Complex(0, 0)};

    {   // adding a pole in the disc: transfer must certify and order exactly
        const PoleSpec p = PoleSpec::finite({{{a1}, 1.0}});
        const PoleSpec q = PoleSpec::finite({{{a1}, 1.0}, {{a2}, 1.0}});
        const auto rep = check_monotonicity(disc, p, q, zero, cfg.optimizer);
        out.rows.push_back(make_row(cfg, "disc-add-pole-p", rep.p_estimate, a1));
        out.rows.push_back(make_row(cfg, "disc-add-pole-q", rep.q_estimate, a1 * a2));
        check_row(out.rows[out.rows.size() - 2], tol, out.failures);
        check_row(out.rows.back(), tol, out.failures);
        if (!rep.transfer_certified) out.failures.push_back("disc-add-pole: transfer failed");
        if (!rep.ordering_holds) out.failures.push_back("disc-add-pole: ordering violated");
    }
    {   // p == q: estimates must agree
        const PoleSpec p = PoleSpec::finite({{{Complex(0.5, 0)}, 1.0}});
        const auto rep = check_monotonicity(disc, p, p, zero, cfg.optimizer);
        out.rows.push_back(make_row(cfg, "equal-specs-p", rep.p_estimate, 0.5));
        out.rows.push_back(make_row(cfg, "equal-specs-q", rep.q_estimate, 0.5));
        check_row(out.rows[out.rows.size() - 2], tol, out.failures);
        check_row(out.rows.back(), tol, out.failures);
        if (std::abs(rep.p_estimate.value - rep.q_estimate.value) > 1e-15) {
            out.failures.push_back("equal-specs: estimates differ");
        }
        if (!rep.ordering_holds) out.failures.push_back("equal-specs: ordering violated");
    }
    {   // same pole, doubled weight
        const PoleSpec p = PoleSpec::finite({{{Complex(0.5, 0)}, 1.0}});
        const PoleSpec q = PoleSpec::finite({{{Complex(0.5, 0)}, 2.0}});
        const auto rep = check_monotonicity(disc, p, q, zero, cfg.optimizer);
        out.rows.push_back(make_row(cfg, "weight-increase-p", rep.p_estimate, 0.5));
        out.rows.push_back(make_row(cfg, "weight-increase-q", rep.q_estimate, 0.25));
        check_row(out.rows[out.rows.size() - 2], tol, out.failures);
        check_row(out.rows.back(), tol, out.failures);
        if (!rep.transfer_certified) out.failures.push_back("weight-increase: transfer failed");
        if (!rep.ordering_holds) out.failures.push_back("weight-increase: ordering violated");
    }
    {   // bidisc pair: non-strict monotonicity, both values pinned at |a1|
        const Domain bidisc = Domain::polydisc(2);
        const std::vector<Complex> origin{Complex(0, 0), Complex(0, 0)};
        const PoleSpec p = PoleSpec::finite({{{a1, a1}, 1.0}});
        const PoleSpec q = PoleSpec::finite({{{a1, a1}, 1.0}, {{a2, a1}, 1.0}});
        const auto rep = check_monotonicity(bidisc, p, q, origin, cfg.optimizer);
        out.rows.push_back(make_row(cfg, "bidisc-pair-p", rep.p_estimate, a1));
        out.rows.push_back(make_row(cfg, "bidisc-pair-q", rep.q_estimate, a1));
        check_row(out.rows[out.rows.size() - 2], tol, out.failures);
        check_row(out.rows.back(), tol, out.failures);
    }
    return out;
}

}  // namespace detail

inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
    if (cfg.experiment_id == "disc-oracle") return detail::run_disc_oracle(cfg);
    if (cfg.experiment_id == "remark2-bidisc") return detail::run_remark2_bidisc(cfg);
    if (cfg.experiment_id == "example4-product") return detail::run_example4_product(cfg);
    if (cfg.experiment_id == "covering-counterexample") {
        return detail::run_covering_counterexample(cfg);
    }
    if (cfg.experiment_id == "theorem1-truncation") return detail::run_theorem1_truncation(cfg);
    if (cfg.experiment_id == "monotonicity-suite") return detail::run_monotonicity_suite(cfg);
    throw std::domain_error("unknown experiment id '" + cfg.experiment_id + "'");
}

/// Line-delimited records, one serialized row per line.
inline void write_result_rows(const std::string& path, const std::vector<ResultRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    for (const ResultRow& r : rows) out << result_row_to_json(r).dump() << "\n";
}

inline ExperimentConfig experiment_config_from_json(const json& j) {
    ExperimentConfig cfg = default_experiment_config(j.at("experiment_id").get<std::string>());
    cfg.seed = j.value("seed", cfg.seed);
    cfg.optimizer.seed = cfg.seed;
    if (j.contains("optimizer")) optimizer_from_json(j.at("optimizer"), cfg.optimizer);
    if (j.contains("params")) {
        for (const auto& [key, value] : j.at("params").items()) cfg.params[key] = value;
    }
    if (j.contains("output")) cfg.output_path = j.at("output").get<std::string>();
    return cfg;
}

}  // namespace lempert
