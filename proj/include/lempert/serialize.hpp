#pragma once

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>

#include "lempert/lempert.hpp"

namespace lempert {

using json = nlohmann::json;

inline json complex_to_json(Complex c) { return json{{"im", c.imag()}, {"re", c.real()}}; }

inline Complex complex_from_json(const json& j) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    return Complex(j.at("re").get<double>(), j.value("im", 0.0));
}

inline json domain_to_json(const Domain& d) {
    json j{{"kind", d.kind_name()}};
    if (d.kind == Domain::Kind::polydisc || d.kind == Domain::Kind::euclidean_ball) {
        j["n"] = d.n;
    }
    if (d.kind == Domain::Kind::product) {
        json fs = json::array();
        for (const Domain& f : d.factors) fs.push_back(domain_to_json(f));
        j["factors"] = fs;
    }
    return j;
}

inline Domain domain_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "unit_disc") return Domain::unit_disc();
    if (kind == "punctured_disc") return Domain::punctured_disc();
    if (kind == "polydisc") return Domain::polydisc(j.at("n").get<int>());
    if (kind == "euclidean_ball") return Domain::euclidean_ball(j.at("n").get<int>());
    if (kind == "product") {
        std::vector<Domain> fs;
        for (const json& f : j.at("factors")) fs.push_back(domain_from_json(f));
        return Domain::product(std::move(fs));
    }
    throw std::domain_error("domain_from_json: unknown kind '" + kind + "'");
}

inline json pole_to_json(const WeightedPole& p) {
    json pt = json::array();
    for (Complex c : p.point) pt.push_back(complex_to_json(c));
    return json{{"point", pt}, {"weight", p.weight}};
}

inline WeightedPole pole_from_json(const json& j) {
    WeightedPole p;
    if (j.contains("point")) {
        for (const json& c : j.at("point")) p.point.push_back(complex_from_json(c));
    } else {
        p.point.push_back(complex_from_json(j));  // bare {re, im, weight} record
    }
    p.weight = j.value("weight", 1.0);
    return p;
}

inline json pole_spec_to_json(const PoleSpec& s) {
    json poles = json::array();
    for (const auto& p : s.poles) poles.push_back(pole_to_json(p));
    json j{{"poles", poles}};
    if (s.has_generator()) {
        j["generator"] = json{{"count", s.generator_count},
                              {"id", s.generator_id},
                              {"t", s.generator_t}};
    }
    return j;
}

inline PoleSpec pole_spec_from_json(const json& j) {
    if (j.contains("generator")) {
        const json& g = j.at("generator");
        if (g.at("id").get<std::string>() != "one_minus_inv_jsq") {
            throw std::domain_error("pole_spec_from_json: unknown generator id");
        }
        return PoleSpec::schedule_one_minus_inv_jsq(g.at("t").get<double>(),
                                                    g.at("count").get<int>());
    }
    PoleSpec s;
    const json& arr = j.is_array() ? j : j.at("poles");
    for (const json& p : arr) s.poles.push_back(pole_from_json(p));
    return s;
}

inline const char* certificate_method_name(ContainmentCertificate::Method m) {
    switch (m) {
        case ContainmentCertificate::Method::coefficient_bound: return "coefficient_bound";
        case ContainmentCertificate::Method::boundary_sampling_plus_modulus:
            return "boundary_sampling_plus_modulus";
        case ContainmentCertificate::Method::exponential_lift: return "exponential_lift";
    }
    return "?";
}

inline json certificate_to_json(const ContainmentCertificate& c) {
    return json{{"certified", c.certified},
                {"margin", c.margin},
                {"method", certificate_method_name(c.method)}};
}

inline json competitor_to_json(const Competitor& c, const PoleSpec* spec = nullptr) {
    json nodes = json::array();
    for (const auto& n : c.nodes) {
        nodes.push_back(json{{"im", n.lambda.value.imag()},
                             {"pole_index", n.pole_index},
                             {"re", n.lambda.value.real()}});
    }
    json comps = json::array();
    for (const Poly& p : c.disc.components) {
        json cj = json::array();
        for (Complex coeff : p) cj.push_back(complex_to_json(coeff));
        comps.push_back(cj);
    }
    json base = json::array();
    for (Complex b : c.base_point) base.push_back(complex_to_json(b));
    json j{{"base_point", base},
           {"certificate", certificate_to_json(c.certificate)},
           {"coefficients", comps},
           {"nodes", nodes},
           {"representation",
            c.disc.representation == AnalyticDisc::Representation::exp_lift ? "exp_lift"
                                                                            : "polynomial"}};
    if (spec) {
        json ws = json::array();
        for (const auto& n : c.nodes) {
            ws.push_back(spec->poles[static_cast<std::size_t>(n.pole_index)].weight);
        }
        j["weights"] = ws;
    }
    return j;
}

inline json estimate_to_json(const Estimate& e, const PoleSpec* spec = nullptr) {
    return json{{"certified", e.certified},
                {"competitor", competitor_to_json(e.competitor, spec)},
                {"iterations", e.iterations},
                {"restarts_used", e.restarts_used},
                {"runtime_ms", e.runtime_ms},
                {"seed", e.seed},
                {"value", e.value}};
}

inline void optimizer_from_json(const json& j, OptimizerConfig& cfg) {
    cfg.seed = j.value("seed", cfg.seed);
    cfg.restarts = j.value("restarts", cfg.restarts);
    cfg.max_iterations = j.value("max_iterations", cfg.max_iterations);
    cfg.free_degrees = j.value("free_degrees", cfg.free_degrees);
    cfg.shrink = j.value("shrink", cfg.shrink);
    cfg.branch_range = j.value("branch_range", cfg.branch_range);
    cfg.search_samples = j.value("search_samples", cfg.search_samples);
    cfg.final_samples = j.value("final_samples", cfg.final_samples);
    cfg.min_margin = j.value("min_margin", cfg.min_margin);
    cfg.polish = j.value("polish", cfg.polish);
    cfg.scan_stop_tol = j.value("scan_stop_tol", cfg.scan_stop_tol);
    cfg.measure_runtime = j.value("measure_runtime", cfg.measure_runtime);
}

inline json optimizer_to_json(const OptimizerConfig& cfg) {
    return json{{"branch_range", cfg.branch_range},
                {"final_samples", cfg.final_samples},
                {"free_degrees", cfg.free_degrees},
                {"max_iterations", cfg.max_iterations},
                {"measure_runtime", cfg.measure_runtime},
                {"min_margin", cfg.min_margin},
                {"polish", cfg.polish},
                {"restarts", cfg.restarts},
                {"scan_stop_tol", cfg.scan_stop_tol},
                {"search_samples", cfg.search_samples},
                {"seed", cfg.seed},
                {"shrink", cfg.shrink}};
}

}  // namespace lempert
