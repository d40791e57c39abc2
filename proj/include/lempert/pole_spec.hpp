#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lempert/complex_core.hpp"
#include "lempert/discs.hpp"
#include "lempert/domains.hpp"

namespace lempert {

struct WeightedPole {
    std::vector<Complex> point;
    double weight = 1.0;
};

/// Finite weighted pole set, optionally tagged as the truncation of a
/// countable schedule. Uncountable pole sets have no direct representation:
/// by definition every estimate is an infimum over finite sub-pole-sets, so
/// the API only ever sees finite specs (or countable generators truncated by
/// finite_truncation_scan).
struct PoleSpec {
    std::vector<WeightedPole> poles;

    std::string generator_id;  // empty unless a schedule truncation
    double generator_t = 0.0;
    int generator_count = 0;

    static PoleSpec finite(std::vector<WeightedPole> ps) {
        PoleSpec s;
        s.poles = std::move(ps);
        return s;
    }

    /// One-dimensional schedule a_j = 1 - (1-t)/j^2 with unit weights.
    static PoleSpec schedule_one_minus_inv_jsq(double t, int count) {
        const auto seq = ZeroSequence::schedule_one_minus_inv_jsq(t, count);
        PoleSpec s;
        s.generator_id = seq.generator_id();
        s.generator_t = t;
        s.generator_count = count;
        for (Complex a : seq.zeros()) s.poles.push_back({{a}, 1.0});
        return s;
    }

    bool has_generator() const noexcept { return !generator_id.empty(); }

    std::size_t size() const noexcept { return poles.size(); }

    PoleSpec prefix(std::size_t m) const {
        if (m == 0 || m > poles.size()) {
            throw std::domain_error("PoleSpec::prefix: truncation length out of range");
        }
        PoleSpec s;
        s.poles.assign(poles.begin(), poles.begin() + static_cast<std::ptrdiff_t>(m));
        return s;
    }

    /// (point, weight) pairs for the one-dimensional oracles.
    std::vector<std::pair<Complex, double>> as_disc_pairs() const {
        std::vector<std::pair<Complex, double>> out;
        out.reserve(poles.size());
        for (const auto& p : poles) {
            if (p.point.size() != 1) {
                throw std::domain_error("PoleSpec: expected one-dimensional poles");
            }
            out.emplace_back(p.point[0], p.weight);
        }
        return out;
    }
};

inline void validate_pole_spec(const Domain& domain, const PoleSpec& spec,
                               std::span<const Complex> z) {
    if (spec.poles.empty()) {
        throw std::domain_error("PoleSpec: pole set must be non-empty");
    }
    if (!contains(domain, z)) {
        throw std::domain_error("PoleSpec: evaluation point must lie inside the domain");
    }
    for (std::size_t i = 0; i < spec.poles.size(); ++i) {
        const auto& p = spec.poles[i];
        if (!(p.weight > 0.0)) {
            throw std::domain_error("PoleSpec: weights must be strictly positive");
        }
        if (!contains(domain, p.point)) {
            throw std::domain_error("PoleSpec: poles must lie inside the domain");
        }
        double dist_z = 0.0;
        for (std::size_t c = 0; c < p.point.size(); ++c) {
            dist_z = std::max(dist_z, std::abs(p.point[c] - z[c]));
        }
        if (dist_z < 1e-12) {
            throw std::domain_error("PoleSpec: evaluation point must not be a pole");
        }
        for (std::size_t k = 0; k < i; ++k) {
            double d = 0.0;
            for (std::size_t c = 0; c < p.point.size(); ++c) {
                d = std::max(d, std::abs(p.point[c] - spec.poles[k].point[c]));
            }
            if (d < 1e-12) {
                throw std::domain_error("PoleSpec: poles must be pairwise distinct");
            }
        }
    }
}

/// prod_j |lambda_j|^{p_j} for a competitor whose nodes cover the spec's
/// poles exactly (one node per pole, indices a bijection).
inline double objective(const Competitor& competitor, const PoleSpec& spec) {
    if (competitor.nodes.size() != spec.poles.size()) {
        throw std::domain_error("objective: competitor nodes must cover the pole spec");
    }
    std::vector<bool> seen(spec.poles.size(), false);
    double prod = 1.0;
    for (const auto& node : competitor.nodes) {
        if (node.pole_index < 0 || node.pole_index >= static_cast<int>(spec.poles.size()) ||
            seen[static_cast<std::size_t>(node.pole_index)]) {
            throw std::domain_error("objective: node/pole index mismatch");
        }
        seen[static_cast<std::size_t>(node.pole_index)] = true;
        prod *= std::pow(std::abs(node.lambda.value),
                         spec.poles[static_cast<std::size_t>(node.pole_index)].weight);
    }
    return prod;
}

/// A certified upper bound on l_D(p, z) with its witnessing competitor.
/// `certified == false` downgrades the value to the trivial bound 1.
struct Estimate {
    double value = 1.0;
    Competitor competitor;
    bool certified = false;
    int restarts_used = 0;
    long long iterations = 0;
    std::uint64_t seed = 0;
    double runtime_ms = 0.0;  // stays 0 unless runtime measurement is enabled
};

}  // namespace lempert
