#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lempert/fit.hpp"
#include "lempert/optimize.hpp"
#include "lempert/oracles.hpp"
#include "lempert/pole_spec.hpp"

namespace lempert {

/// A disc plus node assignment proposed as an optimizer starting point.
/// Candidates are built from the closed-form structure of the model domains
/// (disc automorphisms, product constructions, covering lifts); they are not
/// trusted until they pass shrink + certification like any other competitor.
struct SeedCandidate {
    AnalyticDisc disc;
    std::vector<Competitor::Node> nodes;
    std::vector<int> branches;  // exp_lift: branch integer per node
};

namespace detail {

constexpr double kNodeCap = 1.0 - 4e-6;  // leave room for the certification shrink

inline bool nodes_admissible(std::span<const Complex> nodes, double floor_) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double m = std::abs(nodes[j]);
        if (!(m > std::max(floor_, kNodeSeparationFloor) && m < kNodeCap)) return false;
        for (std::size_t k = 0; k < j; ++k) {
            if (std::abs(nodes[j] - nodes[k]) < kNodeSeparationFloor) return false;
        }
    }
    return true;
}

inline std::vector<Competitor::Node> index_nodes(std::span<const Complex> nodes) {
    std::vector<Competitor::Node> out;
    out.reserve(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        out.push_back({UnitDiscPoint(nodes[j]), static_cast<int>(j)});
    }
    return out;
}

/// Best constrained component for one coordinate: the cheaper of the plain
/// Lagrange interpolant and the Lawson near-minimax fit, judged by the
/// sampled sup. Returns nullopt when neither stays within the closed disc.
inline std::optional<Poly> best_disc_component(const std::vector<Complex>& cpts,
                                               const std::vector<Complex>& cvals, int degree,
                                               int samples, int lawson_iters) {
    const InterpolationFamily fam(cpts, cvals, degree);
    double lag_sup = 0.0;
    for (int i = 0; i < samples; ++i) {
        lag_sup = std::max(lag_sup, std::abs(poly_eval(fam.lagrange,
                                                       std::polar(1.0, 2.0 * std::numbers::pi * i / samples))));
    }
    const auto fitted = min_sup_fit(fam, samples, lawson_iters);
    const bool take_fit = fitted.sup_samples < lag_sup - 1e-6;
    const double sup = take_fit ? fitted.sup_samples : lag_sup;
    if (sup > 1.0 + 1e-9) return std::nullopt;
    return take_fit ? fitted.coeffs : fam.lagrange;
}

/// Assembles a polynomial candidate for the given nodes by fitting every
/// coordinate independently against the unit-disc bound.
inline std::optional<SeedCandidate> assemble_polydisc_candidate(
    const PoleSpec& spec, std::span<const Complex> z, const std::vector<Complex>& nodes,
    int degree, int samples, int lawson_iters) {
    const std::size_t dim = z.size();
    std::vector<Complex> cpts(nodes.size() + 1);
    cpts[0] = Complex(0.0, 0.0);
    std::copy(nodes.begin(), nodes.end(), cpts.begin() + 1);

    SeedCandidate cand;
    cand.disc.representation = AnalyticDisc::Representation::polynomial;
    cand.disc.dimension = static_cast<int>(dim);
    for (std::size_t c = 0; c < dim; ++c) {
        std::vector<Complex> cvals(nodes.size() + 1);
        cvals[0] = z[c];
        for (std::size_t j = 0; j < nodes.size(); ++j) cvals[j + 1] = spec.poles[j].point[c];
        auto comp = best_disc_component(cpts, cvals, degree, samples, lawson_iters);
        if (!comp) return std::nullopt;
        cand.disc.degree_budget = std::max(cand.disc.degree_budget, poly_degree(*comp));
        cand.disc.components.push_back(std::move(*comp));
    }
    cand.nodes = index_nodes(nodes);
    return cand;
}

}  // namespace detail

/// Seeds for the unit disc: node preimages under the extremal automorphism
/// mobius_map(z, .), pushed out slightly so the fitted component has room
/// below modulus one.
inline std::vector<SeedCandidate> disc_seed_candidates(const PoleSpec& spec,
                                                       std::span<const Complex> z,
                                                       const OptimizerConfig& cfg) {
    std::vector<SeedCandidate> out;
    const std::size_t m = spec.size();
    std::vector<Complex> mu(m);
    for (std::size_t j = 0; j < m; ++j) mu[j] = mobius_map(z[0], spec.poles[j].point[0]);

    const int degree = static_cast<int>(m) + std::max(cfg.free_degrees, 1);
    const int samples = std::max(cfg.search_samples, 8 * degree);
    for (double eps : {0.0, 6e-4, 1.2e-3, 2.5e-3, 5e-3}) {
        std::vector<Complex> nodes(m);
        for (std::size_t j = 0; j < m; ++j) nodes[j] = mu[j] * (1.0 + eps);
        if (!detail::nodes_admissible(nodes, cfg.node_floor)) continue;
        std::vector<Complex> cpts(m + 1);
        cpts[0] = Complex(0.0, 0.0);
        std::copy(nodes.begin(), nodes.end(), cpts.begin() + 1);
        std::vector<Complex> cvals(m + 1);
        cvals[0] = z[0];
        for (std::size_t j = 0; j < m; ++j) cvals[j + 1] = spec.poles[j].point[0];
        auto comp = detail::best_disc_component(cpts, cvals, degree, samples, 100);
        if (!comp) continue;
        SeedCandidate cand;
        cand.disc.representation = AnalyticDisc::Representation::polynomial;
        cand.disc.dimension = 1;
        cand.disc.degree_budget = poly_degree(*comp);
        cand.disc.components = {std::move(*comp)};
        cand.nodes = detail::index_nodes(nodes);
        out.push_back(std::move(cand));
        if (out.size() >= 2) break;
    }
    return out;
}

/// Seeds for polydiscs (and products of discs). Node sets come from the
/// coordinate-wise automorphism preimages, either used directly for the
/// coordinate whose Green product dominates, or pushed out radially until
/// the node product reaches the largest coordinate bound. For two poles a
/// short line search over the outer node modulus is added; the two-pole
/// optimum typically sits at an interior trade-off between the coordinates.
inline std::vector<SeedCandidate> polydisc_seed_candidates(const PoleSpec& spec,
                                                           std::span<const Complex> z,
                                                           const OptimizerConfig& cfg) {
    std::vector<SeedCandidate> out;
    const std::size_t m = spec.size();
    const std::size_t dim = z.size();

    // Coordinate-wise lower bound for the node product: nodes sharing one
    // coordinate value contribute a single Jensen factor, so the bound is the
    // product of Mobius factors over the distinct values of that coordinate.
    std::vector<std::vector<Complex>> mu(dim, std::vector<Complex>(m));
    std::vector<double> bound(dim, 1.0);
    std::vector<double> own_product(dim, 1.0);
    std::vector<bool> usable(dim, true);
    for (std::size_t c = 0; c < dim; ++c) {
        double grouped = 1.0;
        for (std::size_t j = 0; j < m; ++j) {
            mu[c][j] = mobius_map(z[c], spec.poles[j].point[c]);
            own_product[c] *= std::abs(mu[c][j]);
            bool first_of_value = true;
            for (std::size_t k = 0; k < j; ++k) {
                if (std::abs(spec.poles[j].point[c] - spec.poles[k].point[c]) < 1e-12) {
                    first_of_value = false;
                }
            }
            if (first_of_value) grouped *= std::abs(mu[c][j]);
        }
        bound[c] = grouped;
        for (std::size_t j = 0; j < m && usable[c]; ++j) {
            if (std::abs(mu[c][j]) < kNodeSeparationFloor) usable[c] = false;
            for (std::size_t k = 0; k < j; ++k) {
                if (std::abs(mu[c][j] - mu[c][k]) < kNodeSeparationFloor) usable[c] = false;
            }
        }
    }
    const double target = *std::max_element(bound.begin(), bound.end());

    std::size_t base = dim;  // usable coordinate with the largest own product
    for (std::size_t c = 0; c < dim; ++c) {
        if (usable[c] && (base == dim || own_product[c] > own_product[base])) base = c;
    }
    if (base == dim) return out;

    const int degree = static_cast<int>(m) + std::max(cfg.free_degrees, 1);
    const int samples = std::max(cfg.search_samples, 8 * degree);

    auto try_nodes = [&](const std::vector<Complex>& nodes, int lawson_iters) {
        if (!detail::nodes_admissible(nodes, cfg.node_floor)) return;
        auto cand = detail::assemble_polydisc_candidate(spec, z, nodes, degree, samples, lawson_iters);
        if (cand) out.push_back(std::move(*cand));
    };

    // direct preimages of the dominating coordinate
    for (double eps : {8e-4, 2.5e-3}) {
        if (own_product[base] < target * 0.999) break;
        std::vector<Complex> nodes(m);
        for (std::size_t j = 0; j < m; ++j) nodes[j] = mu[base][j] * (1.0 + eps);
        try_nodes(nodes, 90);
        if (!out.empty()) break;
    }

    // radial pushout of the base preimages until the product reaches target
    for (double delta : {0.0, 4e-3, 8e-3}) {
        const double gamma = std::pow(target * (1.0 + delta) / own_product[base],
                                      1.0 / static_cast<double>(m));
        if (!(gamma >= 1.0)) continue;
        std::vector<Complex> nodes(m);
        for (std::size_t j = 0; j < m; ++j) nodes[j] = mu[base][j] * gamma;
        try_nodes(nodes, 90);
    }

    // two-pole trade-off: fix the node product and scan the outer modulus
    // inside the pointwise-Schwarz window. The outer node goes to the pole
    // with the larger base-coordinate factor; each node must dominate its
    // own factor, which pins the admissible interval for the outer modulus.
    if (m == 2) {
        const std::size_t big = std::abs(mu[base][0]) >= std::abs(mu[base][1]) ? 0 : 1;
        const double mod_big = std::abs(mu[base][big]);
        const double mod_small = std::abs(mu[base][1 - big]);
        const double arg_big = std::arg(mu[base][big]);
        const double arg_small = std::arg(mu[base][1 - big]);
        for (double delta : {2e-3, 8e-3}) {
            const double product = target * (1.0 + delta);
            const double lo = std::max(mod_big + 1e-3, product / detail::kNodeCap);
            const double hi = std::min(product / (mod_small + 1e-3), detail::kNodeCap);
            if (!(lo < hi)) continue;
            double best_sup = std::numeric_limits<double>::infinity();
            std::vector<Complex> best_nodes;
            for (int step = 0; step <= 5; ++step) {
                const double outer = lo + (hi - lo) * step / 5.0;
                const double inner = product / outer;
                if (!(inner > kNodeSeparationFloor && inner < outer)) continue;
                std::vector<Complex> nodes(2);
                nodes[big] = std::polar(outer, arg_big);
                nodes[1 - big] = std::polar(inner, arg_small);
                if (!detail::nodes_admissible(nodes, cfg.node_floor)) continue;
                std::vector<Complex> cpts{Complex(0.0, 0.0), nodes[0], nodes[1]};
                double sup = 0.0;
                for (std::size_t c = 0; c < dim && sup < 2.0; ++c) {
                    const std::vector<Complex> cvals{z[c], spec.poles[0].point[c],
                                                     spec.poles[1].point[c]};
                    const auto fit = min_sup_fit(InterpolationFamily(cpts, cvals, degree),
                                                 std::max(256, 4 * degree), 50);
                    sup = std::max(sup, fit.sup_samples);
                }
                if (sup < best_sup) {
                    best_sup = sup;
                    best_nodes = nodes;
                }
            }
            if (!best_nodes.empty() && best_sup < 1.02) try_nodes(best_nodes, 160);
            if (!out.empty()) break;
        }
    }

    return out;
}

/// Seeds for the punctured disc via the exp o cayley covering: node moduli
/// come from the Mobius distances between the lifted poles and the lifted
/// base point; the inner polynomial is fitted into the left half plane with
/// the Newton log-sum-exp scheme. Branch integers are enumerated around the
/// lift-oracle optimum; combos whose closed-form node product already
/// exceeds the best one by a wide factor cannot win and are skipped.
inline std::vector<SeedCandidate> punctured_seed_candidates(const PoleSpec& spec,
                                                            std::span<const Complex> z,
                                                            const OptimizerConfig& cfg) {
    std::vector<SeedCandidate> out;
    const std::size_t m = spec.size();
    const Complex z_lift = cayley(std::log(z[0]));
    const int K = std::max(cfg.branch_range, 1);

    const auto pairs = spec.as_disc_pairs();
    const auto oracle = lempert_punctured_oracle(pairs, z[0], std::max(K, 8));

    // candidate branch assignments, scored by the closed-form node product
    struct Combo {
        std::vector<int> ks;
        double score;
    };
    std::vector<Combo> combos;
    combos.push_back({oracle.branches, oracle.value});
    if (m <= 3) {
        std::vector<int> ks(m, -K);
        while (true) {
            double score = 1.0;
            for (std::size_t j = 0; j < m; ++j) {
                score *= std::pow(
                    mobius_factor(detail::punctured_lift(pairs[j].first, ks[j]), z_lift),
                    pairs[j].second);
            }
            if (score <= oracle.value * 1.05 && ks != oracle.branches) {
                combos.push_back({ks, score});
            }
            std::size_t j = 0;
            for (; j < m; ++j) {
                if (ks[j] < K) {
                    ++ks[j];
                    break;
                }
                ks[j] = -K;
            }
            if (j == m) break;
        }
        std::sort(combos.begin(), combos.end(),
                  [](const Combo& a, const Combo& b) { return a.score < b.score; });
        if (combos.size() > 4) combos.resize(4);
    }

    const int degree = static_cast<int>(m) + std::max(cfg.free_degrees, 1);
    const int samples = std::max({1024, cfg.search_samples, 8 * degree});
    for (const auto& combo : combos) {
        std::vector<Complex> lifts(m), psi_vals(m);
        for (std::size_t j = 0; j < m; ++j) {
            lifts[j] = detail::punctured_lift(pairs[j].first, combo.ks[j]);
            psi_vals[j] = std::log(pairs[j].first) +
                          Complex(0.0, 2.0 * std::numbers::pi * combo.ks[j]);
        }
        int emitted = 0;
        for (double delta : {2.5e-3, 4e-3, 6e-3, 1e-2}) {
            std::vector<Complex> nodes(m);
            for (std::size_t j = 0; j < m; ++j) {
                nodes[j] = mobius_map(z_lift, lifts[j]) * (1.0 + delta);
            }
            if (!detail::nodes_admissible(nodes, cfg.node_floor)) continue;
            std::vector<Complex> cpts(m + 1);
            cpts[0] = Complex(0.0, 0.0);
            std::copy(nodes.begin(), nodes.end(), cpts.begin() + 1);
            std::vector<Complex> cvals(m + 1);
            cvals[0] = std::log(z[0]);
            std::copy(psi_vals.begin(), psi_vals.end(), cvals.begin() + 1);

            const auto fit = min_sup_re_fit(InterpolationFamily(cpts, cvals, degree), samples, 35);
            if (!(fit.sup_samples < -1e-8)) continue;
            SeedCandidate cand;
            cand.disc.representation = AnalyticDisc::Representation::exp_lift;
            cand.disc.dimension = 1;
            cand.disc.degree_budget = poly_degree(fit.coeffs);
            cand.disc.components = {fit.coeffs};
            cand.nodes = detail::index_nodes(nodes);
            cand.branches = combo.ks;
            out.push_back(std::move(cand));
            if (++emitted >= 1) break;
        }
    }
    return out;
}

inline bool is_disc_product(const Domain& d) {
    if (d.kind == Domain::Kind::polydisc || d.kind == Domain::Kind::unit_disc) return true;
    if (d.kind != Domain::Kind::product) return false;
    for (const Domain& f : d.factors) {
        if (!is_disc_product(f)) return false;
    }
    return true;
}

inline std::vector<SeedCandidate> build_seed_candidates(const Domain& domain, const PoleSpec& spec,
                                                        std::span<const Complex> z,
                                                        const OptimizerConfig& cfg) {
    try {
        if (domain.kind == Domain::Kind::unit_disc) {
            return disc_seed_candidates(spec, z, cfg);
        }
        if (domain.kind == Domain::Kind::punctured_disc) {
            return punctured_seed_candidates(spec, z, cfg);
        }
        if (is_disc_product(domain)) {
            return polydisc_seed_candidates(spec, z, cfg);
        }
    } catch (const std::domain_error&) {
        // seed geometry violated a build precondition (clustered nodes etc.);
        // the estimator falls back to warm starts and random restarts
    }
    return {};
}

}  // namespace lempert
