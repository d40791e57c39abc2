#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lempert/complex_core.hpp"
#include "lempert/domains.hpp"
#include "lempert/poly.hpp"

namespace lempert {

constexpr double kNodeSeparationFloor = 1e-3;

/// A competitor disc phi in O(D, C^n). Polynomial discs store one coefficient
/// list per component; an exp_lift disc is the one-dimensional map
/// exp(psi(lambda)) for an inner polynomial psi with values in the left half
/// plane, used for punctured-disc targets where nonvanishing is then automatic.
struct AnalyticDisc {
    enum class Representation { polynomial, exp_lift };

    Representation representation = Representation::polynomial;
    int dimension = 1;
    std::vector<Poly> components;  // exp_lift: single inner polynomial psi
    int degree_budget = 0;

    const Poly& inner() const {
        if (representation != Representation::exp_lift) {
            throw std::logic_error("AnalyticDisc::inner: not an exp_lift disc");
        }
        return components[0];
    }
};

inline std::vector<Complex> eval_disc(const AnalyticDisc& disc, Complex lambda) {
    if (std::abs(lambda) > 1.0) {
        throw std::domain_error("eval_disc: |lambda| must be <= 1");
    }
    if (disc.representation == AnalyticDisc::Representation::exp_lift) {
        return {std::exp(poly_eval(disc.components[0], lambda))};
    }
    std::vector<Complex> out;
    out.reserve(disc.components.size());
    for (const Poly& p : disc.components) out.push_back(poly_eval(p, lambda));
    return out;
}

namespace detail {

inline void check_build_nodes(std::span<const Complex> nodes) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (std::abs(nodes[j]) < kNodeSeparationFloor) {
            throw std::domain_error("build_interpolating_disc: node too close to 0");
        }
        require_in_disc(nodes[j], "build_interpolating_disc");
        for (std::size_t k = 0; k < j; ++k) {
            if (std::abs(nodes[j] - nodes[k]) < kNodeSeparationFloor) {
                throw std::domain_error(
                    "build_interpolating_disc: node separation below the 1e-3 floor");
            }
        }
    }
}

}  // namespace detail

/// Interpolation-constrained polynomial disc
///   phi_c(lambda) = L_c(lambda) + lambda * prod_j (lambda - node_j) * Q_c(lambda)
/// where L_c is the Lagrange interpolant through (0, z_c) and (node_j,
/// target_j[c]). The constraints phi(0) = z, phi(node_j) = target_j hold for
/// every choice of the free polynomials Q_c, so optimizers may treat the Q
/// coefficients as unconstrained.
inline AnalyticDisc build_interpolating_disc(std::span<const Complex> z,
                                             std::span<const Complex> nodes,
                                             std::span<const std::vector<Complex>> targets,
                                             std::span<const Poly> free_coeffs) {
    if (nodes.size() != targets.size()) {
        throw std::domain_error("build_interpolating_disc: one target per node required");
    }
    detail::check_build_nodes(nodes);
    const std::size_t dim = z.size();
    if (dim == 0) throw std::domain_error("build_interpolating_disc: empty base point");
    for (const auto& t : targets) {
        if (t.size() != dim) {
            throw std::domain_error("build_interpolating_disc: target dimension mismatch");
        }
    }
    if (!free_coeffs.empty() && free_coeffs.size() != dim) {
        throw std::domain_error("build_interpolating_disc: one free polynomial per component");
    }

    std::vector<Complex> xs(nodes.size() + 1);
    xs[0] = Complex(0.0, 0.0);
    std::copy(nodes.begin(), nodes.end(), xs.begin() + 1);
    const Poly vanishing = poly_from_roots(xs);  // lambda * prod (lambda - node_j)

    AnalyticDisc disc;
    disc.representation = AnalyticDisc::Representation::polynomial;
    disc.dimension = static_cast<int>(dim);
    disc.components.reserve(dim);
    int budget = 0;
    for (std::size_t c = 0; c < dim; ++c) {
        std::vector<Complex> ys(nodes.size() + 1);
        ys[0] = z[c];
        for (std::size_t j = 0; j < nodes.size(); ++j) ys[j + 1] = targets[j][c];
        Poly comp = lagrange_polynomial(xs, ys);
        if (!free_coeffs.empty() && !free_coeffs[c].empty()) {
            comp = poly_add(comp, poly_mul(vanishing, free_coeffs[c]));
        }
        budget = std::max(budget, poly_degree(comp));
        disc.components.push_back(std::move(comp));
    }
    disc.degree_budget = budget;
    return disc;
}

/// exp_lift analogue: inner polynomial psi with psi(0) = psi0 and
/// psi(node_j) = psi_target_j, plus the same vanishing-multiplier freedom.
inline AnalyticDisc build_exp_lift_disc(Complex psi0, std::span<const Complex> nodes,
                                        std::span<const Complex> psi_targets,
                                        const Poly& free_coeffs) {
    if (nodes.size() != psi_targets.size()) {
        throw std::domain_error("build_exp_lift_disc: one target per node required");
    }
    detail::check_build_nodes(nodes);
    std::vector<Complex> xs(nodes.size() + 1);
    xs[0] = Complex(0.0, 0.0);
    std::copy(nodes.begin(), nodes.end(), xs.begin() + 1);
    std::vector<Complex> ys(psi_targets.size() + 1);
    ys[0] = psi0;
    std::copy(psi_targets.begin(), psi_targets.end(), ys.begin() + 1);

    Poly inner = lagrange_polynomial(xs, ys);
    if (!free_coeffs.empty()) {
        inner = poly_add(inner, poly_mul(poly_from_roots(xs), free_coeffs));
    }
    AnalyticDisc disc;
    disc.representation = AnalyticDisc::Representation::exp_lift;
    disc.dimension = 1;
    disc.components = {std::move(inner)};
    disc.degree_budget = poly_degree(disc.components[0]);
    return disc;
}

/// Certifies phi(closed disc) subset of D with a positive sup-norm margin.
/// Sound, not complete: a negative answer may be conservative.
inline ContainmentCertificate certify_disc_in_domain(const Domain& domain,
                                                     const AnalyticDisc& disc,
                                                     const CertifyOptions& opt = {}) {
    ContainmentCertificate cert;
    if (disc.dimension != domain.dimension()) {
        throw std::domain_error("certify_disc_in_domain: dimension mismatch");
    }

    struct FactorBound {
        double margin;   // certified margin (sound)
        double sampled;  // margin using the raw sampled maxima (optimistic)
    };

    struct Walker {
        const CertifyOptions& opt;
        int oversample;

        FactorBound walk(const Domain& d, std::span<const Poly> comps,
                         ContainmentCertificate::Method& method) const {
            switch (d.kind) {
                case Domain::Kind::unit_disc: {
                    const auto b = detail::circle_sup_abs(comps[0], opt.boundary_samples, oversample);
                    method = b.method;
                    return {1.0 - b.value, 1.0 - b.sampled};
                }
                case Domain::Kind::polydisc: {
                    FactorBound m{std::numeric_limits<double>::infinity(),
                                  std::numeric_limits<double>::infinity()};
                    for (const Poly& p : comps) {
                        const auto b = detail::circle_sup_abs(p, opt.boundary_samples, oversample);
                        method = b.method;
                        m.margin = std::min(m.margin, 1.0 - b.value);
                        m.sampled = std::min(m.sampled, 1.0 - b.sampled);
                    }
                    return m;
                }
                case Domain::Kind::euclidean_ball: {
                    method = ContainmentCertificate::Method::boundary_sampling_plus_modulus;
                    const auto b = detail::circle_sup_l2(comps, opt.boundary_samples, oversample);
                    return {1.0 - b.value, 1.0 - b.sampled};
                }
                case Domain::Kind::punctured_disc: {
                    // Outer bound as for the disc; nonvanishing by locating all
                    // roots and requiring them strictly outside the closed disc.
                    const auto b = detail::circle_sup_abs(comps[0], opt.boundary_samples, oversample);
                    method = b.method;
                    FactorBound out{1.0 - b.value, 1.0 - b.sampled};
                    if (out.sampled <= 0.0) return out;
                    const int deg = poly_degree(comps[0]);
                    if (deg < 0) return {-1.0, -1.0};  // identically zero
                    if (deg == 0) {
                        const double inner = std::abs(comps[0][0]);
                        return {std::min(out.margin, inner), std::min(out.sampled, inner)};
                    }
                    const auto roots = poly_roots(comps[0]);
                    double inner = std::abs(comps[0][static_cast<std::size_t>(deg)]);
                    for (Complex r : roots) {
                        if (std::abs(r) <= 1.0 + 1e-8) return {-1.0, -1.0};
                        inner *= std::abs(r) - 1.0;
                    }
                    return {std::min(out.margin, inner), std::min(out.sampled, inner)};
                }
                case Domain::Kind::product: {
                    FactorBound m{std::numeric_limits<double>::infinity(),
                                  std::numeric_limits<double>::infinity()};
                    std::size_t off = 0;
                    for (const Domain& f : d.factors) {
                        const auto fd = static_cast<std::size_t>(f.dimension());
                        const auto fb = walk(f, comps.subspan(off, fd), method);
                        m.margin = std::min(m.margin, fb.margin);
                        m.sampled = std::min(m.sampled, fb.sampled);
                        off += fd;
                    }
                    return m;
                }
            }
            return {-1.0, -1.0};
        }
    };

    // Denser sampling tightens the Ehlich-Zeller inflation, so near-extremal
    // discs escalate through finer grades. The raw sampled maximum is a lower
    // bound for the true sup, so once it already violates the margin no
    // amount of extra sampling can rescue the candidate.
    const bool lift = disc.representation == AnalyticDisc::Representation::exp_lift;
    if (lift && domain.kind != Domain::Kind::punctured_disc) {
        return cert;  // lift representation only certifies punctured-disc targets
    }
    for (int oversample : {opt.oversample, 64, 320, 1600}) {
        FactorBound fb{-1.0, -1.0};
        auto method = ContainmentCertificate::Method::boundary_sampling_plus_modulus;
        if (lift) {
            // |exp(psi)| <= e^{upper} < 1 is the whole containment story:
            // the lift never vanishes, so only the outer bound is checked and
            // the puncture needs no margin of its own.
            const auto range = detail::circle_re_range(disc.inner(), opt.boundary_samples, oversample);
            fb.margin = range.upper < 0.0 ? 1.0 - std::exp(range.upper) : -range.upper;
            fb.sampled = -range.sampled_upper;
            method = ContainmentCertificate::Method::exponential_lift;
        } else {
            Walker w{opt, oversample};
            fb = w.walk(domain, disc.components, method);
        }
        if (fb.margin >= opt.min_margin) {
            cert.certified = true;
            cert.margin = fb.margin;
            cert.method = method;
            return cert;
        }
        cert.margin = std::min(fb.margin, 0.0);
        cert.method = method;
        if (fb.sampled < opt.min_margin) break;  // violated on the samples themselves
    }
    return cert;
}

/// A disc together with the node preimages of the poles it interpolates.
struct Competitor {
    struct Node {
        UnitDiscPoint lambda;  // nonzero node preimage
        int pole_index;        // index into the pole spec this competitor serves
    };

    AnalyticDisc disc;
    std::vector<Complex> base_point;  // value at 0
    std::vector<Node> nodes;
    ContainmentCertificate certificate;
};

/// Largest interpolation residual: max over the base point and all nodes of
/// the sup-norm deviation between the disc value and the required value.
inline double interpolation_residual(const Competitor& c,
                                     std::span<const std::vector<Complex>> pole_points) {
    double worst = 0.0;
    const auto at0 = eval_disc(c.disc, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < c.base_point.size(); ++i) {
        worst = std::max(worst, std::abs(at0[i] - c.base_point[i]));
    }
    for (const auto& node : c.nodes) {
        const auto v = eval_disc(c.disc, node.lambda.value);
        const auto& target = pole_points[static_cast<std::size_t>(node.pole_index)];
        for (std::size_t i = 0; i < v.size(); ++i) {
            worst = std::max(worst, std::abs(v[i] - target[i]));
        }
    }
    return worst;
}

/// Precomposition with lambda -> s*lambda. Node preimages move out to
/// lambda_j / s, so the weighted node product grows by prod s^{-p_j}; the
/// image only shrinks, hence certificates stay valid.
inline Competitor shrink_competitor(const Competitor& c, double s) {
    double max_mod = 0.0;
    for (const auto& node : c.nodes) max_mod = std::max(max_mod, std::abs(node.lambda.value));
    if (!(s > max_mod && s <= 1.0)) {
        throw std::domain_error("shrink_competitor: s must lie in (max|lambda_j|, 1]");
    }
    Competitor out = c;
    for (auto& comp : out.disc.components) comp = poly_scale_arg(comp, Complex(s, 0.0));
    for (auto& node : out.nodes) node.lambda = UnitDiscPoint(node.lambda.value / s);
    return out;
}

/// Keep only the nodes whose pole indices appear in `subset`; indices are
/// remapped to the subset's ordering. Dropping factors of modulus < 1 can
/// only increase the node product, which is the restriction inequality the
/// truncation argument relies on.
inline Competitor restrict_competitor(const Competitor& c, std::span<const int> subset) {
    if (subset.empty()) {
        throw std::domain_error("restrict_competitor: subset must be non-empty");
    }
    Competitor out = c;
    out.nodes.clear();
    for (std::size_t b = 0; b < subset.size(); ++b) {
        bool found = false;
        for (const auto& node : c.nodes) {
            if (node.pole_index == subset[b]) {
                out.nodes.push_back({node.lambda, static_cast<int>(b)});
                found = true;
                break;
            }
        }
        if (!found) {
            throw std::domain_error("restrict_competitor: subset index not present in competitor");
        }
    }
    return out;
}

}  // namespace lempert
