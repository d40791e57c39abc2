#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lempert/poly.hpp"

namespace lempert {

/// Model target domains in C^n. Products may nest arbitrarily; dimension is
/// derived from the kind.
struct Domain {
    enum class Kind { unit_disc, polydisc, punctured_disc, euclidean_ball, product };

    Kind kind = Kind::unit_disc;
    int n = 1;  // polydisc / ball dimension; 1 otherwise
    std::vector<Domain> factors;

    static Domain unit_disc() { return Domain{Kind::unit_disc, 1, {}}; }

    static Domain polydisc(int n) {
        if (n < 1) throw std::domain_error("Domain::polydisc: dimension must be >= 1");
        return Domain{Kind::polydisc, n, {}};
    }

    static Domain punctured_disc() { return Domain{Kind::punctured_disc, 1, {}}; }

    static Domain euclidean_ball(int n) {
        if (n < 1) throw std::domain_error("Domain::euclidean_ball: dimension must be >= 1");
        return Domain{Kind::euclidean_ball, n, {}};
    }

    static Domain product(std::vector<Domain> fs) {
        if (fs.empty()) throw std::domain_error("Domain::product: needs at least one factor");
        return Domain{Kind::product, 0, std::move(fs)};
    }

    int dimension() const {
        switch (kind) {
            case Kind::unit_disc:
            case Kind::punctured_disc:
                return 1;
            case Kind::polydisc:
            case Kind::euclidean_ball:
                return n;
            case Kind::product: {
                int d = 0;
                for (const Domain& f : factors) d += f.dimension();
                return d;
            }
        }
        return 0;
    }

    std::string kind_name() const {
        switch (kind) {
            case Kind::unit_disc: return "unit_disc";
            case Kind::polydisc: return "polydisc";
            case Kind::punctured_disc: return "punctured_disc";
            case Kind::euclidean_ball: return "euclidean_ball";
            case Kind::product: return "product";
        }
        return "?";
    }
};

namespace detail {

inline void require_dimension(const Domain& d, std::size_t have, const char* what) {
    if (static_cast<int>(have) != d.dimension()) {
        throw std::domain_error(std::string(what) + ": point dimension does not match domain");
    }
}

}  // namespace detail

/// Exact membership of the open domain (strict inequalities).
inline bool contains(const Domain& domain, std::span<const Complex> point) {
    detail::require_dimension(domain, point.size(), "contains");
    switch (domain.kind) {
        case Domain::Kind::unit_disc:
            return std::abs(point[0]) < 1.0;
        case Domain::Kind::punctured_disc:
            return std::abs(point[0]) < 1.0 && point[0] != Complex(0.0, 0.0);
        case Domain::Kind::polydisc:
            for (const Complex& z : point) {
                if (!(std::abs(z) < 1.0)) return false;
            }
            return true;
        case Domain::Kind::euclidean_ball: {
            double s = 0.0;
            for (const Complex& z : point) s += std::norm(z);
            return s < 1.0;
        }
        case Domain::Kind::product: {
            std::size_t off = 0;
            for (const Domain& f : domain.factors) {
                const auto d = static_cast<std::size_t>(f.dimension());
                if (!contains(f, point.subspan(off, d))) return false;
                off += d;
            }
            return true;
        }
    }
    return false;
}

/// Sup-norm distance from an interior point to the domain complement. The
/// ball factor uses the Euclidean norm for its own slice.
inline double boundary_distance(const Domain& domain, std::span<const Complex> point) {
    detail::require_dimension(domain, point.size(), "boundary_distance");
    if (!contains(domain, point)) {
        throw std::domain_error("boundary_distance: point must lie inside the domain");
    }
    switch (domain.kind) {
        case Domain::Kind::unit_disc:
            return 1.0 - std::abs(point[0]);
        case Domain::Kind::punctured_disc:
            return std::min(1.0 - std::abs(point[0]), std::abs(point[0]));
        case Domain::Kind::polydisc: {
            double m = 1.0;
            for (const Complex& z : point) m = std::min(m, 1.0 - std::abs(z));
            return m;
        }
        case Domain::Kind::euclidean_ball: {
            double s = 0.0;
            for (const Complex& z : point) s += std::norm(z);
            return 1.0 - std::sqrt(s);
        }
        case Domain::Kind::product: {
            double m = std::numeric_limits<double>::infinity();
            std::size_t off = 0;
            for (const Domain& f : domain.factors) {
                const auto d = static_cast<std::size_t>(f.dimension());
                m = std::min(m, boundary_distance(f, point.subspan(off, d)));
                off += d;
            }
            return m;
        }
    }
    return 0.0;
}

/// Verified statement that an analytic disc maps the closed unit disc into
/// the open domain with at least `margin` of room in the sup norm.
/// Certification is sound but conservative: `certified == false` carries no
/// information.
struct ContainmentCertificate {
    enum class Method { coefficient_bound, boundary_sampling_plus_modulus, exponential_lift };

    bool certified = false;
    double margin = 0.0;
    Method method = Method::coefficient_bound;
};

struct CertifyOptions {
    int boundary_samples = 1024;  // floor; raised to cover the polynomial degree
    double min_margin = 1e-9;
    int oversample = 16;          // samples per unit of degree
};

namespace detail {

// N equispaced circle samples, N > 2*deg, chosen >= the requested floor.
inline int certification_samples(int requested, int degree, int oversample = 16) {
    int n = std::max(requested, 64);
    n = std::max(n, oversample * std::max(degree, 1));
    return n;
}

// Rigorous bound for sup_{|x|<=1} |p(x)| from N equispaced boundary samples.
// |p(e^{i t})|^2 is a real trigonometric polynomial of degree deg(p), so for
// N > 2 deg the sampled maximum inflated by 1/cos(deg*pi/N) dominates the
// true maximum (Ehlich-Zeller). The classical coefficient-sum and
// sampled-plus-derivative bounds are kept as alternatives; the smallest
// sound bound wins.
struct CircleBound {
    double value = 0.0;      // sound upper bound for sup |p|
    double sampled = 0.0;    // raw sampled maximum (lower bound for sup |p|)
    ContainmentCertificate::Method method = ContainmentCertificate::Method::coefficient_bound;
};

inline CircleBound circle_sup_abs(const Poly& p, int requested_samples, int oversample = 16) {
    const int deg = std::max(poly_degree(p), 0);
    const double by_coeff = coeff_abs_sum(p);

    const int n = certification_samples(requested_samples, deg, oversample);
    double max_sq = 0.0;
    const double step = 2.0 * std::numbers::pi / n;
    for (int i = 0; i < n; ++i) {
        const Complex x = std::polar(1.0, step * i);
        max_sq = std::max(max_sq, std::norm(poly_eval(p, x)));
    }
    const double sec = 1.0 / std::cos(deg * std::numbers::pi / n);
    const double by_sec = std::sqrt(max_sq * sec);
    const double by_deriv = std::sqrt(max_sq) + (std::numbers::pi / n) * coeff_derivative_bound(p);

    CircleBound out;
    out.value = std::min({by_coeff, by_sec, by_deriv});
    out.sampled = std::sqrt(max_sq);
    out.method = (by_coeff <= std::min(by_sec, by_deriv))
                     ? ContainmentCertificate::Method::coefficient_bound
                     : ContainmentCertificate::Method::boundary_sampling_plus_modulus;
    return out;
}

// Same idea for sup of the Euclidean norm of a polynomial map: the squared
// norm sum_k |p_k(e^{it})|^2 is again a trigonometric polynomial of degree
// max_k deg(p_k).
struct L2Bound {
    double value = 0.0;
    double sampled = 0.0;
};

inline L2Bound circle_sup_l2(std::span<const Poly> comps, int requested_samples, int oversample = 16) {
    int deg = 0;
    double coeff_sq = 0.0;
    for (const Poly& p : comps) {
        deg = std::max(deg, std::max(poly_degree(p), 0));
        const double s = coeff_abs_sum(p);
        coeff_sq += s * s;
    }
    const int n = certification_samples(requested_samples, deg, oversample);
    double max_sq = 0.0;
    const double step = 2.0 * std::numbers::pi / n;
    for (int i = 0; i < n; ++i) {
        const Complex x = std::polar(1.0, step * i);
        double s = 0.0;
        for (const Poly& p : comps) s += std::norm(poly_eval(p, x));
        max_sq = std::max(max_sq, s);
    }
    const double sec = 1.0 / std::cos(deg * std::numbers::pi / n);
    return L2Bound{std::min(std::sqrt(coeff_sq), std::sqrt(max_sq * sec)), std::sqrt(max_sq)};
}

// Bounds for the range of Re p over the closed disc. Re p is harmonic, so
// both extrema sit on the circle. Along the circle, t(s) := Re p(e^{is})
// satisfies t' = Re(i x p'(x)) and t'' = Re(-x^2 p''(x) - x p'(x)) at
// x = e^{is}, so the sampled extrema extend to the continuum with either the
// first-order gap (pi/N) sup|p'| or the chord gap (pi^2/2N^2) sup|x^2 p'' +
// x p'|; the derivative sups are themselves certified by sampling with the
// Ehlich-Zeller inflation. The chord gap decays quadratically in N, which is
// what makes near-extremal exponential lifts certifiable at modest N.
struct ReRange {
    double upper = 0.0;
    double lower = 0.0;
    double sampled_upper = 0.0;  // raw sampled max of Re (lower bound for the true max)
};

inline ReRange circle_re_range(const Poly& p, int requested_samples, int oversample = 16) {
    const int deg = std::max(poly_degree(p), 0);
    const int n = certification_samples(requested_samples, deg, oversample);

    Poly dp(std::max<std::size_t>(p.size(), 2) - 1, Complex(0.0, 0.0));
    for (std::size_t k = 1; k < p.size(); ++k) dp[k - 1] = p[k] * static_cast<double>(k);
    Poly ddp(std::max<std::size_t>(dp.size(), 2) - 1, Complex(0.0, 0.0));
    for (std::size_t k = 1; k < dp.size(); ++k) ddp[k - 1] = dp[k] * static_cast<double>(k);

    double max_re = -std::numeric_limits<double>::infinity();
    double min_re = std::numeric_limits<double>::infinity();
    double d1_sq = 0.0;  // max |x p'|^2 over samples
    double d2_sq = 0.0;  // max |x^2 p'' + x p'|^2 over samples
    const double step = 2.0 * std::numbers::pi / n;
    for (int i = 0; i < n; ++i) {
        const Complex x = std::polar(1.0, step * i);
        const Complex v = poly_eval(p, x);
        const Complex d1 = x * poly_eval(dp, x);
        const Complex d2 = x * x * poly_eval(ddp, x) + d1;
        max_re = std::max(max_re, v.real());
        min_re = std::min(min_re, v.real());
        d1_sq = std::max(d1_sq, std::norm(d1));
        d2_sq = std::max(d2_sq, std::norm(d2));
    }
    const double sec = 1.0 / std::cos(deg * std::numbers::pi / n);
    const double sup_d1 = std::min(coeff_derivative_bound(p), std::sqrt(d1_sq * sec));
    const double sup_d2 = std::sqrt(d2_sq * sec);
    const double gap = std::min((std::numbers::pi / n) * sup_d1,
                                (std::numbers::pi * std::numbers::pi / (2.0 * double(n) * n)) * sup_d2);
    return ReRange{max_re + gap, min_re - gap, max_re};
}

}  // namespace detail

}  // namespace lempert
