#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "lempert/poly.hpp"

namespace lempert {

/// Affine family of polynomials P = L + W*Q where L interpolates prescribed
/// values at the constraint points, W vanishes exactly there, and Q ranges
/// over polynomials with `nfree` coefficients. Every member satisfies the
/// interpolation constraints; fitting routines below pick Q.
struct InterpolationFamily {
    std::vector<Complex> cpts;
    std::vector<Complex> cvals;
    Poly lagrange;
    Poly vanishing;
    int nfree = 0;

    InterpolationFamily(std::vector<Complex> constraint_points,
                        std::vector<Complex> constraint_values, int degree)
        : cpts(std::move(constraint_points)), cvals(std::move(constraint_values)) {
        if (cpts.empty() || cpts.size() != cvals.size()) {
            throw std::domain_error("InterpolationFamily: constraint size mismatch");
        }
        lagrange = lagrange_polynomial(cpts, cvals);
        vanishing = poly_from_roots(cpts);
        nfree = degree + 1 - static_cast<int>(cpts.size());
        if (nfree < 0) nfree = 0;
    }

    Poly assemble(const Poly& q) const {
        if (q.empty()) return lagrange;
        return poly_add(lagrange, poly_mul(vanishing, q));
    }
};

namespace detail {

struct CircleDesign {
    Eigen::VectorXcd base;    // L on the samples
    Eigen::MatrixXcd basis;   // columns: W * x^k on the samples
    std::vector<Complex> samples;
};

inline CircleDesign circle_design(const InterpolationFamily& fam, int nsamples) {
    CircleDesign d;
    d.samples.resize(static_cast<std::size_t>(nsamples));
    d.base.resize(nsamples);
    d.basis.resize(nsamples, fam.nfree);
    const double step = 2.0 * std::numbers::pi / nsamples;
    for (int i = 0; i < nsamples; ++i) {
        const Complex x = std::polar(1.0, step * i);
        d.samples[static_cast<std::size_t>(i)] = x;
        d.base(i) = poly_eval(fam.lagrange, x);
        Complex wk = poly_eval(fam.vanishing, x);
        for (int k = 0; k < fam.nfree; ++k) {
            d.basis(i, k) = wk;
            wk *= x;
        }
    }
    return d;
}

inline Poly q_from_vector(const Eigen::VectorXcd& q) {
    Poly out(static_cast<std::size_t>(q.size()));
    for (Eigen::Index k = 0; k < q.size(); ++k) out[static_cast<std::size_t>(k)] = q(k);
    return out;
}

}  // namespace detail

struct MinSupResult {
    Poly coeffs;          // assembled polynomial
    double sup_samples;   // max |P| (or max Re P) over the fit samples
};

namespace detail {

/// Sharpens a Lawson iterate toward the true minimax of |P| by damped Newton
/// on the log-sum-exp smoothing (Gauss-Newton curvature). Lawson stalls with
/// around a percent of slack, which is exactly what decides feasibility for
/// near-extremal competitors.
inline Eigen::VectorXcd abs_minimax_polish(const CircleDesign& d, Eigen::VectorXcd q,
                                           int newton_iterations = 15) {
    const int nf = static_cast<int>(q.size());
    const int n = static_cast<int>(d.base.size());
    Eigen::VectorXd u(2 * nf);
    u << q.real(), q.imag();

    auto residual = [&](const Eigen::VectorXd& uu) {
        Eigen::VectorXcd qq(nf);
        for (int k = 0; k < nf; ++k) qq(k) = Complex(uu(k), uu(nf + k));
        return (d.base + d.basis * qq).eval();
    };
    auto smoothed = [&](const Eigen::VectorXd& uu, double beta) {
        const Eigen::VectorXd r = residual(uu).cwiseAbs();
        const double m = r.maxCoeff();
        return m + std::log(((r.array() - m) * beta).exp().sum()) / beta;
    };

    Eigen::MatrixXd G(n, 2 * nf);
    for (double beta : {256.0, 2048.0, 16384.0, 98304.0}) {
        double f_prev = std::numeric_limits<double>::infinity();
        for (int it = 0; it < newton_iterations; ++it) {
            const Eigen::VectorXcd P = residual(u);
            const Eigen::VectorXd r = P.cwiseAbs();
            const double m = r.maxCoeff();
            Eigen::VectorXd e = ((r.array() - m) * beta).exp();
            e /= e.sum();
            for (int k = 0; k < nf; ++k) {
                for (int i = 0; i < n; ++i) {
                    const Complex phase = r(i) > 1e-300 ? std::conj(P(i) / r(i)) : Complex(1, 0);
                    const Complex c = phase * d.basis(i, k);
                    G(i, k) = c.real();
                    G(i, nf + k) = -c.imag();
                }
            }
            const Eigen::VectorXd g = G.transpose() * e;
            Eigen::MatrixXd H = beta * (G.transpose() * e.asDiagonal() * G - g * g.transpose());
            H.diagonal().array() += beta * 1e-12 + 1e-14;
            Eigen::VectorXd step = H.ldlt().solve(g);
            if (!step.allFinite()) step = g;
            const double f0 = smoothed(u, beta);
            double t = 1.0;
            bool moved = false;
            while (t > 1e-14) {
                const Eigen::VectorXd u2 = u - t * step;
                if (smoothed(u2, beta) < f0 - 1e-15) {
                    u = u2;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if (!moved) break;
            const double f1 = smoothed(u, beta);
            if (f_prev - f1 < 1e-10 * std::max(1.0, std::abs(f1))) break;
            f_prev = f1;
        }
    }
    for (int k = 0; k < nf; ++k) q(k) = Complex(u(k), u(nf + k));
    return q;
}

}  // namespace detail

/// Near-minimax |P| over the family: Lawson's iteratively reweighted least
/// squares on equispaced circle samples, plus a Newton polish whenever the
/// Lawson value lands in the band where its slack could flip a feasibility
/// decision against the unit bound.
inline MinSupResult min_sup_fit(const InterpolationFamily& fam, int nsamples = 1024,
                                int iterations = 120) {
    if (fam.nfree == 0) {
        Poly p = fam.lagrange;
        double sup = 0.0;
        for (int i = 0; i < nsamples; ++i) {
            sup = std::max(sup, std::abs(poly_eval(p, std::polar(1.0, 2.0 * std::numbers::pi * i / nsamples))));
        }
        return {std::move(p), sup};
    }
    const auto d = detail::circle_design(fam, nsamples);
    Eigen::VectorXd w = Eigen::VectorXd::Constant(nsamples, 1.0 / nsamples);
    Eigen::VectorXcd q = Eigen::VectorXcd::Zero(fam.nfree);
    for (int it = 0; it < iterations; ++it) {
        const Eigen::VectorXd sw = w.array().sqrt();
        const Eigen::MatrixXcd A = sw.asDiagonal() * d.basis;
        const Eigen::VectorXcd b = -(sw.asDiagonal() * d.base);
        q = (A.adjoint() * A).ldlt().solve(A.adjoint() * b);
        const Eigen::VectorXd r = (d.base + d.basis * q).cwiseAbs();
        w = w.cwiseProduct(r);
        const double s = w.sum();
        if (!(s > 0.0)) break;
        w /= s;
    }
    double sup = (d.base + d.basis * q).cwiseAbs().maxCoeff();
    if (sup >= 1.0 - 1e-4 && sup <= 1.05) {
        const Eigen::VectorXcd polished = detail::abs_minimax_polish(d, q);
        const double sup2 = (d.base + d.basis * polished).cwiseAbs().maxCoeff();
        if (sup2 < sup) {
            q = polished;
            sup = sup2;
        }
    }
    return {fam.assemble(detail::q_from_vector(q)), sup};
}

/// Minimizes max Re P over the family: damped Newton on the log-sum-exp
/// smoothing with an increasing sharpness schedule. The raw problem is
/// ill-posed (directions that barely move Re on the samples can carry huge
/// oscillations between them), so a ridge on the sampled derivative energy
/// is added; its weight is auto-selected by checking each solution's true
/// maximum on a much finer grid. The reported value is that fine-grid
/// maximum, so callers see through the fit's own sampling.
inline MinSupResult min_sup_re_fit(const InterpolationFamily& fam, int nsamples = 1024,
                                   int newton_iterations = 40) {
    const int degree = fam.nfree + static_cast<int>(fam.cpts.size()) - 1;
    nsamples = std::max(nsamples, 8 * (degree + 1));
    const auto d = detail::circle_design(fam, nsamples);

    auto fine_max_re = [&](const Poly& p) {
        const int n = 16 * nsamples;
        double m = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            m = std::max(m, poly_eval(p, std::polar(1.0, 2.0 * std::numbers::pi * i / n)).real());
        }
        return m;
    };
    // certifiability score: fine-grid max plus the chord-gap headroom that a
    // boundary certificate at a reference density would add back
    auto cert_score = [&](const Poly& p, double fine_max) {
        Poly dp(std::max<std::size_t>(p.size(), 2) - 1, Complex(0.0, 0.0));
        for (std::size_t k = 1; k < p.size(); ++k) dp[k - 1] = p[k] * static_cast<double>(k);
        Poly ddp(std::max<std::size_t>(dp.size(), 2) - 1, Complex(0.0, 0.0));
        for (std::size_t k = 1; k < dp.size(); ++k) ddp[k - 1] = dp[k] * static_cast<double>(k);
        double d2 = 0.0;
        for (int i = 0; i < 4096; ++i) {
            const Complex x = std::polar(1.0, 2.0 * std::numbers::pi * i / 4096.0);
            d2 = std::max(d2, std::abs(x * x * poly_eval(ddp, x) + x * poly_eval(dp, x)));
        }
        const double ref_n = 320.0 * std::max(degree, 1);
        return fine_max + (std::numbers::pi * std::numbers::pi / (2.0 * ref_n * ref_n)) * d2;
    };

    if (fam.nfree == 0) {
        return {fam.lagrange, fine_max_re(fam.lagrange)};
    }

    // column scaling keeps the Newton system well conditioned
    Eigen::VectorXd scale(fam.nfree);
    for (int k = 0; k < fam.nfree; ++k) {
        scale(k) = 1.0 / std::max(d.basis.col(k).norm() / std::sqrt(double(nsamples)), 1e-12);
    }
    const int nf = fam.nfree;
    Eigen::MatrixXd M(nsamples, 2 * nf);
    for (int k = 0; k < nf; ++k) {
        M.col(k) = d.basis.col(k).real() * scale(k);
        M.col(nf + k) = -d.basis.col(k).imag() * scale(k);
    }
    const Eigen::VectorXd b = d.base.real();

    // sampled derivative design for the ridge term
    Poly wprime(fam.vanishing.size() - 1);
    for (std::size_t k = 1; k < fam.vanishing.size(); ++k) {
        wprime[k - 1] = fam.vanishing[k] * static_cast<double>(k);
    }
    Poly lprime(std::max<std::size_t>(fam.lagrange.size(), 2) - 1, Complex(0.0, 0.0));
    for (std::size_t k = 1; k < fam.lagrange.size(); ++k) {
        lprime[k - 1] = fam.lagrange[k] * static_cast<double>(k);
    }
    Eigen::MatrixXd Md(2 * nsamples, 2 * nf);
    Eigen::VectorXd bd(2 * nsamples);
    for (int i = 0; i < nsamples; ++i) {
        const Complex x = d.samples[static_cast<std::size_t>(i)];
        const Complex wp = poly_eval(wprime, x);
        const Complex w = poly_eval(fam.vanishing, x);
        const Complex lp = poly_eval(lprime, x);
        bd(i) = lp.real();
        bd(nsamples + i) = lp.imag();
        Complex xk(1.0, 0.0);   // x^{k-1} tracker starts at x^0 for k = 1 handling below
        for (int k = 0; k < nf; ++k) {
            // d/dx [w(x) x^k] = w'(x) x^k + k w(x) x^{k-1}
            const Complex col = wp * (k == 0 ? Complex(1.0, 0.0) : xk * x) +
                                static_cast<double>(k) * w * xk;
            Md(i, k) = (col * scale(k)).real();
            Md(nsamples + i, k) = (col * scale(k)).imag();
            Md(i, nf + k) = (col * Complex(0.0, 1.0) * scale(k)).real();
            Md(nsamples + i, nf + k) = (col * Complex(0.0, 1.0) * scale(k)).imag();
            if (k > 0) xk *= x;
        }
    }
    const double deriv_scale = std::max(bd.squaredNorm() / nsamples, 1.0);

    MinSupResult best;
    best.coeffs = fam.lagrange;
    best.sup_samples = fine_max_re(fam.lagrange);
    double best_score = cert_score(best.coeffs, best.sup_samples);

    for (double ridge_rel : {1e-4, 3e-6}) {
        const double rho = ridge_rel / deriv_scale;
        const Eigen::MatrixXd Hridge = (2.0 * rho / nsamples) * (Md.transpose() * Md);
        Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * nf);

        auto smoothed = [&](const Eigen::VectorXd& uu, double beta) {
            const Eigen::VectorXd r = b + M * uu;
            const double m = r.maxCoeff();
            const double lse = m + std::log(((r.array() - m) * beta).exp().sum()) / beta;
            return lse + (rho / nsamples) * (bd + Md * uu).squaredNorm();
        };

        for (double beta : {16.0, 128.0, 1024.0, 8192.0, 49152.0}) {
            double f_prev = std::numeric_limits<double>::infinity();
            for (int it = 0; it < newton_iterations; ++it) {
                const Eigen::VectorXd r = b + M * u;
                const double m = r.maxCoeff();
                Eigen::VectorXd e = ((r.array() - m) * beta).exp();
                e /= e.sum();
                const Eigen::VectorXd g =
                    M.transpose() * e + (2.0 * rho / nsamples) * (Md.transpose() * (bd + Md * u));
                Eigen::MatrixXd H =
                    beta * (M.transpose() * e.asDiagonal() * M - (M.transpose() * e) * (e.transpose() * M)) +
                    Hridge;
                H.diagonal().array() += beta * 1e-12 + 1e-14;
                Eigen::VectorXd step = H.ldlt().solve(g);
                if (!step.allFinite()) step = g;
                const double f0 = smoothed(u, beta);
                double t = 1.0;
                bool moved = false;
                while (t > 1e-14) {
                    const Eigen::VectorXd u2 = u - t * step;
                    if (smoothed(u2, beta) < f0 - 1e-15) {
                        u = u2;
                        moved = true;
                        break;
                    }
                    t *= 0.5;
                }
                if (!moved) break;
                const double f1 = smoothed(u, beta);
                if (f_prev - f1 < 1e-10 * std::max(1.0, std::abs(f1))) break;
                f_prev = f1;
            }
        }

        Eigen::VectorXcd q(nf);
        for (int k = 0; k < nf; ++k) q(k) = Complex(u(k), u(nf + k)) * scale(k);
        Poly candidate = fam.assemble(detail::q_from_vector(q));
        const double sup = fine_max_re(candidate);
        const double score = cert_score(candidate, sup);
        if (score < best_score) {
            best.coeffs = std::move(candidate);
            best.sup_samples = sup;
            best_score = score;
        }
    }
    return best;
}

/// Least-squares fit of the family to a target function on the circle;
/// used to shape a constrained component after a known analytic model.
inline Poly least_squares_fit(const InterpolationFamily& fam,
                              const std::function<Complex(Complex)>& target, int nsamples = 1024) {
    if (fam.nfree == 0) return fam.lagrange;
    const auto d = detail::circle_design(fam, nsamples);
    Eigen::VectorXcd rhs(nsamples);
    for (int i = 0; i < nsamples; ++i) {
        rhs(i) = target(d.samples[static_cast<std::size_t>(i)]) - d.base(i);
    }
    const Eigen::VectorXcd q =
        (d.basis.adjoint() * d.basis).ldlt().solve(d.basis.adjoint() * rhs);
    return fam.assemble(detail::q_from_vector(q));
}

}  // namespace lempert
