#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lempert/complex_core.hpp"

namespace lempert {

/// Cayley transform (lambda+1)/(lambda-1). It is an involution that swaps the
/// open unit disc and the left half plane, so it serves as both directions of
/// the change of model; exp o cayley: D -> D_* is the universal covering of
/// the punctured disc.
inline Complex cayley(Complex w) { return (w + 1.0) / (w - 1.0); }

/// In the unit disc the Lempert function with weighted poles equals the
/// multipole Green product; used as exact ground truth for the estimator.
inline double lempert_disc_oracle(const std::vector<std::pair<Complex, double>>& poles, Complex z) {
    return green_disc_multipole(poles, z);
}

/// Product-property value for bidisc pole sets of the form B x {b} evaluated
/// at (z, w): max of the disc Green product of B at z and the Mobius factor
/// of the common second coordinate at w.
inline double lempert_product_oracle(const std::vector<std::pair<Complex, double>>& B, Complex b,
                                     Complex z, Complex w) {
    if (B.empty()) {
        throw std::domain_error("lempert_product_oracle: pole list must be non-empty");
    }
    return std::max(green_disc_multipole(B, z), mobius_factor(b, w));
}

/// Lempert value on the punctured disc by brute force over covering lifts.
struct PuncturedOracleResult {
    double value = 1.0;
    bool converged = false;           // stable under K -> K+5
    std::vector<double> factors;      // per-pole minimal Mobius factor
    std::vector<int> branches;        // minimizing branch integer per pole
};

namespace detail {

inline Complex punctured_lift(Complex a, int k) {
    const Complex log_a = std::log(a);  // principal branch
    return cayley(log_a + Complex(0.0, 2.0 * std::numbers::pi * k));
}

inline std::pair<double, int> best_lift_factor(Complex a, Complex z_lift, int K) {
    double best = std::numeric_limits<double>::infinity();
    int best_k = 0;
    for (int k = -K; k <= K; ++k) {
        const double d = mobius_factor(punctured_lift(a, k), z_lift);
        if (d < best) {
            best = d;
            best_k = k;
        }
    }
    return {best, best_k};
}

}  // namespace detail

/// Fixes the principal lift of z under exp o cayley and minimizes the Mobius
/// factor over lifts of each pole independently; the weighted product of the
/// per-pole minima is the oracle value. Flagged unconverged if enlarging the
/// branch range from K to K+5 still changes any factor.
inline PuncturedOracleResult lempert_punctured_oracle(
    const std::vector<std::pair<Complex, double>>& poles, Complex z, int branch_bound) {
    if (branch_bound < 1) {
        throw std::domain_error("lempert_punctured_oracle: branch bound must be >= 1");
    }
    if (poles.empty()) {
        throw std::domain_error("lempert_punctured_oracle: pole set must be non-empty");
    }
    if (z == Complex(0.0, 0.0) || std::abs(z) >= 1.0) {
        throw std::domain_error("lempert_punctured_oracle: z must lie in the punctured disc");
    }
    const Complex z_lift = cayley(std::log(z));

    PuncturedOracleResult out;
    out.converged = true;
    out.value = 1.0;
    for (const auto& [a, w] : poles) {
        if (a == Complex(0.0, 0.0) || std::abs(a) >= 1.0) {
            throw std::domain_error("lempert_punctured_oracle: poles must lie in the punctured disc");
        }
        if (!(w > 0.0)) {
            throw std::domain_error("lempert_punctured_oracle: weights must be strictly positive");
        }
        const auto [factor, k] = detail::best_lift_factor(a, z_lift, branch_bound);
        const auto [check, k2] = detail::best_lift_factor(a, z_lift, branch_bound + 5);
        if (check < factor - 1e-15) out.converged = false;
        out.factors.push_back(factor);
        out.branches.push_back(k);
        out.value *= std::pow(factor, w);
    }
    return out;
}

}  // namespace lempert
