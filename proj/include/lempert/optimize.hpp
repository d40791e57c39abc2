#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace lempert {

/// Estimator knobs. Restart and iteration defaults follow the feasible-point
/// simplex-search design: the objective is evaluated only on candidates that
/// pass shrink + certification, node moduli are kept inside
/// (node_floor, 1 - node_floor) by a smooth squashing reparameterization, and
/// exp_lift branch integers are enumerated outside the continuous search.
struct OptimizerConfig {
    std::uint64_t seed = 42;
    int restarts = 32;
    int max_iterations = 2000;   // per restart
    int free_degrees = 4;        // free coefficients per component beyond interpolation
    double shrink = 1.0 - 1e-6;  // competitors are certified after lambda -> s*lambda
    int branch_range = 5;        // exp_lift branch integers |k| <= branch_range
    int search_samples = 512;    // certification grade inside the search
    int final_samples = 4096;    // certification grade for the reported competitor
    double min_margin = 1e-9;
    double node_floor = 1e-6;
    double simplex_step = 0.15;
    double simplex_tol = 1e-9;
    double scan_stop_tol = 1e-4;  // finite_truncation_scan stopping rule
    bool polish = true;           // run simplex restarts after seeding
    bool measure_runtime = false; // leave runtime_ms at 0 for byte-stable records
};

/// Smooth squashing map R -> (floor, 1-floor) and its inverse, used to keep
/// node moduli strictly inside the unit interval during unconstrained search.
inline double squash_modulus(double u, double floor_) {
    return floor_ + (1.0 - 2.0 * floor_) * 0.5 * (1.0 + std::tanh(u));
}

inline double unsquash_modulus(double m, double floor_) {
    double y = (m - floor_) / (1.0 - 2.0 * floor_);
    y = std::clamp(y, 1e-12, 1.0 - 1e-12);
    return std::atanh(2.0 * y - 1.0);
}

/// Deterministic uniform draw in [0,1); ldexp of the top 53 bits so the
/// stream does not depend on library distribution internals.
inline double uniform01(std::mt19937_64& rng) {
    return std::ldexp(static_cast<double>(rng() >> 11), -53);
}

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
};

/// Plain downhill simplex (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2). Deterministic; stops on simplex diameter or value spread.
inline NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                                    std::span<const double> x0, double step, int max_iterations,
                                    double tol) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> pts(n + 1, std::vector<double>(x0.begin(), x0.end()));
    std::vector<double> vals(n + 1);
    for (std::size_t i = 1; i <= n; ++i) pts[i][i - 1] += step;
    for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);

    auto order = [&]() {
        for (std::size_t i = 1; i <= n; ++i) {
            auto p = pts[i];
            auto v = vals[i];
            std::size_t k = i;
            while (k > 0 && vals[k - 1] > v) {
                pts[k] = std::move(pts[k - 1]);
                vals[k] = vals[k - 1];
                --k;
            }
            pts[k] = std::move(p);
            vals[k] = v;
        }
    };
    order();

    int it = 0;
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    for (; it < max_iterations; ++it) {
        if (vals[n] - vals[0] < tol) break;
        for (std::size_t d = 0; d < n; ++d) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += pts[i][d];
            centroid[d] = s / static_cast<double>(n);
        }
        for (std::size_t d = 0; d < n; ++d) xr[d] = centroid[d] + (centroid[d] - pts[n][d]);
        const double fr = f(xr);
        if (fr < vals[0]) {
            for (std::size_t d = 0; d < n; ++d) xe[d] = centroid[d] + 2.0 * (centroid[d] - pts[n][d]);
            const double fe = f(xe);
            if (fe < fr) {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
        } else if (fr < vals[n - 1]) {
            pts[n] = xr;
            vals[n] = fr;
        } else {
            const bool outside = fr < vals[n];
            for (std::size_t d = 0; d < n; ++d) {
                xc[d] = outside ? centroid[d] + 0.5 * (xr[d] - centroid[d])
                                : centroid[d] - 0.5 * (centroid[d] - pts[n][d]);
            }
            const double fc = f(xc);
            if (fc < std::min(fr, vals[n])) {
                pts[n] = xc;
                vals[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t d = 0; d < n; ++d) {
                        pts[i][d] = pts[0][d] + 0.5 * (pts[i][d] - pts[0][d]);
                    }
                    vals[i] = f(pts[i]);
                }
            }
        }
        order();
    }
    return {pts[0], vals[0], it};
}

}  // namespace lempert
