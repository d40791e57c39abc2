#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "lempert/complex_core.hpp"

namespace lempert {

/// Dense complex polynomial, coefficients in ascending powers.
using Poly = std::vector<Complex>;

inline Complex poly_eval(const Poly& p, Complex x) {
    Complex acc(0.0, 0.0);
    for (std::size_t i = p.size(); i-- > 0;) {
        acc = acc * x + p[i];
    }
    return acc;
}

/// Degree ignoring a (numerically) zero tail; -1 for the zero polynomial.
inline int poly_degree(const Poly& p, double eps = 0.0) {
    for (std::size_t i = p.size(); i-- > 0;) {
        if (std::abs(p[i]) > eps) return static_cast<int>(i);
    }
    return -1;
}

inline Poly poly_add(const Poly& a, const Poly& b) {
    Poly out(std::max(a.size(), b.size()), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == Complex(0.0, 0.0)) continue;
        for (std::size_t k = 0; k < b.size(); ++k) {
            out[i + k] += a[i] * b[k];
        }
    }
    return out;
}

/// prod_i (x - r_i)
inline Poly poly_from_roots(std::span<const Complex> roots) {
    Poly out{Complex(1.0, 0.0)};
    for (Complex r : roots) {
        out = poly_mul(out, Poly{-r, Complex(1.0, 0.0)});
    }
    return out;
}

/// Coefficients of p(s*x).
inline Poly poly_scale_arg(const Poly& p, Complex s) {
    Poly out(p);
    Complex pw(1.0, 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] *= pw;
        pw *= s;
    }
    return out;
}

/// sum_k k*|c_k|, an upper bound for sup_{|x|=1} |p'(x)|.
inline double coeff_derivative_bound(const Poly& p) {
    double s = 0.0;
    for (std::size_t k = 1; k < p.size(); ++k) {
        s += static_cast<double>(k) * std::abs(p[k]);
    }
    return s;
}

inline double coeff_abs_sum(const Poly& p) {
    double s = 0.0;
    for (const Complex& c : p) s += std::abs(c);
    return s;
}

/// Interpolating polynomial through (xs_i, ys_i), Newton form expanded to
/// monomial coefficients. Nodes must be pairwise distinct; intended for the
/// small node counts used by disc construction (conditioning degrades for
/// clustered nodes, which build_interpolating_disc guards against).
inline Poly lagrange_polynomial(std::span<const Complex> xs, std::span<const Complex> ys) {
    const std::size_t n = xs.size();
    if (n == 0 || ys.size() != n) {
        throw std::domain_error("lagrange_polynomial: need equally many nodes and values");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) {
            if (xs[i] == xs[k]) {
                throw std::domain_error("lagrange_polynomial: repeated node");
            }
        }
    }
    // divided differences
    std::vector<Complex> dd(ys.begin(), ys.end());
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = n - 1; i >= level; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    Poly out{dd[n - 1]};
    for (std::size_t i = n - 1; i-- > 0;) {
        out = poly_mul(out, Poly{-xs[i], Complex(1.0, 0.0)});
        out = poly_add(out, Poly{dd[i]});
    }
    out.resize(n, Complex(0.0, 0.0));
    return out;
}

/// All roots of p via the companion-matrix eigenvalues. The leading
/// coefficient is taken as the last one above a relative floor.
inline std::vector<Complex> poly_roots(const Poly& p) {
    double maxc = 0.0;
    for (const Complex& c : p) maxc = std::max(maxc, std::abs(c));
    const int deg = poly_degree(p, maxc * 1e-14);
    if (deg <= 0) return {};
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -p[static_cast<std::size_t>(i)] / p[static_cast<std::size_t>(deg)];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, /*computeEigenvectors=*/false);
    std::vector<Complex> roots(static_cast<std::size_t>(deg));
    for (int i = 0; i < deg; ++i) roots[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    return roots;
}

}  // namespace lempert
