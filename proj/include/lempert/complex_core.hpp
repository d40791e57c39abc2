#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lempert {

using Complex = std::complex<double>;

/// A point of the open unit disc. Construction validates |value| < 1.
struct UnitDiscPoint {
    Complex value;

    explicit UnitDiscPoint(Complex v) : value(v) {
        if (std::abs(v) >= 1.0) {
            throw std::domain_error("UnitDiscPoint: modulus must be < 1");
        }
    }

    bool operator==(const UnitDiscPoint&) const = default;
};

namespace detail {

inline void require_in_disc(Complex v, const char* what) {
    if (std::abs(v) >= 1.0) {
        throw std::domain_error(std::string(what) + ": point must lie in the open unit disc");
    }
}

}  // namespace detail

/// Finite zero list for a Blaschke product. A sequence may also be tagged as
/// the truncation of a countable family, in which case it carries a declared
/// bound witnessing the Blaschke condition sum(1-|z_j|) <= bound.
class ZeroSequence {
public:
    static ZeroSequence finite(std::vector<Complex> zeros) {
        return ZeroSequence(std::move(zeros), "", 0.0, false);
    }

    /// Truncation of the node schedule z_j = 1 - (1-t)/j^2, j = 1..count.
    /// The full family satisfies sum(1-z_j) = (1-t) * pi^2/6.
    static ZeroSequence schedule_one_minus_inv_jsq(double t, int count) {
        if (!(t > 0.0 && t < 1.0)) {
            throw std::domain_error("ZeroSequence: schedule parameter t must be in (0,1)");
        }
        if (count < 1) {
            throw std::domain_error("ZeroSequence: truncation length must be >= 1");
        }
        std::vector<Complex> zs;
        zs.reserve(static_cast<std::size_t>(count));
        for (int j = 1; j <= count; ++j) {
            zs.emplace_back(1.0 - (1.0 - t) / (static_cast<double>(j) * j), 0.0);
        }
        const double bound = (1.0 - t) * 1.6449340668482264;  // zeta(2)
        return ZeroSequence(std::move(zs), "one_minus_inv_jsq", bound, true);
    }

    const std::vector<Complex>& zeros() const noexcept { return zeros_; }
    bool is_truncated_family() const noexcept { return truncated_family_; }
    const std::string& generator_id() const noexcept { return generator_id_; }
    double blaschke_bound() const noexcept { return blaschke_bound_; }

private:
    ZeroSequence(std::vector<Complex> zeros, std::string gen, double bound, bool fam)
        : zeros_(std::move(zeros)),
          generator_id_(std::move(gen)),
          blaschke_bound_(bound),
          truncated_family_(fam) {
        double partial = 0.0;
        for (std::size_t i = 0; i < zeros_.size(); ++i) {
            detail::require_in_disc(zeros_[i], "ZeroSequence");
            for (std::size_t k = 0; k < i; ++k) {
                if (zeros_[i] == zeros_[k]) {
                    throw std::domain_error("ZeroSequence: zeros must be pairwise distinct");
                }
            }
            partial += 1.0 - std::abs(zeros_[i]);
            if (truncated_family_ && partial > blaschke_bound_ + 1e-12) {
                throw std::domain_error("ZeroSequence: partial sums exceed the declared Blaschke bound");
            }
        }
    }

    std::vector<Complex> zeros_;
    std::string generator_id_;
    double blaschke_bound_ = 0.0;
    bool truncated_family_ = false;
};

/// |(z-a)/(1 - conj(a) z)|, the Mobius distance factor. Symmetric in (a, z).
inline double mobius_factor(Complex a, Complex z) {
    detail::require_in_disc(a, "mobius_factor");
    detail::require_in_disc(z, "mobius_factor");
    return std::abs((z - a) / (1.0 - std::conj(a) * z));
}

/// The disc automorphism u -> (a-u)/(1 - conj(a) u). It is an involution
/// exchanging 0 and a; |mobius_map(a, u)| equals mobius_factor(a, u).
inline Complex mobius_map(Complex a, Complex u) {
    return (a - u) / (1.0 - std::conj(a) * u);
}

/// Finite Blaschke product with the given zero set, evaluated at lambda.
/// Each factor is normalized as (|a|/a) * (a-lambda)/(1 - conj(a) lambda);
/// the factor for a zero at the origin is taken as lambda itself. The value
/// is well defined for any lambda off the reflected poles 1/conj(a), so
/// boundary evaluation is allowed.
inline Complex blaschke_product(const ZeroSequence& zeros, Complex lambda) {
    Complex prod(1.0, 0.0);
    for (Complex a : zeros.zeros()) {
        if (a == Complex(0.0, 0.0)) {
            prod *= lambda;
        } else {
            prod *= (std::abs(a) / a) * (a - lambda) / (1.0 - std::conj(a) * lambda);
        }
    }
    return prod;
}

/// Interpolant g(lambda) = e^{zeta(lambda)} * sum_j gamma_j / e^{zeta(l_j)} * B_j(lambda)/B_j(l_j),
/// where B_j is the Blaschke product whose zero set is all nodes except l_j.
/// With the default zeta == 0 this reduces to a Lagrange-type series in the
/// Blaschke basis; it reproduces g(l_j) = gamma_j exactly since B_j vanishes
/// at every other node.
class BlaschkeInterpolant {
public:
    BlaschkeInterpolant(std::vector<Complex> nodes, std::vector<Complex> values,
                        std::function<Complex(Complex)> weight_exponent = {})
        : nodes_(std::move(nodes)),
          values_(std::move(values)),
          weight_exponent_(std::move(weight_exponent)) {
        if (nodes_.empty() || nodes_.size() != values_.size()) {
            throw std::domain_error("blaschke_interpolate: nodes and values must be non-empty and equal length");
        }
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            detail::require_in_disc(nodes_[i], "blaschke_interpolate");
            for (std::size_t k = 0; k < i; ++k) {
                if (std::abs(nodes_[i] - nodes_[k]) < 1e-3) {
                    throw std::domain_error(
                        "blaschke_interpolate: node separation below the 1e-3 floor");
                }
            }
        }
        // Denominators B_j(l_j); nonzero for distinct nodes.
        denoms_.resize(nodes_.size());
        for (std::size_t j = 0; j < nodes_.size(); ++j) {
            denoms_[j] = basis_product(j, nodes_[j]);
        }
    }

    Complex operator()(Complex lambda) const {
        Complex sum(0.0, 0.0);
        for (std::size_t j = 0; j < nodes_.size(); ++j) {
            Complex term = values_[j] * basis_product(j, lambda) / denoms_[j];
            if (weight_exponent_) {
                term *= std::exp(weight_exponent_(lambda) - weight_exponent_(nodes_[j]));
            }
            sum += term;
        }
        return sum;
    }

    const std::vector<Complex>& nodes() const noexcept { return nodes_; }

private:
    Complex basis_product(std::size_t skip, Complex lambda) const {
        Complex prod(1.0, 0.0);
        for (std::size_t k = 0; k < nodes_.size(); ++k) {
            if (k == skip) continue;
            Complex a = nodes_[k];
            if (a == Complex(0.0, 0.0)) {
                prod *= lambda;
            } else {
                prod *= (std::abs(a) / a) * (a - lambda) / (1.0 - std::conj(a) * lambda);
            }
        }
        return prod;
    }

    std::vector<Complex> nodes_;
    std::vector<Complex> values_;
    std::function<Complex(Complex)> weight_exponent_;
    std::vector<Complex> denoms_;
};

inline BlaschkeInterpolant blaschke_interpolate(std::vector<Complex> nodes,
                                                std::vector<Complex> values,
                                                std::function<Complex(Complex)> weight_exponent = {}) {
    return BlaschkeInterpolant(std::move(nodes), std::move(values), std::move(weight_exponent));
}

/// Multipole Green function of the unit disc:
/// prod_j mobius_factor(a_j, z)^{p_j} for distinct poles a_j with weights p_j > 0.
/// In the disc this equals the Lempert function with the same weighted poles.
inline double green_disc_multipole(const std::vector<std::pair<Complex, double>>& poles, Complex z) {
    if (poles.empty()) {
        throw std::domain_error("green_disc_multipole: pole set must be non-empty");
    }
    detail::require_in_disc(z, "green_disc_multipole");
    double prod = 1.0;
    for (std::size_t i = 0; i < poles.size(); ++i) {
        const auto& [a, w] = poles[i];
        if (!(w > 0.0)) {
            throw std::domain_error("green_disc_multipole: weights must be strictly positive");
        }
        for (std::size_t k = 0; k < i; ++k) {
            if (poles[k].first == a) {
                throw std::domain_error("green_disc_multipole: poles must be pairwise distinct");
            }
        }
        prod *= std::pow(mobius_factor(a, z), w);
    }
    return prod;
}

}  // namespace lempert
