#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "lempert/lempert.hpp"

using namespace lempert;
using Catch::Approx;

namespace {

OptimizerConfig quick_config() {
    OptimizerConfig cfg;
    cfg.restarts = 4;
    cfg.max_iterations = 150;
    cfg.free_degrees = 24;
    return cfg;
}

const std::vector<Complex> kOrigin{Complex(0, 0)};

}  // namespace

TEST_CASE("estimate matches the oracle for a single pole at the origin") {
    const PoleSpec spec = PoleSpec::finite({{{Complex(0.5, 0)}, 1.0}});
    const auto est = estimate_lempert(Domain::unit_disc(), spec, kOrigin, quick_config());
    REQUIRE(est.certified);
    REQUIRE(est.value == Approx(0.5).epsilon(1e-2));
    REQUIRE(est.value >= 0.5 - 1e-12);
    REQUIRE(objective(est.competitor, spec) == Approx(est.value));
    REQUIRE(est.competitor.certificate.certified);
}

TEST_CASE("estimates agree with the disc oracle on random specs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        const Complex z = std::polar(0.5 * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
        PoleSpec spec;
        const int n = 1 + static_cast<int>(u(rng) * 4) % 4;
        while (static_cast<int>(spec.size()) < n) {
            const Complex a = std::polar(0.8 * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
            bool ok = std::abs(a - z) > 0.05;
            for (const auto& p : spec.poles) ok = ok && std::abs(a - p.point[0]) > 0.02;
            if (ok) spec.poles.push_back({{a}, 0.1 + 1.9 * u(rng)});
        }
        const double oracle = lempert_disc_oracle(spec.as_disc_pairs(), z);
        const auto est =
            estimate_lempert(Domain::unit_disc(), spec, std::vector<Complex>{z}, quick_config());
        REQUIRE(est.certified);
        REQUIRE(est.value >= oracle - 1e-12);               // upper-bound soundness
        REQUIRE(std::abs(est.value - oracle) <= 1e-2 * oracle);
    }
}

TEST_CASE("estimator rejects invalid specs") {
    const Domain disc = Domain::unit_disc();
    REQUIRE_THROWS_AS(estimate_lempert(disc, PoleSpec{}, kOrigin), std::domain_error);
    REQUIRE_THROWS_AS(
        estimate_lempert(disc, PoleSpec::finite({{{Complex(0, 0)}, 1.0}}), kOrigin),
        std::domain_error);  // pole equals z
    REQUIRE_THROWS_AS(
        estimate_lempert(disc, PoleSpec::finite({{{Complex(0.5, 0)}, -1.0}}), kOrigin),
        std::domain_error);
    REQUIRE_THROWS_AS(
        estimate_lempert(disc, PoleSpec::finite({{{Complex(1.5, 0)}, 1.0}}), kOrigin),
        std::domain_error);
    REQUIRE_THROWS_AS(
        estimate_lempert(disc, PoleSpec::finite({{{Complex(0.5, 0)}, 1.0}}),
                         std::vector<Complex>{Complex(2, 0)}),
        std::domain_error);
}

TEST_CASE("seeded runs are deterministic and different seeds stay sound") {
    const PoleSpec spec =
        PoleSpec::finite({{{Complex(0.4, 0.2)}, 1.2}, {{Complex(-0.3, 0.1)}, 0.7}});
    OptimizerConfig cfg = quick_config();
    const auto a = estimate_lempert(Domain::unit_disc(), spec, kOrigin, cfg);
    const auto b = estimate_lempert(Domain::unit_disc(), spec, kOrigin, cfg);
    REQUIRE(a.value == b.value);
    REQUIRE(a.iterations == b.iterations);
    REQUIRE(a.competitor.nodes.size() == b.competitor.nodes.size());
    for (std::size_t j = 0; j < a.competitor.nodes.size(); ++j) {
        REQUIRE(a.competitor.nodes[j].lambda == b.competitor.nodes[j].lambda);
    }
    cfg.seed = 1234;
    const auto c = estimate_lempert(Domain::unit_disc(), spec, kOrigin, cfg);
    const double oracle = lempert_disc_oracle(spec.as_disc_pairs(), kOrigin[0]);
    REQUIRE(c.value >= oracle - 1e-12);
}

TEST_CASE("warm starts are never worsened") {
    const PoleSpec spec = PoleSpec::finite({{{Complex(0.6, 0)}, 1.0}});
    OptimizerConfig cfg = quick_config();
    const auto first = estimate_lempert(Domain::unit_disc(), spec, kOrigin, cfg);
    REQUIRE(first.certified);

    OptimizerConfig crippled = cfg;
    crippled.polish = false;
    crippled.free_degrees = 2;
    const std::vector<Competitor> warm{first.competitor};
    const auto second = estimate_lempert(Domain::unit_disc(), spec, kOrigin, crippled, warm);
    REQUIRE(second.certified);
    REQUIRE(second.value <= first.value + 1e-15);
}

TEST_CASE("restriction transfer holds for the best found competitor") {
    const PoleSpec spec = PoleSpec::finite(
        {{{Complex(0.5, 0)}, 1.0}, {{Complex(-0.4, 0.2)}, 0.8}, {{Complex(0.1, -0.6)}, 1.5}});
    const auto est = estimate_lempert(Domain::unit_disc(), spec, kOrigin, quick_config());
    REQUIRE(est.certified);
    const double full = objective(est.competitor, spec);
    const std::vector<std::vector<int>> subsets{{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}};
    for (const auto& subset : subsets) {
        PoleSpec sub;
        for (int idx : subset) sub.poles.push_back(spec.poles[static_cast<std::size_t>(idx)]);
        const auto restricted = restrict_competitor(est.competitor, subset);
        REQUIRE(objective(restricted, sub) >= full);
    }
}

TEST_CASE("bidisc product-form estimates agree with the product oracle") {
    OptimizerConfig cfg;
    cfg.restarts = 2;
    cfg.max_iterations = 100;
    cfg.free_degrees = 45;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Domain bidisc = Domain::polydisc(2);
    int done = 0;
    while (done < 10) {
        const int m = done < 4 ? 1 : (done < 9 ? 2 : 3);
        const double w = -0.5 + u(rng);
        const double z1 = -0.3 + 0.6 * u(rng);
        const double b = done == 9 ? w + 0.05 : -0.6 + 1.2 * u(rng);
        std::vector<double> B;
        while (static_cast<int>(B.size()) < m) {
            const double cand = -0.75 + 1.5 * u(rng);
            bool ok = std::abs(cand - z1) > 0.1;
            for (double x : B) ok = ok && std::abs(cand - x) > 0.08;
            if (ok) B.push_back(cand);
        }
        std::vector<std::pair<Complex, double>> pairs;
        PoleSpec spec;
        for (double x : B) {
            pairs.emplace_back(Complex(x, 0), 1.0);
            spec.poles.push_back({{Complex(x, 0), Complex(b, 0)}, 1.0});
        }
        const double oracle =
            lempert_product_oracle(pairs, Complex(b, 0), Complex(z1, 0), Complex(w, 0));
        if (oracle < 0.05) continue;
        const std::vector<Complex> z{Complex(z1, 0), Complex(w, 0)};
        const auto est = estimate_lempert(bidisc, spec, z, cfg);
        INFO("case " << done << ": m=" << m << " oracle=" << oracle << " est=" << est.value);
        REQUIRE(est.certified);
        REQUIRE(est.value >= oracle - 1e-12);
        REQUIRE(std::abs(est.value - oracle) <= 1e-2 * oracle);
        ++done;
    }
}

TEST_CASE("punctured-disc estimate tracks the lift oracle") {
    OptimizerConfig cfg;
    cfg.restarts = 2;
    cfg.free_degrees = 50;
    const PoleSpec spec = PoleSpec::finite({{{Complex(0.5, 0)}, 1.0}});
    const std::vector<Complex> z{Complex(0.25, 0)};
    const auto est = estimate_lempert(Domain::punctured_disc(), spec, z, cfg);
    const auto oracle = lempert_punctured_oracle(spec.as_disc_pairs(), z[0], 50);
    REQUIRE(est.certified);
    REQUIRE(est.competitor.disc.representation == AnalyticDisc::Representation::exp_lift);
    REQUIRE(est.value >= oracle.value - 1e-12);
    REQUIRE(std::abs(est.value - oracle.value) <= 1e-2 * oracle.value);
}

TEST_CASE("truncation scan follows the schedule oracle and stops early") {
    OptimizerConfig cfg = quick_config();
    cfg.free_degrees = 4;
    const Domain disc = Domain::unit_disc();
    const PoleSpec spec = PoleSpec::schedule_one_minus_inv_jsq(0.9, 8);

    const auto scan = finite_truncation_scan(disc, spec, kOrigin, 8, cfg);
    REQUIRE(scan.estimates.size() == 8);
    REQUIRE_FALSE(scan.exhausted);
    REQUIRE(scan.estimates[0].value == Approx(0.9).epsilon(1e-2));
    REQUIRE(scan.estimates[1].value == Approx(0.87750).epsilon(1e-2));
    double partial = 1.0;
    for (std::size_t m = 0; m < scan.estimates.size(); ++m) {
        partial *= 1.0 - 0.1 / (static_cast<double>(m + 1) * (m + 1));
        REQUIRE(scan.estimates[m].certified);
        REQUIRE(scan.estimates[m].value >= partial - 1e-12);
        if (m > 0) REQUIRE(scan.estimates[m].value <= scan.estimates[m - 1].value);
    }

    const auto sm = finite_truncation_scan(disc, spec.prefix(1), kOrigin, 1, cfg);
    REQUIRE(sm.estimates.size() == 1);
    const auto single = estimate_lempert(disc, spec.prefix(1), kOrigin, cfg);
    REQUIRE(sm.estimates[0].value == Approx(single.value).margin(1e-12));

    const auto longer =
        finite_truncation_scan(disc, PoleSpec::schedule_one_minus_inv_jsq(0.9, 40), kOrigin, 40, cfg);
    REQUIRE(longer.stopped_early);
    const std::size_t n = longer.estimates.size();
    REQUIRE(n < 40);
    REQUIRE(std::abs(longer.estimates[n - 2].value - longer.estimates[n - 1].value) <
            cfg.scan_stop_tol);
}

TEST_CASE("truncation scan flags exhausted finite specs") {
    OptimizerConfig cfg = quick_config();
    const PoleSpec spec =
        PoleSpec::finite({{{Complex(0.5, 0)}, 1.0}, {{Complex(0.7, 0)}, 1.0}});
    const auto scan = finite_truncation_scan(Domain::unit_disc(), spec, kOrigin, 5, cfg);
    REQUIRE(scan.exhausted);
    REQUIRE(scan.estimates.size() <= 2);
}

TEST_CASE("monotonicity check transfers competitors and orders estimates") {
    OptimizerConfig cfg = quick_config();
    const Domain disc = Domain::unit_disc();
    const PoleSpec p = PoleSpec::finite({{{Complex(0.3, 0)}, 1.0}});
    const PoleSpec q = PoleSpec::finite({{{Complex(0.3, 0)}, 1.0}, {{Complex(0.6, 0)}, 1.0}});

    const auto rep = check_monotonicity(disc, p, q, kOrigin, cfg);
    REQUIRE(rep.transfer_certified);
    REQUIRE(rep.ordering_holds);
    REQUIRE(rep.p_estimate.value == Approx(0.3).epsilon(1e-2));
    REQUIRE(rep.q_estimate.value == Approx(0.18).epsilon(1e-2));

    const auto same = check_monotonicity(disc, p, p, kOrigin, cfg);
    REQUIRE(same.ordering_holds);
    REQUIRE(same.p_estimate.value == same.q_estimate.value);

    REQUIRE_THROWS_AS(check_monotonicity(disc, q, p, kOrigin, cfg), std::domain_error);
    const PoleSpec lighter = PoleSpec::finite({{{Complex(0.3, 0)}, 0.5}});
    REQUIRE_THROWS_AS(check_monotonicity(disc, p, lighter, kOrigin, cfg), std::domain_error);
}

TEST_CASE("no-certificate runs fall back to the trivial bound") {
    OptimizerConfig cfg;
    cfg.restarts = 0;
    cfg.polish = false;
    const PoleSpec spec = PoleSpec::finite({{{Complex(0.3, 0), Complex(0.3, 0)}, 1.0}});
    const std::vector<Complex> z{Complex(0, 0), Complex(0, 0)};
    // no seeds exist for the ball and the search is disabled
    const auto est = estimate_lempert(Domain::euclidean_ball(2), spec, z, cfg);
    REQUIRE_FALSE(est.certified);
    REQUIRE(est.value == 1.0);
}
