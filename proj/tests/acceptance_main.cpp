// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, not configurable.

#include <cmath>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lempert/experiments.hpp"

using namespace lempert;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::vector<std::string>& details = {}) {
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << criterion << ": " << name << "\n";
    if (!pass) {
        ++g_failures;
        for (const auto& d : details) std::cout << "      " << d << "\n";
    }
}

// 1. estimates track the exact disc oracle on 20 seeded random specs
void criterion1() {
    auto cfg = default_experiment_config("disc-oracle");
    cfg.optimizer.measure_runtime = true;
    const auto outcome = run_experiment(cfg);
    std::vector<std::string> details = outcome.failures;
    bool pass = outcome.failures.empty() && outcome.rows.size() == 20;
    for (const auto& row : outcome.rows) {
        if (!row.oracle || std::abs(row.gap) > 1e-2 * *row.oracle || row.gap < -1e-12) pass = false;
        if (row.runtime_ms >= 10000.0) {
            pass = false;
            details.push_back(row.case_label + ": exceeded the 10 s budget");
        }
    }
    report(1, "disc oracle agreement (20 random specs, 1e-2 relative)", pass, details);
}

// 2. bidisc pair {(0.3,0.3),(0.6,0.3)} at the origin is pinned at 0.3
void criterion2() {
    const auto outcome = run_experiment(default_experiment_config("remark2-bidisc"));
    bool pass = outcome.failures.empty() && outcome.rows.size() == 2;
    std::vector<std::string> details = outcome.failures;
    for (const auto& row : outcome.rows) {
        if (!row.oracle || *row.oracle != 0.3) {
            pass = false;
            details.push_back(row.case_label + ": oracle is not exactly 0.3");
        }
        if (std::abs(row.gap) > 1e-2 * 0.3) pass = false;
    }
    report(2, "bidisc two-pole value equals the first pole modulus", pass, details);
}

// 3. product-property oracle saturates at |w| and estimates follow
void criterion3() {
    const auto cfg = default_experiment_config("example4-product");
    const auto outcome = run_experiment(cfg);
    bool pass = outcome.failures.empty() && outcome.rows.size() == 8;
    std::vector<std::string> details = outcome.failures;
    const double b = cfg.params.value("b_modulus", 0.65);
    const double w = cfg.params.value("w", 0.1);
    for (std::size_t m = 1; m <= outcome.rows.size(); ++m) {
        const auto& row = outcome.rows[m - 1];
        const double expect = std::max(std::pow(b, static_cast<double>(m)), w);
        if (!row.oracle || std::abs(*row.oracle - expect) > 1e-15) pass = false;
        if (m >= 6 && (!row.oracle || *row.oracle != w)) {
            pass = false;
            details.push_back(row.case_label + ": oracle failed to saturate at |w|");
        }
        if (std::abs(row.gap) > 1e-2 * expect) pass = false;
    }
    report(3, "product-property convergence to |w| on growing pole sets", pass, details);
}

// 4. punctured disc: the pair value factors and sits strictly below the singles
void criterion4() {
    const auto outcome = run_experiment(default_experiment_config("covering-counterexample"));
    bool pass = outcome.failures.empty() && outcome.rows.size() == 3;
    std::vector<std::string> details = outcome.failures;
    if (outcome.rows.size() == 3) {
        const double s1 = *outcome.rows[0].oracle;
        const double s2 = *outcome.rows[1].oracle;
        const double pair = *outcome.rows[2].oracle;
        if (std::abs(pair - s1 * s2) > 1e-12) pass = false;
        const double margin = std::min(s1, s2) - pair;
        if (!(margin > 0.0)) pass = false;
        if (!(outcome.rows[2].estimate <
              std::min(outcome.rows[0].estimate, outcome.rows[1].estimate))) {
            pass = false;
            details.push_back("pair estimate is not strictly below the singles");
        }
        std::ostringstream os;
        os << "strict gap below the singles: " << margin;
        if (pass) details.push_back(os.str());
    }
    report(4, "covering counterexample reproduced on the punctured disc", pass, details);
}

// 5. truncation scan matches the partial products and supports the stop rule
void criterion5() {
    const auto outcome = run_experiment(default_experiment_config("theorem1-truncation"));
    bool pass = outcome.failures.empty() && outcome.rows.size() == 9;
    std::vector<std::string> details = outcome.failures;
    double prev = 2.0;
    for (std::size_t m = 1; m <= 8 && m <= outcome.rows.size(); ++m) {
        const auto& row = outcome.rows[m - 1];
        if (!(row.estimate <= prev)) {
            pass = false;
            details.push_back(row.case_label + ": sequence increased");
        }
        prev = row.estimate;
        if (!row.oracle || std::abs(row.gap) > 1e-2 * *row.oracle) pass = false;
    }
    if (outcome.rows.size() == 9 &&
        outcome.rows.back().case_label.find("stop-at-m=") == std::string::npos) {
        pass = false;
        details.push_back("missing stopping-rule row");
    }
    report(5, "finite truncation scan is nonincreasing and self-terminating", pass, details);
}

// 6. property suites at desk scale
void criterion6() {
    bool pass = true;
    std::vector<std::string> details;
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto rand_disc = [&](double r) {
        return std::polar(r * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
    };

    {  // Blaschke boundary modulus on 256 circle samples
        const auto zeros = ZeroSequence::finite(
            {Complex(0.4, 0.1), Complex(-0.3, 0.5), Complex(0.2, -0.6), Complex(-0.7, 0)});
        for (int i = 0; i < 256; ++i) {
            const Complex l = std::polar(1.0, 2.0 * std::numbers::pi * i / 256.0);
            if (std::abs(std::abs(blaschke_product(zeros, l)) - 1.0) > 1e-10) {
                pass = false;
                details.push_back("Blaschke boundary modulus drifted beyond 1e-10");
                break;
            }
        }
    }

    {  // interpolation residuals below 1e-12
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<Complex> nodes, values;
            const int n = 1 + static_cast<int>(u(rng) * 10) % 10;
            while (static_cast<int>(nodes.size()) < n) {
                const Complex cand = rand_disc(0.9);
                bool ok = true;
                for (const Complex& m : nodes) ok = ok && std::abs(cand - m) >= 1e-3;
                if (ok) {
                    nodes.push_back(cand);
                    values.push_back(rand_disc(1.5));
                }
            }
            const auto g = blaschke_interpolate(nodes, values);
            for (std::size_t j = 0; j < nodes.size(); ++j) {
                if (std::abs(g(nodes[j]) - values[j]) >= 1e-12) {
                    pass = false;
                    details.push_back("interpolation residual reached 1e-12");
                }
            }
        }
    }

    {  // restriction transfer, exact, on 1000 sampled competitors/subsets
        for (int trial = 0; trial < 1000; ++trial) {
            const int n = 2 + static_cast<int>(u(rng) * 4) % 4;
            PoleSpec spec;
            Competitor c;
            c.disc.dimension = 1;
            c.disc.components = {Poly{Complex(0, 0), Complex(1, 0)}};
            c.base_point = {Complex(0, 0)};
            while (static_cast<int>(spec.size()) < n) {
                const Complex node = rand_disc(0.9);
                if (std::abs(node) < 1e-3) continue;
                bool ok = true;
                for (const auto& q : c.nodes) ok = ok && std::abs(node - q.lambda.value) > 1e-6;
                if (!ok) continue;
                c.nodes.push_back({UnitDiscPoint(node), static_cast<int>(spec.size())});
                spec.poles.push_back({{node}, 0.1 + 2.0 * u(rng)});
            }
            const double full = objective(c, spec);
            std::vector<int> subset;
            PoleSpec sub;
            for (int j = 0; j < n; ++j) {
                if (u(rng) < 0.5) {
                    subset.push_back(j);
                    sub.poles.push_back(spec.poles[static_cast<std::size_t>(j)]);
                }
            }
            if (subset.empty()) {
                subset.push_back(n - 1);
                sub.poles.push_back(spec.poles[static_cast<std::size_t>(n - 1)]);
            }
            if (objective(restrict_competitor(c, subset), sub) < full) {
                pass = false;
                details.push_back("restriction transfer inequality violated");
                break;
            }
        }
    }

    {  // certification soundness on 1e5 sampled interior points
        std::vector<std::pair<Domain, AnalyticDisc>> cases;
        {
            AnalyticDisc d;
            d.dimension = 1;
            d.components = {Poly{Complex(0, 0), Complex(0.999, 0)}};
            cases.emplace_back(Domain::unit_disc(), d);
        }
        {
            AnalyticDisc d;
            d.dimension = 2;
            d.components = {Poly{Complex(0.1, 0), Complex(0.4, 0.2), Complex(0, 0.3)},
                            Poly{Complex(-0.2, 0.1), Complex(0.3, 0), Complex(0.05, -0.2)}};
            cases.emplace_back(Domain::polydisc(2), d);
        }
        {
            AnalyticDisc lift;
            lift.representation = AnalyticDisc::Representation::exp_lift;
            lift.dimension = 1;
            lift.components = {Poly{Complex(-1.0, 0.3), Complex(0.4, 0.2), Complex(0.2, -0.1)}};
            cases.emplace_back(Domain::punctured_disc(), lift);
        }
        long long checked = 0;
        for (const auto& [domain, disc] : cases) {
            if (!certify_disc_in_domain(domain, disc).certified) {
                pass = false;
                details.push_back("a reference disc failed to certify");
                continue;
            }
            for (int i = 0; i < 34000; ++i, ++checked) {
                const Complex l = std::polar(u(rng), 2.0 * std::numbers::pi * u(rng));
                if (!contains(domain, eval_disc(disc, l))) {
                    pass = false;
                    details.push_back("certified disc left its domain");
                    break;
                }
            }
        }
        if (checked < 100000) {
            pass = false;
            details.push_back("fewer than 1e5 soundness samples were run");
        }
    }

    {  // determinism: byte-identical serialized outputs for a fixed seed
        const auto cfg = default_experiment_config("remark2-bidisc");
        const auto a = run_experiment(cfg);
        const auto b = run_experiment(cfg);
        std::ostringstream da, db;
        for (const auto& r : a.rows) da << result_row_to_json(r).dump() << "\n";
        for (const auto& r : b.rows) db << result_row_to_json(r).dump() << "\n";
        if (da.str() != db.str() || da.str().empty()) {
            pass = false;
            details.push_back("seeded reruns produced different bytes");
        }
        const PoleSpec spec = PoleSpec::finite({{{Complex(0.5, 0)}, 1.0}});
        OptimizerConfig opt;
        opt.restarts = 3;
        opt.max_iterations = 100;
        opt.free_degrees = 8;
        const auto e1 = estimate_lempert(Domain::unit_disc(), spec,
                                         std::vector<Complex>{Complex(0, 0)}, opt);
        const auto e2 = estimate_lempert(Domain::unit_disc(), spec,
                                         std::vector<Complex>{Complex(0, 0)}, opt);
        if (estimate_to_json(e1, &spec).dump() != estimate_to_json(e2, &spec).dump()) {
            pass = false;
            details.push_back("estimate records are not bit-identical");
        }
    }

    report(6, "property suites (Blaschke, interpolation, restriction, soundness, determinism)",
           pass, details);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    if (g_failures == 0) {
        std::cout << "all acceptance criteria passed\n";
        return 0;
    }
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
}
