#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "spax/policy.hpp"
#include "spax/scenario_io.hpp"
#include "spax/synth.hpp"

using namespace spax;

TEST_CASE("transform formulas match their definitions") {
    ScenarioInstance s = generate_synthetic_state(4, 10, 8, SynthProfile::georgia_like);
    s.physicians[0].pam = 0.2;
    s.physicians[1].pam = 0.9;

    SUBCASE("pam threshold caps at lambda") {
        const auto t = apply_transform(s, {PolicyKind::pam_threshold, 0.4});
        CHECK(t.physicians[0].pam == doctest::Approx(0.2));
        CHECK(t.physicians[1].pam == doctest::Approx(0.4));
    }
    SUBCASE("full mobility interpolation reaches the other group's rate") {
        const auto t = apply_transform(s, {PolicyKind::mobility_interpolation, 1.0});
        for (const auto& tr : t.tracts) CHECK(tr.mob_medicaid == doctest::Approx(tr.mob_other));
    }
    SUBCASE("pam scaling at lambda=1 is the identity") {
        const auto t = apply_transform(s, {PolicyKind::pam_scale, 1.0});
        for (int j = 0; j < s.n_physicians(); ++j)
            CHECK(t.physicians[j].pam == s.physicians[j].pam);
    }
    SUBCASE("scaling caps at 1") {
        const auto t = apply_transform(s, {PolicyKind::pam_scale, 2.0});
        for (const auto& p : t.physicians) CHECK(p.pam <= 1.0);
        CHECK(t.physicians[1].pam == doctest::Approx(1.0));  // 0.9 * 2 capped
    }
    SUBCASE("lambda outside the kind's range is rejected") {
        CHECK_THROWS(apply_transform(s, {PolicyKind::pam_threshold, 1.5}));
        CHECK_THROWS(apply_transform(s, {PolicyKind::mc_scale, 0.3}));
        CHECK_THROWS(apply_transform(s, {PolicyKind::mc_scale, 2.5}));
    }
}

TEST_CASE("identity transforms leave the scenario bit-identical") {
    const ScenarioInstance s = generate_synthetic_state(9, 15, 12, SynthProfile::georgia_like);
    const std::string base_t = tracts_to_csv(s), base_p = physicians_to_csv(s);
    for (auto [kind, lam] : std::initializer_list<std::pair<PolicyKind, double>>{
             {PolicyKind::pam_scale, 1.0},
             {PolicyKind::mc_scale, 1.0},
             {PolicyKind::pam_threshold, 1.0},
             {PolicyKind::mc_threshold, 1.0},
             {PolicyKind::mobility_interpolation, 0.0}}) {
        const auto t = apply_transform(s, {kind, lam});
        CHECK(tracts_to_csv(t) == base_t);
        CHECK(physicians_to_csv(t) == base_p);
    }
}

TEST_CASE("threshold monotonicity in lambda (random triples)") {
    Rng rng(77);
    for (int i = 0; i < 1000; ++i) {
        const double pam = rng.uniform01(), l1 = rng.uniform01(), l2 = rng.uniform01();
        const double lo = std::min(l1, l2), hi = std::max(l1, l2);
        CHECK(std::min(lo, pam) <= std::min(hi, pam));
    }
}

TEST_CASE("paper grids: step 0.05 with the documented ranges") {
    const auto g1 = default_grid(PolicyKind::mobility_interpolation);
    CHECK(g1.size() == 21);
    CHECK(g1.front() == doctest::Approx(0.0));
    CHECK(g1.back() == doctest::Approx(1.0));
    const auto g2 = default_grid(PolicyKind::mc_scale);
    CHECK(g2.size() == 31);
    CHECK(g2.front() == doctest::Approx(0.5));
    CHECK(g2.back() == doctest::Approx(2.0));
}

TEST_CASE("identity grid reproduces the base solve") {
    const ScenarioInstance s = testfix::t1();
    const auto base = solve_assignment(s, {});
    REQUIRE(base.ok);
    const auto sweep = run_sweep(s, PolicyKind::pam_scale, {1.0});
    REQUIRE(sweep.entries.size() == 1);
    CHECK(sweep.entries[0].error.empty());
    const auto& st = sweep.entries[0].summary[static_cast<int>(Scope::overall)];
    CHECK(st.travel_cost == doctest::Approx(700.0 / 300.0).epsilon(1e-9));
}

TEST_CASE("mc-scale sweep moves medicaid access in the Table-2 direction") {
    const ScenarioInstance s = generate_synthetic_state(13, 80, 64, SynthProfile::georgia_like);
    const auto sweep = run_sweep(s, PolicyKind::mc_scale, {0.5, 1.0}, true);
    REQUIRE(sweep.entries.size() == 2);
    for (const auto& e : sweep.entries) REQUIRE(e.error.empty());
    const auto& lo = sweep.entries[0].summary[static_cast<int>(Scope::medicaid)];
    const auto& hi = sweep.entries[1].summary[static_cast<int>(Scope::medicaid)];
    CHECK(lo.coverage < hi.coverage);
    CHECK(lo.travel_cost > hi.travel_cost);
}

TEST_CASE("sweep grids must be strictly increasing and in range") {
    const ScenarioInstance s = testfix::t1();
    CHECK_THROWS(run_sweep(s, PolicyKind::mc_scale, {1.0, 1.0}));
    CHECK_THROWS(run_sweep(s, PolicyKind::mc_scale, {}));
    CHECK_THROWS(run_sweep(s, PolicyKind::mc_scale, {0.1, 0.5}));
}

TEST_CASE("degenerate Bernoulli draws") {
    ScenarioInstance s = testfix::t1();
    SUBCASE("pam = 1 everywhere: every draw equals the base, variance 0") {
        const McSummary mc = sample_pam_realizations(s, 5, 42);
        for (int k = 0; k < 3; ++k)
            for (double v : mc.tract_variance(static_cast<Scope>(k), "coverage"))
                CHECK(v == doctest::Approx(0.0));
        const auto base = solve_assignment(s, {});
        REQUIRE(base.ok);
        const auto mm = mc.tract_mean(Scope::overall, "coverage");
        CHECK(mm[0] == doctest::Approx(1.0));
        CHECK(mm[1] == doctest::Approx(1.0));
    }
    SUBCASE("pam = 0 everywhere: medicaid coverage is zero in every draw") {
        for (auto& p : s.physicians) p.pam = 0.0;
        const McSummary mc = sample_pam_realizations(s, 4, 42);
        for (const auto& st : mc.per_draw[static_cast<int>(Scope::medicaid)])
            CHECK(st.coverage == doctest::Approx(0.0));
    }
}

TEST_CASE("fixed seed reproduces byte-identical Monte Carlo summaries") {
    ScenarioInstance s = generate_synthetic_state(21, 20, 16, SynthProfile::georgia_like);
    for (auto& p : s.physicians) p.pam = 0.5;
    const McSummary a = sample_pam_realizations(s, 8, 9, 2);
    const McSummary b = sample_pam_realizations(s, 8, 9, 1);  // thread count must not matter
    for (int k = 0; k < 3; ++k) {
        CHECK(a.coverage[k].mean == b.coverage[k].mean);
        CHECK(a.travel_cost[k].m2 == b.travel_cost[k].m2);
        for (std::size_t d = 0; d < a.per_draw[k].size(); ++d)
            CHECK(a.per_draw[k][d].coverage == b.per_draw[k][d].coverage);
    }
    const McSummary c = sample_pam_realizations(s, 8, 10, 2);
    bool differs = false;
    for (std::size_t d = 0; d < c.per_draw[0].size(); ++d)
        differs = differs || c.per_draw[0][d].coverage != a.per_draw[0][d].coverage;
    CHECK(differs);
}

TEST_CASE("pareto filter") {
    auto mk = [](double mcov, double mtc, double mcg, double ocov, double otc, double ocg) {
        ParetoCandidate c;
        c.label = "c";
        c.transform = {PolicyKind::mc_scale, 1.0};
        c.medicaid_coverage = mcov;
        c.medicaid_tc = mtc;
        c.medicaid_cg = mcg;
        c.other_coverage = ocov;
        c.other_tc = otc;
        c.other_cg = ocg;
        return c;
    };
    SUBCASE("a single candidate is retained") {
        const auto keep = pareto_filter({mk(0.8, 8, 0.6, 0.9, 7, 0.5)});
        CHECK(keep == std::vector<int>{0});
    }
    SUBCASE("strict dominance in all six summaries drops the loser") {
        const auto keep = pareto_filter(
            {mk(0.9, 7, 0.5, 0.95, 6, 0.4), mk(0.8, 8, 0.6, 0.90, 7, 0.5)}, 0.005);
        CHECK(keep == std::vector<int>{0});
    }
    SUBCASE("trade-offs keep both at epsilon = 0") {
        const auto keep = pareto_filter(
            {mk(0.9, 7.0, 0.5, 0.95, 6.0, 0.45), mk(0.9, 7.5, 0.5, 0.95, 6.0, 0.40)}, 0.0);
        CHECK(keep.size() == 2);
    }
}
