#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <vector>

#include "dalupi/oracle.hpp"
#include "dalupi/rng.hpp"
#include "dalupi/taskgen.hpp"
#include "doctest.h"

using namespace dalupi;

namespace {

DiscreteWorld two_point_world() {
    DiscreteWorld w;
    w.x_card = w.w_card = w.y_card = 2;
    w.source_px = {0.5, 0.5};
    w.target_px = {0.5, 0.5};
    w.source_pw_given_x = Mat(2, 2);
    w.source_pw_given_x.a = {1, 0, 0, 1};
    w.target_pw_given_x = w.source_pw_given_x;
    w.source_py_given_wx.assign(8, 0.0);
    for (std::size_t wi = 0; wi < 2; ++wi)
        for (std::size_t x = 0; x < 2; ++x) {
            const double p1 = wi == 0 ? 0.1 : 0.8;
            w.py_ref(Domain::Source, wi, x, 0) = 1.0 - p1;
            w.py_ref(Domain::Source, wi, x, 1) = p1;
        }
    w.target_py_given_wx = w.source_py_given_wx;
    w.y_values = DiscreteWorld::default_y_values(2);
    return w;
}

TabularHypothesis random_values_hypothesis(const DiscreteWorld& w, Rng& rng) {
    const double lo = *std::min_element(w.y_values.begin(), w.y_values.end());
    const double hi = *std::max_element(w.y_values.begin(), w.y_values.end());
    std::vector<double> v(w.x_card);
    for (double& e : v) e = rng.uniform(lo, hi);
    return TabularHypothesis::from_values(std::move(v));
}

}  // namespace

TEST_CASE("squared-loss risk on the two-point world is exactly 0.15") {
    const DiscreteWorld w = two_point_world();
    const TabularHypothesis h = TabularHypothesis::from_values({0.0, 1.0});  // h(x) = x
    CHECK(domain_risk(w, Domain::Target, h, RiskLoss::Squared) == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(true_target_risk(w, h, RiskLoss::Squared) == doctest::Approx(0.15).epsilon(1e-12));
}

TEST_CASE("zero-one risk under uniform labels is 0.5 for any classifier") {
    DiscreteWorld w = two_point_world();
    for (std::size_t wi = 0; wi < 2; ++wi)
        for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t y = 0; y < 2; ++y) {
                w.py_ref(Domain::Source, wi, x, y) = 0.5;
                w.py_ref(Domain::Target, wi, x, y) = 0.5;
            }
    const TabularHypothesis det = TabularHypothesis::from_labels({1, 0}, 2);
    CHECK(true_target_risk(w, det, RiskLoss::ZeroOne) == doctest::Approx(0.5));
    Mat probs(2, 2);
    probs.a = {0.3, 0.7, 0.9, 0.1};
    CHECK(true_target_risk(w, TabularHypothesis::from_probs(probs), RiskLoss::ZeroOne) ==
          doctest::Approx(0.5));
}

TEST_CASE("a stochastic classifier row scores its expected misclassification") {
    // Single x, P(y=1) = 0.7, classifier says (0.4, 0.6):
    // risk = 0.3 * (1 - 0.4) + 0.7 * (1 - 0.6) = 0.46.
    DiscreteWorld w;
    w.x_card = w.w_card = 1;
    w.y_card = 2;
    w.source_px = w.target_px = {1.0};
    w.source_pw_given_x = w.target_pw_given_x = Mat(1, 1, 1.0);
    w.source_py_given_wx = {0.3, 0.7};
    w.target_py_given_wx = {0.3, 0.7};
    w.y_values = {0.0, 1.0};
    Mat probs(1, 2);
    probs.a = {0.4, 0.6};
    CHECK(true_target_risk(w, TabularHypothesis::from_probs(probs), RiskLoss::ZeroOne) ==
          doctest::Approx(0.46).epsilon(1e-12));
}

TEST_CASE("loss and hypothesis form must match") {
    const DiscreteWorld w = two_point_world();
    const TabularHypothesis vals = TabularHypothesis::from_values({0.0, 1.0});
    const TabularHypothesis labs = TabularHypothesis::from_labels({0, 1}, 2);
    CHECK_THROWS_AS(domain_risk(w, Domain::Target, vals, RiskLoss::ZeroOne), ValidationError);
    CHECK_THROWS_AS(domain_risk(w, Domain::Target, labs, RiskLoss::Squared), ValidationError);
}

TEST_CASE("assumption checks flag exactly what each knob breaks") {
    WorldGenSpec spec;
    spec.x_card = 4;
    spec.w_card = 3;
    spec.y_card = 3;
    spec.seed = 7;

    spec.knob = WorldKnob::None;
    AssumptionReport rep = check_assumptions(gen_world(spec));
    CHECK(rep.labeling_invariant);
    CHECK(rep.marginals_differ);
    CHECK(rep.overlap_w);
    CHECK(rep.sufficiency);
    CHECK(rep.overlap_violations.empty());
    CHECK(rep.sufficiency_violations.empty());

    spec.knob = WorldKnob::BreakOverlapW;
    rep = check_assumptions(gen_world(spec));
    CHECK(!rep.overlap_w);
    REQUIRE(rep.overlap_violations.size() == 1);
    CHECK(rep.overlap_violations[0] == 2);  // generator removes the last w
    CHECK(rep.labeling_invariant);
    CHECK(rep.sufficiency);

    spec.knob = WorldKnob::BreakSufficiency;
    rep = check_assumptions(gen_world(spec));
    CHECK(!rep.sufficiency);
    CHECK(!rep.sufficiency_violations.empty());
    CHECK(rep.labeling_invariant);
    CHECK(rep.overlap_w);

    spec.knob = WorldKnob::BreakCovariateShiftW;
    rep = check_assumptions(gen_world(spec));
    CHECK(!rep.labeling_invariant);
    CHECK(rep.max_label_gap > 1e-3);
    CHECK(rep.overlap_w);
    CHECK(rep.sufficiency);
}

TEST_CASE("identified risk equals true target risk under the assumptions") {
    Rng rng(100);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        WorldGenSpec spec;
        spec.x_card = 5;
        spec.w_card = 4;
        spec.y_card = 3;
        spec.seed = seed;
        const DiscreteWorld w = gen_world(spec);
        for (int k = 0; k < 5; ++k) {
            const TabularHypothesis h = random_values_hypothesis(w, rng);
            const double gap = std::abs(identified_target_risk(w, h, RiskLoss::Squared) -
                                        true_target_risk(w, h, RiskLoss::Squared));
            CHECK(gap <= 1e-10);
        }
    }
}

TEST_CASE("identified risk does not depend on the source X marginal") {
    WorldGenSpec spec;
    spec.seed = 42;
    DiscreteWorld w = gen_world(spec);
    Rng rng(5);
    const TabularHypothesis h = random_values_hypothesis(w, rng);
    const double before = identified_target_risk(w, h, RiskLoss::Squared);
    // Replace S(x) wholesale; the identified expression never touches it
    // (sufficiency makes S(y|w) independent of the mixing weights).
    w.source_px.assign(w.x_card, 1.0 / static_cast<double>(w.x_card));
    const double after = identified_target_risk(w, h, RiskLoss::Squared);
    CHECK(std::abs(before - after) <= 1e-12);
}

TEST_CASE("overlap violations make the identified risk refuse, naming w") {
    WorldGenSpec spec;
    spec.w_card = 3;
    spec.knob = WorldKnob::BreakOverlapW;
    spec.seed = 3;
    const DiscreteWorld w = gen_world(spec);
    const TabularHypothesis h = TabularHypothesis::from_values(
        std::vector<double>(w.x_card, 0.5));
    try {
        identified_target_risk(w, h, RiskLoss::Squared);
        FAIL("expected IdentificationError");
    } catch (const IdentificationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("w=2") != std::string::npos);
    }
    CHECK_THROWS_AS(optimal_hypothesis(w), IdentificationError);
}

TEST_CASE("optimal hypothesis reproduces the worked two-point values") {
    const DiscreteWorld w = two_point_world();
    const TabularHypothesis h = optimal_hypothesis(w);
    REQUIRE(h.is_values());
    CHECK(h.values[0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(h.values[1] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("deterministic labeling collapses the optimum to the label value") {
    DiscreteWorld w = two_point_world();
    for (std::size_t wi = 0; wi < 2; ++wi)
        for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t y = 0; y < 2; ++y) {
                const double v = y == wi ? 1.0 : 0.0;  // y = w with certainty
                w.py_ref(Domain::Source, wi, x, y) = v;
                w.py_ref(Domain::Target, wi, x, y) = v;
            }
    const TabularHypothesis h = optimal_hypothesis(w);
    CHECK(h.values[0] == doctest::Approx(0.0));
    CHECK(h.values[1] == doctest::Approx(1.0));
}

TEST_CASE("optimal hypothesis beats a fine value grid") {
    for (std::uint64_t seed : {std::uint64_t{1}, std::uint64_t{2}, std::uint64_t{3}}) {
        WorldGenSpec spec;
        spec.x_card = 3;
        spec.w_card = 3;
        spec.y_card = 2;
        spec.seed = seed;
        const DiscreteWorld w = gen_world(spec);
        const TabularHypothesis star = optimal_hypothesis(w);
        const double star_risk = identified_target_risk(w, star, RiskLoss::Squared);

        // Independent oracle: per-x grid search. The identified risk is
        // separable across x, so coordinate-wise minimization is exact.
        for (std::size_t x = 0; x < w.x_card; ++x) {
            TabularHypothesis probe = star;
            double best = star_risk;
            for (double v = 0.0; v <= 1.0 + 1e-9; v += 1e-3) {
                probe.values[x] = v;
                best = std::min(best, identified_target_risk(w, probe, RiskLoss::Squared));
            }
            CHECK(star_risk <= best + 1e-12);
        }
    }
}

TEST_CASE("relaxed bound at gamma 1 equals the identified risk, and scales") {
    WorldGenSpec spec;
    spec.seed = 9;
    const DiscreteWorld w = gen_world(spec);
    Rng rng(17);
    const TabularHypothesis h = random_values_hypothesis(w, rng);
    const double ident = identified_target_risk(w, h, RiskLoss::Squared);
    CHECK(std::abs(relaxed_sufficiency_bound(w, h, 1.0, RiskLoss::Squared) - ident) <= 1e-12);
    CHECK(std::abs(relaxed_sufficiency_bound(w, h, 2.0, RiskLoss::Squared) - 2.0 * ident) <=
          1e-12);
    CHECK_THROWS_AS(relaxed_sufficiency_bound(w, h, 0.5, RiskLoss::Squared), ValidationError);
}

TEST_CASE("minimal gamma is 1 under sufficiency and matches hand enumeration") {
    WorldGenSpec spec;
    spec.seed = 21;
    const DiscreteWorld sufficient = gen_world(spec);
    const GammaResult g = minimal_gamma(sufficient);
    CHECK(g.raw == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(g.clamped == doctest::Approx(1.0).epsilon(1e-9));

    spec.knob = WorldKnob::BreakSufficiency;
    spec.x_card = 2;
    spec.w_card = 2;
    spec.y_card = 2;
    const DiscreteWorld w = gen_world(spec);
    const GammaResult got = minimal_gamma(w);

    // Independent enumeration of both sups for every (w, y) on support.
    double expect = 1.0;
    for (std::size_t wi = 0; wi < w.w_card; ++wi) {
        const auto support_ratio_sup = [&](Domain d) {
            const std::vector<double> marg = w.marginal_w(d);
            std::vector<double> sups(w.y_card, 0.0);
            if (marg[wi] <= 1e-12) return sups;
            const std::vector<double> mix = w.py_given_w(d, wi);
            for (std::size_t x = 0; x < w.x_card; ++x) {
                const double px_w = w.px(d)[x] * w.pw_given_x(d).at(x, wi) / marg[wi];
                if (px_w <= 1e-12) continue;
                for (std::size_t y = 0; y < w.y_card; ++y)
                    if (mix[y] > 1e-12)
                        sups[y] = std::max(sups[y], w.py(d, wi, x, y) / mix[y]);
            }
            return sups;
        };
        const std::vector<double> t_sup = support_ratio_sup(Domain::Target);
        const std::vector<double> s_sup = support_ratio_sup(Domain::Source);
        for (std::size_t y = 0; y < w.y_card; ++y)
            if (t_sup[y] > 0.0 && s_sup[y] > 0.0)
                expect = std::max(expect, t_sup[y] / s_sup[y]);
    }
    CHECK(got.clamped == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("relaxed bound at minimal gamma covers the true risk") {
    Rng rng(55);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        WorldGenSpec spec;
        spec.seed = seed + 1000;
        spec.knob = seed % 2 == 0 ? WorldKnob::None : WorldKnob::BreakSufficiency;
        const DiscreteWorld w = gen_world(spec);
        const TabularHypothesis h = random_values_hypothesis(w, rng);
        const double g = minimal_gamma(w).clamped;
        CHECK(relaxed_sufficiency_bound(w, h, g, RiskLoss::Squared) >=
              true_target_risk(w, h, RiskLoss::Squared) - 1e-12);
    }
}

TEST_CASE("hypothesis json carries both forms and validates shape") {
    const TabularHypothesis vals = TabularHypothesis::from_values({0.25, 0.75});
    const TabularHypothesis back = hypothesis_from_json(hypothesis_to_json(vals));
    CHECK(back.is_values());
    CHECK(back.values == vals.values);

    Mat probs(2, 2);
    probs.a = {0.5, 0.5, 0.1, 0.9};
    const TabularHypothesis cls = TabularHypothesis::from_probs(probs);
    const TabularHypothesis back2 = hypothesis_from_json(hypothesis_to_json(cls));
    CHECK(!back2.is_values());
    CHECK(back2.class_probs == probs);

    CHECK_THROWS_AS(vals.validate(3, 2), ValidationError);
    Mat bad(1, 2);
    bad.a = {0.9, 0.9};
    CHECK_THROWS_AS(TabularHypothesis::from_probs(bad).validate(1, 2), ValidationError);
}
