#pragma once

#include <vector>

#include "dalupi/world.hpp"

namespace dalupi {

/// Result of testing the three identification assumptions on a world.
///
/// covariate_shift_w: the label conditional given W agrees across domains
/// (labeling_invariant) while the W marginals differ (marginals_differ).
/// overlap_w: every w with target mass also has source mass.
/// sufficiency: within each domain, P(y|w,x) does not depend on x.
struct SufficiencyViolation {
    Domain domain;
    std::size_t w, x;
    double gap;  // infinity-norm distance from the mixture P(y|w)
};

struct AssumptionReport {
    bool labeling_invariant = false;
    bool marginals_differ = false;
    double max_label_gap = 0.0;  // max_w ||T(y|w) - S(y|w)||_inf over joint support
    bool overlap_w = false;
    std::vector<std::size_t> overlap_violations;  // w with T(w) > tol, S(w) <= tol
    bool sufficiency = false;
    std::vector<SufficiencyViolation> sufficiency_violations;
    double tolerance = 0.0;
};

AssumptionReport check_assumptions(const DiscreteWorld& world, double tol = 1e-9);

json assumption_report_to_json(const AssumptionReport& r);

/// A hypothesis X -> prediction given as a table over x. Exactly one form
/// is populated: `values` (one real per x, squared-loss risks) or
/// `class_probs` (row-stochastic x_card x y_card, zero-one risks; a
/// deterministic classifier is a one-hot row).
struct TabularHypothesis {
    std::vector<double> values;
    Mat class_probs;

    bool is_values() const { return !values.empty(); }

    static TabularHypothesis from_values(std::vector<double> v);
    static TabularHypothesis from_probs(Mat probs);
    static TabularHypothesis from_labels(const std::vector<std::size_t>& labels,
                                         std::size_t y_card);
    void validate(std::size_t x_card, std::size_t y_card) const;
};

enum class RiskLoss { Squared, ZeroOne };

/// Exact expected loss of h in one domain, by full enumeration of the
/// factored joint. Squared loss requires a values-form h and uses the
/// world's y_values embedding; zero-one requires classification form, and
/// a stochastic row scores 1 - P_h(y|x) (expected misclassification of the
/// randomized classifier).
double domain_risk(const DiscreteWorld& world, Domain domain, const TabularHypothesis& h,
                   RiskLoss loss);

inline double true_target_risk(const DiscreteWorld& world, const TabularHypothesis& h,
                               RiskLoss loss) {
    return domain_risk(world, Domain::Target, h, loss);
}

/// Target risk rewritten against quantities estimable without target
/// labels: sum_x T(x) sum_w T(w|x) sum_y S(y|w) L(h(x), y). Coincides with
/// the true target risk exactly when labeling invariance, overlap and
/// sufficiency hold w.r.t. W. Throws IdentificationError naming the first
/// violating w when the target puts W-mass where the source has none;
/// never extrapolates.
double identified_target_risk(const DiscreteWorld& world, const TabularHypothesis& h,
                              RiskLoss loss);

/// The squared-loss minimizer of the identified risk:
/// h*(x) = sum_w T(w|x) E_S[Y|w]. Values form.
TabularHypothesis optimal_hypothesis(const DiscreteWorld& world);

/// Upper bound on the target risk under relaxed sufficiency:
/// sum_x T(x) sum_w T(w|x) sum_y Delta_gamma(w,y) S(y|w) L(h(x), y) with
/// Delta_gamma(w,y) = gamma * sup_{x in source support of w} S(y|w,x)/S(y|w).
/// At gamma = 1 on a sufficiency-satisfying world this equals the
/// identified risk exactly.
double relaxed_sufficiency_bound(const DiscreteWorld& world, const TabularHypothesis& h,
                                 double gamma, RiskLoss loss);

/// Smallest gamma making the per-(w,y) sup-ratio inequality hold:
/// sup_{x: T(x|w)>0} T(y|w,x)/T(y|w) <= gamma * sup_{x: S(x|w)>0} S(y|w,x)/S(y|w).
/// `raw` is the exact max ratio (can be < 1 when only the source side is
/// insufficient); `clamped` = max(1, raw) is what the bound precondition
/// requires.
struct GammaResult {
    double raw;
    double clamped;
};

GammaResult minimal_gamma(const DiscreteWorld& world);

json hypothesis_to_json(const TabularHypothesis& h);
TabularHypothesis hypothesis_from_json(const json& j);

}  // namespace dalupi
