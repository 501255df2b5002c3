#include "dalupi/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace dalupi {

AssumptionReport check_assumptions(const DiscreteWorld& world, double tol) {
    world.validate();
    AssumptionReport rep;
    rep.tolerance = tol;

    std::vector<double> sw = world.marginal_w(Domain::Source);
    std::vector<double> tw = world.marginal_w(Domain::Target);

    // Overlap: target W-mass implies source W-mass, both judged at tol.
    rep.overlap_w = true;
    for (std::size_t w = 0; w < world.w_card; ++w) {
        if (tw[w] > tol && !(sw[w] > tol)) {
            rep.overlap_w = false;
            rep.overlap_violations.push_back(w);
        }
    }

    // Labeling invariance over the joint W-support; marginal difference.
    rep.labeling_invariant = true;
    rep.marginals_differ = false;
    rep.max_label_gap = 0.0;
    for (std::size_t w = 0; w < world.w_card; ++w) {
        if (std::abs(tw[w] - sw[w]) > tol) rep.marginals_differ = true;
        if (!(tw[w] > tol && sw[w] > tol)) continue;
        std::vector<double> ty = world.py_given_w(Domain::Target, w);
        std::vector<double> sy = world.py_given_w(Domain::Source, w);
        for (std::size_t y = 0; y < world.y_card; ++y)
            rep.max_label_gap = std::max(rep.max_label_gap, std::abs(ty[y] - sy[y]));
    }
    if (rep.max_label_gap > tol) rep.labeling_invariant = false;

    // Sufficiency: P(y|w,x) constant in x over the support of each domain.
    rep.sufficiency = true;
    for (Domain d : {Domain::Source, Domain::Target}) {
        const std::vector<double>& pw = d == Domain::Source ? sw : tw;
        for (std::size_t w = 0; w < world.w_card; ++w) {
            if (!(pw[w] > tol)) continue;
            std::vector<double> mix = world.py_given_w(d, w);
            for (std::size_t x = 0; x < world.x_card; ++x) {
                if (!(world.px(d)[x] * world.pw_given_x(d).at(x, w) > tol)) continue;
                double gap = 0.0;
                for (std::size_t y = 0; y < world.y_card; ++y)
                    gap = std::max(gap, std::abs(world.py(d, w, x, y) - mix[y]));
                if (gap > tol) {
                    rep.sufficiency = false;
                    rep.sufficiency_violations.push_back({d, w, x, gap});
                }
            }
        }
    }
    return rep;
}

json assumption_report_to_json(const AssumptionReport& r) {
    json j;
    j["tolerance"] = r.tolerance;
    j["covariate_shift_w"] = {{"labeling_invariant", r.labeling_invariant},
                              {"marginals_differ", r.marginals_differ},
                              {"max_label_gap", r.max_label_gap}};
    json ov = json::array();
    for (std::size_t w : r.overlap_violations) ov.push_back(w);
    j["overlap_w"] = {{"holds", r.overlap_w}, {"violations", ov}};
    json sv = json::array();
    for (const SufficiencyViolation& v : r.sufficiency_violations)
        sv.push_back({{"domain", domain_name(v.domain)}, {"w", v.w}, {"x", v.x}, {"gap", v.gap}});
    j["sufficiency"] = {{"holds", r.sufficiency}, {"violations", sv}};
    return j;
}

TabularHypothesis TabularHypothesis::from_values(std::vector<double> v) {
    TabularHypothesis h;
    h.values = std::move(v);
    return h;
}

TabularHypothesis TabularHypothesis::from_probs(Mat probs) {
    TabularHypothesis h;
    h.class_probs = std::move(probs);
    return h;
}

TabularHypothesis TabularHypothesis::from_labels(const std::vector<std::size_t>& labels,
                                                 std::size_t y_card) {
    Mat p(labels.size(), y_card, 0.0);
    for (std::size_t x = 0; x < labels.size(); ++x) {
        if (labels[x] >= y_card) throw ValidationError("hypothesis label out of range");
        p.at(x, labels[x]) = 1.0;
    }
    return from_probs(std::move(p));
}

void TabularHypothesis::validate(std::size_t x_card, std::size_t y_card) const {
    if (is_values()) {
        if (values.size() != x_card) throw ValidationError("hypothesis: values length != x_card");
        for (double v : values)
            if (!std::isfinite(v)) throw ValidationError("hypothesis: non-finite value");
        return;
    }
    if (class_probs.rows != x_card || class_probs.cols != y_card)
        throw ValidationError("hypothesis: class_probs shape mismatch");
    for (std::size_t x = 0; x < x_card; ++x) {
        double s = 0.0;
        for (std::size_t y = 0; y < y_card; ++y) {
            double p = class_probs.at(x, y);
            if (!(p >= 0.0)) throw ValidationError("hypothesis: negative class probability");
            s += p;
        }
        if (std::abs(s - 1.0) > 1e-9)
            throw ValidationError("hypothesis: class row does not sum to 1");
    }
}

namespace {

// L(h(x), y) for one (x, y) cell under the requested loss.
struct LossEval {
    const DiscreteWorld& world;
    const TabularHypothesis& h;
    RiskLoss loss;

    LossEval(const DiscreteWorld& wd, const TabularHypothesis& hh, RiskLoss l)
        : world(wd), h(hh), loss(l) {
        h.validate(wd.x_card, wd.y_card);
        if (loss == RiskLoss::Squared && !h.is_values())
            throw ValidationError("squared loss requires a values-form hypothesis");
        if (loss == RiskLoss::ZeroOne && h.is_values())
            throw ValidationError("zero-one loss requires a classification-form hypothesis");
    }

    double operator()(std::size_t x, std::size_t y) const {
        if (loss == RiskLoss::Squared) {
            double d = h.values[x] - world.y_values[y];
            return d * d;
        }
        return 1.0 - h.class_probs.at(x, y);
    }
};

// Source label conditionals S(y|w) for every w, with overlap enforcement:
// any w carrying target mass must carry source mass.
std::vector<std::vector<double>> source_label_rows_checked(const DiscreteWorld& world) {
    std::vector<double> sw = world.marginal_w(Domain::Source);
    std::vector<double> tw = world.marginal_w(Domain::Target);
    std::vector<std::vector<double>> rows(world.w_card);
    for (std::size_t w = 0; w < world.w_card; ++w) {
        if (tw[w] > kSupportEps && !(sw[w] > kSupportEps))
            throw IdentificationError(
                "target risk unidentified: source has no mass at w=" + std::to_string(w) +
                " while the target does (overlap violated)");
        rows[w] = world.py_given_w(Domain::Source, w);
    }
    return rows;
}

}  // namespace

double domain_risk(const DiscreteWorld& world, Domain domain, const TabularHypothesis& h,
                   RiskLoss loss) {
    world.validate();
    LossEval L(world, h, loss);
    double risk = 0.0;
    for (std::size_t x = 0; x < world.x_card; ++x) {
        double px = world.px(domain)[x];
        if (px <= 0.0) continue;
        for (std::size_t w = 0; w < world.w_card; ++w) {
            double pwx = world.pw_given_x(domain).at(x, w);
            if (pwx <= 0.0) continue;
            for (std::size_t y = 0; y < world.y_card; ++y)
                risk += px * pwx * world.py(domain, w, x, y) * L(x, y);
        }
    }
    return risk;
}

double identified_target_risk(const DiscreteWorld& world, const TabularHypothesis& h,
                              RiskLoss loss) {
    world.validate();
    LossEval L(world, h, loss);
    std::vector<std::vector<double>> sy = source_label_rows_checked(world);
    double risk = 0.0;
    for (std::size_t x = 0; x < world.x_card; ++x) {
        double px = world.target_px[x];
        if (px <= 0.0) continue;
        for (std::size_t w = 0; w < world.w_card; ++w) {
            double pwx = world.target_pw_given_x.at(x, w);
            if (pwx <= 0.0) continue;
            for (std::size_t y = 0; y < world.y_card; ++y) {
                double p = sy[w][y];
                if (p <= 0.0) continue;
                risk += px * pwx * p * L(x, y);
            }
        }
    }
    return risk;
}

TabularHypothesis optimal_hypothesis(const DiscreteWorld& world) {
    world.validate();
    std::vector<std::vector<double>> sy = source_label_rows_checked(world);
    std::vector<double> cond_mean(world.w_card, 0.0);  // E_S[Y|w] under y_values
    for (std::size_t w = 0; w < world.w_card; ++w)
        for (std::size_t y = 0; y < world.y_card; ++y)
            cond_mean[w] += sy[w][y] * world.y_values[y];
    std::vector<double> h(world.x_card, 0.0);
    for (std::size_t x = 0; x < world.x_card; ++x)
        for (std::size_t w = 0; w < world.w_card; ++w)
            h[x] += world.target_pw_given_x.at(x, w) * cond_mean[w];
    return TabularHypothesis::from_values(std::move(h));
}

double relaxed_sufficiency_bound(const DiscreteWorld& world, const TabularHypothesis& h,
                                 double gamma, RiskLoss loss) {
    world.validate();
    if (!(gamma >= 1.0)) throw ValidationError("relaxed_sufficiency_bound: gamma must be >= 1");
    LossEval L(world, h, loss);
    std::vector<std::vector<double>> sy = source_label_rows_checked(world);
    std::vector<double> sw = world.marginal_w(Domain::Source);

    // Delta_gamma(w, y) = gamma * sup over source-support x of S(y|w,x)/S(y|w).
    Mat delta(world.w_card, world.y_card, 0.0);
    for (std::size_t w = 0; w < world.w_card; ++w) {
        if (!(sw[w] > kSupportEps)) continue;
        for (std::size_t y = 0; y < world.y_card; ++y) {
            double denom = sy[w][y];
            double sup = 0.0;
            for (std::size_t x = 0; x < world.x_card; ++x) {
                if (!(world.source_px[x] * world.source_pw_given_x.at(x, w) > kSupportEps))
                    continue;
                double num = world.py(Domain::Source, w, x, y);
                if (denom <= kSupportEps) {
                    if (num > kSupportEps)
                        throw ValidationError(
                            "relaxed_sufficiency_bound: S(y|w)=0 with S(y|w,x)>0 at w=" +
                            std::to_string(w) + ", y=" + std::to_string(y));
                    continue;
                }
                sup = std::max(sup, num / denom);
            }
            delta.at(w, y) = gamma * sup;
        }
    }

    double bound = 0.0;
    for (std::size_t x = 0; x < world.x_card; ++x) {
        double px = world.target_px[x];
        if (px <= 0.0) continue;
        for (std::size_t w = 0; w < world.w_card; ++w) {
            double pwx = world.target_pw_given_x.at(x, w);
            if (pwx <= 0.0) continue;
            for (std::size_t y = 0; y < world.y_card; ++y) {
                double p = sy[w][y];
                if (p <= 0.0) continue;
                bound += px * pwx * delta.at(w, y) * p * L(x, y);
            }
        }
    }
    return bound;
}

GammaResult minimal_gamma(const DiscreteWorld& world) {
    world.validate();
    std::vector<double> sw = world.marginal_w(Domain::Source);
    std::vector<double> tw = world.marginal_w(Domain::Target);
    double raw = 0.0;
    bool any = false;
    for (std::size_t w = 0; w < world.w_card; ++w) {
        if (!(tw[w] > kSupportEps)) continue;
        if (!(sw[w] > kSupportEps))
            throw IdentificationError("minimal_gamma: source has no mass at w=" +
                                      std::to_string(w) + " on the target support");
        std::vector<double> ty = world.py_given_w(Domain::Target, w);
        std::vector<double> syw = world.py_given_w(Domain::Source, w);
        for (std::size_t y = 0; y < world.y_card; ++y) {
            if (!(ty[y] > kSupportEps)) continue;  // no constraint from zero-mass labels
            if (!(syw[y] > kSupportEps))
                throw IdentificationError("minimal_gamma: S(y|w)=0 on target support at w=" +
                                          std::to_string(w) + ", y=" + std::to_string(y));
            double lhs = 0.0, rhs = 0.0;
            for (std::size_t x = 0; x < world.x_card; ++x) {
                if (world.target_px[x] * world.target_pw_given_x.at(x, w) > kSupportEps)
                    lhs = std::max(lhs, world.py(Domain::Target, w, x, y) / ty[y]);
                if (world.source_px[x] * world.source_pw_given_x.at(x, w) > kSupportEps)
                    rhs = std::max(rhs, world.py(Domain::Source, w, x, y) / syw[y]);
            }
            if (rhs <= 0.0)
                throw IdentificationError("minimal_gamma: degenerate source sup at w=" +
                                          std::to_string(w) + ", y=" + std::to_string(y));
            raw = std::max(raw, lhs / rhs);
            any = true;
        }
    }
    if (!any) raw = 1.0;
    return {raw, std::max(1.0, raw)};
}

json hypothesis_to_json(const TabularHypothesis& h) {
    json j;
    if (h.is_values())
        j["values"] = h.values;
    else
        j["class_probs"] = mat_to_json(h.class_probs);
    return j;
}

TabularHypothesis hypothesis_from_json(const json& j) {
    if (j.contains("values"))
        return TabularHypothesis::from_values(j.at("values").get<std::vector<double>>());
    if (j.contains("class_probs")) {
        const json& rows = j.at("class_probs");
        if (!rows.is_array() || rows.empty()) throw IoError("hypothesis: empty class_probs");
        return TabularHypothesis::from_probs(
            mat_from_json(rows, rows.at(0).size(), "class_probs"));
    }
    throw IoError("hypothesis: expected \"values\" or \"class_probs\"");
}

}  // namespace dalupi
