#include "dalupi/taskgen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dalupi/oracle.hpp"
#include "dalupi/rng.hpp"

namespace dalupi {

namespace {

// Child-stream ids, fixed so generated data is stable across releases.
constexpr std::uint64_t kStreamSourcePx = 1;
constexpr std::uint64_t kStreamTargetPx = 2;
constexpr std::uint64_t kStreamLabeling = 3;
constexpr std::uint64_t kStreamOutcome = 4;
constexpr std::uint64_t kStreamKnob = 5;

std::uint64_t role_stream(Role r) {
    return 10 * (static_cast<std::uint64_t>(r) + 1);
}

/// Strictly positive random distribution; `concentration` large -> flat,
/// small -> spiky. A 10% uniform mixture keeps every entry bounded away
/// from zero so overlap and row validity never fail by accident.
std::vector<double> draw_simplex(Rng& rng, std::size_t k, double concentration) {
    std::vector<double> p(k);
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double e = -std::log(1.0 - rng.next_double());
        p[i] = std::pow(e, 1.0 / concentration);
        total += p[i];
    }
    for (std::size_t i = 0; i < k; ++i)
        p[i] = 0.9 * p[i] / total + 0.1 / static_cast<double>(k);
    return p;
}

double linf_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

const char* knob_name(WorldKnob k) {
    switch (k) {
        case WorldKnob::None: return "none";
        case WorldKnob::BreakOverlapW: return "break_overlap_w";
        case WorldKnob::BreakSufficiency: return "break_sufficiency";
        case WorldKnob::BreakCovariateShiftW: return "break_covariate_shift_w";
    }
    throw ValidationError("unknown world knob");
}

WorldKnob knob_from_name(const std::string& s) {
    if (s == "none") return WorldKnob::None;
    if (s == "break_overlap_w") return WorldKnob::BreakOverlapW;
    if (s == "break_sufficiency") return WorldKnob::BreakSufficiency;
    if (s == "break_covariate_shift_w") return WorldKnob::BreakCovariateShiftW;
    throw ValidationError("unknown world knob name: " + s);
}

json world_gen_spec_to_json(const WorldGenSpec& s) {
    return json{{"x_card", s.x_card}, {"w_card", s.w_card},
                {"y_card", s.y_card}, {"knob", knob_name(s.knob)},
                {"concentration", s.concentration}, {"seed", s.seed}};
}

WorldGenSpec world_gen_spec_from_json(const json& j) {
    WorldGenSpec s;
    s.x_card = j.at("x_card").get<std::size_t>();
    s.w_card = j.at("w_card").get<std::size_t>();
    s.y_card = j.at("y_card").get<std::size_t>();
    s.knob = knob_from_name(j.at("knob").get<std::string>());
    s.concentration = j.at("concentration").get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
    return s;
}

DiscreteWorld gen_world(const WorldGenSpec& spec) {
    if (spec.x_card < 2 || spec.w_card < 2 || spec.y_card < 2)
        throw ValidationError("world generation needs every cardinality >= 2");
    if (!(spec.concentration > 0.0))
        throw ValidationError("concentration must be > 0");

    Rng base(spec.seed);
    DiscreteWorld w;
    w.x_card = spec.x_card;
    w.w_card = spec.w_card;
    w.y_card = spec.y_card;
    w.y_values = DiscreteWorld::default_y_values(spec.y_card);

    Rng src_px_rng = base.split(kStreamSourcePx);
    w.source_px = draw_simplex(src_px_rng, spec.x_card, spec.concentration);

    // Shared labeling P(w|x) and outcome rows c(y|w): with identical
    // conditionals in both domains, labeling invariance and sufficiency hold
    // by construction and only the knob below can break them.
    Rng lab_rng = base.split(kStreamLabeling);
    Rng out_rng = base.split(kStreamOutcome);
    Mat c_yw(spec.w_card, spec.y_card);
    for (std::size_t wi = 0; wi < spec.w_card; ++wi)
        c_yw.set_row(wi, draw_simplex(out_rng, spec.y_card, spec.concentration));

    // Target P(x): redraw until the W marginals visibly differ, so the
    // "marginals differ" half of covariate shift holds with a margin. A
    // labeling whose rows are nearly identical makes the W marginal blind to
    // P(x), so when the P(x) attempts run out the labeling itself is redrawn.
    Rng tgt_px_base = base.split(kStreamTargetPx);
    for (std::uint64_t round = 0;; ++round) {
        if (round >= 20)
            throw std::logic_error("could not separate the W marginals in 20 labeling rounds");
        Mat pw(spec.x_card, spec.w_card);
        for (std::size_t x = 0; x < spec.x_card; ++x)
            pw.set_row(x, draw_simplex(lab_rng, spec.w_card, spec.concentration));
        w.source_pw_given_x = pw;
        w.target_pw_given_x = pw;
        bool separated = false;
        for (std::uint64_t attempt = 0; attempt < 100 && !separated; ++attempt) {
            Rng r = tgt_px_base.split(round * 100 + attempt);
            w.target_px = draw_simplex(r, spec.x_card, spec.concentration);
            separated =
                linf_diff(w.marginal_w(Domain::Source), w.marginal_w(Domain::Target)) >= 1e-3;
        }
        if (separated) break;
    }

    auto broadcast_outcome = [&](Domain d, const Mat& table) {
        for (std::size_t wi = 0; wi < spec.w_card; ++wi)
            for (std::size_t x = 0; x < spec.x_card; ++x)
                for (std::size_t y = 0; y < spec.y_card; ++y)
                    w.py_ref(d, wi, x, y) = table.at(wi, y);
    };
    w.source_py_given_wx.assign(spec.w_card * spec.x_card * spec.y_card, 0.0);
    w.target_py_given_wx.assign(spec.w_card * spec.x_card * spec.y_card, 0.0);
    broadcast_outcome(Domain::Source, c_yw);
    broadcast_outcome(Domain::Target, c_yw);

    Rng knob_rng = base.split(kStreamKnob);
    switch (spec.knob) {
        case WorldKnob::None:
            break;
        case WorldKnob::BreakOverlapW: {
            // Remove all source mass from the last w; the target keeps its.
            const std::size_t w_star = spec.w_card - 1;
            for (std::size_t x = 0; x < spec.x_card; ++x) {
                w.source_pw_given_x.at(x, w_star) = 0.0;
                double s = 0.0;
                for (std::size_t wi = 0; wi < spec.w_card; ++wi)
                    s += w.source_pw_given_x.at(x, wi);
                for (std::size_t wi = 0; wi < spec.w_card; ++wi)
                    w.source_pw_given_x.at(x, wi) /= s;
            }
            break;
        }
        case WorldKnob::BreakSufficiency: {
            // P_d(y|w,x) = c(y|w) + s_{d,w} (x - mu_{d,w}) v_y with v summing
            // to zero and the deviation centered under P_d(x|w), so both
            // domains keep P_d(y|w) = c(y|w) exactly: covariate shift and
            // overlap are untouched while Y gains a real dependence on X.
            std::vector<double> v(spec.y_card, 0.0);
            v[0] = 1.0;
            v[1] = -1.0;
            for (Domain d : {Domain::Source, Domain::Target}) {
                const std::vector<double> marg = w.marginal_w(d);
                for (std::size_t wi = 0; wi < spec.w_card; ++wi) {
                    double mu = 0.0;
                    for (std::size_t x = 0; x < spec.x_card; ++x)
                        mu += w.px(d)[x] * w.pw_given_x(d).at(x, wi) / marg[wi] *
                              static_cast<double>(x);
                    double max_dev = 0.0;
                    double min_c = 1.0;
                    for (std::size_t x = 0; x < spec.x_card; ++x)
                        max_dev = std::max(max_dev, std::abs(static_cast<double>(x) - mu));
                    for (std::size_t y = 0; y < spec.y_card; ++y)
                        min_c = std::min(min_c, c_yw.at(wi, y));
                    const double s = 0.5 * min_c / max_dev;
                    for (std::size_t x = 0; x < spec.x_card; ++x) {
                        const double dev = static_cast<double>(x) - mu;
                        for (std::size_t y = 0; y < spec.y_card; ++y)
                            w.py_ref(d, wi, x, y) = c_yw.at(wi, y) + s * dev * v[y];
                    }
                }
            }
            break;
        }
        case WorldKnob::BreakCovariateShiftW: {
            // Give the target a different outcome table (still x-free, so
            // sufficiency survives; only labeling invariance dies).
            Mat shifted(spec.w_card, spec.y_card);
            for (std::uint64_t attempt = 0;; ++attempt) {
                if (attempt >= 100)
                    throw std::logic_error("could not separate the outcome tables");
                Rng r = knob_rng.split(attempt);
                double gap = 0.0;
                for (std::size_t wi = 0; wi < spec.w_card; ++wi) {
                    const std::vector<double> fresh =
                        draw_simplex(r, spec.y_card, spec.concentration);
                    for (std::size_t y = 0; y < spec.y_card; ++y) {
                        shifted.at(wi, y) = 0.5 * c_yw.at(wi, y) + 0.5 * fresh[y];
                        gap = std::max(gap, std::abs(shifted.at(wi, y) - c_yw.at(wi, y)));
                    }
                }
                if (gap >= 1e-3) break;
            }
            broadcast_outcome(Domain::Target, shifted);
            break;
        }
    }

    w.validate();
    const AssumptionReport rep = check_assumptions(w);
    const bool expected =
        (spec.knob == WorldKnob::None &&
         rep.labeling_invariant && rep.marginals_differ && rep.overlap_w && rep.sufficiency) ||
        (spec.knob == WorldKnob::BreakOverlapW &&
         rep.labeling_invariant && rep.marginals_differ && !rep.overlap_w && rep.sufficiency) ||
        (spec.knob == WorldKnob::BreakSufficiency &&
         rep.labeling_invariant && rep.marginals_differ && rep.overlap_w && !rep.sufficiency) ||
        (spec.knob == WorldKnob::BreakCovariateShiftW &&
         !rep.labeling_invariant && rep.marginals_differ && rep.overlap_w && rep.sufficiency);
    if (!expected)
        throw std::logic_error("generated world does not match its knob: " +
                               std::string(knob_name(spec.knob)));
    return w;
}

std::size_t RoleCounts::of(Role r) const {
    switch (r) {
        case Role::SourceLabeled: return source_labeled;
        case Role::TargetPi: return target_pi;
        case Role::TargetUnlabeled: return target_unlabeled;
        case Role::TargetLabeled: return target_labeled;
        case Role::TestSource: return test_source;
        case Role::TestTarget: return test_target;
    }
    throw ValidationError("unknown role");
}

json role_counts_to_json(const RoleCounts& c) {
    return json{{"source_labeled", c.source_labeled},
                {"target_pi", c.target_pi},
                {"target_unlabeled", c.target_unlabeled},
                {"target_labeled", c.target_labeled},
                {"test_source", c.test_source},
                {"test_target", c.test_target}};
}

RoleCounts role_counts_from_json(const json& j) {
    RoleCounts c;
    c.source_labeled = j.at("source_labeled").get<std::size_t>();
    c.target_pi = j.at("target_pi").get<std::size_t>();
    c.target_unlabeled = j.at("target_unlabeled").get<std::size_t>();
    c.target_labeled = j.at("target_labeled").get<std::size_t>();
    c.test_source = j.at("test_source").get<std::size_t>();
    c.test_target = j.at("test_target").get<std::size_t>();
    return c;
}

json skew_task_spec_to_json(const SkewTaskSpec& s) {
    return json{{"num_classes", s.num_classes},
                {"epsilon", s.epsilon},
                {"image_size", s.image_size},
                {"patch_size", s.patch_size},
                {"num_backgrounds", s.num_backgrounds},
                {"noise_sigma", s.noise_sigma},
                {"background_amplitude", s.background_amplitude},
                {"counts", role_counts_to_json(s.counts)},
                {"seed", s.seed}};
}

SkewTaskSpec skew_task_spec_from_json(const json& j) {
    SkewTaskSpec s;
    s.num_classes = j.at("num_classes").get<std::size_t>();
    s.epsilon = j.at("epsilon").get<double>();
    s.image_size = j.at("image_size").get<std::size_t>();
    s.patch_size = j.at("patch_size").get<std::size_t>();
    s.num_backgrounds = j.at("num_backgrounds").get<std::size_t>();
    s.noise_sigma = j.at("noise_sigma").get<double>();
    s.background_amplitude = j.at("background_amplitude").get<double>();
    s.counts = role_counts_from_json(j.at("counts"));
    s.seed = j.at("seed").get<std::uint64_t>();
    return s;
}

namespace {

/// Deterministic +-1 texture family: index selects stripe/checker mode and
/// period, so any two distinct backgrounds differ on a constant fraction of
/// pixels and are linearly separable with a large margin.
double texture_sign(std::size_t b, std::size_t r, std::size_t c) {
    const std::size_t period = std::size_t{4} << (b / 3);
    const std::size_t mode = b % 3;
    std::size_t phase = 0;
    if (mode == 0) phase = r / period + c / period;
    if (mode == 1) phase = c / period;
    if (mode == 2) phase = r / period;
    return phase % 2 == 0 ? 1.0 : -1.0;
}

struct SkewSample {
    std::vector<double> x;
    std::vector<double> w;  // box + patch pixels
    std::size_t y = 0, background = 0, row = 0, col = 0;
};

SkewSample draw_skew_sample(const SkewTaskSpec& spec, bool source_domain, Rng rng,
                            const std::vector<std::vector<double>>& skew_rows,
                            const std::vector<double>& uniform_row) {
    const std::size_t s = spec.image_size, p = spec.patch_size, c = spec.num_classes;
    SkewSample out;
    out.y = rng.categorical(uniform_row);
    // One categorical draw in either domain keeps the stream layout (and so
    // every later pixel) independent of epsilon.
    out.background = rng.categorical(source_domain ? skew_rows[out.y] : uniform_row);
    const double span = static_cast<double>(s - p + 1);
    out.row = static_cast<std::size_t>(std::min(span - 1.0, std::floor(rng.next_double() * span)));
    out.col = static_cast<std::size_t>(std::min(span - 1.0, std::floor(rng.next_double() * span)));

    out.x.resize(s * s);
    const double level = static_cast<double>(out.y) / static_cast<double>(c - 1);
    for (std::size_t r = 0; r < s; ++r) {
        for (std::size_t cc = 0; cc < s; ++cc) {
            double v = spec.background_amplitude * texture_sign(out.background, r, cc);
            if (r >= out.row && r < out.row + p && cc >= out.col && cc < out.col + p) {
                const bool frame = r == out.row || r == out.row + p - 1 || cc == out.col ||
                                   cc == out.col + p - 1;
                v = frame ? 1.0 : level;  // patch overwrites the texture
            }
            out.x[r * s + cc] = v + spec.noise_sigma * rng.normal();
        }
    }

    out.w.reserve(4 + p * p);
    out.w.push_back(static_cast<double>(out.col));
    out.w.push_back(static_cast<double>(out.row));
    out.w.push_back(static_cast<double>(out.col + p));
    out.w.push_back(static_cast<double>(out.row + p));
    for (std::size_t r = out.row; r < out.row + p; ++r)
        for (std::size_t cc = out.col; cc < out.col + p; ++cc)
            out.w.push_back(out.x[r * s + cc]);  // ground truth = pixels after noise
    return out;
}

std::vector<double> one_hot(std::size_t k, std::size_t card) {
    std::vector<double> v(card, 0.0);
    v[k] = 1.0;
    return v;
}

}  // namespace

SampleSet gen_skew_task(const SkewTaskSpec& spec) {
    const std::size_t c = spec.num_classes;
    if (c < 2) throw ValidationError("skew task needs at least 2 classes");
    if (spec.num_backgrounds != c)
        throw ValidationError("skew task requires num_backgrounds == num_classes");
    if (!(spec.epsilon >= 1.0 / static_cast<double>(c) - 1e-12 && spec.epsilon <= 1.0 + 1e-12))
        throw ValidationError("epsilon must lie in [1/num_classes, 1]");
    if (spec.patch_size < 3 || spec.patch_size >= spec.image_size)
        throw ValidationError("patch_size must lie in [3, image_size)");
    if (spec.noise_sigma < 0.0 || spec.background_amplitude < 0.0)
        throw ValidationError("noise_sigma and background_amplitude must be >= 0");

    std::vector<std::vector<double>> skew_rows(c, std::vector<double>(c));
    for (std::size_t y = 0; y < c; ++y)
        for (std::size_t b = 0; b < c; ++b)
            skew_rows[y][b] =
                b == y ? spec.epsilon : (1.0 - spec.epsilon) / static_cast<double>(c - 1);
    const std::vector<double> uniform_row(c, 1.0 / static_cast<double>(c));

    SampleSet set;
    set.pi_kind = PiKind::SingleBox;
    set.image_height = spec.image_size;
    set.image_width = spec.image_size;
    set.patch_size = spec.patch_size;
    set.x_dim = spec.image_size * spec.image_size;
    set.w_dim = 4 + spec.patch_size * spec.patch_size;
    set.y_dim = c;
    set.meta = json{{"task", "skew"},
                    {"num_classes", c},
                    {"epsilon", spec.epsilon},
                    {"skew_table", json::array()},
                    {"roles", json::object()}};
    for (std::size_t y = 0; y < c; ++y) set.meta["skew_table"].push_back(skew_rows[y]);

    Rng base(spec.seed);
    for (Role role : kAllRoles) {
        const std::size_t n = spec.counts.of(role);
        const bool source_domain = role == Role::SourceLabeled || role == Role::TestSource;
        const bool with_w = role == Role::SourceLabeled || role == Role::TargetPi;
        const bool with_y = role == Role::SourceLabeled || role == Role::TargetLabeled ||
                            role == Role::TestSource || role == Role::TestTarget;
        RoleData data;
        data.x = Mat(n, set.x_dim);
        data.w = with_w ? Mat(n, set.w_dim) : Mat();
        data.y = with_y ? Mat(n, c) : Mat();
        json side{{"y", json::array()}, {"background", json::array()}, {"box", json::array()}};
        Rng role_rng = base.split(role_stream(role));
        for (std::size_t i = 0; i < n; ++i) {
            const SkewSample smp =
                draw_skew_sample(spec, source_domain, role_rng.split(i), skew_rows, uniform_row);
            data.x.set_row(i, smp.x);
            if (with_w) data.w.set_row(i, smp.w);
            if (with_y) data.y.set_row(i, one_hot(smp.y, c));
            side["y"].push_back(smp.y);
            side["background"].push_back(smp.background);
            side["box"].push_back(json::array({smp.col, smp.row, smp.col + spec.patch_size,
                                               smp.row + spec.patch_size}));
        }
        set.set_role(role, std::move(data));
        set.meta["roles"][role_name(role)] = std::move(side);
    }
    set.validate();
    return set;
}

json attribute_task_spec_to_json(const AttributeTaskSpec& s) {
    return json{{"attr_dim", s.attr_dim},
                {"shift", s.shift},
                {"noise_sigma", s.noise_sigma},
                {"counts", role_counts_to_json(s.counts)},
                {"seed", s.seed}};
}

AttributeTaskSpec attribute_task_spec_from_json(const json& j) {
    AttributeTaskSpec s;
    s.attr_dim = j.at("attr_dim").get<std::size_t>();
    s.shift = j.at("shift").get<double>();
    s.noise_sigma = j.at("noise_sigma").get<double>();
    s.counts = role_counts_from_json(j.at("counts"));
    s.seed = j.at("seed").get<std::uint64_t>();
    return s;
}

namespace {

double attr_beta(std::size_t j) {
    static const double base[7] = {1.2, -0.8, 1.0, -1.1, 0.9, 0.7, -1.3};
    return base[j % 7];
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

SampleSet gen_attribute_task(const AttributeTaskSpec& spec) {
    const std::size_t d = spec.attr_dim;
    if (d < 2) throw ValidationError("attribute task needs attr_dim >= 2");
    if (spec.shift < 0.0 || spec.shift > 1.0) throw ValidationError("shift must lie in [0, 1]");
    if (spec.noise_sigma < 0.0) throw ValidationError("noise_sigma must be >= 0");

    std::vector<double> p_src(d), p_tgt(d);
    for (std::size_t j = 0; j < d; ++j) {
        p_src[j] = 0.35 + 0.3 * static_cast<double>(j) / static_cast<double>(d - 1);
        const double delta = (j % 2 == 0 ? 1.0 : -1.0) * 0.25 * spec.shift;
        p_tgt[j] = std::clamp(p_src[j] + delta, 0.05, 0.95);
    }

    SampleSet set;
    set.pi_kind = PiKind::BinaryAttributes;
    set.attr_dim = d;
    set.x_dim = 2 * d;
    set.w_dim = d;
    set.y_dim = 2;
    set.meta = json{{"task", "attributes"},
                    {"num_classes", 2},
                    {"shift", spec.shift},
                    {"p_w_source", p_src},
                    {"p_w_target", p_tgt},
                    {"roles", json::object()}};

    Rng base(spec.seed);
    for (Role role : kAllRoles) {
        const std::size_t n = spec.counts.of(role);
        const bool source_domain = role == Role::SourceLabeled || role == Role::TestSource;
        const bool with_w = role == Role::SourceLabeled || role == Role::TargetPi;
        const bool with_y = role == Role::SourceLabeled || role == Role::TargetLabeled ||
                            role == Role::TestSource || role == Role::TestTarget;
        const std::vector<double>& pw = source_domain ? p_src : p_tgt;
        const double offset = source_domain ? 2.0 : -2.0;
        RoleData data;
        data.x = Mat(n, set.x_dim);
        data.w = with_w ? Mat(n, d) : Mat();
        data.y = with_y ? Mat(n, 2) : Mat();
        json side{{"y", json::array()}};
        Rng role_rng = base.split(role_stream(role));
        for (std::size_t i = 0; i < n; ++i) {
            Rng rng = role_rng.split(i);
            std::vector<double> w(d);
            for (std::size_t j = 0; j < d; ++j) w[j] = rng.next_double() < pw[j] ? 1.0 : 0.0;
            double z = 0.1;
            for (std::size_t j = 0; j < d; ++j) z += attr_beta(j) * (2.0 * w[j] - 1.0);
            const std::size_t y = rng.next_double() < sigmoid(z) ? 1 : 0;
            std::vector<double> x(2 * d);
            // Informative block: shared meaning in both domains. Redundant
            // block: reversed layout and opposite offset in the target, so a
            // source shortcut through it points the wrong way at test time.
            for (std::size_t j = 0; j < d; ++j)
                x[j] = (2.0 * w[j] - 1.0) + spec.noise_sigma * rng.normal();
            for (std::size_t j = 0; j < d; ++j) {
                const std::size_t src = source_domain ? j : d - 1 - j;
                x[d + j] = (2.0 * w[src] - 1.0) + offset + spec.noise_sigma * rng.normal();
            }
            data.x.set_row(i, x);
            if (with_w) data.w.set_row(i, w);
            if (with_y) data.y.set_row(i, one_hot(y, 2));
            side["y"].push_back(y);
        }
        set.set_role(role, std::move(data));
        set.meta["roles"][role_name(role)] = std::move(side);
    }
    set.validate();
    return set;
}

SampleSet sample_world_set(const DiscreteWorld& world, const RoleCounts& counts,
                           std::uint64_t seed) {
    world.validate();
    SampleSet set;
    set.pi_kind = PiKind::BinaryAttributes;  // one-hot w is a valid binary PI
    set.attr_dim = world.w_card;
    set.x_dim = world.x_card;
    set.w_dim = world.w_card;
    set.y_dim = world.y_card;
    set.meta = json{{"task", "world"}, {"num_classes", world.y_card}, {"roles", json::object()}};

    Rng base(seed);
    for (Role role : kAllRoles) {
        const std::size_t n = counts.of(role);
        const bool source_domain = role == Role::SourceLabeled || role == Role::TestSource;
        const bool with_w = role == Role::SourceLabeled || role == Role::TargetPi;
        const bool with_y = role == Role::SourceLabeled || role == Role::TargetLabeled ||
                            role == Role::TestSource || role == Role::TestTarget;
        const std::vector<Triple> draws =
            sample_world(world, source_domain ? Domain::Source : Domain::Target, n,
                         base.split(role_stream(role)).seed());
        RoleData data;
        data.x = Mat(n, world.x_card);
        data.w = with_w ? Mat(n, world.w_card) : Mat();
        data.y = with_y ? Mat(n, world.y_card) : Mat();
        json side{{"x", json::array()}, {"w", json::array()}, {"y", json::array()}};
        for (std::size_t i = 0; i < n; ++i) {
            const auto [x, w, y] = draws[i];
            data.x.set_row(i, one_hot(x, world.x_card));
            if (with_w) data.w.set_row(i, one_hot(w, world.w_card));
            if (with_y) data.y.set_row(i, one_hot(y, world.y_card));
            side["x"].push_back(x);
            side["w"].push_back(w);
            side["y"].push_back(y);
        }
        set.set_role(role, std::move(data));
        set.meta["roles"][role_name(role)] = std::move(side);
    }
    set.validate();
    return set;
}

}  // namespace dalupi
