#include "dalupi/two_stage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace dalupi {

std::string setting_name(Setting s) {
    switch (s) {
        case Setting::SL_S: return "sl_s";
        case Setting::SL_T: return "sl_t";
        case Setting::LUPI: return "lupi";
        case Setting::DALUPI_T: return "dalupi_t";
        case Setting::DALUPI_ST: return "dalupi_st";
    }
    throw ValidationError("unknown setting");
}

Setting setting_from_name(const std::string& name) {
    if (name == "sl_s") return Setting::SL_S;
    if (name == "sl_t") return Setting::SL_T;
    if (name == "lupi") return Setting::LUPI;
    if (name == "dalupi_t") return Setting::DALUPI_T;
    if (name == "dalupi_st") return Setting::DALUPI_ST;
    throw ValidationError("unknown setting name: " + name);
}

std::vector<double> crop_phi(const double* image, const CropSpec& spec, double x_min,
                             double y_min, double x_max, double y_max) {
    if (spec.image_height < 2 || spec.image_width < 2 || spec.out_size == 0 ||
        spec.out_size > std::min(spec.image_height, spec.image_width))
        throw ValidationError(
            "crop spec needs image sides >= 2 and out_size in [1, min(image dims)]");
    const double w = static_cast<double>(spec.image_width);
    const double h = static_cast<double>(spec.image_height);

    auto fix_axis = [](double lo, double hi, double limit) {
        if (lo > hi) std::swap(lo, hi);
        lo = std::clamp(lo, 0.0, limit);
        hi = std::clamp(hi, 0.0, limit);
        if (hi - lo <= 1.0) {  // degenerate box: expand to 2 px about the center
            const double c = 0.5 * (lo + hi);
            lo = c - 1.0;
            hi = c + 1.0;
            if (lo < 0.0) { hi -= lo; lo = 0.0; }
            if (hi > limit) { lo -= hi - limit; hi = limit; }
        }
        return std::pair<double, double>(lo, hi);
    };
    const auto [lo_x, hi_x] = fix_axis(x_min, x_max, w);
    const auto [lo_y, hi_y] = fix_axis(y_min, y_max, h);

    const std::size_t p = spec.out_size;
    std::vector<double> out(p * p);
    const double sx = (hi_x - lo_x) / static_cast<double>(p);
    const double sy = (hi_y - lo_y) / static_cast<double>(p);
    for (std::size_t i = 0; i < p; ++i) {
        const double fy = lo_y + (static_cast<double>(i) + 0.5) * sy;
        std::size_t r = static_cast<std::size_t>(std::clamp(
            std::floor(fy), 0.0, static_cast<double>(spec.image_height - 1)));
        for (std::size_t j = 0; j < p; ++j) {
            const double fx = lo_x + (static_cast<double>(j) + 0.5) * sx;
            std::size_t c = static_cast<std::size_t>(std::clamp(
                std::floor(fx), 0.0, static_cast<double>(spec.image_width - 1)));
            out[i * p + j] = image[r * spec.image_width + c];
        }
    }
    return out;
}

std::vector<double> crop_phi(const std::vector<double>& image, const CropSpec& spec,
                             double x_min, double y_min, double x_max, double y_max) {
    if (image.size() != spec.image_height * spec.image_width)
        throw ValidationError("image size does not match crop spec");
    return crop_phi(image.data(), spec, x_min, y_min, x_max, y_max);
}

json stage_config_to_json(const StageConfig& c) {
    return json{{"train", train_config_to_json(c.train)}, {"hidden", c.hidden}};
}

StageConfig stage_config_from_json(const json& j) {
    StageConfig c;
    c.train = train_config_from_json(j.at("train"));
    c.hidden = j.at("hidden").get<std::size_t>();
    return c;
}

namespace {

Predictor make_stage(std::size_t in, std::size_t out, Head head, const StageConfig& cfg) {
    if (cfg.hidden > 0) return Predictor::make_mlp(in, cfg.hidden, out, head, cfg.train.seed);
    return Predictor::make_linear(in, out, head, cfg.train.seed);
}

Predictor fit_stage(const Dataset& data, Head head, TrainLoss loss, const StageConfig& cfg) {
    TrainConfig tc = cfg.train;
    tc.loss = loss;
    Predictor init = make_stage(data.x.cols, data.y.cols, head, cfg);
    return fit(init, data, tc).model;
}

const RoleData& require_rows(const SampleSet& data, Role r, Setting setting) {
    const RoleData& d = data.get(r);
    if (d.size() == 0)
        throw TrainingError("setting " + setting_name(setting) + " requires non-empty role " +
                            role_name(r));
    return d;
}

Mat vstack(const Mat& a, const Mat& b) {
    if (a.rows == 0) return b;
    if (b.rows == 0) return a;
    if (a.cols != b.cols) throw ValidationError("cannot stack matrices of different widths");
    Mat out(a.rows + b.rows, a.cols);
    std::copy(a.a.begin(), a.a.end(), out.a.begin());
    std::copy(b.a.begin(), b.a.end(), out.a.begin() + static_cast<std::ptrdiff_t>(a.a.size()));
    return out;
}

/// Normalized box targets in [0,1]^4 from the first four w columns.
Mat box_targets(const Mat& w, const CropSpec& spec) {
    if (w.cols < 4) throw ValidationError("box PI needs at least 4 w columns");
    Mat t(w.rows, 4);
    const double sw = static_cast<double>(spec.image_width);
    const double sh = static_cast<double>(spec.image_height);
    for (std::size_t i = 0; i < w.rows; ++i) {
        t.at(i, 0) = w.at(i, 0) / sw;
        t.at(i, 1) = w.at(i, 1) / sh;
        t.at(i, 2) = w.at(i, 2) / sw;
        t.at(i, 3) = w.at(i, 3) / sh;
    }
    return t;
}

/// Crop features of each x row at its ground-truth box.
Mat crop_features(const Mat& x, const Mat& w, const CropSpec& spec) {
    if (x.cols != spec.image_height * spec.image_width)
        throw ValidationError("x rows do not match the crop spec image size");
    Mat out(x.rows, spec.out_size * spec.out_size);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const std::vector<double> c =
            crop_phi(x.row(i), spec, w.at(i, 0), w.at(i, 1), w.at(i, 2), w.at(i, 3));
        out.set_row(i, c);
    }
    return out;
}

CropSpec crop_spec_of(const SampleSet& data) {
    CropSpec spec;
    spec.image_height = data.image_height;
    spec.image_width = data.image_width;
    spec.out_size = data.patch_size;
    return spec;
}

}  // namespace

std::vector<double> TwoStageModel::predict_box(const std::vector<double>& x_row) const {
    if (pi_kind != PiKind::SingleBox)
        throw ValidationError("predict_box is only defined for box PI");
    std::vector<double> b = f_hat.predict_one(x_row);
    b[0] *= static_cast<double>(crop.image_width);
    b[1] *= static_cast<double>(crop.image_height);
    b[2] *= static_cast<double>(crop.image_width);
    b[3] *= static_cast<double>(crop.image_height);
    return b;
}

Mat TwoStageModel::predict_proba(const Mat& x) const {
    validate();
    if (pi_kind == PiKind::None) return g_hat.forward(x);
    if (pi_kind == PiKind::BinaryAttributes) {
        Mat probs = f_hat.forward(x);
        for (double& v : probs.a) v = v >= attr_threshold ? 1.0 : 0.0;
        return g_hat.forward(probs);
    }
    // SingleBox: per-row predicted box -> crop features -> outcome stage.
    Mat feats(x.rows, crop.out_size * crop.out_size);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const std::vector<double> b = predict_box(x.row(i));
        feats.set_row(i, crop_phi(x.row(i), crop, b[0], b[1], b[2], b[3]));
    }
    return g_hat.forward(feats);
}

std::vector<std::size_t> TwoStageModel::predict(const Mat& x) const {
    const Mat probs = predict_proba(x);
    std::vector<std::size_t> labels(probs.rows);
    for (std::size_t i = 0; i < probs.rows; ++i) labels[i] = argmax_index(probs.row(i));
    return labels;
}

void TwoStageModel::validate() const {
    g_hat.validate();
    if (pi_kind == PiKind::None) {
        if (has_f) throw ValidationError("direct model must not carry a PI stage");
        return;
    }
    if (!has_f) throw ValidationError("PI-based model is missing its PI stage");
    f_hat.validate();
    if (pi_kind == PiKind::SingleBox) {
        if (f_hat.out_dim != 4) throw ValidationError("box stage must output 4 coordinates");
        if (crop.out_size == 0 || crop.image_height < 2 || crop.image_width < 2)
            throw ValidationError("box model has an invalid crop spec");
        if (g_hat.in_dim != crop.out_size * crop.out_size)
            throw ValidationError("outcome stage input does not match the crop size");
    } else {
        if (f_hat.out_dim != g_hat.in_dim)
            throw ValidationError("attribute stage output does not match the outcome stage");
        if (!(attr_threshold > 0.0 && attr_threshold < 1.0))
            throw ValidationError("attr_threshold must lie in (0, 1)");
    }
}

json two_stage_to_json(const TwoStageModel& m) {
    json j{{"version", "dalupi-twostage/1"},
           {"setting", setting_name(m.setting)},
           {"pi_kind", pi_kind_name(m.pi_kind)},
           {"attr_threshold", m.attr_threshold},
           {"crop", {{"image_height", m.crop.image_height},
                     {"image_width", m.crop.image_width},
                     {"out_size", m.crop.out_size}}},
           {"g_hat", model_to_json(m.g_hat)}};
    j["f_hat"] = m.has_f ? model_to_json(m.f_hat) : json(nullptr);
    return j;
}

TwoStageModel two_stage_from_json(const json& j) {
    expect_version(j, "dalupi-twostage/1", "two-stage model");
    TwoStageModel m;
    m.setting = setting_from_name(j.at("setting").get<std::string>());
    m.pi_kind = pi_kind_from_name(j.at("pi_kind").get<std::string>());
    m.attr_threshold = j.at("attr_threshold").get<double>();
    const json& c = j.at("crop");
    m.crop.image_height = c.at("image_height").get<std::size_t>();
    m.crop.image_width = c.at("image_width").get<std::size_t>();
    m.crop.out_size = c.at("out_size").get<std::size_t>();
    m.g_hat = model_from_json(j.at("g_hat"));
    if (!j.at("f_hat").is_null()) {
        m.has_f = true;
        m.f_hat = model_from_json(j.at("f_hat"));
    }
    m.validate();
    return m;
}

TwoStageModel fit_two_stage(const SampleSet& data, Setting setting, const StageConfig& f_cfg,
                            const StageConfig& g_cfg, double source_pi_weight) {
    if (setting == Setting::SL_S || setting == Setting::SL_T)
        throw ValidationError("setting " + setting_name(setting) +
                              " is a direct baseline; use fit_baseline");
    if (data.pi_kind == PiKind::None)
        throw ValidationError("two-stage fit needs privileged information in the data");
    if (!(source_pi_weight > 0.0))
        throw ValidationError("source_pi_weight must be > 0");

    TwoStageModel model;
    model.setting = setting;
    model.pi_kind = data.pi_kind;
    model.attr_threshold = 0.5;
    if (data.pi_kind == PiKind::SingleBox) model.crop = crop_spec_of(data);

    // PI stage: (x, w) pairs chosen by the setting.
    Dataset f_data;
    if (setting == Setting::LUPI) {
        const RoleData& src = require_rows(data, Role::SourceLabeled, setting);
        f_data.x = src.x;
        f_data.y = src.w;
    } else if (setting == Setting::DALUPI_T) {
        const RoleData& tp = require_rows(data, Role::TargetPi, setting);
        f_data.x = tp.x;
        f_data.y = tp.w;
    } else {  // DALUPI_ST
        const RoleData& src = require_rows(data, Role::SourceLabeled, setting);
        const RoleData& tp = require_rows(data, Role::TargetPi, setting);
        f_data.x = vstack(src.x, tp.x);
        f_data.y = vstack(src.w, tp.w);
        f_data.weight.assign(f_data.x.rows, 1.0);
        for (std::size_t i = 0; i < src.x.rows; ++i) f_data.weight[i] = source_pi_weight;
    }

    Head f_head;
    TrainLoss f_loss;
    if (data.pi_kind == PiKind::SingleBox) {
        f_data.y = box_targets(f_data.y, model.crop);
        f_head = Head::Identity;
        f_loss = TrainLoss::SquaredError;
    } else {
        f_head = Head::Sigmoid;
        f_loss = TrainLoss::BinaryCrossEntropy;
    }
    model.f_hat = fit_stage(f_data, f_head, f_loss, f_cfg);
    model.has_f = true;

    // Outcome stage: ground-truth source PI against source labels.
    const RoleData& src = require_rows(data, Role::SourceLabeled, setting);
    Dataset g_data;
    g_data.x = data.pi_kind == PiKind::SingleBox ? crop_features(src.x, src.w, model.crop)
                                                 : src.w;
    g_data.y = src.y;
    model.g_hat = fit_stage(g_data, Head::Softmax, TrainLoss::CrossEntropy, g_cfg);

    model.validate();
    return model;
}

TwoStageModel fit_baseline(const SampleSet& data, Setting setting, const StageConfig& cfg) {
    Role role;
    if (setting == Setting::SL_S) {
        role = Role::SourceLabeled;
    } else if (setting == Setting::SL_T) {
        role = Role::TargetLabeled;
    } else {
        throw ValidationError("setting " + setting_name(setting) +
                              " is PI-based; use fit_two_stage");
    }
    const RoleData& rows = require_rows(data, role, setting);
    Dataset d;
    d.x = rows.x;
    d.y = rows.y;

    TwoStageModel model;
    model.setting = setting;
    model.pi_kind = PiKind::None;
    model.g_hat = fit_stage(d, Head::Softmax, TrainLoss::CrossEntropy, cfg);
    model.validate();
    return model;
}

}  // namespace dalupi
