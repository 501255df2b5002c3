#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dalupi/common.hpp"
#include "dalupi/io.hpp"
#include "dalupi/learners.hpp"
#include "dalupi/samples.hpp"

namespace dalupi {

/// Training settings. SL_S and SL_T fit a direct x -> y predictor on
/// source / target labels (SL_T is an oracle baseline: target labels are
/// never available to the adaptive settings). LUPI fits the two-stage
/// estimator with source PI only, DALUPI_T with target PI only, DALUPI_ST
/// with both pooled.
enum class Setting { SL_S, SL_T, LUPI, DALUPI_T, DALUPI_ST };

std::string setting_name(Setting s);
Setting setting_from_name(const std::string& name);

/// Geometry for the crop feature map used with box-valued PI.
struct CropSpec {
    std::size_t image_height = 0;
    std::size_t image_width = 0;
    std::size_t out_size = 0;  // output is out_size x out_size, row-major
};

/// Nearest-neighbor crop of `image` (row-major height x width) to the box
/// (x_min, y_min, x_max, y_max) in pixel units, resampled to out_size^2.
/// Coordinates are clamped to the image; boxes thinner than 2 px on a side
/// are expanded to 2 px about their center (shifted back inside if needed),
/// so the map is total: every real-valued box yields a valid crop.
std::vector<double> crop_phi(const double* image, const CropSpec& spec, double x_min,
                             double y_min, double x_max, double y_max);
std::vector<double> crop_phi(const std::vector<double>& image, const CropSpec& spec,
                             double x_min, double y_min, double x_max, double y_max);

/// Per-stage knobs: `hidden` = 0 gives a linear stage, otherwise a one
/// hidden layer ReLU network of that width. Loss and head are forced by
/// the stage's job and PI kind; the `loss` field of `train` is ignored.
struct StageConfig {
    TrainConfig train;
    std::size_t hidden = 0;
};

json stage_config_to_json(const StageConfig& c);
StageConfig stage_config_from_json(const json& j);

/// A fitted predictor. For PI-based settings it is the composition
/// g(phi(x, f(x))): f maps the input to PI (a box in normalized
/// coordinates, or attribute probabilities), phi turns box PI into crop
/// features (identity for attributes, with probabilities thresholded at
/// attr_threshold), and g maps PI features to class probabilities. For
/// the direct baselines only g is present and maps x straight to y.
struct TwoStageModel {
    Setting setting = Setting::SL_S;
    PiKind pi_kind = PiKind::None;
    CropSpec crop;
    double attr_threshold = 0.5;
    bool has_f = false;
    Predictor f_hat;
    Predictor g_hat;

    /// Box predicted by f for one input row, denormalized to pixel units.
    std::vector<double> predict_box(const std::vector<double>& x_row) const;
    /// Class probabilities, one row per input row.
    Mat predict_proba(const Mat& x) const;
    /// Argmax class labels.
    std::vector<std::size_t> predict(const Mat& x) const;

    std::size_t num_classes() const { return g_hat.out_dim; }
    void validate() const;
};

json two_stage_to_json(const TwoStageModel& m);
TwoStageModel two_stage_from_json(const json& j);

/// Fits the two-stage estimator. The PI stage f is trained on (x, w)
/// pairs chosen by the setting: LUPI uses source_labeled, DALUPI_T uses
/// target_pi, DALUPI_ST pools both with source rows weighted by
/// source_pi_weight. The outcome stage g is always trained on
/// source_labeled ground-truth PI (crops of the true boxes for box PI)
/// against the source labels. Throws if the setting is a direct baseline
/// or a required role is empty.
TwoStageModel fit_two_stage(const SampleSet& data, Setting setting, const StageConfig& f_cfg,
                            const StageConfig& g_cfg, double source_pi_weight = 1.0);

/// Fits a direct x -> y classifier: SL_S on source_labeled, SL_T on
/// target_labeled. Throws for the PI-based settings.
TwoStageModel fit_baseline(const SampleSet& data, Setting setting, const StageConfig& cfg);

}  // namespace dalupi
