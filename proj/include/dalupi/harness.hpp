#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dalupi/taskgen.hpp"
#include "dalupi/two_stage.hpp"

namespace dalupi {

enum class Metric { Accuracy, Auc };

const char* metric_name(Metric m);
Metric metric_from_name(const std::string& s);

/// The data roles a setting is allowed to read while fitting. The harness
/// snapshots access counters around every fit and fails the cell if any
/// other role was touched; test sets are never permitted.
std::vector<Role> permitted_roles(Setting s);

/// Task to run: a generator spec (regenerated per cell with the cell's
/// seed and sweep value) or an inline serialized sample set.
struct TaskRef {
    std::string kind;  // "skew" | "attributes" | "inline"
    SkewTaskSpec skew;
    AttributeTaskSpec attributes;
    json inline_samples;  // "dalupi-samples/1" payload when kind == "inline"
};

json task_ref_to_json(const TaskRef& t);
TaskRef task_ref_from_json(const json& j);

/// Optional one-dimensional parameter sweep; `parameter` must name a knob
/// of the task generator ("epsilon" for skew, "shift" for attributes).
struct SweepSpec {
    std::string parameter;
    std::vector<double> values;
};

struct ExperimentSpec {
    std::string name = "experiment";
    TaskRef task;
    std::vector<Setting> settings;
    std::optional<SweepSpec> sweep;
    std::vector<std::uint64_t> seeds;
    StageConfig f_stage, g_stage, baseline_stage;
    double source_pi_weight = 1.0;
    std::vector<Metric> metrics{Metric::Accuracy, Metric::Auc};
    int bootstrap_resamples = 1000;
    double ci_level = 0.95;
};

json experiment_spec_to_json(const ExperimentSpec& s);
ExperimentSpec experiment_spec_from_json(const json& j);

struct MetricRecord {
    Domain split = Domain::Source;  // which test set
    Metric metric = Metric::Accuracy;
    double value = 0.0;
};

struct CellResult {
    Setting setting = Setting::SL_S;
    std::optional<double> sweep_value;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;  // diagnostic when !ok
    std::vector<MetricRecord> values;
};

struct AggregateRecord {
    Setting setting = Setting::SL_S;
    std::optional<double> sweep_value;
    Domain split = Domain::Source;
    Metric metric = Metric::Accuracy;
    std::size_t n = 0;  // number of succeeded seeds aggregated
    double mean = 0.0, lower = 0.0, upper = 0.0;
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::string spec_hash;  // fingerprint of the canonical spec JSON
    std::string software_version;
    std::vector<CellResult> cells;
    std::vector<AggregateRecord> aggregates;
    bool all_ok = false;
};

/// All configuration problems, empty when the spec is runnable. Collected
/// exhaustively so a bad spec reports everything at once, before any
/// training starts.
std::vector<std::string> preflight(const ExperimentSpec& spec);

/// Runs the (setting x sweep x seed) grid. Cells are independent and run
/// in parallel; a failing cell is recorded with its diagnostic instead of
/// aborting the run. Deterministic: identical spec gives identical result
/// bytes. Throws ValidationError listing every preflight problem.
ExperimentResult run_experiment(const ExperimentSpec& spec);

json result_to_json(const ExperimentResult& r);
/// Flat rows: setting,sweep_value,seed,split,metric,value (ok cells only).
std::string result_to_csv(const ExperimentResult& r);

/// Fraction of rows whose argmax probability matches the one-hot label.
double accuracy_score(const TwoStageModel& model, const Mat& x, const Mat& y_one_hot);

/// Macro one-vs-rest AUC over the classes present with both outcomes.
double macro_auc_score(const TwoStageModel& model, const Mat& x, const Mat& y_one_hot);

/// Rank-based AUC (Mann-Whitney, ties at half weight). Throws
/// ValidationError unless both label values occur.
double compute_auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct BootstrapCi {
    double lower = 0.0, mean = 0.0, upper = 0.0;
};

/// Percentile bootstrap of the mean with linearly interpolated quantiles.
/// The interval is widened to include the sample mean, so
/// lower <= mean <= upper always holds.
BootstrapCi bootstrap_ci(const std::vector<double>& values, int resamples, double level,
                         std::uint64_t seed);

}  // namespace dalupi
