#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <string>
#include <vector>

#include "dalupi/harness.hpp"
#include "doctest.h"

using namespace dalupi;

TEST_CASE("rank auc matches hand-computed cases") {
    CHECK(compute_auc({0.1, 0.4, 0.35, 0.8}, {0, 0, 1, 1}) == doctest::Approx(0.75));
    CHECK(compute_auc({0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1}) == 1.0);
    CHECK(compute_auc({0.9, 0.8, 0.2, 0.1}, {0, 0, 1, 1}) == 0.0);
    CHECK(compute_auc({0.5, 0.5, 0.5, 0.5}, {0, 1, 0, 1}) == doctest::Approx(0.5));
    CHECK(compute_auc({0.3, 0.3}, {0, 1}) == doctest::Approx(0.5));  // tie at half weight
    CHECK_THROWS_AS(compute_auc({0.1, 0.2}, {1, 1}), ValidationError);
    CHECK_THROWS_AS(compute_auc({0.1, 0.2}, {0, 2}), ValidationError);
    CHECK_THROWS_AS(compute_auc({0.1}, {0}), ValidationError);
}

TEST_CASE("bootstrap intervals are ordered, deterministic and exact on constants") {
    const BootstrapCi c = bootstrap_ci({0.4, 0.4, 0.4, 0.4}, 500, 0.95, 1);
    CHECK(c.lower == 0.4);
    CHECK(c.mean == 0.4);
    CHECK(c.upper == 0.4);

    const std::vector<double> vals = {0.1, 0.9, 0.4, 0.7, 0.2, 0.6};
    const BootstrapCi a = bootstrap_ci(vals, 1000, 0.9, 7);
    const BootstrapCi b = bootstrap_ci(vals, 1000, 0.9, 7);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
    CHECK(a.lower <= a.mean);
    CHECK(a.mean <= a.upper);
    CHECK(a.lower < a.upper);  // non-degenerate data spreads the interval

    const BootstrapCi single = bootstrap_ci({0.3}, 100, 0.95, 3);
    CHECK(single.lower == 0.3);
    CHECK(single.upper == 0.3);

    CHECK_THROWS_AS(bootstrap_ci({}, 100, 0.95, 0), ValidationError);
    CHECK_THROWS_AS(bootstrap_ci({0.5}, 0, 0.95, 0), ValidationError);
    CHECK_THROWS_AS(bootstrap_ci({0.5}, 100, 1.0, 0), ValidationError);
}

TEST_CASE("scores evaluate a hand-built model as expected") {
    TwoStageModel m;
    m.setting = Setting::SL_S;
    m.pi_kind = PiKind::None;
    m.has_f = false;
    m.g_hat = Predictor::make_linear(2, 2, Head::Softmax, 0);
    m.g_hat.w1.a = {10.0, 0.0, 0.0, 10.0};
    m.g_hat.b1 = {0.0, 0.0};

    Mat x(4, 2), y(4, 2);
    for (std::size_t i = 0; i < 4; ++i) {
        x.at(i, i % 2) = 1.0;
        y.at(i, i % 2) = 1.0;
    }
    CHECK(accuracy_score(m, x, y) == 1.0);
    CHECK(macro_auc_score(m, x, y) == doctest::Approx(1.0));

    Mat y_flipped = y;
    y_flipped.at(3, 1) = 0.0;
    y_flipped.at(3, 0) = 1.0;
    CHECK(accuracy_score(m, x, y_flipped) == doctest::Approx(0.75));
}

TEST_CASE("permitted roles encode the data-access contract") {
    auto has = [](const std::vector<Role>& v, Role r) {
        return std::find(v.begin(), v.end(), r) != v.end();
    };
    const std::vector<Role> sl_s = permitted_roles(Setting::SL_S);
    CHECK(sl_s.size() == 1);
    CHECK(has(sl_s, Role::SourceLabeled));
    const std::vector<Role> sl_t = permitted_roles(Setting::SL_T);
    CHECK(sl_t.size() == 1);
    CHECK(has(sl_t, Role::TargetLabeled));
    const std::vector<Role> da = permitted_roles(Setting::DALUPI_ST);
    CHECK(has(da, Role::SourceLabeled));
    CHECK(has(da, Role::TargetPi));
    CHECK_FALSE(has(da, Role::TargetLabeled));
    for (Setting s : {Setting::SL_S, Setting::SL_T, Setting::LUPI, Setting::DALUPI_T,
                      Setting::DALUPI_ST}) {
        const std::vector<Role> v = permitted_roles(s);
        CHECK_FALSE(has(v, Role::TestSource));
        CHECK_FALSE(has(v, Role::TestTarget));
    }
}

TEST_CASE("metric names round trip") {
    CHECK(metric_from_name(metric_name(Metric::Accuracy)) == Metric::Accuracy);
    CHECK(metric_from_name(metric_name(Metric::Auc)) == Metric::Auc);
    CHECK_THROWS_AS(metric_from_name("f1"), ValidationError);
}

namespace {

ExperimentSpec attribute_experiment() {
    ExperimentSpec spec;
    spec.name = "attr-smoke";
    spec.task.kind = "attributes";
    spec.task.attributes.attr_dim = 3;
    spec.task.attributes.shift = 0.5;
    spec.task.attributes.noise_sigma = 0.1;
    spec.task.attributes.counts.source_labeled = 150;
    spec.task.attributes.counts.target_pi = 150;
    spec.task.attributes.counts.target_labeled = 150;
    spec.task.attributes.counts.test_source = 60;
    spec.task.attributes.counts.test_target = 60;
    spec.task.attributes.seed = 1;
    spec.settings = {Setting::SL_S, Setting::DALUPI_T};
    spec.seeds = {1, 2};
    spec.f_stage.train.epochs = 60;
    spec.f_stage.train.learning_rate = 0.5;
    spec.g_stage.train.epochs = 60;
    spec.g_stage.train.learning_rate = 0.5;
    spec.baseline_stage.train.epochs = 60;
    spec.baseline_stage.train.learning_rate = 0.5;
    spec.metrics = {Metric::Accuracy, Metric::Auc};
    spec.bootstrap_resamples = 200;
    return spec;
}

}  // namespace

TEST_CASE("preflight reports every problem at once") {
    ExperimentSpec spec = attribute_experiment();
    spec.seeds.clear();
    spec.ci_level = 1.5;
    spec.source_pi_weight = 0.0;
    spec.task.attributes.counts.target_pi = 0;
    spec.task.attributes.counts.test_target = 0;
    spec.sweep = SweepSpec{"epsilon", {0.5}};  // attributes sweep over 'shift'
    const std::vector<std::string> problems = preflight(spec);
    std::string joined;
    for (const std::string& p : problems) joined += p + "\n";
    CHECK(problems.size() >= 5);
    CHECK(joined.find("seeds must be nonempty") != std::string::npos);
    CHECK(joined.find("ci_level") != std::string::npos);
    CHECK(joined.find("source_pi_weight") != std::string::npos);
    CHECK(joined.find("sweep over 'shift'") != std::string::npos);
    CHECK(joined.find("dalupi_t needs role target_pi") != std::string::npos);
    CHECK(joined.find("no test_target rows") != std::string::npos);

    CHECK_THROWS_AS(run_experiment(spec), ValidationError);
    CHECK(preflight(attribute_experiment()).empty());

    AttributeTaskSpec tiny;
    tiny.counts.source_labeled = 4;
    tiny.counts.test_source = 2;
    tiny.counts.test_target = 2;
    tiny.seed = 1;
    ExperimentSpec inline_sweep = attribute_experiment();
    inline_sweep.task.kind = "inline";
    inline_sweep.task.inline_samples = samples_to_json(gen_attribute_task(tiny));
    inline_sweep.sweep = SweepSpec{"shift", {0.5}};
    const std::vector<std::string> ip = preflight(inline_sweep);
    std::string ijoined;
    for (const std::string& p : ip) ijoined += p + "\n";
    CHECK(ijoined.find("sweep is not applicable to an inline sample set") != std::string::npos);

    ExperimentSpec unknown = attribute_experiment();
    unknown.task.kind = "mystery";
    const std::vector<std::string> up = preflight(unknown);
    REQUIRE(!up.empty());
    CHECK(up.back().find("unknown task kind") != std::string::npos);
}

TEST_CASE("a small experiment runs every cell and aggregates deterministically") {
    const ExperimentSpec spec = attribute_experiment();
    const ExperimentResult r = run_experiment(spec);
    CHECK(r.all_ok);
    REQUIRE(r.cells.size() == 4);  // 2 settings x 2 seeds
    for (const CellResult& c : r.cells) {
        CHECK(c.ok);
        CHECK(c.error.empty());
        REQUIRE(c.values.size() == 4);  // 2 splits x 2 metrics
        CHECK_FALSE(c.sweep_value.has_value());
        for (const MetricRecord& rec : c.values) {
            CHECK(rec.value >= 0.0);
            CHECK(rec.value <= 1.0);
        }
    }
    REQUIRE(r.aggregates.size() == 8);  // 2 settings x 2 splits x 2 metrics
    for (const AggregateRecord& a : r.aggregates) {
        CHECK(a.n == 2);
        CHECK(a.lower <= a.mean);
        CHECK(a.mean <= a.upper);
    }
    CHECK(r.software_version == kSoftwareVersion);
    CHECK(!r.spec_hash.empty());

    const ExperimentResult again = run_experiment(spec);
    CHECK(result_to_json(r).dump() == result_to_json(again).dump());

    const std::string csv = result_to_csv(r);
    CHECK(csv.rfind("setting,sweep_value,seed,split,metric,value\n", 0) == 0);
    const std::size_t lines = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n'));
    CHECK(lines == 1 + 16);  // header + 4 cells x 4 records
    CHECK(csv.find("sl_s,,1,source,accuracy,") != std::string::npos);
    CHECK(csv.find("dalupi_t,,2,target,auc,") != std::string::npos);
}

TEST_CASE("sweeps re-run the generator per value and tag every row") {
    ExperimentSpec spec;
    spec.task.kind = "skew";
    spec.task.skew.num_classes = 3;
    spec.task.skew.num_backgrounds = 3;
    spec.task.skew.image_size = 10;
    spec.task.skew.patch_size = 3;
    spec.task.skew.counts.source_labeled = 40;
    spec.task.skew.counts.test_source = 15;
    spec.task.skew.counts.test_target = 15;
    spec.task.skew.seed = 2;
    spec.settings = {Setting::SL_S};
    spec.sweep = SweepSpec{"epsilon", {0.4, 1.0}};
    spec.seeds = {1, 2};
    spec.baseline_stage.train.epochs = 15;
    spec.baseline_stage.train.learning_rate = 0.1;
    spec.metrics = {Metric::Accuracy};
    spec.bootstrap_resamples = 100;

    const ExperimentResult r = run_experiment(spec);
    CHECK(r.all_ok);
    REQUIRE(r.cells.size() == 4);  // 1 setting x 2 values x 2 seeds
    for (const CellResult& c : r.cells) REQUIRE(c.sweep_value.has_value());
    CHECK(std::count_if(r.cells.begin(), r.cells.end(),
                        [](const CellResult& c) { return *c.sweep_value == 0.4; }) == 2);
    REQUIRE(r.aggregates.size() == 4);  // 2 values x 2 splits
    const std::string csv = result_to_csv(r);
    CHECK(csv.find("sl_s,0.4,1,") != std::string::npos);
    CHECK(csv.find("sl_s,1.0,2,") != std::string::npos);
}

TEST_CASE("a failing cell is recorded instead of aborting the run") {
    // Inline task whose source test labels are one-sided: the AUC metric
    // cannot be computed there, so the cell fails and says why.
    SampleSet set;
    set.pi_kind = PiKind::None;
    set.x_dim = 1;
    set.y_dim = 2;
    auto rows = [](std::initializer_list<double> xs, std::initializer_list<int> ys) {
        RoleData d;
        d.x = Mat(xs.size(), 1);
        d.y = Mat(ys.size(), 2);
        std::size_t i = 0;
        for (double v : xs) d.x.at(i++, 0) = v;
        i = 0;
        for (int c : ys) d.y.at(i++, static_cast<std::size_t>(c)) = 1.0;
        return d;
    };
    set.set_role(Role::SourceLabeled, rows({-1, -1, 1, 1, -1, 1}, {0, 0, 1, 1, 0, 1}));
    set.set_role(Role::TestSource, rows({-1, 1, -1}, {0, 0, 0}));  // one class only
    set.set_role(Role::TestTarget, rows({-1, 1, -1, 1}, {0, 1, 0, 1}));
    set.validate();

    ExperimentSpec spec;
    spec.task.kind = "inline";
    spec.task.inline_samples = samples_to_json(set);
    spec.settings = {Setting::SL_S};
    spec.seeds = {1};
    spec.baseline_stage.train.epochs = 10;
    spec.metrics = {Metric::Auc};
    spec.bootstrap_resamples = 50;

    const ExperimentResult r = run_experiment(spec);
    CHECK_FALSE(r.all_ok);
    REQUIRE(r.cells.size() == 1);
    CHECK_FALSE(r.cells[0].ok);
    CHECK(!r.cells[0].error.empty());
    CHECK(r.cells[0].values.empty());
    CHECK(r.aggregates.empty());
    // The failed cell contributes no CSV rows.
    CHECK(result_to_csv(r) == "setting,sweep_value,seed,split,metric,value\n");
}

TEST_CASE("experiment specs round trip through json") {
    ExperimentSpec spec = attribute_experiment();
    spec.sweep = SweepSpec{"shift", {0.25, 0.75}};
    spec.source_pi_weight = 1.5;
    const ExperimentSpec back = experiment_spec_from_json(experiment_spec_to_json(spec));
    CHECK(back.name == spec.name);
    CHECK(back.task.kind == "attributes");
    CHECK(back.task.attributes.attr_dim == 3);
    CHECK(back.settings == spec.settings);
    REQUIRE(back.sweep.has_value());
    CHECK(back.sweep->parameter == "shift");
    CHECK(back.sweep->values == std::vector<double>{0.25, 0.75});
    CHECK(back.seeds == spec.seeds);
    CHECK(back.f_stage.train.epochs == 60);
    CHECK(back.source_pi_weight == 1.5);
    CHECK(back.metrics == spec.metrics);
    CHECK(back.bootstrap_resamples == 200);
    CHECK(back.ci_level == spec.ci_level);

    ExperimentSpec plain = attribute_experiment();
    const ExperimentSpec pback = experiment_spec_from_json(experiment_spec_to_json(plain));
    CHECK_FALSE(pback.sweep.has_value());
}
