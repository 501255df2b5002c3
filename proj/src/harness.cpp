#include "dalupi/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dalupi/rng.hpp"

namespace dalupi {

const char* metric_name(Metric m) {
    return m == Metric::Accuracy ? "accuracy" : "auc";
}

Metric metric_from_name(const std::string& s) {
    if (s == "accuracy") return Metric::Accuracy;
    if (s == "auc") return Metric::Auc;
    throw ValidationError("unknown metric name: " + s);
}

std::vector<Role> permitted_roles(Setting s) {
    switch (s) {
        case Setting::SL_S: return {Role::SourceLabeled};
        case Setting::SL_T: return {Role::TargetLabeled};
        case Setting::LUPI: return {Role::SourceLabeled};
        case Setting::DALUPI_T: return {Role::SourceLabeled, Role::TargetPi};
        case Setting::DALUPI_ST: return {Role::SourceLabeled, Role::TargetPi};
    }
    throw ValidationError("unknown setting");
}

json task_ref_to_json(const TaskRef& t) {
    json j{{"kind", t.kind},
           {"skew", json(nullptr)},
           {"attributes", json(nullptr)},
           {"inline", json(nullptr)}};
    if (t.kind == "skew") j["skew"] = skew_task_spec_to_json(t.skew);
    if (t.kind == "attributes") j["attributes"] = attribute_task_spec_to_json(t.attributes);
    if (t.kind == "inline") j["inline"] = t.inline_samples;
    return j;
}

TaskRef task_ref_from_json(const json& j) {
    TaskRef t;
    t.kind = j.at("kind").get<std::string>();
    if (t.kind == "skew") t.skew = skew_task_spec_from_json(j.at("skew"));
    if (t.kind == "attributes") t.attributes = attribute_task_spec_from_json(j.at("attributes"));
    if (t.kind == "inline") t.inline_samples = j.at("inline");
    return t;
}

json experiment_spec_to_json(const ExperimentSpec& s) {
    json settings = json::array();
    for (Setting st : s.settings) settings.push_back(setting_name(st));
    json metrics = json::array();
    for (Metric m : s.metrics) metrics.push_back(metric_name(m));
    json sweep(nullptr);
    if (s.sweep) sweep = json{{"parameter", s.sweep->parameter}, {"values", s.sweep->values}};
    return json{{"name", s.name},
                {"task", task_ref_to_json(s.task)},
                {"settings", settings},
                {"sweep", sweep},
                {"seeds", s.seeds},
                {"f_stage", stage_config_to_json(s.f_stage)},
                {"g_stage", stage_config_to_json(s.g_stage)},
                {"baseline_stage", stage_config_to_json(s.baseline_stage)},
                {"source_pi_weight", s.source_pi_weight},
                {"metrics", metrics},
                {"bootstrap_resamples", s.bootstrap_resamples},
                {"ci_level", s.ci_level}};
}

ExperimentSpec experiment_spec_from_json(const json& j) {
    ExperimentSpec s;
    s.name = j.at("name").get<std::string>();
    s.task = task_ref_from_json(j.at("task"));
    s.settings.clear();
    for (const json& v : j.at("settings"))
        s.settings.push_back(setting_from_name(v.get<std::string>()));
    if (!j.at("sweep").is_null()) {
        SweepSpec sw;
        sw.parameter = j.at("sweep").at("parameter").get<std::string>();
        sw.values = j.at("sweep").at("values").get<std::vector<double>>();
        s.sweep = sw;
    }
    s.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    s.f_stage = stage_config_from_json(j.at("f_stage"));
    s.g_stage = stage_config_from_json(j.at("g_stage"));
    s.baseline_stage = stage_config_from_json(j.at("baseline_stage"));
    s.source_pi_weight = j.at("source_pi_weight").get<double>();
    s.metrics.clear();
    for (const json& v : j.at("metrics"))
        s.metrics.push_back(metric_from_name(v.get<std::string>()));
    s.bootstrap_resamples = j.at("bootstrap_resamples").get<int>();
    s.ci_level = j.at("ci_level").get<double>();
    return s;
}

namespace {

std::string fmt(double v) { return json(v).dump(); }  // locale-free, round-trip exact

RoleCounts counts_of_task(const TaskRef& t) {
    if (t.kind == "skew") return t.skew.counts;
    if (t.kind == "attributes") return t.attributes.counts;
    // inline: derive from the payload
    RoleCounts c;
    const SampleSet set = samples_from_json(t.inline_samples);
    c.source_labeled = set.count(Role::SourceLabeled);
    c.target_pi = set.count(Role::TargetPi);
    c.target_unlabeled = set.count(Role::TargetUnlabeled);
    c.target_labeled = set.count(Role::TargetLabeled);
    c.test_source = set.count(Role::TestSource);
    c.test_target = set.count(Role::TestTarget);
    return c;
}

std::vector<Role> required_roles(Setting s) {
    // Roles that must be nonempty for the fit to be possible. Identical to
    // the permitted set except that DALUPI needs both of its roles populated.
    return permitted_roles(s);
}

SampleSet make_cell_data(const ExperimentSpec& spec, const SampleSet* inline_set,
                         std::optional<double> sweep_value, std::uint64_t seed) {
    if (inline_set) return *inline_set;  // fresh copy: private access counters
    if (spec.task.kind == "skew") {
        SkewTaskSpec t = spec.task.skew;
        t.seed = seed;
        if (sweep_value) t.epsilon = *sweep_value;
        return gen_skew_task(t);
    }
    AttributeTaskSpec t = spec.task.attributes;
    t.seed = seed;
    if (sweep_value) t.shift = *sweep_value;
    return gen_attribute_task(t);
}

json cell_to_json(const CellResult& c) {
    json metrics = json::array();
    for (const MetricRecord& r : c.values)
        metrics.push_back(json{{"split", domain_name(r.split)},
                               {"metric", metric_name(r.metric)},
                               {"value", r.value}});
    return json{{"setting", setting_name(c.setting)},
                {"sweep_value", c.sweep_value ? json(*c.sweep_value) : json(nullptr)},
                {"seed", c.seed},
                {"ok", c.ok},
                {"error", c.error},
                {"metrics", metrics}};
}

json aggregate_to_json(const AggregateRecord& a) {
    return json{{"setting", setting_name(a.setting)},
                {"sweep_value", a.sweep_value ? json(*a.sweep_value) : json(nullptr)},
                {"split", domain_name(a.split)},
                {"metric", metric_name(a.metric)},
                {"n", a.n},
                {"mean", a.mean},
                {"ci_lower", a.lower},
                {"ci_upper", a.upper}};
}

}  // namespace

std::vector<std::string> preflight(const ExperimentSpec& spec) {
    std::vector<std::string> out;
    if (spec.seeds.empty()) out.push_back("seeds must be nonempty");
    if (!(spec.ci_level > 0.0 && spec.ci_level < 1.0))
        out.push_back("ci_level must lie in (0, 1)");
    if (spec.bootstrap_resamples < 1) out.push_back("bootstrap_resamples must be >= 1");
    if (spec.settings.empty()) out.push_back("settings must be nonempty");
    if (spec.metrics.empty()) out.push_back("metrics must be nonempty");
    if (!(spec.source_pi_weight > 0.0)) out.push_back("source_pi_weight must be > 0");

    const std::string& kind = spec.task.kind;
    if (kind != "skew" && kind != "attributes" && kind != "inline") {
        out.push_back("unknown task kind: " + kind);
        return out;
    }

    RoleCounts counts;
    try {
        counts = counts_of_task(spec.task);
    } catch (const std::exception& e) {
        out.push_back(std::string("inline task payload is invalid: ") + e.what());
        return out;
    }

    if (spec.sweep) {
        if (kind == "inline") {
            out.push_back("sweep is not applicable to an inline sample set");
        } else if (spec.sweep->values.empty()) {
            out.push_back("sweep value list must be nonempty");
        } else if (kind == "skew" && spec.sweep->parameter != "epsilon") {
            out.push_back("skew tasks sweep over 'epsilon', got '" + spec.sweep->parameter + "'");
        } else if (kind == "attributes" && spec.sweep->parameter != "shift") {
            out.push_back("attribute tasks sweep over 'shift', got '" + spec.sweep->parameter +
                          "'");
        } else {
            for (double v : spec.sweep->values) {
                if (kind == "skew") {
                    const double lo = 1.0 / static_cast<double>(spec.task.skew.num_classes);
                    if (!(v >= lo - 1e-12 && v <= 1.0 + 1e-12))
                        out.push_back("sweep value " + fmt(v) + " outside [1/num_classes, 1]");
                } else if (!(v >= 0.0 && v <= 1.0)) {
                    out.push_back("sweep value " + fmt(v) + " outside [0, 1]");
                }
            }
        }
    }

    for (Setting s : spec.settings) {
        for (Role r : required_roles(s)) {
            if (counts.of(r) == 0)
                out.push_back("setting " + setting_name(s) + " needs role " + role_name(r) +
                              " but the task provides 0 rows");
        }
    }
    if (counts.test_source == 0) out.push_back("task provides no test_source rows");
    if (counts.test_target == 0) out.push_back("task provides no test_target rows");
    return out;
}

double accuracy_score(const TwoStageModel& model, const Mat& x, const Mat& y_one_hot) {
    if (x.rows == 0 || x.rows != y_one_hot.rows)
        throw ValidationError("accuracy needs matching nonempty x and y");
    const std::vector<std::size_t> pred = model.predict(x);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < x.rows; ++i)
        if (pred[i] == argmax_index(y_one_hot.row(i))) ++hits;
    return static_cast<double>(hits) / static_cast<double>(x.rows);
}

double compute_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size() || scores.empty())
        throw ValidationError("AUC needs matching nonempty scores and labels");
    std::size_t n_pos = 0, n_neg = 0;
    for (int l : labels) {
        if (l != 0 && l != 1) throw ValidationError("AUC labels must be 0 or 1");
        (l == 1 ? n_pos : n_neg)++;
    }
    if (n_pos == 0 || n_neg == 0)
        throw ValidationError("AUC undefined: labels contain a single class");

    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    // Average ranks across ties, then the Mann-Whitney statistic.
    std::vector<double> rank(scores.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1 .. j, 1-based
        for (std::size_t k = i; k < j; ++k) rank[idx[k]] = avg;
        i = j;
    }
    double pos_rank_sum = 0.0;
    for (std::size_t k = 0; k < labels.size(); ++k)
        if (labels[k] == 1) pos_rank_sum += rank[k];
    const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
    const double u = pos_rank_sum - np * (np + 1.0) / 2.0;
    return u / (np * nn);
}

double macro_auc_score(const TwoStageModel& model, const Mat& x, const Mat& y_one_hot) {
    if (x.rows == 0 || x.rows != y_one_hot.rows)
        throw ValidationError("AUC needs matching nonempty x and y");
    const Mat probs = model.predict_proba(x);
    if (probs.cols != y_one_hot.cols)
        throw ValidationError("model classes do not match the label dimension");
    double total = 0.0;
    std::size_t used = 0;
    for (std::size_t k = 0; k < probs.cols; ++k) {
        std::vector<double> scores(probs.rows);
        std::vector<int> labels(probs.rows);
        std::size_t n_pos = 0;
        for (std::size_t r = 0; r < probs.rows; ++r) {
            scores[r] = probs.at(r, k);
            labels[r] = y_one_hot.at(r, k) > 0.5 ? 1 : 0;
            n_pos += static_cast<std::size_t>(labels[r]);
        }
        if (n_pos == 0 || n_pos == probs.rows) continue;  // class absent or universal
        total += compute_auc(scores, labels);
        ++used;
    }
    if (used == 0)
        throw ValidationError("AUC undefined: every class is one-sided in the test labels");
    return total / static_cast<double>(used);
}

BootstrapCi bootstrap_ci(const std::vector<double>& values, int resamples, double level,
                         std::uint64_t seed) {
    if (values.empty()) throw ValidationError("bootstrap needs at least one value");
    if (resamples < 1) throw ValidationError("resamples must be >= 1");
    if (!(level > 0.0 && level < 1.0)) throw ValidationError("level must lie in (0, 1)");

    const std::size_t n = values.size();
    BootstrapCi out;
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);

    Rng rng(seed);
    std::vector<double> means(static_cast<std::size_t>(resamples));
    for (double& m : means) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t pick = static_cast<std::size_t>(rng.next_double() * static_cast<double>(n));
            if (pick >= n) pick = n - 1;
            s += values[pick];
        }
        m = s / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(means.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, means.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return means[lo] + frac * (means[hi] - means[lo]);
    };
    out.lower = quantile((1.0 - level) / 2.0);
    out.upper = quantile(1.0 - (1.0 - level) / 2.0);
    // Percentile endpoints of a tiny, skewed sample can exclude the sample
    // mean; widen so the reported triple is always ordered.
    out.lower = std::min(out.lower, out.mean);
    out.upper = std::max(out.upper, out.mean);
    return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    const std::vector<std::string> problems = preflight(spec);
    if (!problems.empty()) {
        std::string msg = "invalid experiment spec:";
        for (const std::string& p : problems) msg += "\n  - " + p;
        throw ValidationError(msg);
    }

    ExperimentResult result;
    result.spec = spec;
    result.software_version = kSoftwareVersion;
    result.spec_hash = to_hex(fnv1a64(experiment_spec_to_json(spec).dump()));

    std::optional<SampleSet> inline_set;
    if (spec.task.kind == "inline") inline_set = samples_from_json(spec.task.inline_samples);

    std::vector<std::optional<double>> sweep_values;
    if (spec.sweep)
        for (double v : spec.sweep->values) sweep_values.emplace_back(v);
    else
        sweep_values.emplace_back(std::nullopt);

    const std::size_t n_settings = spec.settings.size();
    const std::size_t n_sweep = sweep_values.size();
    const std::size_t n_seeds = spec.seeds.size();
    const std::size_t n_cells = n_settings * n_sweep * n_seeds;
    result.cells.resize(n_cells);

    const std::ptrdiff_t n_cells_p = static_cast<std::ptrdiff_t>(n_cells);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t flat = 0; flat < n_cells_p; ++flat) {
        const std::size_t idx = static_cast<std::size_t>(flat);
        const std::size_t si = idx / (n_sweep * n_seeds);
        const std::size_t vi = (idx / n_seeds) % n_sweep;
        const std::size_t ki = idx % n_seeds;

        CellResult cell;
        cell.setting = spec.settings[si];
        cell.sweep_value = sweep_values[vi];
        cell.seed = spec.seeds[ki];
        try {
            SampleSet data = make_cell_data(spec, inline_set ? &*inline_set : nullptr,
                                            cell.sweep_value, cell.seed);
            Rng seeder(cell.seed);
            StageConfig f_cfg = spec.f_stage, g_cfg = spec.g_stage, b_cfg = spec.baseline_stage;
            f_cfg.train.seed = seeder.split(101).seed();
            g_cfg.train.seed = seeder.split(102).seed();
            b_cfg.train.seed = seeder.split(103).seed();

            const auto before = data.access_snapshot();
            TwoStageModel model;
            if (cell.setting == Setting::SL_S || cell.setting == Setting::SL_T)
                model = fit_baseline(data, cell.setting, b_cfg);
            else
                model = fit_two_stage(data, cell.setting, f_cfg, g_cfg, spec.source_pi_weight);
            const auto after = data.access_snapshot();

            const std::vector<Role> allowed = permitted_roles(cell.setting);
            for (Role r : kAllRoles) {
                const std::size_t ri = static_cast<std::size_t>(r);
                if (after[ri] > before[ri] &&
                    std::find(allowed.begin(), allowed.end(), r) == allowed.end())
                    throw ValidationError("setting " + setting_name(cell.setting) +
                                          " read role " + role_name(r) + " during training");
            }

            for (Domain split : {Domain::Source, Domain::Target}) {
                const RoleData& test =
                    data.peek(split == Domain::Source ? Role::TestSource : Role::TestTarget);
                for (Metric m : spec.metrics) {
                    MetricRecord rec;
                    rec.split = split;
                    rec.metric = m;
                    rec.value = m == Metric::Accuracy
                                    ? accuracy_score(model, test.x, test.y)
                                    : macro_auc_score(model, test.x, test.y);
                    cell.values.push_back(rec);
                }
            }
            cell.ok = true;
        } catch (const std::exception& e) {
            cell.ok = false;
            cell.error = e.what();
            cell.values.clear();
        }
        result.cells[idx] = std::move(cell);
    }

    result.all_ok =
        std::all_of(result.cells.begin(), result.cells.end(), [](const CellResult& c) { return c.ok; });

    // Aggregate each (setting, sweep, split, metric) group over its seeds.
    for (std::size_t si = 0; si < n_settings; ++si) {
        for (std::size_t vi = 0; vi < n_sweep; ++vi) {
            for (Domain split : {Domain::Source, Domain::Target}) {
                for (Metric m : spec.metrics) {
                    std::vector<double> vals;
                    for (std::size_t ki = 0; ki < n_seeds; ++ki) {
                        const CellResult& c = result.cells[(si * n_sweep + vi) * n_seeds + ki];
                        if (!c.ok) continue;
                        for (const MetricRecord& r : c.values)
                            if (r.split == split && r.metric == m) vals.push_back(r.value);
                    }
                    if (vals.empty()) continue;
                    AggregateRecord agg;
                    agg.setting = spec.settings[si];
                    agg.sweep_value = sweep_values[vi];
                    agg.split = split;
                    agg.metric = m;
                    agg.n = vals.size();
                    const std::string key = setting_name(agg.setting) + "|" +
                                            (agg.sweep_value ? fmt(*agg.sweep_value) : "-") +
                                            "|" + domain_name(split) + "|" + metric_name(m);
                    const BootstrapCi ci = bootstrap_ci(vals, spec.bootstrap_resamples,
                                                        spec.ci_level, fnv1a64(key));
                    agg.mean = ci.mean;
                    agg.lower = ci.lower;
                    agg.upper = ci.upper;
                    result.aggregates.push_back(agg);
                }
            }
        }
    }
    return result;
}

json result_to_json(const ExperimentResult& r) {
    json cells = json::array();
    for (const CellResult& c : r.cells) cells.push_back(cell_to_json(c));
    json aggs = json::array();
    for (const AggregateRecord& a : r.aggregates) aggs.push_back(aggregate_to_json(a));
    return json{{"software_version", r.software_version},
                {"spec", experiment_spec_to_json(r.spec)},
                {"spec_hash", r.spec_hash},
                {"all_ok", r.all_ok},
                {"feasibility",
                 {{"sl_t", "oracle baseline: trains on target labels that are unavailable "
                           "to every adaptive setting"}}},
                {"cells", cells},
                {"aggregates", aggs}};
}

std::string result_to_csv(const ExperimentResult& r) {
    std::ostringstream out;
    out << "setting,sweep_value,seed,split,metric,value\n";
    for (const CellResult& c : r.cells) {
        if (!c.ok) continue;
        for (const MetricRecord& rec : c.values) {
            out << setting_name(c.setting) << ','
                << (c.sweep_value ? fmt(*c.sweep_value) : std::string()) << ',' << c.seed << ','
                << domain_name(rec.split) << ',' << metric_name(rec.metric) << ','
                << fmt(rec.value) << '\n';
        }
    }
    return out.str();
}

}  // namespace dalupi
