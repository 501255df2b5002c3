// Command line front end: task generation, single fits, evaluation, exact
// oracles, bound evaluators and full experiment runs, all speaking the
// project's versioned JSON formats.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dalupi/bounds.hpp"
#include "dalupi/harness.hpp"
#include "dalupi/io.hpp"
#include "dalupi/oracle.hpp"
#include "dalupi/taskgen.hpp"
#include "dalupi/two_stage.hpp"
#include "dalupi/weighting.hpp"

namespace {

using namespace dalupi;

int cmd_gen(const std::string& spec_path, const std::string& out_path, bool has_seed,
            std::uint64_t seed) {
    const json spec = read_json_file(spec_path);
    const std::string kind = spec.at("kind").get<std::string>();
    json out;
    if (kind == "world") {
        WorldGenSpec g = world_gen_spec_from_json(spec.at("world"));
        if (has_seed) g.seed = seed;
        out = world_to_json(gen_world(g));
    } else if (kind == "skew") {
        SkewTaskSpec g = skew_task_spec_from_json(spec.at("skew"));
        if (has_seed) g.seed = seed;
        out = samples_to_json(gen_skew_task(g));
    } else if (kind == "attributes") {
        AttributeTaskSpec g = attribute_task_spec_from_json(spec.at("attributes"));
        if (has_seed) g.seed = seed;
        out = samples_to_json(gen_attribute_task(g));
    } else {
        throw IoError("unknown generator kind: " + kind + " (expected world|skew|attributes)");
    }
    write_json_file(out_path, out);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_train(const std::string& data_path, const std::string& config_path,
              const std::string& out_path, bool has_seed, std::uint64_t seed) {
    const SampleSet data = samples_from_json(read_json_file(data_path));
    const json cfg = read_json_file(config_path);
    const Setting setting = setting_from_name(cfg.at("setting").get<std::string>());
    StageConfig f = stage_config_from_json(cfg.at("f_stage"));
    StageConfig g = stage_config_from_json(cfg.at("g_stage"));
    StageConfig b = stage_config_from_json(cfg.at("baseline_stage"));
    const double spw = cfg.value("source_pi_weight", 1.0);
    if (has_seed) {
        f.train.seed = seed;
        g.train.seed = seed ^ 0x9e3779b97f4a7c15ULL;
        b.train.seed = seed;
    }
    TwoStageModel model;
    if (setting == Setting::SL_S || setting == Setting::SL_T)
        model = fit_baseline(data, setting, b);
    else
        model = fit_two_stage(data, setting, f, g, spw);
    write_json_file(out_path, two_stage_to_json(model));
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_eval(const std::string& model_path, const std::string& data_path,
             const std::string& out_path) {
    const TwoStageModel model = two_stage_from_json(read_json_file(model_path));
    const SampleSet data = samples_from_json(read_json_file(data_path));
    json out{{"setting", setting_name(model.setting)}, {"splits", json::object()}};
    for (Domain split : {Domain::Source, Domain::Target}) {
        const RoleData& test =
            data.peek(split == Domain::Source ? Role::TestSource : Role::TestTarget);
        if (test.size() == 0) continue;
        json entry{{"n", test.size()},
                   {"accuracy", accuracy_score(model, test.x, test.y)},
                   {"auc", macro_auc_score(model, test.x, test.y)}};
        out["splits"][domain_name(split)] = entry;
    }
    if (out["splits"].empty()) throw IoError("data has no test rows to evaluate on");
    if (out_path.empty())
        std::cout << out.dump(2) << "\n";
    else {
        write_json_file(out_path, out);
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int cmd_oracle(const std::string& world_path, const std::string& hypothesis_path,
               const std::string& loss_name, const std::string& out_path) {
    const DiscreteWorld world = world_from_json(read_json_file(world_path));
    const RiskLoss loss = loss_name == "zero_one" ? RiskLoss::ZeroOne : RiskLoss::Squared;
    json out{{"assumptions", assumption_report_to_json(check_assumptions(world))}};

    TabularHypothesis h;
    if (hypothesis_path.empty()) {
        h = optimal_hypothesis(world);
        out["hypothesis"] = "optimal (identified-risk minimizer)";
        out["optimal_hypothesis"] = hypothesis_to_json(h);
    } else {
        h = hypothesis_from_json(read_json_file(hypothesis_path));
        out["hypothesis"] = hypothesis_path;
    }
    const RiskLoss used = hypothesis_path.empty() ? RiskLoss::Squared : loss;
    out["loss"] = used == RiskLoss::Squared ? "squared" : "zero_one";
    out["true_target_risk"] = true_target_risk(world, h, used);
    try {
        out["identified_target_risk"] = identified_target_risk(world, h, used);
    } catch (const IdentificationError& e) {
        out["identified_target_risk"] = nullptr;
        out["identification_error"] = e.what();
    }
    try {
        const GammaResult g = minimal_gamma(world);
        out["minimal_gamma"] = json{{"raw", g.raw}, {"clamped", g.clamped}};
    } catch (const IdentificationError& e) {
        out["minimal_gamma"] = nullptr;
        out["minimal_gamma_error"] = e.what();
    }
    if (out_path.empty())
        std::cout << out.dump(2) << "\n";
    else {
        write_json_file(out_path, out);
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int cmd_bound(const std::string& kind, const std::string& inputs_path,
              const std::string& world_path, const std::string& hypothesis_path, double gamma,
              const std::string& out_path) {
    json out;
    if (kind == "uniform") {
        const UniformBoundBreakdown b =
            uniform_risk_bound(uniform_bound_inputs_from_json(read_json_file(inputs_path)));
        std::cout << "weighted_source_risk_term = " << b.weighted_source_risk_term << "\n"
                  << "target_pi_risk_term       = " << b.target_pi_risk_term << "\n"
                  << "source_complexity_term    = " << b.source_complexity_term << "\n"
                  << "target_complexity_term    = " << b.target_complexity_term << "\n"
                  << "total                     = " << b.total << "\n";
        out = uniform_bound_breakdown_to_json(b);
    } else if (kind == "pacbayes") {
        const PacBayesBreakdown b =
            pacbayes_bound(pacbayes_inputs_from_json(read_json_file(inputs_path)));
        std::cout << "source_risk_term       = " << b.source_risk_term << "\n"
                  << "source_complexity_term = " << b.source_complexity_term << "\n"
                  << "target_risk_term       = " << b.target_risk_term << "\n"
                  << "target_complexity_term = " << b.target_complexity_term << "\n"
                  << "total                  = " << b.total << "\n";
        out = pacbayes_breakdown_to_json(b);
    } else if (kind == "relaxed") {
        if (world_path.empty() || hypothesis_path.empty())
            throw IoError("relaxed bound needs --world and --hypothesis");
        const DiscreteWorld world = world_from_json(read_json_file(world_path));
        const TabularHypothesis h = hypothesis_from_json(read_json_file(hypothesis_path));
        const RiskLoss loss = h.is_values() ? RiskLoss::Squared : RiskLoss::ZeroOne;
        const double value = relaxed_sufficiency_bound(world, h, gamma, loss);
        const GammaResult mg = minimal_gamma(world);
        std::cout << "gamma         = " << gamma << "\n"
                  << "bound         = " << value << "\n"
                  << "minimal_gamma = " << mg.clamped << " (raw " << mg.raw << ")\n";
        out = json{{"gamma", gamma},
                   {"bound", value},
                   {"minimal_gamma", {{"raw", mg.raw}, {"clamped", mg.clamped}}}};
    } else {
        throw IoError("unknown bound kind: " + kind + " (expected uniform|pacbayes|relaxed)");
    }
    if (!out_path.empty()) {
        write_json_file(out_path, out);
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int cmd_experiment(const std::string& spec_path, const std::string& out_dir, bool has_seed,
                   std::uint64_t seed) {
    ExperimentSpec spec = experiment_spec_from_json(read_json_file(spec_path));
    if (has_seed) spec.seeds = {seed};
    const ExperimentResult result = run_experiment(spec);

    std::filesystem::create_directories(out_dir);
    const std::string json_path = (std::filesystem::path(out_dir) / "results.json").string();
    const std::string csv_path = (std::filesystem::path(out_dir) / "results.csv").string();
    write_json_file(json_path, result_to_json(result));
    write_text_file(csv_path, result_to_csv(result));

    std::size_t failed = 0;
    for (const CellResult& c : result.cells)
        if (!c.ok) ++failed;
    std::cout << "cells: " << result.cells.size() << " total, " << failed << " failed\n";
    for (const CellResult& c : result.cells)
        if (!c.ok)
            std::cout << "  FAILED " << setting_name(c.setting) << " sweep="
                      << (c.sweep_value ? std::to_string(*c.sweep_value) : std::string("-"))
                      << " seed=" << c.seed << ": " << c.error << "\n";
    for (const AggregateRecord& a : result.aggregates)
        std::cout << setting_name(a.setting) << " sweep="
                  << (a.sweep_value ? std::to_string(*a.sweep_value) : std::string("-")) << " "
                  << domain_name(a.split) << " " << metric_name(a.metric) << ": mean " << a.mean
                  << " ci [" << a.lower << ", " << a.upper << "] over " << a.n << " seeds\n";
    std::cout << "wrote " << json_path << " and " << csv_path << "\n";
    return result.all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact oracles, two-stage estimators and experiment harness for "
                 "unsupervised domain adaptation with privileged information"};
    app.require_subcommand(1);

    bool has_seed = false;
    std::uint64_t seed = 0;
    app.add_flag_callback("--version", [] {
        std::cout << dalupi::kSoftwareVersion << "\n";
        std::exit(0);
    });

    std::string gen_spec, gen_out;
    CLI::App* gen = app.add_subcommand("gen", "generate a world or a task sample set");
    gen->add_option("--spec", gen_spec, "generator spec JSON ({kind, world|skew|attributes})")
        ->required();
    gen->add_option("--out", gen_out, "output path")->required();
    gen->add_option("--seed", seed, "override the generator seed")
        ->each([&](const std::string&) { has_seed = true; });

    std::string train_data, train_cfg, train_out;
    CLI::App* train = app.add_subcommand("train", "fit one setting on a sample set");
    train->add_option("--data", train_data, "samples JSON")->required();
    train->add_option("--config", train_cfg,
                      "train config JSON ({setting, f_stage, g_stage, baseline_stage})")
        ->required();
    train->add_option("--out", train_out, "model output path")->required();
    train->add_option("--seed", seed, "override the training seeds")
        ->each([&](const std::string&) { has_seed = true; });

    std::string eval_model, eval_data, eval_out;
    CLI::App* eval = app.add_subcommand("eval", "evaluate a model on held-out test rows");
    eval->add_option("--model", eval_model, "model JSON")->required();
    eval->add_option("--data", eval_data, "samples JSON")->required();
    eval->add_option("--out", eval_out, "metrics output path (default: stdout)");

    std::string oracle_world, oracle_h, oracle_loss = "squared", oracle_out;
    CLI::App* oracle = app.add_subcommand(
        "oracle", "assumption report and exact risks on a discrete world");
    oracle->add_option("--world", oracle_world, "world JSON")->required();
    oracle->add_option("--hypothesis", oracle_h,
                       "hypothesis JSON (default: the identified-risk minimizer)");
    oracle->add_option("--loss", oracle_loss, "squared|zero_one (with --hypothesis)")
        ->check(CLI::IsMember({"squared", "zero_one"}));
    oracle->add_option("--out", oracle_out, "report output path (default: stdout)");

    std::string bound_kind, bound_inputs, bound_world, bound_h, bound_out;
    double bound_gamma = 1.0;
    CLI::App* bound = app.add_subcommand("bound", "evaluate a risk bound, term by term");
    bound->add_option("--kind", bound_kind, "uniform|pacbayes|relaxed")->required();
    bound->add_option("--inputs", bound_inputs, "bound inputs JSON (uniform|pacbayes)");
    bound->add_option("--world", bound_world, "world JSON (relaxed)");
    bound->add_option("--hypothesis", bound_h, "hypothesis JSON (relaxed)");
    bound->add_option("--gamma", bound_gamma, "relaxation level >= 1 (relaxed)");
    bound->add_option("--out", bound_out, "breakdown output path");

    std::string exp_spec, exp_dir = ".";
    CLI::App* exp = app.add_subcommand("experiment", "run a full (setting x sweep x seed) grid");
    exp->add_option("--spec", exp_spec, "experiment spec JSON")->required();
    exp->add_option("--out-dir", exp_dir, "directory for results.json / results.csv");
    exp->add_option("--seed", seed, "replace the spec's seed list with one seed")
        ->each([&](const std::string&) { has_seed = true; });

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(gen_spec, gen_out, has_seed, seed);
        if (train->parsed()) return cmd_train(train_data, train_cfg, train_out, has_seed, seed);
        if (eval->parsed()) return cmd_eval(eval_model, eval_data, eval_out);
        if (oracle->parsed()) return cmd_oracle(oracle_world, oracle_h, oracle_loss, oracle_out);
        if (bound->parsed())
            return cmd_bound(bound_kind, bound_inputs, bound_world, bound_h, bound_gamma,
                             bound_out);
        if (exp->parsed()) return cmd_experiment(exp_spec, exp_dir, has_seed, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
