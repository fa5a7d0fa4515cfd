#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "trajens/harness.hpp"
#include "trajens/reference.hpp"

using namespace trajens;

namespace {

ExperimentConfig load_config(const std::string& path) {
    if (path.empty()) return ExperimentConfig{};
    return ExperimentConfig::load(path);
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"learning-trajectory ensemble trainer and experiment runner"};
    app.require_subcommand(1);

    std::string config_path, output_dir, model_path, csv_path, out_path, label_column = "label";
    std::string learner_kind, variant;
    std::uint64_t seed_override = 0;
    bool have_seed = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment config file (JSON)");
        sub->add_option("--output-dir", output_dir, "directory for result files");
        sub->add_option("--learner", learner_kind, "override learner kind: gbdt|mlp|ridge");
        sub->add_option_function<std::uint64_t>(
            "--seed",
            [&](std::uint64_t s) {
                seed_override = s;
                have_seed = true;
            },
            "override the seed list with a single seed");
    };

    auto apply_overrides = [&](ExperimentConfig& cfg) {
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        if (!learner_kind.empty())
            cfg.ensemble.learner.kind = learner_kind_from_string(learner_kind);
        if (have_seed) cfg.seeds = {seed_override};
    };

    auto* fit_cmd = app.add_subcommand("fit", "train an ensemble and save the model bundle");
    add_common(fit_cmd);
    fit_cmd->add_option("--model-out", model_path, "output model file")->required();
    fit_cmd->add_option("--variant", variant, "apply a named variant to the ensemble config");

    auto* predict_cmd = app.add_subcommand("predict", "score a CSV file with a saved model");
    predict_cmd->add_option("--model", model_path, "model file")->required();
    predict_cmd->add_option("--input", csv_path, "input CSV")->required();
    predict_cmd->add_option("--output", out_path, "output CSV of (row_index, score)")->required();
    predict_cmd->add_option("--label-column", label_column,
                            "label column to drop if present (default: label)");

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a saved model on a labeled CSV");
    add_common(eval_cmd);
    eval_cmd->add_option("--model", model_path, "model file")->required();
    eval_cmd->add_option("--input", csv_path, "labeled CSV")->required();
    eval_cmd->add_option("--label-column", label_column, "label column name");
    eval_cmd->add_option("--output", out_path, "report file (default: stdout)");

    auto* toy_cmd = app.add_subcommand("toy", "run the toy reweighting experiment");
    add_common(toy_cmd);

    auto* grid_cmd = app.add_subcommand("noise-grid", "run the noise-robustness grid");
    add_common(grid_cmd);

    CLI11_PARSE(app, argc, argv);

    if (fit_cmd->parsed()) {
        return guarded([&] {
            auto cfg = load_config(config_path);
            apply_overrides(cfg);
            if (!variant.empty()) cfg.ensemble = variant_config(cfg.ensemble, variant);
            run_fit(cfg, model_path);
            std::cout << "model written to " << model_path << '\n';
            return 0;
        });
    }
    if (predict_cmd->parsed()) {
        return guarded([&] {
            run_predict(model_path, csv_path, label_column, out_path);
            std::cout << "scores written to " << out_path << '\n';
            return 0;
        });
    }
    if (eval_cmd->parsed()) {
        return guarded([&] {
            auto cfg = load_config(config_path);
            apply_overrides(cfg);
            auto model = EnsembleState::load(model_path);
            auto d = load_csv(csv_path, label_column, model.task_kind);
            auto report = evaluate_model(model, d, cfg.metrics);
            if (out_path.empty()) {
                std::cout << report.to_kv_text();
            } else {
                std::ofstream out(out_path);
                if (!out) throw DataError("cannot write file: " + out_path);
                out << report.to_kv_text();
            }
            return 0;
        });
    }
    if (toy_cmd->parsed()) {
        return guarded([&] {
            auto cfg = config_path.empty() ? toy_default_config() : load_config(config_path);
            cfg.experiment = ExperimentKind::toy;
            apply_overrides(cfg);
            std::filesystem::create_directories(cfg.output_dir);
            auto result = run_toy(cfg);
            write_toy_csv(result, cfg.output_dir + "/toy_weights.csv");
            std::ofstream prov(cfg.output_dir + "/provenance.txt");
            prov << result.provenance;
            std::cout << "toy results written to " << cfg.output_dir << "/toy_weights.csv\n";
            return 0;
        });
    }
    if (grid_cmd->parsed()) {
        return guarded([&] {
            auto cfg = load_config(config_path);
            cfg.experiment = ExperimentKind::noise_grid;
            apply_overrides(cfg);
            std::filesystem::create_directories(cfg.output_dir);
            auto result = run_noise_grid(cfg);
            write_grid_csv(result, cfg.output_dir + "/grid_results.csv");
            std::ofstream prov(cfg.output_dir + "/provenance.txt");
            prov << result.provenance;
            std::cout << "grid results written to " << cfg.output_dir << "/grid_results.csv\n";
            return 0;
        });
    }
    return 0;
}
