#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "trajens/dataset.hpp"
#include "trajens/ensemble.hpp"
#include "trajens/metrics.hpp"

namespace trajens {

enum class ExperimentKind { toy, noise_grid, single_run, predict };

struct DatasetSpec {
    // source: "csv", "toy", "synthetic_regression", "synthetic_classification"
    std::string source = "synthetic_classification";
    std::string csv_path;
    std::string label_column = "label";
    TaskKind task_kind = TaskKind::binary_classification;
    // toy parameters
    std::size_t n_easy = 100, n_hard = 100, n_noisy = 50;
    double margin = 0.3;
    // synthetic parameters
    std::size_t n = 5000;
    std::size_t f_informative = 5;
    double noise_std = 0.1;
};

struct MetricSpec {
    double retrieval_fraction = 0.01;
    double fee = 0.0;
    std::size_t periods_per_day = 100;
};

struct NoiseSetting {
    std::string name;
    std::size_t extra_features = 0;
    double sample_fraction = 0.0;
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::single_run;
    DatasetSpec dataset;
    EnsembleConfig ensemble;
    MetricSpec metrics;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    std::string output_dir = ".";
    // noise-grid knobs
    std::vector<NoiseSetting> settings = {{"clean", 0, 0.0},
                                          {"noise30", 20, 0.30},
                                          {"noise50", 30, 0.50}};
    std::vector<std::string> variants = {"SingleModel", "SimpleEnsemble", "RandomEnsemble",
                                         "SR", "SR(1st only)", "SR(2nd only)", "FS", "SR+FS"};
    std::size_t eval_n = 2000;

    void validate() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load(const std::string& path);
    nlohmann::json to_json() const;
    std::uint64_t config_hash() const;
};

// Applies a variant name to the base ensemble config.
EnsembleConfig variant_config(const EnsembleConfig& base, const std::string& variant);

struct GridCell {
    std::string setting;
    std::string variant;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    EvalReport report;
};

struct ExperimentResult {
    std::vector<GridCell> cells;
    // aggregate rows: (setting, variant, metric) -> (mean, sample std)
    std::map<std::string, std::pair<double, double>> aggregates;
    std::string provenance;
};

struct ToyRow {
    std::uint64_t seed;
    std::string population;
    std::string mode;  // W1, W2, W
    double mean_weight;
};

struct ToyResult {
    std::vector<ToyRow> rows;
    std::string provenance;
};

// Toy-experiment preset: an MLP small and slow enough that the loss-curve
// ranks still move during training, which the curve-shape term needs.
ExperimentConfig toy_default_config();

ToyResult run_toy(const ExperimentConfig& cfg);
ExperimentResult run_noise_grid(const ExperimentConfig& cfg);

// Fits one ensemble per cfg and writes model + sidecar files under output_dir.
void run_fit(const ExperimentConfig& cfg, const std::string& model_out);
int run_predict(const std::string& model_path, const std::string& csv_path,
                const std::string& label_column, const std::string& output_path);
EvalReport evaluate_model(const EnsembleState& model, const Dataset& d, const MetricSpec& ms);

// Builds the dataset named by spec; returns population tags alongside.
std::pair<Dataset, SamplePopulation> build_dataset(const DatasetSpec& spec, std::uint64_t seed);

// Training and evaluation parts that share one generator draw. For synthetic
// sources the generating coefficients depend on the seed, so the grid must
// split a single draw of n + eval_n rows rather than draw twice.
std::pair<std::pair<Dataset, SamplePopulation>, std::pair<Dataset, SamplePopulation>>
build_split_datasets(const DatasetSpec& spec, std::size_t eval_n, std::uint64_t seed);

void write_grid_csv(const ExperimentResult& r, const std::string& path);
void write_toy_csv(const ToyResult& r, const std::string& path);

}  // namespace trajens
