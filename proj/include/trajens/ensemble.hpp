#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trajens/dataset.hpp"
#include "trajens/featsel.hpp"
#include "trajens/learner.hpp"
#include "trajens/reweight.hpp"

namespace trajens {

enum class BaselineMode { none, simple, random_weights };

std::string to_string(BaselineMode b);
BaselineMode baseline_from_string(const std::string& s);
std::string to_string(HMode m);
HMode h_mode_from_string(const std::string& s);

struct EnsembleConfig {
    std::size_t k = 6;
    LearnerConfig learner;
    std::optional<SRConfig> sr = SRConfig{};
    std::optional<FSConfig> fs = FSConfig{};
    HMode h_mode = HMode::combined;
    BaselineMode baseline = BaselineMode::none;
    std::uint64_t master_seed = 1;

    void validate() const;
};

struct SubModelRecord {
    std::shared_ptr<TrainedModel> model;
    std::vector<std::size_t> feature_subset;        // features used at fit time
    std::optional<WeightAssignment> weights_used;   // assignment consumed by this sub-model
    std::optional<FeatureReport> report_used;       // report that produced feature_subset
};

struct EnsembleState {
    std::vector<SubModelRecord> sub_models;
    TaskKind task_kind = TaskKind::regression;
    std::size_t full_width = 0;
    // the final (w, f) computed after the last sub-model; logged, never consumed
    std::optional<WeightAssignment> final_weights;
    std::optional<FeatureReport> final_report;

    std::size_t k_built() const { return sub_models.size(); }
    std::vector<double> predict(const Matrix& rows) const;

    nlohmann::json to_json() const;
    static EnsembleState from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static EnsembleState load(const std::string& path);
};

EnsembleState fit(const Dataset& d, const EnsembleConfig& cfg);

}  // namespace trajens
