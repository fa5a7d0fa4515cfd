#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "trajens/common.hpp"
#include "trajens/dataset.hpp"

namespace trajens {

// Scores for a batch of full-width feature rows.
using PredictFn = std::function<std::vector<double>(const Matrix&)>;

struct FSConfig {
    std::size_t bins = 5;
    std::vector<double> sampling_ratios = {0.8, 0.7, 0.6, 0.5, 0.4};
    std::uint64_t shuffle_seed = 0;
    std::size_t repeats = 3;

    void validate() const;
};

struct FeatureReport {
    std::vector<double> g_values;              // per feature
    std::vector<std::size_t> bin_of;           // 1-based, bin 1 holds the largest g-values
    std::vector<std::size_t> selected;         // ascending feature indices
    std::vector<std::pair<std::size_t, std::size_t>> per_bin_counts;  // (N_d, picked_d)
    bool bins_clamped = false;
};

// Standardized mean loss increase when the feature's column is shuffled;
// averaged over `repeats` fresh permutations. 0 when std(L_f - L) == 0.
double g_value(const PredictFn& ensemble, const Dataset& d, std::size_t feature_index,
               std::uint64_t seed, std::size_t repeats);

FeatureReport select_features(const PredictFn& ensemble, const Dataset& d, const FSConfig& cfg);

void write_feature_report_csv(const FeatureReport& r, const Dataset& d, const std::string& path);

}  // namespace trajens
