#pragma once

#include <cstdint>
#include <vector>

#include "trajens/common.hpp"
#include "trajens/learner.hpp"

namespace trajens {

struct SRConfig {
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    std::size_t bins = 10;
    double gamma = 0.9;
    double head_tail_fraction = 0.10;

    void validate() const;
};

struct WeightAssignment {
    std::vector<double> h1, h2, h;
    std::vector<std::size_t> bin_of;   // 1-based, bin 1 holds the smallest h-values
    std::vector<double> bin_mean_h;    // per bin
    std::vector<double> weights;
    bool bins_clamped = false;
};

// Column-wise fractional ranks in [0,1):
//   out_ij = (#strictly smaller + 0.5 * #equal excluding self) / N
Matrix rank_normalize(const Matrix& m);

struct HValues {
    std::vector<double> h1, h2, h;
};

HValues compute_h(const LossCurves& curves, const std::vector<double>& ensemble_losses,
                  const SRConfig& cfg);

WeightAssignment assign_weights(const std::vector<double>& h, std::size_t k, const SRConfig& cfg);

// Variant selecting which h term drives the binning; h1/h2 must be the
// rank-normalized terms from compute_h.
enum class HMode { combined, h1_only, h2_only };

void write_weight_csv(const WeightAssignment& wa, const std::string& path);

}  // namespace trajens
