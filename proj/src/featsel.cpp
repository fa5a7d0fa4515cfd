#include "trajens/featsel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "trajens/learner.hpp"

namespace trajens {

void FSConfig::validate() const {
    if (bins < 1) throw ConfigError("fs.bins must be >= 1");
    if (repeats < 1) throw ConfigError("fs.repeats must be >= 1");
    if (sampling_ratios.size() != bins)
        throw ConfigError("fs.sampling_ratios must have one entry per bin");
    for (std::size_t i = 0; i < sampling_ratios.size(); ++i) {
        double r = sampling_ratios[i];
        if (r <= 0 || r > 1) throw ConfigError("fs sampling ratios must be in (0,1]");
        if (i > 0 && r > sampling_ratios[i - 1])
            throw ConfigError("fs sampling ratios must be non-increasing");
    }
}

namespace {

double g_value_with_losses(const PredictFn& ensemble, const Dataset& d,
                           const std::vector<double>& base_loss, std::size_t feature_index,
                           std::uint64_t seed, std::size_t repeats) {
    const std::size_t n = d.n();
    if (n < 2) throw DataError("g_value needs N >= 2");
    if (feature_index >= d.f()) throw DataError("feature index out of range");

    Matrix shuffled = d.features;
    std::vector<double> column(n);
    double g_sum = 0.0;
    for (std::size_t rep = 0; rep < repeats; ++rep) {
        std::mt19937_64 rng(mix_seed(seed, feature_index, rep));
        for (std::size_t i = 0; i < n; ++i) column[i] = d.features.at(i, feature_index);
        std::shuffle(column.begin(), column.end(), rng);
        for (std::size_t i = 0; i < n; ++i) shuffled.at(i, feature_index) = column[i];

        auto scores = ensemble(shuffled);
        auto lf = per_sample_loss(scores, d.labels, d.task_kind);

        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += lf[i] - base_loss[i];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double dd = lf[i] - base_loss[i] - mean;
            var += dd * dd;
        }
        var /= static_cast<double>(n - 1);
        double sd = std::sqrt(var);
        g_sum += sd == 0.0 ? 0.0 : mean / sd;
    }
    return g_sum / static_cast<double>(repeats);
}

}  // namespace

double g_value(const PredictFn& ensemble, const Dataset& d, std::size_t feature_index,
               std::uint64_t seed, std::size_t repeats) {
    auto base_loss = per_sample_loss(ensemble(d.features), d.labels, d.task_kind);
    return g_value_with_losses(ensemble, d, base_loss, feature_index, seed, repeats);
}

FeatureReport select_features(const PredictFn& ensemble, const Dataset& d, const FSConfig& cfg) {
    cfg.validate();
    const std::size_t f = d.f();
    if (f < 1) throw DataError("dataset has no features");

    FeatureReport rep;
    rep.g_values.resize(f);
    auto base_loss = per_sample_loss(ensemble(d.features), d.labels, d.task_kind);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t j = 0; j < f; ++j)
        rep.g_values[j] =
            g_value_with_losses(ensemble, d, base_loss, j, cfg.shuffle_seed, cfg.repeats);

    std::size_t bins = cfg.bins;
    if (bins > f) {
        bins = f;
        rep.bins_clamped = true;
    }

    // descending g, ties by ascending index
    std::vector<std::size_t> order(f);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rep.g_values[a] != rep.g_values[b]) return rep.g_values[a] > rep.g_values[b];
        return a < b;
    });

    rep.bin_of.resize(f);
    std::mt19937_64 rng(mix_seed(cfg.shuffle_seed, 0xFEEDULL));
    const std::size_t base = f / bins;
    const std::size_t remainder = f % bins;
    std::size_t pos = 0;
    for (std::size_t bd = 0; bd < bins; ++bd) {
        const std::size_t size = base + (bd < remainder ? 1 : 0);
        const double ratio = cfg.sampling_ratios[bd];
        const std::size_t pick = static_cast<std::size_t>(
            std::ceil(ratio * static_cast<double>(size)));
        std::vector<std::size_t> bin_feats(order.begin() + pos, order.begin() + pos + size);
        for (auto j : bin_feats) rep.bin_of[j] = bd + 1;
        std::shuffle(bin_feats.begin(), bin_feats.end(), rng);
        for (std::size_t q = 0; q < pick && q < bin_feats.size(); ++q)
            rep.selected.push_back(bin_feats[q]);
        rep.per_bin_counts.emplace_back(size, std::min(pick, size));
        pos += size;
    }
    std::sort(rep.selected.begin(), rep.selected.end());
    return rep;
}

void write_feature_report_csv(const FeatureReport& r, const Dataset& d,
                              const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << "feature_index,feature_name,g_value,bin,selected\n";
    char buf[64];
    for (std::size_t j = 0; j < r.g_values.size(); ++j) {
        bool sel = std::binary_search(r.selected.begin(), r.selected.end(), j);
        std::snprintf(buf, sizeof(buf), "%.17g", r.g_values[j]);
        out << j << ',' << d.feature_names[j] << ',' << buf << ',' << r.bin_of[j] << ','
            << (sel ? 1 : 0) << '\n';
    }
}

}  // namespace trajens
