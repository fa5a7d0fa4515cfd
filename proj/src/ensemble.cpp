#include "trajens/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

namespace trajens {

std::string to_string(BaselineMode b) {
    switch (b) {
        case BaselineMode::none: return "none";
        case BaselineMode::simple: return "simple";
        case BaselineMode::random_weights: return "random_weights";
    }
    return "?";
}

BaselineMode baseline_from_string(const std::string& s) {
    if (s == "none") return BaselineMode::none;
    if (s == "simple") return BaselineMode::simple;
    if (s == "random_weights" || s == "random") return BaselineMode::random_weights;
    throw ConfigError("unknown baseline mode: " + s);
}

std::string to_string(HMode m) {
    switch (m) {
        case HMode::combined: return "combined";
        case HMode::h1_only: return "h1_only";
        case HMode::h2_only: return "h2_only";
    }
    return "?";
}

HMode h_mode_from_string(const std::string& s) {
    if (s == "combined") return HMode::combined;
    if (s == "h1_only") return HMode::h1_only;
    if (s == "h2_only") return HMode::h2_only;
    throw ConfigError("unknown h mode: " + s);
}

void EnsembleConfig::validate() const {
    if (k < 1) throw ConfigError("ensemble.k must be >= 1");
    learner.validate();
    if (sr) sr->validate();
    if (fs) fs->validate();
}

std::vector<double> EnsembleState::predict(const Matrix& rows) const {
    if (sub_models.empty()) throw DataError("ensemble has no sub-models");
    if (rows.cols != full_width)
        throw DataError("feature width mismatch: expected " + std::to_string(full_width) +
                        ", found " + std::to_string(rows.cols));
    std::vector<double> sum(rows.rows, 0.0);
    for (const auto& sm : sub_models) {
        auto p = sm.model->predict(rows);
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += p[i];
    }
    for (auto& v : sum) v /= static_cast<double>(sub_models.size());
    return sum;
}

EnsembleState fit(const Dataset& d, const EnsembleConfig& cfg) {
    cfg.validate();
    d.validate();
    const std::size_t n = d.n();
    const std::size_t f = d.f();

    EnsembleState state;
    state.task_kind = d.task_kind;
    state.full_width = f;

    std::vector<double> weights(n, 1.0);
    std::vector<std::size_t> subset(f);
    std::iota(subset.begin(), subset.end(), 0);

    std::optional<WeightAssignment> pending_weights;
    std::optional<FeatureReport> pending_report;

    // running sum of per-sub-model training scores; L at step k uses sum/k
    std::vector<double> score_sum(n, 0.0);

    for (std::size_t k = 1; k <= cfg.k; ++k) {
        const std::uint64_t sub_seed = mix_seed(cfg.master_seed, k);

        if (cfg.baseline == BaselineMode::random_weights && k >= 1) {
            std::mt19937_64 rng(mix_seed(cfg.master_seed, k, 0x5A4DULL));
            std::uniform_real_distribution<double> unif(0.5, 1.5);
            for (auto& w : weights) w = unif(rng);
        }

        TrainResult tr;
        try {
            tr = train(d, weights, subset, cfg.learner, sub_seed);
        } catch (const std::exception& e) {
            throw NumericError("sub-model " + std::to_string(k) + ": " + e.what());
        }

        SubModelRecord rec;
        rec.model = tr.model;
        rec.feature_subset = subset;
        rec.weights_used = pending_weights;
        rec.report_used = pending_report;
        state.sub_models.push_back(std::move(rec));

        auto scores = tr.model->predict(d.features);
        for (std::size_t i = 0; i < n; ++i) score_sum[i] += scores[i];
        std::vector<double> ens_scores(n);
        for (std::size_t i = 0; i < n; ++i) ens_scores[i] = score_sum[i] / static_cast<double>(k);
        auto ensemble_losses = per_sample_loss(ens_scores, d.labels, d.task_kind);

        pending_weights.reset();
        pending_report.reset();

        const bool is_baseline = cfg.baseline != BaselineMode::none;
        if (cfg.sr && !is_baseline) {
            auto hv = compute_h(tr.curves, ensemble_losses, *cfg.sr);
            const std::vector<double>* driver = &hv.h;
            if (cfg.h_mode == HMode::h1_only) driver = &hv.h1;
            if (cfg.h_mode == HMode::h2_only) driver = &hv.h2;
            auto wa = assign_weights(*driver, k, *cfg.sr);
            wa.h1 = hv.h1;
            wa.h2 = hv.h2;
            weights = wa.weights;
            pending_weights = std::move(wa);
        }
        if (cfg.fs && !is_baseline) {
            // snapshot the current ensemble (sub-models 1..k) for shuffling
            std::vector<std::shared_ptr<TrainedModel>> models;
            for (const auto& sm : state.sub_models) models.push_back(sm.model);
            PredictFn pf = [models](const Matrix& rows) {
                std::vector<double> sum(rows.rows, 0.0);
                for (const auto& m : models) {
                    auto p = m->predict(rows);
                    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += p[i];
                }
                for (auto& v : sum) v /= static_cast<double>(models.size());
                return sum;
            };
            FSConfig fscfg = *cfg.fs;
            fscfg.shuffle_seed = mix_seed(cfg.master_seed, k, 0xF5ULL);
            auto report = select_features(pf, d, fscfg);
            subset = report.selected;
            pending_report = std::move(report);
        }
    }

    // Alg. 1 computes the last (w, f) and never consumes them; keep for logging.
    state.final_weights = std::move(pending_weights);
    state.final_report = std::move(pending_report);
    return state;
}

nlohmann::json EnsembleState::to_json() const {
    nlohmann::json j;
    j["format"] = "trajens-ensemble";
    j["version"] = 1;
    j["task"] = to_string(task_kind);
    j["full_width"] = full_width;
    nlohmann::json subs = nlohmann::json::array();
    for (const auto& sm : sub_models) {
        nlohmann::json js;
        js["model"] = sm.model->to_json();
        js["feature_subset"] = sm.feature_subset;
        subs.push_back(std::move(js));
    }
    j["sub_models"] = std::move(subs);
    return j;
}

EnsembleState EnsembleState::from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "trajens-ensemble")
        throw DataError("not an ensemble model file");
    if (j.at("version").get<int>() != 1) throw DataError("unsupported model file version");
    EnsembleState s;
    s.task_kind = task_kind_from_string(j.at("task").get<std::string>());
    s.full_width = j.at("full_width").get<std::size_t>();
    for (const auto& js : j.at("sub_models")) {
        SubModelRecord rec;
        rec.model = TrainedModel::from_json(js.at("model"));
        rec.feature_subset = js.at("feature_subset").get<std::vector<std::size_t>>();
        s.sub_models.push_back(std::move(rec));
    }
    return s;
}

void EnsembleState::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file: " + path);
    out << to_json().dump(1);
}

EnsembleState EnsembleState::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DataError(std::string("malformed model file: ") + e.what());
    }
    return from_json(j);
}

}  // namespace trajens
