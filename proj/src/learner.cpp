#include "trajens/learner.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "models.hpp"

namespace trajens {

std::string to_string(LearnerKind k) {
    switch (k) {
        case LearnerKind::gbdt: return "gbdt";
        case LearnerKind::mlp: return "mlp";
        case LearnerKind::ridge: return "ridge";
    }
    return "?";
}

LearnerKind learner_kind_from_string(const std::string& s) {
    if (s == "gbdt") return LearnerKind::gbdt;
    if (s == "mlp") return LearnerKind::mlp;
    if (s == "ridge") return LearnerKind::ridge;
    throw ConfigError("unknown learner kind: " + s);
}

void LearnerConfig::validate() const {
    if (iterations < 1) throw ConfigError("iterations must be >= 1");
    if (gbdt.max_leaves < 2) throw ConfigError("gbdt.max_leaves must be >= 2");
    if (gbdt.learning_rate <= 0) throw ConfigError("gbdt.learning_rate must be > 0");
    if (gbdt.min_samples_leaf < 1) throw ConfigError("gbdt.min_samples_leaf must be >= 1");
    if (mlp.learning_rate <= 0) throw ConfigError("mlp.learning_rate must be > 0");
    for (auto h : mlp.hidden_sizes)
        if (h < 1) throw ConfigError("mlp hidden layer sizes must be >= 1");
    if (ridge.l2 < 0) throw ConfigError("ridge.l2 must be >= 0");
}

std::vector<double> TrainedModel::predict(const Matrix& rows) const {
    if (rows.cols != full_width_)
        throw DataError("feature width mismatch: expected " + std::to_string(full_width_) +
                        ", found " + std::to_string(rows.cols));
    std::vector<double> out(rows.rows);
    for (std::size_t i = 0; i < rows.rows; ++i) out[i] = predict_row(rows.row(i));
    return out;
}

void TrainedModel::base_to_json(nlohmann::json& j) const {
    j["task"] = to_string(task_kind_);
    j["full_width"] = full_width_;
    j["feature_subset"] = feature_subset_;
}

void TrainedModel::base_from_json(const nlohmann::json& j) {
    task_kind_ = task_kind_from_string(j.at("task").get<std::string>());
    full_width_ = j.at("full_width").get<std::size_t>();
    feature_subset_ = j.at("feature_subset").get<std::vector<std::size_t>>();
}

double pointwise_loss(double score, double label, TaskKind task) {
    if (task == TaskKind::regression) {
        double e = score - label;
        return e * e;
    }
    constexpr double eps = 1e-12;
    double p = std::clamp(score, eps, 1.0 - eps);
    return label > 0.5 ? -std::log(p) : -std::log(1.0 - p);
}

std::vector<double> per_sample_loss(const std::vector<double>& scores,
                                    const std::vector<double>& labels, TaskKind task) {
    if (scores.size() != labels.size()) throw DataError("score/label length mismatch");
    std::vector<double> out(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        out[i] = pointwise_loss(scores[i], labels[i], task);
    return out;
}

std::vector<double> per_sample_loss(const TrainedModel& m, const Dataset& d) {
    if (m.task_kind() != d.task_kind) throw DataError("model/dataset task kind mismatch");
    return per_sample_loss(m.predict(d.features), d.labels, d.task_kind);
}

TrainResult train(const Dataset& d, const std::vector<double>& weights,
                  const std::vector<std::size_t>& feature_subset,
                  const LearnerConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    d.validate();
    if (weights.size() != d.n()) throw DataError("weight count does not match sample count");
    double wsum = 0.0;
    for (double w : weights) {
        if (!(w >= 0) || !std::isfinite(w)) throw DataError("weights must be finite and >= 0");
        wsum += w;
    }
    if (wsum <= 0.0) throw DataError("all-zero sample weights");
    if (feature_subset.empty()) throw DataError("empty feature subset");
    std::set<std::size_t> seen;
    for (auto j : feature_subset) {
        if (j >= d.f()) throw DataError("feature index out of range: " + std::to_string(j));
        if (!seen.insert(j).second) throw DataError("duplicate feature index in subset");
    }

    switch (cfg.kind) {
        case LearnerKind::ridge: return train_ridge(d, weights, feature_subset, cfg, seed);
        case LearnerKind::gbdt: return train_gbdt(d, weights, feature_subset, cfg, seed);
        case LearnerKind::mlp: return train_mlp(d, weights, feature_subset, cfg, seed);
    }
    throw ConfigError("unreachable learner kind");
}

std::shared_ptr<TrainedModel> TrainedModel::from_json(const nlohmann::json& j) {
    auto kind = j.at("kind").get<std::string>();
    if (kind == "ridge") return RidgeModel::make_from_json(j);
    if (kind == "gbdt") return GbdtModel::make_from_json(j);
    if (kind == "mlp") return MlpModel::make_from_json(j);
    throw DataError("unknown model kind in serialized blob: " + kind);
}

}  // namespace trajens
