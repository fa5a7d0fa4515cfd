#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "trajens/common.hpp"
#include "trajens/dataset.hpp"
#include <json.hpp>

namespace trajens {

enum class LearnerKind { gbdt, mlp, ridge };

std::string to_string(LearnerKind k);
LearnerKind learner_kind_from_string(const std::string& s);

struct LearnerConfig {
    LearnerKind kind = LearnerKind::gbdt;
    std::size_t iterations = 200;  // trees for gbdt, epochs for mlp, IRLS steps for ridge

    struct Gbdt {
        std::size_t max_leaves = 32;
        double learning_rate = 0.1;
        std::size_t min_samples_leaf = 1;
    } gbdt;

    struct Mlp {
        std::vector<std::size_t> hidden_sizes = {64, 64};
        double learning_rate = 0.05;
        std::size_t batch_size = 0;  // 0 = full batch
    } mlp;

    struct Ridge {
        double l2 = 0.0;
    } ridge;

    void validate() const;
};

// Per-sample unweighted training loss after each iteration; N x T_realized.
struct LossCurves {
    Matrix values;
    std::size_t n() const { return values.rows; }
    std::size_t t() const { return values.cols; }
};

class TrainedModel {
  public:
    virtual ~TrainedModel() = default;

    // rows must have the full training-time width; the model restricts to
    // feature_subset internally.
    std::vector<double> predict(const Matrix& rows) const;

    virtual double predict_row(const double* row) const = 0;
    virtual nlohmann::json to_json() const = 0;

    TaskKind task_kind() const { return task_kind_; }
    std::size_t full_width() const { return full_width_; }
    const std::vector<std::size_t>& feature_subset() const { return feature_subset_; }

    static std::shared_ptr<TrainedModel> from_json(const nlohmann::json& j);

  protected:
    TaskKind task_kind_ = TaskKind::regression;
    std::size_t full_width_ = 0;
    std::vector<std::size_t> feature_subset_;

    void base_to_json(nlohmann::json& j) const;
    void base_from_json(const nlohmann::json& j);
};

struct TrainResult {
    std::shared_ptr<TrainedModel> model;
    LossCurves curves;
};

TrainResult train(const Dataset& d, const std::vector<double>& weights,
                  const std::vector<std::size_t>& feature_subset,
                  const LearnerConfig& cfg, std::uint64_t seed);

// Squared error (regression) or clamped log-loss (classification) of a score
// against a label.
double pointwise_loss(double score, double label, TaskKind task);

std::vector<double> per_sample_loss(const TrainedModel& m, const Dataset& d);
std::vector<double> per_sample_loss(const std::vector<double>& scores,
                                    const std::vector<double>& labels, TaskKind task);

// Internal entry points, one per learner kind.
TrainResult train_ridge(const Dataset& d, const std::vector<double>& w,
                        const std::vector<std::size_t>& fs, const LearnerConfig& cfg,
                        std::uint64_t seed);
TrainResult train_gbdt(const Dataset& d, const std::vector<double>& w,
                       const std::vector<std::size_t>& fs, const LearnerConfig& cfg,
                       std::uint64_t seed);
TrainResult train_mlp(const Dataset& d, const std::vector<double>& w,
                      const std::vector<std::size_t>& fs, const LearnerConfig& cfg,
                      std::uint64_t seed);

}  // namespace trajens
