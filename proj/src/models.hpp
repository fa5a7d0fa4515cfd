#pragma once

// Concrete model representations shared by the per-learner translation units.

#include <cmath>
#include <vector>

#include "trajens/learner.hpp"

namespace trajens {

// Clamped so classification scores stay strictly inside (0,1) even for
// extreme margins, which keeps downstream log-losses finite.
inline double sigmoid(double z) {
    double p = 1.0 / (1.0 + std::exp(-z));
    if (p <= 0.0) return 1e-15;
    if (p >= 1.0) return 1.0 - 1e-15;
    return p;
}

class RidgeModel final : public TrainedModel {
  public:
    // coef aligned with feature_subset; intercept separate.
    std::vector<double> coef;
    double intercept = 0.0;

    double predict_row(const double* row) const override {
        double z = intercept;
        for (std::size_t k = 0; k < feature_subset_.size(); ++k)
            z += coef[k] * row[feature_subset_[k]];
        return task_kind_ == TaskKind::binary_classification ? sigmoid(z) : z;
    }

    nlohmann::json to_json() const override {
        nlohmann::json j;
        base_to_json(j);
        j["kind"] = "ridge";
        j["coef"] = coef;
        j["intercept"] = intercept;
        return j;
    }

    static std::shared_ptr<RidgeModel> make_from_json(const nlohmann::json& j) {
        auto m = std::make_shared<RidgeModel>();
        m->base_from_json(j);
        m->coef = j.at("coef").get<std::vector<double>>();
        m->intercept = j.at("intercept").get<double>();
        return m;
    }

    void set_meta(TaskKind t, std::size_t width, std::vector<std::size_t> subset) {
        task_kind_ = t;
        full_width_ = width;
        feature_subset_ = std::move(subset);
    }
};

struct GbdtNode {
    // feature is a full-width column index; leaves have feature == -1.
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
};

struct GbdtTree {
    std::vector<GbdtNode> nodes;

    double eval(const double* row) const {
        int i = 0;
        while (nodes[i].feature >= 0)
            i = row[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
        return nodes[i].value;
    }
};

class GbdtModel final : public TrainedModel {
  public:
    double base_score = 0.0;
    std::vector<GbdtTree> trees;

    double margin(const double* row) const {
        double z = base_score;
        for (const auto& t : trees) z += t.eval(row);
        return z;
    }

    double predict_row(const double* row) const override {
        double z = margin(row);
        return task_kind_ == TaskKind::binary_classification ? sigmoid(z) : z;
    }

    nlohmann::json to_json() const override {
        nlohmann::json j;
        base_to_json(j);
        j["kind"] = "gbdt";
        j["base_score"] = base_score;
        nlohmann::json jt = nlohmann::json::array();
        for (const auto& t : trees) {
            nlohmann::json jn = nlohmann::json::array();
            for (const auto& n : t.nodes)
                jn.push_back({n.feature, n.threshold, n.left, n.right, n.value});
            jt.push_back(std::move(jn));
        }
        j["trees"] = std::move(jt);
        return j;
    }

    static std::shared_ptr<GbdtModel> make_from_json(const nlohmann::json& j) {
        auto m = std::make_shared<GbdtModel>();
        m->base_from_json(j);
        m->base_score = j.at("base_score").get<double>();
        for (const auto& jt : j.at("trees")) {
            GbdtTree t;
            for (const auto& jn : jt) {
                GbdtNode n;
                n.feature = jn.at(0).get<int>();
                n.threshold = jn.at(1).get<double>();
                n.left = jn.at(2).get<int>();
                n.right = jn.at(3).get<int>();
                n.value = jn.at(4).get<double>();
                t.nodes.push_back(n);
            }
            m->trees.push_back(std::move(t));
        }
        return m;
    }

    void set_meta(TaskKind t, std::size_t width, std::vector<std::size_t> subset) {
        task_kind_ = t;
        full_width_ = width;
        feature_subset_ = std::move(subset);
    }
};

class MlpModel final : public TrainedModel {
  public:
    // layer l maps sizes[l] -> sizes[l+1]; weights[l] is (out x in), row-major.
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;

    double predict_row(const double* row) const override {
        std::vector<double> a(feature_subset_.size());
        for (std::size_t k = 0; k < feature_subset_.size(); ++k) a[k] = row[feature_subset_[k]];
        std::vector<double> b;
        for (std::size_t l = 0; l < weights.size(); ++l) {
            const Matrix& W = weights[l];
            b.assign(W.rows, 0.0);
            for (std::size_t o = 0; o < W.rows; ++o) {
                double z = biases[l][o];
                const double* wr = W.row(o);
                for (std::size_t in = 0; in < W.cols; ++in) z += wr[in] * a[in];
                b[o] = l + 1 < weights.size() ? std::tanh(z) : z;
            }
            a.swap(b);
        }
        return task_kind_ == TaskKind::binary_classification ? sigmoid(a[0]) : a[0];
    }

    nlohmann::json to_json() const override {
        nlohmann::json j;
        base_to_json(j);
        j["kind"] = "mlp";
        nlohmann::json jl = nlohmann::json::array();
        for (std::size_t l = 0; l < weights.size(); ++l) {
            jl.push_back({{"rows", weights[l].rows},
                          {"cols", weights[l].cols},
                          {"w", weights[l].data},
                          {"b", biases[l]}});
        }
        j["layers"] = std::move(jl);
        return j;
    }

    static std::shared_ptr<MlpModel> make_from_json(const nlohmann::json& j) {
        auto m = std::make_shared<MlpModel>();
        m->base_from_json(j);
        for (const auto& jl : j.at("layers")) {
            Matrix W(jl.at("rows").get<std::size_t>(), jl.at("cols").get<std::size_t>());
            W.data = jl.at("w").get<std::vector<double>>();
            m->weights.push_back(std::move(W));
            m->biases.push_back(jl.at("b").get<std::vector<double>>());
        }
        return m;
    }

    void set_meta(TaskKind t, std::size_t width, std::vector<std::size_t> subset) {
        task_kind_ = t;
        full_width_ = width;
        feature_subset_ = std::move(subset);
    }
};

}  // namespace trajens
