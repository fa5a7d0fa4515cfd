#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "models.hpp"

namespace trajens {

namespace {

struct SplitChoice {
    double gain = 0.0;
    int feature = -1;       // full-width column index
    double threshold = 0.0;
    bool valid() const { return feature >= 0; }

    // deterministic ordering: larger gain first, then lower feature, lower threshold
    bool better_than(const SplitChoice& o) const {
        if (!o.valid()) return valid();
        if (!valid()) return false;
        if (gain != o.gain) return gain > o.gain;
        if (feature != o.feature) return feature < o.feature;
        return threshold < o.threshold;
    }
};

struct LeafState {
    std::vector<std::uint32_t> samples;
    double sum_g = 0.0;
    double sum_h = 0.0;
    int node_id = -1;
    SplitChoice best;
};

}  // namespace

TrainResult train_gbdt(const Dataset& d, const std::vector<double>& w,
                       const std::vector<std::size_t>& fs, const LearnerConfig& cfg,
                       std::uint64_t) {
    const std::size_t n = d.n();
    const std::size_t p = fs.size();
    const bool classify = d.task_kind == TaskKind::binary_classification;
    const double lr = cfg.gbdt.learning_rate;
    const std::size_t msl = cfg.gbdt.min_samples_leaf;

    // presorted sample orders per selected feature, ties broken by index
    std::vector<std::vector<std::uint32_t>> order(p);
    for (std::size_t k = 0; k < p; ++k) {
        auto& o = order[k];
        o.resize(n);
        std::iota(o.begin(), o.end(), 0u);
        const std::size_t col = fs[k];
        std::stable_sort(o.begin(), o.end(), [&](std::uint32_t a, std::uint32_t b) {
            return d.features.at(a, col) < d.features.at(b, col);
        });
    }

    auto model = std::make_shared<GbdtModel>();
    model->set_meta(d.task_kind, d.f(), fs);

    double wsum = 0.0, wy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        wsum += w[i];
        wy += w[i] * d.labels[i];
    }
    double mean = wy / wsum;
    if (classify) {
        mean = std::clamp(mean, 1e-12, 1.0 - 1e-12);
        model->base_score = std::log(mean / (1.0 - mean));
    } else {
        model->base_score = mean;
    }

    std::vector<double> margin(n, model->base_score);
    std::vector<double> grad(n), hess(n);
    std::vector<std::uint8_t> in_node(n, 0);

    TrainResult out;
    out.curves.values = Matrix(n, cfg.iterations);

    auto search_leaf = [&](LeafState& leaf) {
        leaf.best = SplitChoice{};
        if (leaf.samples.size() < 2 * msl) return;
        for (auto i : leaf.samples) in_node[i] = 1;
        std::vector<SplitChoice> per_feat(p);
#pragma omp parallel for schedule(dynamic)
        for (std::size_t k = 0; k < p; ++k) {
            const std::size_t col = fs[k];
            SplitChoice best;
            double gl = 0.0, hl = 0.0;
            std::size_t cl = 0;
            double prev_val = 0.0;
            bool have_prev = false;
            for (auto i : order[k]) {
                if (!in_node[i]) continue;
                double v = d.features.at(i, col);
                if (have_prev && v > prev_val && cl >= msl && leaf.samples.size() - cl >= msl &&
                    hl > 0 && leaf.sum_h - hl > 0) {
                    double gr = leaf.sum_g - gl;
                    double hr = leaf.sum_h - hl;
                    double gain = gl * gl / hl + gr * gr / hr -
                                  leaf.sum_g * leaf.sum_g / leaf.sum_h;
                    SplitChoice c{gain, static_cast<int>(col), 0.5 * (prev_val + v)};
                    if (gain > 0 && c.better_than(best)) best = c;
                }
                gl += grad[i];
                hl += hess[i];
                ++cl;
                prev_val = v;
                have_prev = true;
            }
            per_feat[k] = best;
        }
        for (auto& c : per_feat)
            if (c.better_than(leaf.best)) leaf.best = c;
        for (auto i : leaf.samples) in_node[i] = 0;
    };

    for (std::size_t t = 0; t < cfg.iterations; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            if (classify) {
                double pr = sigmoid(margin[i]);
                grad[i] = w[i] * (pr - d.labels[i]);
                hess[i] = std::max(w[i] * pr * (1.0 - pr), 1e-12 * w[i]);
            } else {
                grad[i] = w[i] * (margin[i] - d.labels[i]);
                hess[i] = w[i];
            }
        }

        GbdtTree tree;
        std::vector<LeafState> leaves;
        {
            LeafState root;
            root.samples.resize(n);
            std::iota(root.samples.begin(), root.samples.end(), 0u);
            root.sum_g = std::accumulate(grad.begin(), grad.end(), 0.0);
            root.sum_h = std::accumulate(hess.begin(), hess.end(), 0.0);
            root.node_id = 0;
            tree.nodes.emplace_back();
            search_leaf(root);
            leaves.push_back(std::move(root));
        }

        while (leaves.size() < cfg.gbdt.max_leaves) {
            std::size_t pick = leaves.size();
            for (std::size_t li = 0; li < leaves.size(); ++li)
                if (leaves[li].best.valid() &&
                    (pick == leaves.size() || leaves[li].best.better_than(leaves[pick].best)))
                    pick = li;
            if (pick == leaves.size()) break;  // no further positive-gain split

            LeafState parent = std::move(leaves[pick]);
            LeafState left, right;
            const int col = parent.best.feature;
            for (auto i : parent.samples) {
                if (d.features.at(i, static_cast<std::size_t>(col)) <= parent.best.threshold) {
                    left.samples.push_back(i);
                    left.sum_g += grad[i];
                    left.sum_h += hess[i];
                } else {
                    right.samples.push_back(i);
                    right.sum_g += grad[i];
                    right.sum_h += hess[i];
                }
            }
            auto& pn = tree.nodes[parent.node_id];
            pn.feature = col;
            pn.threshold = parent.best.threshold;
            pn.left = static_cast<int>(tree.nodes.size());
            pn.right = pn.left + 1;
            left.node_id = pn.left;
            right.node_id = pn.right;
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            search_leaf(left);
            search_leaf(right);
            leaves[pick] = std::move(left);
            leaves.push_back(std::move(right));
        }

        for (auto& leaf : leaves)
            tree.nodes[leaf.node_id].value =
                leaf.sum_h > 0 ? -lr * leaf.sum_g / leaf.sum_h : 0.0;

        for (auto& leaf : leaves) {
            double v = tree.nodes[leaf.node_id].value;
            for (auto i : leaf.samples) margin[i] += v;
        }
        model->trees.push_back(std::move(tree));

        for (std::size_t i = 0; i < n; ++i) {
            double score = classify ? sigmoid(margin[i]) : margin[i];
            double l = pointwise_loss(score, d.labels[i], d.task_kind);
            if (!std::isfinite(l))
                throw NumericError("non-finite loss in gbdt fit at iteration " +
                                   std::to_string(t + 1));
            out.curves.values.at(i, t) = l;
        }
    }

    out.model = std::move(model);
    return out;
}

}  // namespace trajens
