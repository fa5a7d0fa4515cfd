#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "models.hpp"

namespace trajens {

TrainResult train_mlp(const Dataset& d, const std::vector<double>& w,
                      const std::vector<std::size_t>& fs, const LearnerConfig& cfg,
                      std::uint64_t seed) {
    const std::size_t n = d.n();
    const std::size_t p = fs.size();
    const bool classify = d.task_kind == TaskKind::binary_classification;

    auto model = std::make_shared<MlpModel>();
    model->set_meta(d.task_kind, d.f(), fs);

    std::vector<std::size_t> sizes;
    sizes.push_back(p);
    for (auto h : cfg.mlp.hidden_sizes) sizes.push_back(h);
    sizes.push_back(1);
    const std::size_t nlayers = sizes.size() - 1;

    std::mt19937_64 rng(mix_seed(seed, 0x317AULL));
    for (std::size_t l = 0; l < nlayers; ++l) {
        double a = std::sqrt(6.0 / static_cast<double>(sizes[l] + sizes[l + 1]));
        std::uniform_real_distribution<double> unif(-a, a);
        Matrix W(sizes[l + 1], sizes[l]);
        for (auto& v : W.data) v = unif(rng);
        model->weights.push_back(std::move(W));
        model->biases.emplace_back(sizes[l + 1], 0.0);
    }

    // activations per layer (post-nonlinearity), deltas for backprop
    std::vector<std::vector<double>> act(nlayers + 1), delta(nlayers + 1);
    for (std::size_t l = 0; l <= nlayers; ++l) {
        act[l].resize(sizes[l]);
        delta[l].resize(sizes[l]);
    }
    std::vector<Matrix> gw;
    std::vector<std::vector<double>> gb;
    for (std::size_t l = 0; l < nlayers; ++l) {
        gw.emplace_back(sizes[l + 1], sizes[l]);
        gb.emplace_back(sizes[l + 1], 0.0);
    }

    // forward to the raw output (pre-sigmoid for classification)
    auto forward = [&](const double* row) {
        for (std::size_t k = 0; k < p; ++k) act[0][k] = row[fs[k]];
        for (std::size_t l = 0; l < nlayers; ++l) {
            const Matrix& W = model->weights[l];
            for (std::size_t o = 0; o < W.rows; ++o) {
                double z = model->biases[l][o];
                const double* wr = W.row(o);
                for (std::size_t in = 0; in < W.cols; ++in) z += wr[in] * act[l][in];
                act[l + 1][o] = l + 1 < nlayers ? std::tanh(z) : z;
            }
        }
        return act[nlayers][0];
    };

    const std::size_t batch = cfg.mlp.batch_size == 0 ? n : std::min(cfg.mlp.batch_size, n);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);

    TrainResult out;
    out.curves.values = Matrix(n, cfg.iterations);

    for (std::size_t epoch = 0; epoch < cfg.iterations; ++epoch) {
        if (batch < n) std::shuffle(idx.begin(), idx.end(), rng);
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t end = std::min(start + batch, n);
            for (auto& g : gw) std::fill(g.data.begin(), g.data.end(), 0.0);
            for (auto& g : gb) std::fill(g.begin(), g.end(), 0.0);
            double bw = 0.0;
            for (std::size_t bi = start; bi < end; ++bi) {
                const std::size_t i = idx[bi];
                if (w[i] == 0.0) {
                    bw += 0.0;
                    continue;
                }
                double z = forward(d.features.row(i));
                double dz;  // d loss / d raw output
                if (classify) {
                    dz = sigmoid(z) - d.labels[i];
                } else {
                    dz = 2.0 * (z - d.labels[i]);
                }
                delta[nlayers][0] = dz;
                for (std::size_t l = nlayers; l-- > 0;) {
                    const Matrix& W = model->weights[l];
                    if (l > 0) std::fill(delta[l].begin(), delta[l].end(), 0.0);
                    for (std::size_t o = 0; o < W.rows; ++o) {
                        double dl = delta[l + 1][o];
                        double* gr = gw[l].row(o);
                        const double* wr = W.row(o);
                        for (std::size_t in = 0; in < W.cols; ++in) {
                            gr[in] += w[i] * dl * act[l][in];
                            if (l > 0) delta[l][in] += dl * wr[in];
                        }
                        gb[l][o] += w[i] * dl;
                    }
                    if (l > 0)
                        for (std::size_t in = 0; in < sizes[l]; ++in)
                            delta[l][in] *= 1.0 - act[l][in] * act[l][in];  // tanh'
                }
                bw += w[i];
            }
            if (bw <= 0.0) continue;
            const double scale = cfg.mlp.learning_rate / bw;
            for (std::size_t l = 0; l < nlayers; ++l) {
                for (std::size_t q = 0; q < gw[l].data.size(); ++q)
                    model->weights[l].data[q] -= scale * gw[l].data[q];
                for (std::size_t o = 0; o < gb[l].size(); ++o)
                    model->biases[l][o] -= scale * gb[l][o];
            }
        }

        for (std::size_t i = 0; i < n; ++i) {
            double z = forward(d.features.row(i));
            double score = classify ? sigmoid(z) : z;
            double l = pointwise_loss(score, d.labels[i], d.task_kind);
            if (!std::isfinite(l))
                throw NumericError("non-finite loss in mlp fit at epoch " +
                                   std::to_string(epoch + 1));
            out.curves.values.at(i, epoch) = l;
        }
    }

    out.model = std::move(model);
    return out;
}

}  // namespace trajens
