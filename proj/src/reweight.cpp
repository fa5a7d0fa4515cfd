#include "trajens/reweight.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace trajens {

void SRConfig::validate() const {
    if (bins < 1) throw ConfigError("sr.bins must be >= 1");
    if (gamma < 0 || gamma > 1) throw ConfigError("sr.gamma must be in [0,1]");
    if (head_tail_fraction <= 0 || head_tail_fraction > 0.5)
        throw ConfigError("sr.head_tail_fraction must be in (0, 0.5]");
}

Matrix rank_normalize(const Matrix& m) {
    if (m.rows < 1) throw DataError("rank_normalize needs N >= 1");
    for (double v : m.data)
        if (!std::isfinite(v)) throw NumericError("non-finite input to rank_normalize");

    const std::size_t n = m.rows;
    Matrix out(n, m.cols);
    std::vector<std::uint32_t> idx(n);
#pragma omp parallel for schedule(dynamic) firstprivate(idx)
    for (std::size_t j = 0; j < m.cols; ++j) {
        std::iota(idx.begin(), idx.end(), 0u);
        std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
            return m.at(a, j) < m.at(b, j);
        });
        std::size_t g = 0;
        while (g < n) {
            std::size_t e = g + 1;
            while (e < n && m.at(idx[e], j) == m.at(idx[g], j)) ++e;
            // tie group occupies sorted positions [g, e)
            double r = (static_cast<double>(g) + 0.5 * static_cast<double>(e - g - 1)) /
                       static_cast<double>(n);
            for (std::size_t q = g; q < e; ++q) out.at(idx[q], j) = r;
            g = e;
        }
    }
    return out;
}

namespace {

std::vector<double> rank_normalize_vec(const std::vector<double>& v) {
    Matrix m(v.size(), 1);
    m.data = v;
    return rank_normalize(m).data;
}

}  // namespace

HValues compute_h(const LossCurves& curves, const std::vector<double>& ensemble_losses,
                  const SRConfig& cfg) {
    cfg.validate();
    const std::size_t n = curves.n();
    const std::size_t t = curves.t();
    if (t == 0) throw DataError("loss curves have zero iterations");
    if (ensemble_losses.size() != n) throw DataError("ensemble loss length mismatch");

    std::vector<double> neg(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(ensemble_losses[i])) throw NumericError("non-finite ensemble loss");
        neg[i] = -ensemble_losses[i];
    }

    HValues out;
    out.h1 = rank_normalize_vec(neg);

    const Matrix normed = rank_normalize(curves.values);
    const std::size_t m = static_cast<std::size_t>(
        std::ceil(cfg.head_tail_fraction * static_cast<double>(t)));
    std::vector<double> ratio(n);
    for (std::size_t i = 0; i < n; ++i) {
        double cs = 0.0, ce = 0.0;
        for (std::size_t q = 0; q < m; ++q) {
            cs += normed.at(i, q);
            ce += normed.at(i, t - m + q);
        }
        cs /= static_cast<double>(m);
        ce /= static_cast<double>(m);
        ratio[i] = cs == 0.0 ? ce / 1e-12 : ce / cs;
    }
    out.h2 = rank_normalize_vec(ratio);

    out.h.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.h[i] = cfg.alpha1 * out.h1[i] + cfg.alpha2 * out.h2[i];
    return out;
}

WeightAssignment assign_weights(const std::vector<double>& h, std::size_t k,
                                const SRConfig& cfg) {
    cfg.validate();
    if (k < 1) throw ConfigError("sub-model index k must be >= 1");
    const std::size_t n = h.size();
    if (n < 1) throw DataError("assign_weights needs N >= 1");

    WeightAssignment wa;
    wa.h = h;
    std::size_t b = cfg.bins;
    if (b > n) {
        b = n;
        wa.bins_clamped = true;
    }

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t c) {
        if (h[a] != h[c]) return h[a] < h[c];
        return a < c;  // deterministic tie-break
    });

    wa.bin_of.resize(n);
    wa.bin_mean_h.assign(b, 0.0);
    wa.weights.resize(n);

    const std::size_t base = n / b;
    const std::size_t rem = n % b;
    const double decay = std::pow(cfg.gamma, static_cast<double>(k));
    std::size_t pos = 0;
    for (std::size_t bi = 0; bi < b; ++bi) {
        const std::size_t size = base + (bi < rem ? 1 : 0);
        double sum = 0.0;
        for (std::size_t q = 0; q < size; ++q) sum += h[idx[pos + q]];
        const double mean = sum / static_cast<double>(size);
        wa.bin_mean_h[bi] = mean;
        const double weight = 1.0 / (decay * mean + 0.1);
        for (std::size_t q = 0; q < size; ++q) {
            wa.bin_of[idx[pos + q]] = bi + 1;
            wa.weights[idx[pos + q]] = weight;
        }
        pos += size;
    }
    return wa;
}

void write_weight_csv(const WeightAssignment& wa, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << "sample_index,h1,h2,h,bin,weight\n";
    char buf[160];
    for (std::size_t i = 0; i < wa.weights.size(); ++i) {
        double h1 = i < wa.h1.size() ? wa.h1[i] : 0.0;
        double h2 = i < wa.h2.size() ? wa.h2[i] : 0.0;
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%zu,%.17g\n", i, h1, h2,
                      wa.h[i], wa.bin_of[i], wa.weights[i]);
        out << buf;
    }
}

}  // namespace trajens
