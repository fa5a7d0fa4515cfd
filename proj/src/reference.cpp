#include "trajens/reference.hpp"

#include <cmath>

namespace trajens::reference {

Matrix rank_normalize(const Matrix& m) {
    const std::size_t n = m.rows;
    Matrix out(n, m.cols);
    for (std::size_t j = 0; j < m.cols; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t less = 0, equal = 0;
            for (std::size_t q = 0; q < n; ++q) {
                if (q == i) continue;
                if (m.at(q, j) < m.at(i, j)) ++less;
                else if (m.at(q, j) == m.at(i, j)) ++equal;
            }
            out.at(i, j) = (static_cast<double>(less) + 0.5 * static_cast<double>(equal)) /
                           static_cast<double>(n);
        }
    }
    return out;
}

double roc_auc(const std::vector<double>& scores, const std::vector<double>& labels) {
    long long numerator2 = 0, pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] <= 0.5) continue;
        for (std::size_t q = 0; q < scores.size(); ++q) {
            if (labels[q] > 0.5) continue;
            ++pairs;
            if (scores[i] > scores[q]) numerator2 += 2;
            else if (scores[i] == scores[q]) numerator2 += 1;
        }
    }
    if (pairs == 0) throw DataError("roc_auc needs both classes present");
    return static_cast<double>(numerator2) / (2.0 * static_cast<double>(pairs));
}

Dataset replicate_by_weights(const Dataset& d, const std::vector<double>& weights) {
    Dataset out;
    out.task_kind = d.task_kind;
    out.feature_names = d.feature_names;
    out.feature_injected = d.feature_injected;
    std::size_t total = 0;
    for (double w : weights) {
        if (w < 0 || w != std::floor(w)) throw DataError("weights must be non-negative integers");
        total += static_cast<std::size_t>(w);
    }
    out.features = Matrix(total, d.f());
    std::size_t r = 0;
    for (std::size_t i = 0; i < d.n(); ++i) {
        for (std::size_t c = 0; c < static_cast<std::size_t>(weights[i]); ++c) {
            for (std::size_t j = 0; j < d.f(); ++j) out.features.at(r, j) = d.features.at(i, j);
            out.labels.push_back(d.labels[i]);
            ++r;
        }
    }
    return out;
}

}  // namespace trajens::reference
