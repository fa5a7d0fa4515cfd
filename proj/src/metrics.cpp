#include "trajens/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace trajens {

namespace {

void check_binary(const std::vector<double>& labels) {
    for (double y : labels)
        if (y != 0.0 && y != 1.0) throw DataError("labels must be in {0,1}");
}

// threshold = m-th largest score, m = ceil(fraction * N); retrieved = score >= threshold
std::pair<double, std::vector<std::size_t>> retrieve(const std::vector<double>& scores,
                                                     double fraction) {
    const std::size_t n = scores.size();
    if (n == 0) throw DataError("empty score vector");
    if (fraction <= 0 || fraction > 1) throw ConfigError("fraction must be in (0,1]");
    const std::size_t m =
        static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
    if (m == 0) throw DataError("retrieval fraction retrieves no samples");
    std::vector<double> sorted = scores;
    std::nth_element(sorted.begin(), sorted.begin() + (m - 1), sorted.end(),
                     std::greater<double>());
    const double threshold = sorted[m - 1];
    std::vector<std::size_t> picked;
    for (std::size_t i = 0; i < n; ++i)
        if (scores[i] >= threshold) picked.push_back(i);
    return {threshold, std::move(picked)};
}

}  // namespace

RetrievalResult precision_at_fraction(const std::vector<double>& scores,
                                      const std::vector<double>& labels, double fraction) {
    if (scores.size() != labels.size()) throw DataError("score/label length mismatch");
    check_binary(labels);
    auto [threshold, picked] = retrieve(scores, fraction);
    std::size_t pos = 0;
    for (auto i : picked) pos += labels[i] > 0.5;
    return {static_cast<double>(pos) / static_cast<double>(picked.size()), threshold,
            picked.size()};
}

double roc_auc(const std::vector<double>& scores, const std::vector<double>& labels) {
    if (scores.size() != labels.size()) throw DataError("score/label length mismatch");
    check_binary(labels);
    const std::size_t n = scores.size();
    long long npos = 0;
    for (double y : labels) npos += y > 0.5;
    const long long nneg = static_cast<long long>(n) - npos;
    if (npos == 0 || nneg == 0) throw DataError("roc_auc needs both classes present");

    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    std::sort(idx.begin(), idx.end(),
              [&](std::uint32_t a, std::uint32_t b) { return scores[a] < scores[b]; });

    // numerator2 = 2*wins + ties over positive-negative pairs, kept integral
    long long numerator2 = 0;
    long long neg_below = 0;
    std::size_t g = 0;
    while (g < n) {
        std::size_t e = g + 1;
        while (e < n && scores[idx[e]] == scores[idx[g]]) ++e;
        long long pos_in = 0, neg_in = 0;
        for (std::size_t q = g; q < e; ++q)
            (labels[idx[q]] > 0.5 ? pos_in : neg_in)++;
        numerator2 += 2 * pos_in * neg_below + pos_in * neg_in;
        neg_below += neg_in;
        g = e;
    }
    return static_cast<double>(numerator2) / (2.0 * static_cast<double>(npos * nneg));
}

RetrievalResult f1_at_fraction(const std::vector<double>& scores,
                               const std::vector<double>& labels, double fraction) {
    if (scores.size() != labels.size()) throw DataError("score/label length mismatch");
    check_binary(labels);
    std::size_t total_pos = 0;
    for (double y : labels) total_pos += y > 0.5;
    if (total_pos == 0) throw DataError("f1 needs at least one positive label");
    auto [threshold, picked] = retrieve(scores, fraction);
    std::size_t tp = 0;
    for (auto i : picked) tp += labels[i] > 0.5;
    const double precision = static_cast<double>(tp) / static_cast<double>(picked.size());
    const double recall = static_cast<double>(tp) / static_cast<double>(total_pos);
    const double f1 =
        precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    return {f1, threshold, picked.size()};
}

double pct_return(const std::vector<double>& scores, const std::vector<double>& future_returns,
                  double fraction, std::size_t periods_per_day, double fee) {
    if (scores.size() != future_returns.size()) throw DataError("score/return length mismatch");
    if (periods_per_day < 1) throw ConfigError("periods_per_day must be >= 1");
    auto [threshold, picked] = retrieve(scores, fraction);
    (void)threshold;
    double mean_ret = 0.0;
    for (auto i : picked) mean_ret += future_returns[i];
    mean_ret /= static_cast<double>(picked.size());
    const double days =
        static_cast<double>(scores.size()) / static_cast<double>(periods_per_day);
    const double retrieved_per_day = static_cast<double>(picked.size()) / days;
    return retrieved_per_day * (mean_ret - fee);
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    auto ranks = [n](const std::vector<double>& v) {
        std::vector<std::uint32_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0u);
        std::sort(idx.begin(), idx.end(),
                  [&](std::uint32_t x, std::uint32_t y) { return v[x] < v[y]; });
        std::vector<double> r(n);
        std::size_t g = 0;
        while (g < n) {
            std::size_t e = g + 1;
            while (e < n && v[idx[e]] == v[idx[g]]) ++e;
            double avg = 0.5 * static_cast<double>(g + e - 1);
            for (std::size_t q = g; q < e; ++q) r[idx[q]] = avg;
            g = e;
        }
        return r;
    };
    auto ra = ranks(a), rb = ranks(b);
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (saa == 0 || sbb == 0) return std::numeric_limits<double>::quiet_NaN();
    return sab / std::sqrt(saa * sbb);
}

IcIr ic_ir(const std::vector<std::vector<double>>& predictions,
           const std::vector<std::vector<double>>& truths) {
    if (predictions.size() != truths.size()) throw DataError("period count mismatch");
    if (predictions.size() < 2) throw DataError("ic_ir needs >= 2 periods");
    IcIr out;
    std::vector<double> ics;
    for (std::size_t t = 0; t < predictions.size(); ++t) {
        if (predictions[t].size() != truths[t].size())
            throw DataError("period " + std::to_string(t) + " length mismatch");
        if (predictions[t].size() < 3)
            throw DataError("period " + std::to_string(t) + " has fewer than 3 samples");
        double ic = spearman(predictions[t], truths[t]);
        if (std::isnan(ic)) {
            ++out.excluded_periods;
            continue;
        }
        ics.push_back(ic);
    }
    if (ics.empty()) throw DataError("all periods excluded from IC computation");
    double mean = std::accumulate(ics.begin(), ics.end(), 0.0) / ics.size();
    out.ic_mean = mean;
    if (ics.size() < 2) {
        out.ir = std::numeric_limits<double>::infinity();
        return out;
    }
    double var = 0.0;
    for (double ic : ics) var += (ic - mean) * (ic - mean);
    var /= static_cast<double>(ics.size() - 1);
    double sd = std::sqrt(var);
    if (sd == 0.0) {
        out.ir = mean < 0 ? -std::numeric_limits<double>::infinity()
                          : std::numeric_limits<double>::infinity();
    } else {
        out.ir = mean / sd;
    }
    return out;
}

std::string EvalReport::csv_header() {
    return "precision,auc,f1,pct,ic_mean,ir,threshold,retrieved_count";
}

std::string EvalReport::to_csv_row() const {
    char buf[320];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%zu", precision,
                  auc, f1, pct, ic_mean, ir, threshold_used, retrieved_count);
    return buf;
}

std::string EvalReport::to_kv_text() const {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "precision = %.17g\nauc = %.17g\nf1 = %.17g\npct = %.17g\nic_mean = "
                  "%.17g\nir = %.17g\nthreshold = %.17g\nretrieved_count = %zu\n",
                  precision, auc, f1, pct, ic_mean, ir, threshold_used, retrieved_count);
    return buf;
}

}  // namespace trajens
