#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "trajens/common.hpp"

namespace trajens {

struct EvalReport {
    double precision = 0.0;
    double auc = 0.0;
    double f1 = 0.0;
    double pct = 0.0;
    double ic_mean = 0.0;
    double ir = 0.0;
    double threshold_used = 0.0;
    std::size_t retrieved_count = 0;
    std::size_t ic_periods_excluded = 0;

    std::string to_kv_text() const;
    std::string to_csv_row() const;
    static std::string csv_header();
};

struct RetrievalResult {
    double value = 0.0;      // precision or f1
    double threshold = 0.0;
    std::size_t retrieved = 0;
};

RetrievalResult precision_at_fraction(const std::vector<double>& scores,
                                      const std::vector<double>& labels, double fraction);

double roc_auc(const std::vector<double>& scores, const std::vector<double>& labels);

RetrievalResult f1_at_fraction(const std::vector<double>& scores,
                               const std::vector<double>& labels, double fraction);

double pct_return(const std::vector<double>& scores, const std::vector<double>& future_returns,
                  double fraction, std::size_t periods_per_day, double fee = 0.0);

struct IcIr {
    double ic_mean = 0.0;
    double ir = 0.0;
    std::size_t excluded_periods = 0;
};

IcIr ic_ir(const std::vector<std::vector<double>>& predictions,
           const std::vector<std::vector<double>>& truths);

// Spearman rank correlation with average ranks for ties; NaN if either side
// is constant.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace trajens
