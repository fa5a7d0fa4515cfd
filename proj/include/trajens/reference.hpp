#pragma once

// Serial brute-force reference implementations. Slow but obviously correct;
// the test and acceptance suites check the production kernels against these,
// and the benchmark target compares their runtimes.

#include <vector>

#include "trajens/common.hpp"
#include "trajens/dataset.hpp"

namespace trajens::reference {

// O(N^2) per column: direct counting of smaller/equal elements.
Matrix rank_normalize(const Matrix& m);

// O(N^2) pairwise Mann-Whitney statistic.
double roc_auc(const std::vector<double>& scores, const std::vector<double>& labels);

// Expands a dataset by repeating row i weights[i] times (weights must be
// non-negative integers). Oracle for weighted-training equivalence.
Dataset replicate_by_weights(const Dataset& d, const std::vector<double>& weights);

}  // namespace trajens::reference
