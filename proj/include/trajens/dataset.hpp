#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "trajens/common.hpp"

namespace trajens {

struct Dataset {
    Matrix features;                       // N x F
    std::vector<double> labels;            // N
    std::vector<std::string> feature_names;
    std::vector<std::uint8_t> feature_injected;  // per feature, 1 if appended by inject_noise
    TaskKind task_kind = TaskKind::regression;

    std::size_t n() const { return features.rows; }
    std::size_t f() const { return features.cols; }

    void validate() const;  // throws DataError on invariant violation
};

enum class PopulationTag { easy, hard, noisy, injected_random, clean };

std::string to_string(PopulationTag t);

struct SamplePopulation {
    std::vector<PopulationTag> tags;  // length N
};

Dataset load_csv(const std::string& path, const std::string& label_column, TaskKind task_kind);
void write_csv(const Dataset& d, const std::string& path, const std::string& label_column = "label");
void write_population_csv(const SamplePopulation& pop, const std::string& path);

// 2-D classification task: true boundary is the line x2 = x1. Easy samples lie
// at distance >= margin from the boundary with correct labels, hard samples at
// distance < margin/4 with correct labels, noisy samples get uniform random labels.
std::pair<Dataset, SamplePopulation> make_toy_classification(
    std::size_t n_easy, std::size_t n_hard, std::size_t n_noisy,
    double margin, std::uint64_t seed);

struct SyntheticRegression {
    Dataset dataset;
    SamplePopulation population;
    std::vector<double> true_coefficients;
};

// Features iid U[0,1]; label = sum_j c_j x_j + nonlinear hinge on feature 0
// + N(0, noise_std) noise.
SyntheticRegression make_synthetic_regression(
    std::size_t n, std::size_t f_informative, double noise_std, std::uint64_t seed);

// Noiseless generating target for a feature row, given the coefficients
// returned by make_synthetic_regression.
double synthetic_regression_target(const double* row, const std::vector<double>& coefficients);

// Appends U[0,1] feature columns and U[0,1] sample rows, per the noise
// injection protocol. Labels of injected rows are drawn from the empirical
// label distribution of d.
std::pair<Dataset, SamplePopulation> inject_noise(
    const Dataset& d, const SamplePopulation& pop,
    std::size_t extra_random_features, double random_sample_fraction,
    std::uint64_t seed);

}  // namespace trajens
