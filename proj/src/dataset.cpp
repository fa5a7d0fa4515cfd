#include "trajens/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace trajens {

std::string to_string(TaskKind k) {
    return k == TaskKind::regression ? "regression" : "binary_classification";
}

TaskKind task_kind_from_string(const std::string& s) {
    if (s == "regression") return TaskKind::regression;
    if (s == "binary_classification") return TaskKind::binary_classification;
    throw ConfigError("unknown task kind: " + s);
}

std::string to_string(PopulationTag t) {
    switch (t) {
        case PopulationTag::easy: return "easy";
        case PopulationTag::hard: return "hard";
        case PopulationTag::noisy: return "noisy";
        case PopulationTag::injected_random: return "injected_random";
        case PopulationTag::clean: return "clean";
    }
    return "?";
}

void Dataset::validate() const {
    if (n() < 1 || f() < 1) throw DataError("dataset must have N >= 1 and F >= 1");
    if (labels.size() != n()) throw DataError("label count does not match row count");
    if (feature_names.size() != f()) throw DataError("feature name count does not match column count");
    std::set<std::string> names(feature_names.begin(), feature_names.end());
    if (names.size() != feature_names.size()) throw DataError("duplicate feature names");
    for (double v : features.data)
        if (!std::isfinite(v)) throw DataError("non-finite feature value");
    for (double y : labels) {
        if (!std::isfinite(y)) throw DataError("non-finite label");
        if (task_kind == TaskKind::binary_classification && y != 0.0 && y != 1.0)
            throw DataError("non-binary label");
    }
}

namespace {

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    const char* b = cell.data();
    const char* e = b + cell.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (e[-1] == ' ' || e[-1] == '\t' || e[-1] == '\r')) --e;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e || !std::isfinite(v)) {
        throw DataError("unparseable or non-finite cell at row " + std::to_string(row) +
                        ", column " + std::to_string(col) + ": '" + cell + "'");
    }
    return v;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    return s;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& label_column, TaskKind task_kind) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file: " + path);
    auto header = split_line(line);
    for (auto& h : header) h = trim(h);
    std::size_t label_idx = header.size();
    for (std::size_t j = 0; j < header.size(); ++j)
        if (header[j] == label_column) label_idx = j;
    if (label_idx == header.size())
        throw DataError("label column '" + label_column + "' not found in header of " + path);
    if (header.size() < 2) throw DataError("file has no feature columns: " + path);

    Dataset d;
    d.task_kind = task_kind;
    for (std::size_t j = 0; j < header.size(); ++j)
        if (j != label_idx) d.feature_names.push_back(header[j]);
    d.features.cols = header.size() - 1;

    std::size_t row = 1;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (cells.size() != header.size())
            throw DataError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                            " cells, expected " + std::to_string(header.size()));
        for (std::size_t j = 0; j < cells.size(); ++j) {
            double v = parse_cell(cells[j], row, j);
            if (j == label_idx) {
                if (task_kind == TaskKind::binary_classification && v != 0.0 && v != 1.0)
                    throw DataError("non-binary label at row " + std::to_string(row));
                d.labels.push_back(v);
            } else {
                d.features.data.push_back(v);
            }
        }
        ++row;
    }
    d.features.rows = d.labels.size();
    d.feature_injected.assign(d.f(), 0);
    d.validate();
    return d;
}

void write_csv(const Dataset& d, const std::string& path, const std::string& label_column) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    for (std::size_t j = 0; j < d.f(); ++j) out << d.feature_names[j] << ',';
    out << label_column << '\n';
    char buf[40];
    for (std::size_t i = 0; i < d.n(); ++i) {
        for (std::size_t j = 0; j < d.f(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", d.features.at(i, j));
            out << buf << ',';
        }
        std::snprintf(buf, sizeof(buf), "%.17g", d.labels[i]);
        out << buf << '\n';
    }
}

void write_population_csv(const SamplePopulation& pop, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << "row_index,tag\n";
    for (std::size_t i = 0; i < pop.tags.size(); ++i)
        out << i << ',' << to_string(pop.tags[i]) << '\n';
}

std::pair<Dataset, SamplePopulation> make_toy_classification(
    std::size_t n_easy, std::size_t n_hard, std::size_t n_noisy,
    double margin, std::uint64_t seed) {
    const std::size_t n = n_easy + n_hard + n_noisy;
    if (n == 0) throw DataError("toy dataset must have at least one sample");
    if (margin <= 0) throw ConfigError("margin must be positive");

    std::mt19937_64 rng(mix_seed(seed, 0x70F0ULL));
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    Dataset d;
    d.task_kind = TaskKind::binary_classification;
    d.feature_names = {"x1", "x2"};
    d.feature_injected = {0, 0};
    d.features = Matrix(n, 2);
    d.labels.resize(n);
    SamplePopulation pop;
    pop.tags.resize(n);

    // Signed distance to the boundary x2 = x1; label 1 above the line.
    auto dist = [](double x1, double x2) { return (x2 - x1) / std::sqrt(2.0); };

    std::size_t i = 0;
    auto place = [&](PopulationTag tag, auto accept) {
        double x1, x2;
        do {
            x1 = unif(rng);
            x2 = unif(rng);
        } while (!accept(dist(x1, x2)));
        d.features.at(i, 0) = x1;
        d.features.at(i, 1) = x2;
        d.labels[i] = (tag == PopulationTag::noisy)
                          ? static_cast<double>(rng() & 1)
                          : (x2 > x1 ? 1.0 : 0.0);
        pop.tags[i] = tag;
        ++i;
    };

    for (std::size_t k = 0; k < n_easy; ++k)
        place(PopulationTag::easy, [&](double s) { return std::abs(s) >= margin; });
    for (std::size_t k = 0; k < n_hard; ++k)
        place(PopulationTag::hard, [&](double s) { return s != 0.0 && std::abs(s) < margin / 4.0; });
    for (std::size_t k = 0; k < n_noisy; ++k)
        place(PopulationTag::noisy, [](double) { return true; });

    d.validate();
    return {std::move(d), std::move(pop)};
}

double synthetic_regression_target(const double* row, const std::vector<double>& c) {
    double y = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) y += c[j] * row[j];
    // piecewise-nonlinear kink on the first informative feature
    y += 2.0 * std::max(0.0, row[0] - 0.5);
    return y;
}

SyntheticRegression make_synthetic_regression(
    std::size_t n, std::size_t f_informative, double noise_std, std::uint64_t seed) {
    if (n < 1 || f_informative < 1) throw ConfigError("need n >= 1 and f_informative >= 1");
    if (noise_std < 0) throw ConfigError("noise_std must be >= 0");

    std::mt19937_64 rng(mix_seed(seed, 0x5E96ULL));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    SyntheticRegression out;
    out.true_coefficients.resize(f_informative);
    for (auto& c : out.true_coefficients) {
        c = 1.0 + 2.0 * unif(rng);
        if (rng() & 1) c = -c;
    }

    Dataset& d = out.dataset;
    d.task_kind = TaskKind::regression;
    d.features = Matrix(n, f_informative);
    d.labels.resize(n);
    for (std::size_t j = 0; j < f_informative; ++j)
        d.feature_names.push_back("f" + std::to_string(j));
    d.feature_injected.assign(f_informative, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < f_informative; ++j) d.features.at(i, j) = unif(rng);
        double eps = noise_std > 0 ? noise_std * gauss(rng) : 0.0;
        d.labels[i] = synthetic_regression_target(d.features.row(i), out.true_coefficients) + eps;
    }
    out.population.tags.assign(n, PopulationTag::clean);
    d.validate();
    return out;
}

std::pair<Dataset, SamplePopulation> inject_noise(
    const Dataset& d, const SamplePopulation& pop,
    std::size_t extra_random_features, double random_sample_fraction,
    std::uint64_t seed) {
    d.validate();
    if (pop.tags.size() != d.n()) throw DataError("population tag count does not match dataset");
    if (random_sample_fraction < 0 || random_sample_fraction > 1)
        throw ConfigError("random_sample_fraction must be in [0,1]");

    const std::size_t n0 = d.n();
    const std::size_t f0 = d.f();
    const std::size_t n_extra =
        static_cast<std::size_t>(std::ceil(random_sample_fraction * static_cast<double>(n0)));
    const std::size_t f1 = f0 + extra_random_features;
    const std::size_t n1 = n0 + n_extra;

    std::mt19937_64 rng(mix_seed(seed, 0x401EULL));
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    Dataset out;
    out.task_kind = d.task_kind;
    out.feature_names = d.feature_names;
    out.feature_injected = d.feature_injected;
    for (std::size_t j = 0; j < extra_random_features; ++j) {
        out.feature_names.push_back("rand" + std::to_string(j));
        out.feature_injected.push_back(1);
    }
    out.features = Matrix(n1, f1);
    out.labels = d.labels;

    for (std::size_t i = 0; i < n0; ++i)
        for (std::size_t j = 0; j < f0; ++j) out.features.at(i, j) = d.features.at(i, j);
    // injected feature columns for the original rows
    for (std::size_t j = f0; j < f1; ++j)
        for (std::size_t i = 0; i < n0; ++i) out.features.at(i, j) = unif(rng);
    // injected rows: every feature U[0,1], label drawn from the empirical distribution
    std::uniform_int_distribution<std::size_t> pick(0, n0 - 1);
    for (std::size_t i = n0; i < n1; ++i) {
        for (std::size_t j = 0; j < f1; ++j) out.features.at(i, j) = unif(rng);
        out.labels.push_back(d.labels[pick(rng)]);
    }

    SamplePopulation pout;
    pout.tags = pop.tags;
    pout.tags.resize(n1, PopulationTag::noisy);

    out.validate();
    return {std::move(out), std::move(pout)};
}

}  // namespace trajens
