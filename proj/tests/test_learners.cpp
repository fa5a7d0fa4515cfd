#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "trajens/learner.hpp"
#include "trajens/reference.hpp"

using namespace trajens;

namespace {

Dataset linear_dataset(std::size_t n, double coef, double intercept, std::uint64_t seed) {
    Dataset d;
    d.task_kind = TaskKind::regression;
    d.features = Matrix(n, 1);
    d.feature_names = {"x"};
    d.feature_injected = {0};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1, 1);
    for (std::size_t i = 0; i < n; ++i) {
        d.features.at(i, 0) = unif(rng);
        d.labels.push_back(coef * d.features.at(i, 0) + intercept);
    }
    return d;
}

std::vector<std::size_t> all_features(const Dataset& d) {
    std::vector<std::size_t> f(d.f());
    std::iota(f.begin(), f.end(), 0);
    return f;
}

LearnerConfig ridge_cfg() {
    LearnerConfig c;
    c.kind = LearnerKind::ridge;
    c.iterations = 8;
    return c;
}

}  // namespace

TEST_CASE("ridge recovers an exact linear relationship") {
    auto d = linear_dataset(40, 2.5, -0.7, 10);
    std::vector<double> w(d.n(), 1.0);
    auto tr = train(d, w, all_features(d), ridge_cfg(), 1);
    auto preds = tr.model->predict(d.features);
    for (std::size_t i = 0; i < d.n(); ++i)
        CHECK(preds[i] == doctest::Approx(d.labels[i]).epsilon(1e-8));
    // coefficient check via finite difference of the fitted function
    double r0[1] = {0.0}, r1[1] = {1.0};
    CHECK(tr.model->predict_row(r1) - tr.model->predict_row(r0) ==
          doctest::Approx(2.5).epsilon(1e-8));
}

TEST_CASE("constant labels give a constant prediction (ridge, l2=0)") {
    Dataset d = linear_dataset(20, 0.0, 3.25, 4);
    std::vector<double> w(d.n(), 1.0);
    auto tr = train(d, w, all_features(d), ridge_cfg(), 1);
    Matrix probe(3, 1);
    probe.data = {-0.5, 0.0, 0.9};
    for (double p : tr.model->predict(probe)) CHECK(p == doctest::Approx(3.25).epsilon(1e-10));
}

TEST_CASE("train validates its inputs") {
    auto d = linear_dataset(10, 1.0, 0.0, 2);
    std::vector<double> zeros(d.n(), 0.0);
    std::vector<double> ones(d.n(), 1.0);
    CHECK_THROWS_AS(train(d, zeros, all_features(d), ridge_cfg(), 1), DataError);
    CHECK_THROWS_AS(train(d, ones, {}, ridge_cfg(), 1), DataError);
    CHECK_THROWS_AS(train(d, ones, {5}, ridge_cfg(), 1), DataError);
    CHECK_THROWS_AS(train(d, ones, {0, 0}, ridge_cfg(), 1), DataError);
}

TEST_CASE("loss curve shape and positivity") {
    auto sr = [&] {
        Dataset d;
        d.task_kind = TaskKind::regression;
        d.features = Matrix(30, 2);
        d.feature_names = {"a", "b"};
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> unif(0, 1);
        for (std::size_t i = 0; i < 30; ++i) {
            d.features.at(i, 0) = unif(rng);
            d.features.at(i, 1) = unif(rng);
            d.labels.push_back(d.features.at(i, 0) + 0.5 * d.features.at(i, 1));
        }
        return d;
    }();
    std::vector<double> w(sr.n(), 1.0);
    LearnerConfig c;
    c.kind = LearnerKind::gbdt;
    c.iterations = 12;
    c.gbdt.max_leaves = 4;
    auto tr = train(sr, w, all_features(sr), c, 3);
    CHECK(tr.curves.n() == 30);
    CHECK(tr.curves.t() == 12);
    for (double v : tr.curves.values.data) CHECK(v >= 0.0);
}

TEST_CASE("training reduces mean loss on clean data for every learner kind") {
    Dataset d;
    d.task_kind = TaskKind::regression;
    d.features = Matrix(120, 3);
    d.feature_names = {"a", "b", "c"};
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> unif(0, 1);
    for (std::size_t i = 0; i < 120; ++i) {
        for (std::size_t j = 0; j < 3; ++j) d.features.at(i, j) = unif(rng);
        d.labels.push_back(2.0 * d.features.at(i, 0) - d.features.at(i, 1));
    }
    std::vector<double> w(d.n(), 1.0);

    for (auto kind : {LearnerKind::gbdt, LearnerKind::mlp}) {
        LearnerConfig c;
        c.kind = kind;
        c.iterations = 30;
        c.gbdt.max_leaves = 8;
        c.mlp.hidden_sizes = {16};
        c.mlp.learning_rate = 0.05;
        auto tr = train(d, w, all_features(d), c, 5);
        double first = 0, last = 0;
        for (std::size_t i = 0; i < d.n(); ++i) {
            first += tr.curves.values.at(i, 0);
            last += tr.curves.values.at(i, tr.curves.t() - 1);
        }
        CHECK(last < first);
    }
}

TEST_CASE("integer-weight training equals training on the replicated dataset") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> unif(0, 1);
    std::uniform_int_distribution<int> wdist(1, 3);
    for (int rep = 0; rep < 3; ++rep) {
        Dataset d;
        d.task_kind = TaskKind::regression;
        d.features = Matrix(25, 2);
        d.feature_names = {"a", "b"};
        for (std::size_t i = 0; i < 25; ++i) {
            d.features.at(i, 0) = unif(rng);
            d.features.at(i, 1) = unif(rng);
            d.labels.push_back(d.features.at(i, 0) * 2 - d.features.at(i, 1) + 0.1 * unif(rng));
        }
        std::vector<double> w(d.n());
        for (auto& v : w) v = wdist(rng);
        auto replicated = reference::replicate_by_weights(d, w);
        std::vector<double> unit(replicated.n(), 1.0);

        for (auto kind : {LearnerKind::ridge, LearnerKind::gbdt}) {
            LearnerConfig c;
            c.kind = kind;
            c.iterations = kind == LearnerKind::gbdt ? 10 : 1;
            c.gbdt.max_leaves = 6;
            auto weighted = train(d, w, all_features(d), c, 7);
            auto expanded = train(replicated, unit, all_features(replicated), c, 7);
            auto pa = weighted.model->predict(d.features);
            auto pb = expanded.model->predict(d.features);
            for (std::size_t i = 0; i < d.n(); ++i)
                CHECK(pa[i] == doctest::Approx(pb[i]).epsilon(1e-6));
        }
    }
}

TEST_CASE("full-batch mlp matches replicated training for integer weights") {
    Dataset d = linear_dataset(15, 1.2, 0.3, 30);
    std::vector<double> w(d.n(), 1.0);
    w[3] = 2;
    w[7] = 3;
    auto replicated = reference::replicate_by_weights(d, w);
    std::vector<double> unit(replicated.n(), 1.0);
    LearnerConfig c;
    c.kind = LearnerKind::mlp;
    c.iterations = 15;
    c.mlp.hidden_sizes = {8};
    c.mlp.batch_size = 0;  // full batch
    auto a = train(d, w, all_features(d), c, 9);
    auto b = train(replicated, unit, all_features(replicated), c, 9);
    auto pa = a.model->predict(d.features);
    auto pb = b.model->predict(d.features);
    for (std::size_t i = 0; i < d.n(); ++i)
        CHECK(pa[i] == doctest::Approx(pb[i]).epsilon(1e-6));
}

TEST_CASE("scaling all weights leaves gbdt and ridge predictions unchanged") {
    Dataset d = linear_dataset(30, -1.5, 0.2, 40);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> unif(0.2, 2.0);
    std::vector<double> w(d.n());
    for (auto& v : w) v = unif(rng);
    std::vector<double> scaled = w;
    for (auto& v : scaled) v *= 7.5;

    for (auto kind : {LearnerKind::ridge, LearnerKind::gbdt}) {
        LearnerConfig c;
        c.kind = kind;
        c.iterations = kind == LearnerKind::gbdt ? 8 : 1;
        c.gbdt.max_leaves = 4;
        auto a = train(d, w, all_features(d), c, 2);
        auto b = train(d, scaled, all_features(d), c, 2);
        auto pa = a.model->predict(d.features);
        auto pb = b.model->predict(d.features);
        for (std::size_t i = 0; i < d.n(); ++i)
            CHECK(pa[i] == doctest::Approx(pb[i]).epsilon(1e-9));
    }
}

TEST_CASE("doubling a sample's weight does not increase its final loss on average") {
    // sign test over 10 seeds on the synthetic regression task
    int improved = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Dataset d;
        d.task_kind = TaskKind::regression;
        d.features = Matrix(60, 2);
        d.feature_names = {"a", "b"};
        std::mt19937_64 rng(seed * 100);
        std::uniform_real_distribution<double> unif(0, 1);
        std::normal_distribution<double> gauss(0, 0.2);
        for (std::size_t i = 0; i < 60; ++i) {
            d.features.at(i, 0) = unif(rng);
            d.features.at(i, 1) = unif(rng);
            d.labels.push_back(d.features.at(i, 0) - 2 * d.features.at(i, 1) + gauss(rng));
        }
        LearnerConfig c;
        c.kind = LearnerKind::gbdt;
        c.iterations = 20;
        c.gbdt.max_leaves = 6;
        std::vector<double> w(d.n(), 1.0);
        auto base = train(d, w, {0, 1}, c, seed);
        const std::size_t target = seed % 60;
        w[target] = 2.0;
        auto boosted = train(d, w, {0, 1}, c, seed);
        double lb = base.curves.values.at(target, 19);
        double lw = boosted.curves.values.at(target, 19);
        if (lw != lb) {
            ++total;
            improved += lw < lb;
        }
    }
    if (total > 0) CHECK(improved * 2 >= total);
}

TEST_CASE("classification learners emit scores in (0,1) and log-loss anchors") {
    Dataset d;
    d.task_kind = TaskKind::binary_classification;
    d.features = Matrix(40, 1);
    d.feature_names = {"x"};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-1, 1);
    for (std::size_t i = 0; i < 40; ++i) {
        d.features.at(i, 0) = unif(rng);
        d.labels.push_back(d.features.at(i, 0) > 0 ? 1.0 : 0.0);
    }
    std::vector<double> w(d.n(), 1.0);
    for (auto kind : {LearnerKind::ridge, LearnerKind::gbdt, LearnerKind::mlp}) {
        LearnerConfig c;
        c.kind = kind;
        c.iterations = 10;
        c.gbdt.max_leaves = 4;
        c.mlp.hidden_sizes = {8};
        auto tr = train(d, w, {0}, c, 11);
        for (double p : tr.model->predict(d.features)) {
            CHECK(p > 0.0);
            CHECK(p < 1.0);
        }
    }
    CHECK(pointwise_loss(0.5, 1.0, TaskKind::binary_classification) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(pointwise_loss(0.5, 0.0, TaskKind::binary_classification) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(pointwise_loss(2.0, 2.0, TaskKind::regression) == 0.0);
}

TEST_CASE("predict is row-independent and respects the feature subset") {
    Dataset d = linear_dataset(30, 1.0, 0.0, 50);
    // add a second feature the model will not use
    Dataset wide;
    wide.task_kind = TaskKind::regression;
    wide.features = Matrix(30, 2);
    wide.feature_names = {"x", "unused"};
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> unif(0, 1);
    for (std::size_t i = 0; i < 30; ++i) {
        wide.features.at(i, 0) = d.features.at(i, 0);
        wide.features.at(i, 1) = unif(rng);
        wide.labels.push_back(d.labels[i]);
    }
    LearnerConfig c;
    c.kind = LearnerKind::gbdt;
    c.iterations = 5;
    c.gbdt.max_leaves = 4;
    auto tr = train(wide, std::vector<double>(30, 1.0), {0}, c, 1);

    auto base = tr.model->predict(wide.features);
    Matrix perturbed = wide.features;
    for (std::size_t i = 0; i < 30; ++i) perturbed.at(i, 1) += 100.0;
    auto same = tr.model->predict(perturbed);
    CHECK(base == same);

    Matrix reversed(30, 2);
    for (std::size_t i = 0; i < 30; ++i)
        for (std::size_t j = 0; j < 2; ++j) reversed.at(i, j) = wide.features.at(29 - i, j);
    auto rev = tr.model->predict(reversed);
    for (std::size_t i = 0; i < 30; ++i) CHECK(rev[i] == base[29 - i]);

    Matrix narrow(30, 1);
    CHECK_THROWS_AS(tr.model->predict(narrow), DataError);
}

TEST_CASE("per_sample_loss batch equals element-wise calls") {
    Dataset d = linear_dataset(12, 0.8, 0.1, 60);
    LearnerConfig c = ridge_cfg();
    auto tr = train(d, std::vector<double>(12, 1.0), {0}, c, 1);
    auto batch = per_sample_loss(*tr.model, d);
    for (std::size_t i = 0; i < d.n(); ++i) {
        double single = pointwise_loss(tr.model->predict_row(d.features.row(i)), d.labels[i],
                                       d.task_kind);
        CHECK(batch[i] == single);
    }
}

TEST_CASE("model serialization round-trips predictions") {
    Dataset d = linear_dataset(20, 1.1, -0.2, 70);
    for (auto kind : {LearnerKind::ridge, LearnerKind::gbdt, LearnerKind::mlp}) {
        LearnerConfig c;
        c.kind = kind;
        c.iterations = 6;
        c.gbdt.max_leaves = 4;
        c.mlp.hidden_sizes = {6};
        auto tr = train(d, std::vector<double>(20, 1.0), {0}, c, 13);
        auto j = tr.model->to_json();
        auto text = j.dump();
        auto restored = TrainedModel::from_json(nlohmann::json::parse(text));
        auto pa = tr.model->predict(d.features);
        auto pb = restored->predict(d.features);
        for (std::size_t i = 0; i < d.n(); ++i)
            CHECK(pa[i] == doctest::Approx(pb[i]).epsilon(1e-12));
    }
}

TEST_CASE("training is deterministic in the seed") {
    Dataset d = linear_dataset(25, 0.4, 0.9, 80);
    LearnerConfig c;
    c.kind = LearnerKind::mlp;
    c.iterations = 10;
    c.mlp.hidden_sizes = {8};
    c.mlp.batch_size = 8;
    auto a = train(d, std::vector<double>(25, 1.0), {0}, c, 99);
    auto b = train(d, std::vector<double>(25, 1.0), {0}, c, 99);
    CHECK(a.model->predict(d.features) == b.model->predict(d.features));
    CHECK(a.curves.values == b.curves.values);
}
