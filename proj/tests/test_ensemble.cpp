#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "trajens/ensemble.hpp"
#include "trajens/harness.hpp"

using namespace trajens;

namespace {

Dataset small_regression(std::size_t n, std::uint64_t seed) {
    return make_synthetic_regression(n, 3, 0.1, seed).dataset;
}

EnsembleConfig ridge_config(std::size_t k) {
    EnsembleConfig c;
    c.k = k;
    c.learner.kind = LearnerKind::ridge;
    c.learner.iterations = 1;
    return c;
}

EnsembleConfig gbdt_config(std::size_t k) {
    EnsembleConfig c;
    c.k = k;
    c.learner.kind = LearnerKind::gbdt;
    c.learner.iterations = 15;
    c.learner.gbdt.max_leaves = 4;
    return c;
}

}  // namespace

TEST_CASE("K=1 with reweighting enabled matches the single-model variant") {
    auto d = small_regression(80, 4);
    auto full = gbdt_config(1);
    auto single = variant_config(full, "SingleModel");
    auto a = fit(d, full);
    auto b = fit(d, single);
    CHECK(a.predict(d.features) == b.predict(d.features));
    // the K=1 run still logs the never-consumed final assignment
    CHECK(a.final_weights.has_value());
}

TEST_CASE("disabling SR and FS reproduces the simple-ensemble baseline") {
    auto d = small_regression(60, 9);
    auto cfg = gbdt_config(3);
    cfg.sr.reset();
    cfg.fs.reset();
    auto plain = fit(d, cfg);
    cfg.baseline = BaselineMode::simple;
    auto simple = fit(d, cfg);
    CHECK(plain.to_json().dump() == simple.to_json().dump());
}

TEST_CASE("ensemble losses fed to reweighting match a brute-force recomputation") {
    auto d = small_regression(50, 14);
    auto cfg = gbdt_config(4);
    cfg.fs.reset();
    auto state = fit(d, cfg);
    REQUIRE(state.k_built() == 4);

    const std::size_t n = d.n();
    for (std::size_t k = 1; k <= 4; ++k) {
        // brute-force mean of sub-models 1..k, recomputed from scratch
        std::vector<double> mean(n, 0.0);
        for (std::size_t q = 0; q < k; ++q) {
            auto p = state.sub_models[q].model->predict(d.features);
            for (std::size_t i = 0; i < n; ++i) mean[i] += p[i];
        }
        for (auto& v : mean) v /= static_cast<double>(k);
        auto losses = per_sample_loss(mean, d.labels, d.task_kind);

        // retrain sub-model k to recover its loss curves, then rebuild the
        // assignment the fit loop produced at this step
        const auto& consumed = state.sub_models[k - 1].weights_used;
        std::vector<double> w =
            consumed ? consumed->weights : std::vector<double>(n, 1.0);
        auto tr = train(d, w, state.sub_models[k - 1].feature_subset, cfg.learner,
                        mix_seed(cfg.master_seed, k));
        auto hv = compute_h(tr.curves, losses, *cfg.sr);
        auto expect = assign_weights(hv.h, k, *cfg.sr);

        const auto& produced =
            k < 4 ? state.sub_models[k].weights_used : state.final_weights;
        REQUIRE(produced.has_value());
        for (std::size_t i = 0; i < n; ++i)
            CHECK(produced->weights[i] == doctest::Approx(expect.weights[i]).epsilon(1e-10));
    }
}

TEST_CASE("fit is deterministic given the master seed") {
    auto d = small_regression(70, 21);
    auto cfg = gbdt_config(3);
    auto a = fit(d, cfg);
    auto b = fit(d, cfg);
    CHECK(a.to_json().dump() == b.to_json().dump());

    // the seed stream reaches the learner: mlp init differs across seeds
    cfg.learner.kind = LearnerKind::mlp;
    cfg.learner.iterations = 10;
    cfg.learner.mlp.hidden_sizes = {4};
    auto m1 = fit(d, cfg);
    cfg.master_seed = 2;
    auto m2 = fit(d, cfg);
    CHECK(m1.to_json().dump() != m2.to_json().dump());
}

TEST_CASE("feature subsets chain from the previous step's report") {
    auto d = small_regression(60, 33);
    auto cfg = gbdt_config(3);
    auto state = fit(d, cfg);
    // sub-model 1 uses everything
    CHECK(state.sub_models[0].feature_subset == std::vector<std::size_t>{0, 1, 2});
    CHECK(!state.sub_models[0].report_used.has_value());
    for (std::size_t q = 1; q < state.k_built(); ++q) {
        REQUIRE(state.sub_models[q].report_used.has_value());
        CHECK(state.sub_models[q].feature_subset ==
              state.sub_models[q].report_used->selected);
    }
    CHECK(state.final_report.has_value());
}

TEST_CASE("prediction is the arithmetic mean of the sub-models") {
    auto d = small_regression(40, 8);
    auto one = fit(d, ridge_config(1));
    EnsembleConfig other = ridge_config(1);
    other.master_seed = 99;
    auto two = fit(d, other);

    EnsembleState combined;
    combined.task_kind = d.task_kind;
    combined.full_width = d.f();
    combined.sub_models.push_back(one.sub_models[0]);
    combined.sub_models.push_back(two.sub_models[0]);

    auto pa = one.predict(d.features);
    auto pb = two.predict(d.features);
    auto pc = combined.predict(d.features);
    for (std::size_t i = 0; i < d.n(); ++i)
        CHECK(pc[i] == doctest::Approx((pa[i] + pb[i]) / 2.0).epsilon(1e-15));
}

TEST_CASE("classification ensemble outputs stay inside (0,1)") {
    auto [d, pop] = make_toy_classification(40, 40, 20, 0.3, 5);
    EnsembleConfig cfg = gbdt_config(3);
    auto state = fit(d, cfg);
    for (double p : state.predict(d.features)) {
        CHECK(p > 0.0);
        CHECK(p < 1.0);
    }
}

TEST_CASE("predict rejects width mismatch") {
    auto d = small_regression(30, 2);
    auto state = fit(d, ridge_config(1));
    Matrix wrong(5, d.f() + 1, 0.0);
    CHECK_THROWS_AS(state.predict(wrong), DataError);
}

TEST_CASE("serialize round-trip preserves predictions") {
    auto d = small_regression(50, 77);
    for (auto cfg : {gbdt_config(2), ridge_config(2)}) {
        auto state = fit(d, cfg);
        std::string path = "/tmp/trajens_test_ens.json";
        state.save(path);
        auto back = EnsembleState::load(path);
        std::remove(path.c_str());
        CHECK(back.k_built() == state.k_built());
        auto pa = state.predict(d.features);
        auto pb = back.predict(d.features);
        for (std::size_t i = 0; i < d.n(); ++i)
            CHECK(pa[i] == doctest::Approx(pb[i]).epsilon(1e-12));
    }
}

TEST_CASE("mlp ensemble serializes and round-trips too") {
    auto [d, pop] = make_toy_classification(30, 30, 10, 0.3, 6);
    EnsembleConfig cfg;
    cfg.k = 2;
    cfg.learner.kind = LearnerKind::mlp;
    cfg.learner.iterations = 20;
    cfg.learner.mlp.hidden_sizes = {6};
    auto state = fit(d, cfg);
    std::string path = "/tmp/trajens_test_mlp_ens.json";
    state.save(path);
    auto back = EnsembleState::load(path);
    std::remove(path.c_str());
    auto pa = state.predict(d.features);
    auto pb = back.predict(d.features);
    for (std::size_t i = 0; i < d.n(); ++i)
        CHECK(pa[i] == doctest::Approx(pb[i]).epsilon(1e-12));
}

TEST_CASE("load rejects foreign and malformed files") {
    std::string path = "/tmp/trajens_test_bad_model.json";
    {
        std::FILE* f = std::fopen(path.c_str(), "w");
        std::fputs("{\"format\":\"something-else\"}", f);
        std::fclose(f);
    }
    CHECK_THROWS_AS(EnsembleState::load(path), DataError);
    {
        std::FILE* f = std::fopen(path.c_str(), "w");
        std::fputs("not json at all", f);
        std::fclose(f);
    }
    CHECK_THROWS_AS(EnsembleState::load(path), DataError);
    std::remove(path.c_str());
    CHECK_THROWS_AS(EnsembleState::load("/nonexistent/model.json"), DataError);
}

TEST_CASE("curve-shape reweighting alone pushes mislabeled toy samples lowest") {
    // The noisy population has uniformly random labels, so about half of its
    // samples carry the correct label and train exactly like easy samples.
    // The curve-shape term can only separate the mislabeled half; that subset
    // must land below both the easy and the hard means on every seed.
    int wins = 0;
    const int seeds = 5;
    for (int s = 1; s <= seeds; ++s) {
        auto [d, pop] =
            make_toy_classification(100, 100, 50, 0.3, static_cast<std::uint64_t>(s));
        EnsembleConfig cfg;
        cfg.k = 1;
        cfg.fs.reset();
        cfg.h_mode = HMode::h2_only;
        cfg.learner.kind = LearnerKind::mlp;
        cfg.learner.iterations = 100;
        cfg.learner.mlp.hidden_sizes = {8};
        cfg.learner.mlp.learning_rate = 0.05;
        cfg.learner.mlp.batch_size = 16;
        cfg.master_seed = static_cast<std::uint64_t>(s);
        auto state = fit(d, cfg);
        REQUIRE(state.final_weights.has_value());
        double sum_e = 0, sum_h = 0, sum_w = 0, n_e = 0, n_h = 0, n_w = 0;
        for (std::size_t i = 0; i < d.n(); ++i) {
            double w = state.final_weights->weights[i];
            double sd = (d.features.at(i, 1) - d.features.at(i, 0)) / std::sqrt(2.0);
            switch (pop.tags[i]) {
                case PopulationTag::easy: sum_e += w; n_e += 1; break;
                case PopulationTag::hard: sum_h += w; n_h += 1; break;
                case PopulationTag::noisy:
                    if (d.labels[i] != (sd > 0 ? 1.0 : 0.0)) {
                        sum_w += w;
                        n_w += 1;
                    }
                    break;
                default: break;
            }
        }
        double me = sum_e / n_e, mh = sum_h / n_h, mw = sum_w / n_w;
        wins += (mw < me && mw < mh);
    }
    CHECK(wins == seeds);
}
