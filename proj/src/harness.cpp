#include "trajens/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace trajens {

namespace {

constexpr const char* kVersion = "trajens 0.1.0";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json learner_to_json(const LearnerConfig& c) {
    return {{"kind", to_string(c.kind)},
            {"iterations", c.iterations},
            {"gbdt",
             {{"max_leaves", c.gbdt.max_leaves},
              {"learning_rate", c.gbdt.learning_rate},
              {"min_samples_leaf", c.gbdt.min_samples_leaf}}},
            {"mlp",
             {{"hidden_sizes", c.mlp.hidden_sizes},
              {"learning_rate", c.mlp.learning_rate},
              {"batch_size", c.mlp.batch_size}}},
            {"ridge", {{"l2", c.ridge.l2}}}};
}

LearnerConfig learner_from_json(const nlohmann::json& j) {
    LearnerConfig c;
    if (j.contains("kind")) c.kind = learner_kind_from_string(j["kind"].get<std::string>());
    c.iterations = j.value("iterations", c.iterations);
    if (j.contains("gbdt")) {
        const auto& g = j["gbdt"];
        c.gbdt.max_leaves = g.value("max_leaves", c.gbdt.max_leaves);
        c.gbdt.learning_rate = g.value("learning_rate", c.gbdt.learning_rate);
        c.gbdt.min_samples_leaf = g.value("min_samples_leaf", c.gbdt.min_samples_leaf);
    }
    if (j.contains("mlp")) {
        const auto& m = j["mlp"];
        if (m.contains("hidden_sizes"))
            c.mlp.hidden_sizes = m["hidden_sizes"].get<std::vector<std::size_t>>();
        c.mlp.learning_rate = m.value("learning_rate", c.mlp.learning_rate);
        c.mlp.batch_size = m.value("batch_size", c.mlp.batch_size);
    }
    if (j.contains("ridge")) c.ridge.l2 = j["ridge"].value("l2", c.ridge.l2);
    return c;
}

nlohmann::json ensemble_to_json(const EnsembleConfig& c) {
    nlohmann::json j{{"k", c.k},
                     {"learner", learner_to_json(c.learner)},
                     {"h_mode", to_string(c.h_mode)},
                     {"baseline", to_string(c.baseline)},
                     {"master_seed", c.master_seed}};
    if (c.sr)
        j["sr"] = {{"alpha1", c.sr->alpha1},
                   {"alpha2", c.sr->alpha2},
                   {"bins", c.sr->bins},
                   {"gamma", c.sr->gamma},
                   {"head_tail_fraction", c.sr->head_tail_fraction}};
    else
        j["sr"] = nullptr;
    if (c.fs)
        j["fs"] = {{"bins", c.fs->bins},
                   {"sampling_ratios", c.fs->sampling_ratios},
                   {"repeats", c.fs->repeats}};
    else
        j["fs"] = nullptr;
    return j;
}

EnsembleConfig ensemble_from_json(const nlohmann::json& j) {
    EnsembleConfig c;
    c.k = j.value("k", c.k);
    if (j.contains("learner")) c.learner = learner_from_json(j["learner"]);
    if (j.contains("h_mode")) c.h_mode = h_mode_from_string(j["h_mode"].get<std::string>());
    if (j.contains("baseline"))
        c.baseline = baseline_from_string(j["baseline"].get<std::string>());
    c.master_seed = j.value("master_seed", c.master_seed);
    if (j.contains("sr")) {
        if (j["sr"].is_null()) {
            c.sr.reset();
        } else {
            SRConfig s;
            s.alpha1 = j["sr"].value("alpha1", s.alpha1);
            s.alpha2 = j["sr"].value("alpha2", s.alpha2);
            s.bins = j["sr"].value("bins", s.bins);
            s.gamma = j["sr"].value("gamma", s.gamma);
            s.head_tail_fraction = j["sr"].value("head_tail_fraction", s.head_tail_fraction);
            c.sr = s;
        }
    }
    if (j.contains("fs")) {
        if (j["fs"].is_null()) {
            c.fs.reset();
        } else {
            FSConfig f;
            f.bins = j["fs"].value("bins", f.bins);
            if (j["fs"].contains("sampling_ratios"))
                f.sampling_ratios = j["fs"]["sampling_ratios"].get<std::vector<double>>();
            f.repeats = j["fs"].value("repeats", f.repeats);
            c.fs = f;
        }
    }
    return c;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (seeds.empty()) throw ConfigError("seed list must be non-empty");
    ensemble.validate();
    if (metrics.retrieval_fraction <= 0 || metrics.retrieval_fraction > 1)
        throw ConfigError("retrieval_fraction must be in (0,1]");
    if (metrics.periods_per_day < 1) throw ConfigError("periods_per_day must be >= 1");
}

nlohmann::json ExperimentConfig::to_json() const {
    const char* exp = "single_run";
    switch (experiment) {
        case ExperimentKind::toy: exp = "toy"; break;
        case ExperimentKind::noise_grid: exp = "noise_grid"; break;
        case ExperimentKind::single_run: exp = "single_run"; break;
        case ExperimentKind::predict: exp = "predict"; break;
    }
    nlohmann::json js = nlohmann::json::array();
    for (const auto& s : settings)
        js.push_back({{"name", s.name},
                      {"extra_features", s.extra_features},
                      {"sample_fraction", s.sample_fraction}});
    return {{"experiment", exp},
            {"dataset",
             {{"source", dataset.source},
              {"csv_path", dataset.csv_path},
              {"label_column", dataset.label_column},
              {"task_kind", to_string(dataset.task_kind)},
              {"n_easy", dataset.n_easy},
              {"n_hard", dataset.n_hard},
              {"n_noisy", dataset.n_noisy},
              {"margin", dataset.margin},
              {"n", dataset.n},
              {"f_informative", dataset.f_informative},
              {"noise_std", dataset.noise_std}}},
            {"ensemble", ensemble_to_json(ensemble)},
            {"metrics",
             {{"retrieval_fraction", metrics.retrieval_fraction},
              {"fee", metrics.fee},
              {"periods_per_day", metrics.periods_per_day}}},
            {"seeds", seeds},
            {"output_dir", output_dir},
            {"settings", js},
            {"variants", variants},
            {"eval_n", eval_n}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    if (j.contains("experiment")) {
        auto e = j["experiment"].get<std::string>();
        if (e == "toy") c.experiment = ExperimentKind::toy;
        else if (e == "noise_grid" || e == "noise-grid") c.experiment = ExperimentKind::noise_grid;
        else if (e == "single_run") c.experiment = ExperimentKind::single_run;
        else if (e == "predict") c.experiment = ExperimentKind::predict;
        else throw ConfigError("unknown experiment kind: " + e);
    }
    if (j.contains("dataset")) {
        const auto& d = j["dataset"];
        c.dataset.source = d.value("source", c.dataset.source);
        c.dataset.csv_path = d.value("csv_path", c.dataset.csv_path);
        c.dataset.label_column = d.value("label_column", c.dataset.label_column);
        if (d.contains("task_kind"))
            c.dataset.task_kind = task_kind_from_string(d["task_kind"].get<std::string>());
        c.dataset.n_easy = d.value("n_easy", c.dataset.n_easy);
        c.dataset.n_hard = d.value("n_hard", c.dataset.n_hard);
        c.dataset.n_noisy = d.value("n_noisy", c.dataset.n_noisy);
        c.dataset.margin = d.value("margin", c.dataset.margin);
        c.dataset.n = d.value("n", c.dataset.n);
        c.dataset.f_informative = d.value("f_informative", c.dataset.f_informative);
        c.dataset.noise_std = d.value("noise_std", c.dataset.noise_std);
    }
    if (j.contains("ensemble")) c.ensemble = ensemble_from_json(j["ensemble"]);
    if (j.contains("metrics")) {
        const auto& m = j["metrics"];
        c.metrics.retrieval_fraction = m.value("retrieval_fraction", c.metrics.retrieval_fraction);
        c.metrics.fee = m.value("fee", c.metrics.fee);
        c.metrics.periods_per_day = m.value("periods_per_day", c.metrics.periods_per_day);
    }
    if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    c.output_dir = j.value("output_dir", c.output_dir);
    if (j.contains("settings")) {
        c.settings.clear();
        for (const auto& s : j["settings"])
            c.settings.push_back({s.at("name").get<std::string>(),
                                  s.value("extra_features", std::size_t{0}),
                                  s.value("sample_fraction", 0.0)});
    }
    if (j.contains("variants")) c.variants = j["variants"].get<std::vector<std::string>>();
    c.eval_n = j.value("eval_n", c.eval_n);
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("malformed config file: ") + e.what());
    }
    return from_json(j);
}

std::uint64_t ExperimentConfig::config_hash() const {
    const std::string s = to_json().dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

EnsembleConfig variant_config(const EnsembleConfig& base, const std::string& v) {
    EnsembleConfig c = base;
    c.baseline = BaselineMode::none;
    c.h_mode = HMode::combined;
    if (v == "SingleModel") {
        c.k = 1;
        c.sr.reset();
        c.fs.reset();
    } else if (v == "SimpleEnsemble") {
        c.sr.reset();
        c.fs.reset();
        c.baseline = BaselineMode::simple;
    } else if (v == "RandomEnsemble") {
        c.sr.reset();
        c.fs.reset();
        c.baseline = BaselineMode::random_weights;
    } else if (v == "SR") {
        if (!c.sr) c.sr = SRConfig{};
        c.fs.reset();
    } else if (v == "SR(1st only)") {
        if (!c.sr) c.sr = SRConfig{};
        c.fs.reset();
        c.h_mode = HMode::h1_only;
    } else if (v == "SR(2nd only)") {
        if (!c.sr) c.sr = SRConfig{};
        c.fs.reset();
        c.h_mode = HMode::h2_only;
    } else if (v == "FS") {
        c.sr.reset();
        if (!c.fs) c.fs = FSConfig{};
    } else if (v == "SR+FS") {
        if (!c.sr) c.sr = SRConfig{};
        if (!c.fs) c.fs = FSConfig{};
    } else {
        throw ConfigError("unknown variant: " + v);
    }
    return c;
}

std::pair<Dataset, SamplePopulation> build_dataset(const DatasetSpec& spec, std::uint64_t seed) {
    if (spec.source == "csv") {
        auto d = load_csv(spec.csv_path, spec.label_column, spec.task_kind);
        SamplePopulation pop;
        pop.tags.assign(d.n(), PopulationTag::clean);
        return {std::move(d), std::move(pop)};
    }
    if (spec.source == "toy")
        return make_toy_classification(spec.n_easy, spec.n_hard, spec.n_noisy, spec.margin, seed);
    if (spec.source == "synthetic_regression") {
        auto sr = make_synthetic_regression(spec.n, spec.f_informative, spec.noise_std, seed);
        return {std::move(sr.dataset), std::move(sr.population)};
    }
    if (spec.source == "synthetic_classification") {
        auto sr = make_synthetic_regression(spec.n, spec.f_informative, spec.noise_std, seed);
        Dataset d = std::move(sr.dataset);
        std::vector<double> sorted = d.labels;
        std::sort(sorted.begin(), sorted.end());
        const double median = sorted[sorted.size() / 2];
        for (auto& y : d.labels) y = y > median ? 1.0 : 0.0;
        d.task_kind = TaskKind::binary_classification;
        return {std::move(d), std::move(sr.population)};
    }
    throw ConfigError("unknown dataset source: " + spec.source);
}

namespace {

std::pair<Dataset, SamplePopulation> take_rows(const Dataset& d, const SamplePopulation& pop,
                                               std::size_t begin, std::size_t end) {
    Dataset out;
    out.task_kind = d.task_kind;
    out.feature_names = d.feature_names;
    out.feature_injected = d.feature_injected;
    out.features = Matrix(end - begin, d.f());
    out.features.data.assign(d.features.data.begin() + begin * d.f(),
                             d.features.data.begin() + end * d.f());
    out.labels.assign(d.labels.begin() + begin, d.labels.begin() + end);
    SamplePopulation p;
    p.tags.assign(pop.tags.begin() + begin, pop.tags.begin() + end);
    return {std::move(out), std::move(p)};
}

}  // namespace

std::pair<std::pair<Dataset, SamplePopulation>, std::pair<Dataset, SamplePopulation>>
build_split_datasets(const DatasetSpec& spec, std::size_t eval_n, std::uint64_t seed) {
    if (spec.source == "synthetic_regression" || spec.source == "synthetic_classification") {
        DatasetSpec full = spec;
        full.n = spec.n + eval_n;
        auto [d, pop] = build_dataset(full, seed);
        return {take_rows(d, pop, 0, spec.n), take_rows(d, pop, spec.n, d.n())};
    }
    if (spec.source == "csv") {
        auto [d, pop] = build_dataset(spec, seed);
        if (eval_n + 1 > d.n())
            throw DataError("csv has too few rows for an evaluation split of " +
                            std::to_string(eval_n));
        return {take_rows(d, pop, 0, d.n() - eval_n),
                take_rows(d, pop, d.n() - eval_n, d.n())};
    }
    // the toy generator is seed-independent in its task definition, so an
    // independent draw poses the same problem
    auto train = build_dataset(spec, seed);
    auto eval = build_dataset(spec, mix_seed(seed, 0xEBA1ULL));
    return {std::move(train), std::move(eval)};
}

EvalReport evaluate_model(const EnsembleState& model, const Dataset& d, const MetricSpec& ms) {
    EvalReport r;
    auto scores = model.predict(d.features);

    std::vector<double> binary = d.labels;
    if (d.task_kind == TaskKind::regression) {
        std::vector<double> sorted = d.labels;
        std::sort(sorted.begin(), sorted.end());
        const double median = sorted[sorted.size() / 2];
        for (auto& y : binary) y = y > median ? 1.0 : 0.0;
    }

    auto pr = precision_at_fraction(scores, binary, ms.retrieval_fraction);
    r.precision = pr.value;
    r.threshold_used = pr.threshold;
    r.retrieved_count = pr.retrieved;
    r.auc = roc_auc(scores, binary);
    r.f1 = f1_at_fraction(scores, binary, ms.retrieval_fraction).value;
    // proxy future returns: centered labels
    double mean_y = std::accumulate(d.labels.begin(), d.labels.end(), 0.0) /
                    static_cast<double>(d.labels.size());
    std::vector<double> rets(d.labels.size());
    for (std::size_t i = 0; i < rets.size(); ++i) rets[i] = d.labels[i] - mean_y;
    r.pct = pct_return(scores, rets, ms.retrieval_fraction, ms.periods_per_day, ms.fee);

    // IC/IR over contiguous pseudo-periods of periods_per_day samples
    std::vector<std::vector<double>> preds, truths;
    const std::size_t period = ms.periods_per_day;
    for (std::size_t start = 0; start + period <= scores.size(); start += period) {
        preds.emplace_back(scores.begin() + start, scores.begin() + start + period);
        truths.emplace_back(d.labels.begin() + start, d.labels.begin() + start + period);
    }
    if (preds.size() >= 2 && period >= 3) {
        try {
            auto ii = ic_ir(preds, truths);
            r.ic_mean = ii.ic_mean;
            r.ir = ii.ir;
            r.ic_periods_excluded = ii.excluded_periods;
        } catch (const DataError&) {
            r.ic_mean = 0.0;
            r.ir = 0.0;
        }
    }
    return r;
}

namespace {

std::string provenance_block(const ExperimentConfig& cfg) {
    std::string s = "version = " + std::string(kVersion) + "\n";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(cfg.config_hash()));
    s += "config_hash = " + std::string(buf) + "\nseeds =";
    for (auto sd : cfg.seeds) s += " " + std::to_string(sd);
    s += "\n";
    return s;
}

}  // namespace

ExperimentConfig toy_default_config() {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::toy;
    cfg.dataset.source = "toy";
    cfg.ensemble.learner.kind = LearnerKind::mlp;
    cfg.ensemble.learner.iterations = 100;
    cfg.ensemble.learner.mlp.hidden_sizes = {8};
    cfg.ensemble.learner.mlp.learning_rate = 0.05;
    cfg.ensemble.learner.mlp.batch_size = 16;
    return cfg;
}

ToyResult run_toy(const ExperimentConfig& cfg) {
    if (cfg.experiment != ExperimentKind::toy)
        throw ConfigError("config experiment kind is not 'toy'");
    cfg.validate();
    SRConfig sr = cfg.ensemble.sr.value_or(SRConfig{});

    ToyResult result;
    for (auto seed : cfg.seeds) {
        auto [d, pop] = make_toy_classification(cfg.dataset.n_easy, cfg.dataset.n_hard,
                                                cfg.dataset.n_noisy, cfg.dataset.margin, seed);
        std::vector<double> unit(d.n(), 1.0);
        std::vector<std::size_t> all(d.f());
        std::iota(all.begin(), all.end(), 0);
        auto tr = train(d, unit, all, cfg.ensemble.learner, mix_seed(seed, 1));
        auto losses = per_sample_loss(*tr.model, d);
        auto hv = compute_h(tr.curves, losses, sr);

        const std::vector<std::pair<std::string, const std::vector<double>*>> modes = {
            {"W1", &hv.h1}, {"W2", &hv.h2}, {"W", &hv.h}};
        std::set<PopulationTag> present(pop.tags.begin(), pop.tags.end());
        for (const auto& [name, driver] : modes) {
            auto wa = assign_weights(*driver, 1, sr);
            for (auto tag : present) {
                double sum = 0.0;
                std::size_t cnt = 0;
                for (std::size_t i = 0; i < d.n(); ++i) {
                    if (pop.tags[i] != tag) continue;
                    sum += wa.weights[i];
                    ++cnt;
                }
                result.rows.push_back({seed, to_string(tag), name, sum / cnt});
            }
        }

        // normalized loss curves of a few representative samples per population
        auto normed = rank_normalize(tr.curves.values);
        std::filesystem::create_directories(cfg.output_dir);
        std::ofstream curves(cfg.output_dir + "/toy_curves_seed" + std::to_string(seed) + ".csv");
        curves << "sample_index,population,iteration,normalized_loss\n";
        std::map<PopulationTag, std::size_t> shown;
        for (std::size_t i = 0; i < d.n(); ++i) {
            if (shown[pop.tags[i]] >= 3) continue;
            ++shown[pop.tags[i]];
            for (std::size_t t = 0; t < normed.cols; ++t)
                curves << i << ',' << to_string(pop.tags[i]) << ',' << t + 1 << ','
                       << fmt(normed.at(i, t)) << '\n';
        }
    }
    result.provenance = provenance_block(cfg);
    return result;
}

ExperimentResult run_noise_grid(const ExperimentConfig& cfg) {
    if (cfg.experiment != ExperimentKind::noise_grid)
        throw ConfigError("config experiment kind is not 'noise_grid'");
    cfg.validate();

    ExperimentResult result;
    for (const auto& setting : cfg.settings) {
        for (const auto& variant : cfg.variants) {
            for (auto seed : cfg.seeds) {
                GridCell cell;
                cell.setting = setting.name;
                cell.variant = variant;
                cell.seed = seed;
                try {
                    // train and eval must come from one draw: for synthetic
                    // sources the generating coefficients depend on the seed,
                    // so separate draws would pose two different tasks
                    auto [train_base, eval_base] =
                        build_split_datasets(cfg.dataset, cfg.eval_n, mix_seed(seed, 0x7121ULL));
                    auto [noisy, npop] =
                        inject_noise(train_base.first, train_base.second, setting.extra_features,
                                     setting.sample_fraction, mix_seed(seed, 0x401EULL));
                    EnsembleConfig ec = variant_config(cfg.ensemble, variant);
                    ec.master_seed = mix_seed(seed, 0xE45ULL);
                    auto model = fit(noisy, ec);

                    // evaluation rows must match the trained width; injected
                    // feature columns are U[0,1] like the training ones
                    auto [eval_d, edpop] =
                        inject_noise(eval_base.first, eval_base.second, setting.extra_features,
                                     0.0, mix_seed(seed, 0xEBA2ULL));
                    cell.report = evaluate_model(model, eval_d, cfg.metrics);
                    cell.ok = true;
                } catch (const std::exception& e) {
                    cell.ok = false;
                    cell.error = e.what();
                }
                result.cells.push_back(std::move(cell));
            }
        }
    }

    // aggregate mean / sample std per (setting, variant, metric)
    for (const auto& setting : cfg.settings) {
        for (const auto& variant : cfg.variants) {
            std::map<std::string, std::vector<double>> vals;
            for (const auto& c : result.cells) {
                if (!c.ok || c.setting != setting.name || c.variant != variant) continue;
                vals["precision"].push_back(c.report.precision);
                vals["auc"].push_back(c.report.auc);
                vals["f1"].push_back(c.report.f1);
                vals["pct"].push_back(c.report.pct);
            }
            for (const auto& [metric, v] : vals) {
                double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
                double sd = 0.0;
                if (v.size() > 1) {
                    for (double x : v) sd += (x - mean) * (x - mean);
                    sd = std::sqrt(sd / (v.size() - 1));
                }
                result.aggregates[setting.name + "/" + variant + "/" + metric] = {mean, sd};
            }
        }
    }
    result.provenance = provenance_block(cfg);
    return result;
}

void write_grid_csv(const ExperimentResult& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << "setting,variant,seed,status,error," << EvalReport::csv_header() << '\n';
    for (const auto& c : r.cells) {
        out << c.setting << ',' << c.variant << ',' << c.seed << ','
            << (c.ok ? "ok" : "error") << ',' << (c.ok ? "" : c.error) << ','
            << (c.ok ? c.report.to_csv_row() : ",,,,,,,") << '\n';
    }
    out << "\nsetting,variant,metric,mean,std\n";
    for (const auto& [key, ms] : r.aggregates) {
        std::string k = key;
        std::replace(k.begin(), k.end(), '/', ',');
        out << k << ',' << fmt(ms.first) << ',' << fmt(ms.second) << '\n';
    }
}

void write_toy_csv(const ToyResult& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << "seed,population,mode,mean_weight\n";
    for (const auto& row : r.rows)
        out << row.seed << ',' << row.population << ',' << row.mode << ','
            << fmt(row.mean_weight) << '\n';
}

void run_fit(const ExperimentConfig& cfg, const std::string& model_out) {
    cfg.validate();
    auto [d, pop] = build_dataset(cfg.dataset, cfg.seeds.front());
    EnsembleConfig ec = cfg.ensemble;
    ec.master_seed = mix_seed(cfg.seeds.front(), 0xE45ULL);
    auto model = fit(d, ec);
    std::filesystem::create_directories(std::filesystem::path(model_out).parent_path().string().empty()
                                            ? "."
                                            : std::filesystem::path(model_out).parent_path().string());
    model.save(model_out);

    std::filesystem::create_directories(cfg.output_dir);
    for (std::size_t k = 0; k < model.sub_models.size(); ++k) {
        const auto& sm = model.sub_models[k];
        if (sm.weights_used)
            write_weight_csv(*sm.weights_used, cfg.output_dir + "/weights_submodel" +
                                                   std::to_string(k + 1) + ".csv");
        if (sm.report_used)
            write_feature_report_csv(*sm.report_used, d,
                                     cfg.output_dir + "/features_submodel" +
                                         std::to_string(k + 1) + ".csv");
    }
    std::ofstream prov(cfg.output_dir + "/provenance.txt");
    prov << provenance_block(cfg);
}

int run_predict(const std::string& model_path, const std::string& csv_path,
                const std::string& label_column, const std::string& output_path) {
    auto model = EnsembleState::load(model_path);

    std::ifstream in(csv_path);
    if (!in) throw DataError("cannot open file: " + csv_path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file: " + csv_path);
    std::vector<std::string> header;
    {
        std::string cell;
        std::stringstream ss(line);
        while (std::getline(ss, cell, ',')) {
            while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
            header.push_back(cell);
        }
    }
    std::size_t label_idx = header.size();
    for (std::size_t j = 0; j < header.size(); ++j)
        if (header[j] == label_column) label_idx = j;
    const std::size_t width = header.size() - (label_idx < header.size() ? 1 : 0);
    if (width != model.full_width)
        throw DataError("feature width mismatch: model expects " +
                        std::to_string(model.full_width) + " features, file has " +
                        std::to_string(width));

    Matrix rows(0, width);
    std::size_t rowno = 1;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t j = 0;
        while (std::getline(ss, cell, ',')) {
            if (j == label_idx) {
                ++j;
                continue;
            }
            try {
                rows.data.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw DataError("unparseable cell at row " + std::to_string(rowno));
            }
            ++j;
        }
        ++rows.rows;
        ++rowno;
    }

    auto scores = model.predict(rows);
    std::ofstream out(output_path);
    if (!out) throw DataError("cannot write file: " + output_path);
    out << "row_index,score\n";
    for (std::size_t i = 0; i < scores.size(); ++i)
        out << i << ',' << fmt(scores[i]) << '\n';
    return 0;
}

}  // namespace trajens
