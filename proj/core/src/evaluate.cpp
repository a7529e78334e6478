#include "emgspeech/evaluate.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "emgspeech/biquad.hpp"
#include "emgspeech/errors.hpp"
#include "emgspeech/features.hpp"
#include "emgspeech/parallel.hpp"
#include "emgspeech/rng.hpp"
#include "emgspeech/splits.hpp"

namespace emgspeech::learn {

namespace {

// Stream tags separating the seed material of independent random choices.
constexpr std::uint64_t kShuffleStream = 1;
constexpr std::uint64_t kForestStream = 2;

}  // namespace

std::string_view scheme_name(Scheme s) noexcept {
    switch (s) {
        case Scheme::Session7Fold: return "session";
        case Scheme::Global5Fold: return "global";
        case Scheme::Loso: return "loso";
    }
    return "unknown";
}

std::optional<Scheme> scheme_from_name(std::string_view name) noexcept {
    if (name == "session") return Scheme::Session7Fold;
    if (name == "global") return Scheme::Global5Fold;
    if (name == "loso") return Scheme::Loso;
    return std::nullopt;
}

MeanStd mean_std(std::span<const double> values) {
    MeanStd out;
    if (values.empty()) {
        return out;
    }
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (const double v : values) {
        sum += v;
    }
    out.mean = sum / n;
    double ss = 0.0;
    for (const double v : values) {
        const double d = v - out.mean;
        ss += d * d;
    }
    out.std = std::sqrt(ss / n);
    return out;
}

namespace {

std::vector<Split> make_splits(const Dataset& d, Scheme scheme, std::uint64_t seed) {
    switch (scheme) {
        case Scheme::Session7Fold: {
            std::set<std::string> ids;
            for (const auto& u : d.utterances) {
                ids.insert(u.session_id);
            }
            std::vector<Split> all;
            for (const auto& id : ids) {
                auto folds = session_7fold(d, id);
                for (auto& f : folds) {
                    all.push_back(std::move(f));
                }
            }
            return all;
        }
        case Scheme::Global5Fold:
            return global_5fold(d, derive_seed(seed, kShuffleStream));
        case Scheme::Loso:
            return loso_splits(d);
    }
    throw InvalidConfig("unknown evaluation scheme");
}

FoldResult score_fold(const Split& split, const std::vector<FeatureVector>& features,
                      const std::vector<Word>& labels, const ForestParams& p,
                      std::uint64_t fold_index, int threads) {
    std::vector<FeatureVector> train_x;
    std::vector<Word> train_y;
    train_x.reserve(split.train.size());
    train_y.reserve(split.train.size());
    for (const int i : split.train) {
        train_x.push_back(features[static_cast<std::size_t>(i)]);
        train_y.push_back(labels[static_cast<std::size_t>(i)]);
    }

    ForestParams fold_params = p;
    fold_params.seed = derive_seed(p.seed, kForestStream, fold_index);
    const ForestModel model = fit_forest(train_x, train_y, fold_params, threads);

    FoldResult r;
    r.name = split.name;
    r.confusion.assign(kNumWords, std::vector<std::int64_t>(kNumWords, 0));
    std::vector<int> predicted(split.test.size());
    parallel_for(split.test.size(), threads, [&](std::size_t k) {
        const int i = split.test[k];
        predicted[k] =
            word_code(predict(model, features[static_cast<std::size_t>(i)]).word);
    });
    for (std::size_t k = 0; k < split.test.size(); ++k) {
        const int truth = word_code(labels[static_cast<std::size_t>(split.test[k])]);
        ++r.confusion[static_cast<std::size_t>(truth)]
                     [static_cast<std::size_t>(predicted[k])];
    }

    std::int64_t trace = 0;
    std::int64_t total = 0;
    r.per_label_accuracy.assign(kNumWords, 0.0);
    for (int c = 0; c < kNumWords; ++c) {
        std::int64_t row = 0;
        for (int q = 0; q < kNumWords; ++q) {
            row += r.confusion[static_cast<std::size_t>(c)][static_cast<std::size_t>(q)];
        }
        const std::int64_t hit =
            r.confusion[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
        r.per_label_accuracy[static_cast<std::size_t>(c)] =
            row > 0 ? static_cast<double>(hit) / static_cast<double>(row) : 0.0;
        trace += hit;
        total += row;
    }
    r.overall_accuracy = total > 0 ? static_cast<double>(trace) / static_cast<double>(total) : 0.0;
    return r;
}

}  // namespace

EvalReport evaluate_features(const std::vector<FeatureVector>& features,
                             const Dataset& d, Scheme scheme,
                             const ForestParams& p, int threads) {
    if (features.size() != d.utterances.size()) {
        throw DimensionMismatch("feature rows do not match utterance count");
    }
    std::vector<Word> labels(d.utterances.size());
    for (std::size_t i = 0; i < d.utterances.size(); ++i) {
        labels[i] = d.utterances[i].word;
    }

    EvalReport report;
    report.scheme = scheme;
    report.params = p;
    const auto splits = make_splits(d, scheme, p.seed);
    report.folds.reserve(splits.size());
    for (std::size_t f = 0; f < splits.size(); ++f) {
        report.folds.push_back(score_fold(splits[f], features, labels, p, f, threads));
    }

    std::vector<double> overall;
    overall.reserve(report.folds.size());
    for (const auto& fold : report.folds) {
        overall.push_back(fold.overall_accuracy);
    }
    report.overall = mean_std(overall);

    report.per_label.resize(kNumWords);
    std::vector<double> label_means;
    label_means.reserve(kNumWords);
    std::vector<double> scratch(report.folds.size());
    for (int c = 0; c < kNumWords; ++c) {
        for (std::size_t f = 0; f < report.folds.size(); ++f) {
            scratch[f] = report.folds[f].per_label_accuracy[static_cast<std::size_t>(c)];
        }
        report.per_label[static_cast<std::size_t>(c)] = mean_std(scratch);
        label_means.push_back(report.per_label[static_cast<std::size_t>(c)].mean);
    }
    report.across_labels = mean_std(label_means);
    return report;
}

EvalReport evaluate(const Dataset& d, Scheme scheme, const ForestParams& p,
                    const PipelineConfig& cfg, int threads) {
    cfg.validate(d.acquisition.sample_rate_hz);
    const dsp::Preprocessor pre(cfg, d.acquisition.sample_rate_hz);
    std::vector<FeatureVector> features(d.utterances.size());
    parallel_for(d.utterances.size(), threads, [&](std::size_t i) {
        Utterance filtered = d.utterances[i];
        filtered.recording = pre.run(filtered.recording);
        features[i] = features::featurize_utterance(filtered, cfg);
    });
    return evaluate_features(features, d, scheme, p, threads);
}

std::string report_to_json(const EvalReport& r) {
    using json = nlohmann::ordered_json;
    json doc;
    doc["scheme"] = std::string(scheme_name(r.scheme));
    doc["params"] = {
        {"n_trees", r.params.n_trees},
        {"max_features", r.params.max_features},
        {"min_samples_split", r.params.min_samples_split},
        {"min_samples_leaf", r.params.min_samples_leaf},
        {"bootstrap", r.params.bootstrap},
        {"seed", r.params.seed},
    };
    doc["n_folds"] = r.folds.size();
    doc["overall"] = {{"mean", r.overall.mean}, {"std", r.overall.std}};
    doc["across_labels"] = {{"mean", r.across_labels.mean},
                            {"std", r.across_labels.std}};
    json per_label = json::object();
    for (int c = 0; c < kNumWords; ++c) {
        const auto& m = r.per_label[static_cast<std::size_t>(c)];
        per_label[std::string(word_name(*word_from_code(c)))] = {
            {"mean", m.mean}, {"std", m.std}};
    }
    doc["per_label"] = per_label;
    json folds = json::array();
    for (const auto& f : r.folds) {
        folds.push_back({
            {"name", f.name},
            {"overall_accuracy", f.overall_accuracy},
            {"per_label_accuracy", f.per_label_accuracy},
            {"confusion", f.confusion},
        });
    }
    doc["folds"] = folds;
    doc["reference_points"] = {
        {"chance", 0.125},
        {"vocalized_global", {0.87, 0.03}},
        {"silent_global", {0.68, 0.03}},
        {"vocalized_loso", {0.64, 0.18}},
        {"silent_loso", {0.54, 0.07}},
    };
    return doc.dump(2) + "\n";
}

std::string report_to_csv(const EvalReport& r) {
    std::ostringstream out;
    out.precision(17);
    out << "scheme,fold,label,accuracy\n";
    const auto scheme = scheme_name(r.scheme);
    for (const auto& f : r.folds) {
        for (int c = 0; c < kNumWords; ++c) {
            out << scheme << ',' << f.name << ','
                << word_name(*word_from_code(c)) << ','
                << f.per_label_accuracy[static_cast<std::size_t>(c)] << '\n';
        }
        out << scheme << ',' << f.name << ",overall," << f.overall_accuracy << '\n';
    }
    for (int c = 0; c < kNumWords; ++c) {
        const auto& m = r.per_label[static_cast<std::size_t>(c)];
        out << scheme << ",mean," << word_name(*word_from_code(c)) << ',' << m.mean
            << '\n';
        out << scheme << ",std," << word_name(*word_from_code(c)) << ',' << m.std
            << '\n';
    }
    out << scheme << ",mean,overall," << r.overall.mean << '\n';
    out << scheme << ",std,overall," << r.overall.std << '\n';
    return out.str();
}

}  // namespace emgspeech::learn
