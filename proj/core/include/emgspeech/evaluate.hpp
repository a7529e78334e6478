#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emgspeech/config.hpp"
#include "emgspeech/forest.hpp"
#include "emgspeech/recording.hpp"

namespace emgspeech::learn {

enum class Scheme { Session7Fold, Global5Fold, Loso };

std::string_view scheme_name(Scheme s) noexcept;  // "session" | "global" | "loso"
std::optional<Scheme> scheme_from_name(std::string_view name) noexcept;

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // population
};

MeanStd mean_std(std::span<const double> values);

struct FoldResult {
    std::string name;
    std::vector<std::vector<std::int64_t>> confusion;  // [true][predicted]
    std::vector<double> per_label_accuracy;            // one per word code
    double overall_accuracy = 0.0;
};

struct EvalReport {
    Scheme scheme = Scheme::Global5Fold;
    ForestParams params;
    std::vector<FoldResult> folds;
    std::vector<MeanStd> per_label;  // across folds, one per word code
    MeanStd overall;                 // overall accuracy across folds
    MeanStd across_labels;           // spread of the per-label means
};

/// Preprocesses and featurizes every utterance once (features are pure
/// per-utterance functions, so nothing crosses a split boundary), builds
/// the scheme's folds, and per fold fits a forest on the train rows and
/// scores the test rows into a confusion matrix. The session scheme runs
/// the per-batch folds of every session; the random seeds derive from
/// params.seed. Deterministic for any thread count.
EvalReport evaluate(const Dataset& d, Scheme scheme, const ForestParams& p,
                    const PipelineConfig& cfg, int threads = 1);

/// Same, on rows that are already featurized (order must match labels).
EvalReport evaluate_features(const std::vector<FeatureVector>& features,
                             const Dataset& d, Scheme scheme,
                             const ForestParams& p, int threads = 1);

/// Stable-field-order JSON document, including the chance level (0.125)
/// and the fixed reference-accuracy annotations.
std::string report_to_json(const EvalReport& r);

/// Flat rows for plotting: scheme,fold,label,accuracy with aggregate
/// mean/std pseudo-folds at the end.
std::string report_to_csv(const EvalReport& r);

}  // namespace emgspeech::learn
