// Microbenchmarks for the stages that dominate end-to-end runtime:
// zero-phase filtering, the wavelet transform, per-utterance
// featurization, and forest fit/predict.

#include <benchmark/benchmark.h>

#include <vector>

#include "emgspeech/biquad.hpp"
#include "emgspeech/config.hpp"
#include "emgspeech/dwt.hpp"
#include "emgspeech/features.hpp"
#include "emgspeech/forest.hpp"
#include "emgspeech/recording.hpp"
#include "emgspeech/rng.hpp"
#include "emgspeech/words.hpp"

namespace {

using namespace emgspeech;

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> x(n);
    for (auto& v : x) {
        v = 20.0 * rng.normal();
    }
    return x;
}

void bm_filt_zero_phase(benchmark::State& state) {
    const auto hp = dsp::design_highpass(4, 20.0, 500.0);
    const auto x = noise(2000, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dsp::filt_zero_phase(hp, x));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}
BENCHMARK(bm_filt_zero_phase);

void bm_dwt_db4(benchmark::State& state) {
    const auto x = noise(100, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dsp::dwt_db4(x, 3));
    }
}
BENCHMARK(bm_dwt_db4);

void bm_window_features(benchmark::State& state) {
    const PipelineConfig cfg;
    const auto x = noise(100, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(features::window_features(x, 500.0, cfg));
    }
}
BENCHMARK(bm_window_features);

void bm_featurize_utterance(benchmark::State& state) {
    const PipelineConfig cfg;
    Utterance u;
    u.recording = Recording(14, 2000, 500.0);
    Rng rng(4);
    for (auto& v : u.recording.raw()) {
        v = static_cast<float>(20.0 * rng.normal());
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(features::featurize_utterance(u, cfg));
    }
}
BENCHMARK(bm_featurize_utterance);

struct TrainingSet {
    std::vector<FeatureVector> x;
    std::vector<Word> y;
};

TrainingSet training_set(int per_class, int dim) {
    TrainingSet t;
    Rng rng(5);
    for (int k = 0; k < per_class; ++k) {
        for (const Word w : kAllWords) {
            FeatureVector f;
            f.values.resize(static_cast<std::size_t>(dim));
            for (auto& v : f.values) {
                v = rng.normal() + 0.5 * word_code(w);
            }
            t.x.push_back(std::move(f));
            t.y.push_back(w);
        }
    }
    return t;
}

void bm_forest_fit(benchmark::State& state) {
    const auto t = training_set(20, 2058);
    learn::ForestParams p;
    p.n_trees = static_cast<int>(state.range(0));
    p.seed = 6;
    for (auto _ : state) {
        benchmark::DoNotOptimize(learn::fit_forest(t.x, t.y, p));
    }
}
BENCHMARK(bm_forest_fit)->Arg(10)->Arg(50);

void bm_forest_predict(benchmark::State& state) {
    const auto t = training_set(20, 2058);
    learn::ForestParams p;
    p.n_trees = 100;
    p.seed = 6;
    const auto model = learn::fit_forest(t.x, t.y, p);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(learn::predict(model, t.x[i]));
        i = (i + 1) % t.x.size();
    }
}
BENCHMARK(bm_forest_predict);

}  // namespace

BENCHMARK_MAIN();
