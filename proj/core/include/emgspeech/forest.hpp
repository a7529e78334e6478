#pragma once

#include <cstdint>
#include <vector>

#include "emgspeech/recording.hpp"
#include "emgspeech/words.hpp"

namespace emgspeech::learn {

/// Random Forest hyperparameters. The defaults mirror the common
/// classification defaults: 100 trees, sqrt(n_features) candidates per
/// node, Gini impurity, unbounded depth, bootstrap resampling.
struct ForestParams {
    int n_trees = 100;
    int max_features = 0;  // 0 = floor(sqrt(feature_dim)), resolved at fit
    int min_samples_split = 2;
    int min_samples_leaf = 1;
    bool bootstrap = true;
    std::uint64_t seed = 0;

    /// The max_features actually used for a given feature count.
    int resolve_max_features(int feature_dim) const;

    /// Throws InvalidConfig when a field is out of range.
    void validate(int feature_dim) const;
};

/// One tree node. Internal nodes route on x[feature] <= threshold; leaves
/// have feature = -1 and carry the class counts of the training samples
/// that reached them.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::vector<double> counts;
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct ForestModel {
    std::vector<Tree> trees;
    ForestParams params;
    int n_classes = kNumWords;
    int feature_dim = 0;
};

struct Prediction {
    Word word = Word::Up;
    std::vector<double> probs;  // size n_classes, sums to 1
};

/// Grows params.n_trees CART trees, each on its own bootstrap resample,
/// drawing max_features split candidates per node without replacement
/// from a generator seeded by (seed, tree index), so the model is
/// identical whether trees are grown serially or in parallel. Splits
/// maximize Gini gain over midpoint thresholds between consecutive
/// distinct values; ties go to the lowest feature index, then the lowest
/// threshold. A node becomes a leaf when pure, smaller than
/// min_samples_split, or when no candidate split has positive gain.
/// Throws EmptyTrainingSet and DimensionMismatch.
ForestModel fit_forest(const std::vector<FeatureVector>& x,
                       const std::vector<Word>& y, const ForestParams& p,
                       int threads = 1);

/// Mean of the per-tree leaf class frequencies; predicted word = argmax,
/// ties to the lowest class code. Throws DimensionMismatch.
Prediction predict(const ForestModel& m, const FeatureVector& x);

std::vector<Prediction> predict_many(const ForestModel& m,
                                     const std::vector<FeatureVector>& xs,
                                     int threads = 1);

}  // namespace emgspeech::learn
