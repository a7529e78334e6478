#include "emgspeech/forest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>

#include "emgspeech/errors.hpp"
#include "emgspeech/parallel.hpp"
#include "emgspeech/rng.hpp"

namespace emgspeech::learn {

int ForestParams::resolve_max_features(int feature_dim) const {
    if (max_features > 0) {
        return std::min(max_features, feature_dim);
    }
    const int mf = static_cast<int>(std::sqrt(static_cast<double>(feature_dim)));
    return std::clamp(mf, 1, feature_dim);
}

void ForestParams::validate(int feature_dim) const {
    if (n_trees < 1) {
        throw InvalidConfig("n_trees must be >= 1");
    }
    if (min_samples_split < 2) {
        throw InvalidConfig("min_samples_split must be >= 2");
    }
    if (min_samples_leaf < 1) {
        throw InvalidConfig("min_samples_leaf must be >= 1");
    }
    if (feature_dim < 1) {
        throw InvalidConfig("feature_dim must be >= 1");
    }
    const int mf = resolve_max_features(feature_dim);
    if (mf < 1 || mf > feature_dim) {
        throw InvalidConfig("max_features out of range");
    }
}

namespace {

struct TreeBuilder {
    const std::vector<double>& cols;  // column-major: cols[f * n_rows + row]
    const std::vector<std::uint8_t>& labels;
    std::size_t n_rows;
    int n_classes;
    int feature_dim;
    int mtry;
    int min_samples_split;
    int min_samples_leaf;
    Rng rng;

    Tree tree;
    std::vector<int> idx;        // sample rows, partitioned in place
    std::vector<int> feat_pool;  // candidate sampling pool
    std::vector<int> cand;
    std::vector<std::pair<double, std::uint8_t>> buf;  // (value, label)
    std::vector<std::int64_t> left_counts;
    std::vector<std::int64_t> right_counts;

    double value_at(int feature, int row) const {
        return cols[static_cast<std::size_t>(feature) * n_rows +
                    static_cast<std::size_t>(row)];
    }

    std::int32_t make_leaf(const std::vector<std::int64_t>& counts) {
        TreeNode node;
        node.counts.assign(counts.begin(), counts.end());
        tree.nodes.push_back(std::move(node));
        return static_cast<std::int32_t>(tree.nodes.size() - 1);
    }

    std::int32_t build(int start, int end) {
        const int n = end - start;
        std::vector<std::int64_t> counts(static_cast<std::size_t>(n_classes), 0);
        for (int k = start; k < end; ++k) {
            ++counts[labels[static_cast<std::size_t>(idx[k])]];
        }
        int present = 0;
        double sumsq_parent = 0.0;
        for (const auto c : counts) {
            present += c > 0;
            sumsq_parent += static_cast<double>(c) * static_cast<double>(c);
        }
        if (n < min_samples_split || present <= 1) {
            return make_leaf(counts);
        }

        // Candidate features, without replacement, sorted so that equal
        // Gini gains resolve to the lowest feature index.
        cand.clear();
        for (int i = 0; i < mtry; ++i) {
            const int j =
                i + static_cast<int>(rng.below(static_cast<std::uint64_t>(feature_dim - i)));
            std::swap(feat_pool[static_cast<std::size_t>(i)],
                      feat_pool[static_cast<std::size_t>(j)]);
            cand.push_back(feat_pool[static_cast<std::size_t>(i)]);
        }
        std::sort(cand.begin(), cand.end());

        // A split's quality is scored by sum_c(count_c^2)/n_left +
        // sum_c(count_c^2)/n_right; Gini gain is positive exactly when the
        // score beats the parent's sum_c(count_c^2)/n.
        double best_score = sumsq_parent / static_cast<double>(n);
        int best_feature = -1;
        double best_threshold = 0.0;

        buf.resize(static_cast<std::size_t>(n));
        for (const int f : cand) {
            for (int k = start; k < end; ++k) {
                const int row = idx[k];
                buf[static_cast<std::size_t>(k - start)] = {
                    value_at(f, row), labels[static_cast<std::size_t>(row)]};
            }
            std::sort(buf.begin(), buf.end());
            if (buf.front().first == buf.back().first) {
                continue;  // constant within the node
            }
            left_counts.assign(static_cast<std::size_t>(n_classes), 0);
            right_counts.assign(counts.begin(), counts.end());
            std::int64_t sumsq_l = 0;
            auto sumsq_r = static_cast<std::int64_t>(sumsq_parent);
            for (int i = 0; i + 1 < n; ++i) {
                const auto c = buf[static_cast<std::size_t>(i)].second;
                sumsq_l += 2 * left_counts[c] + 1;
                ++left_counts[c];
                --right_counts[c];
                sumsq_r -= 2 * right_counts[c] + 1;
                const double a = buf[static_cast<std::size_t>(i)].first;
                const double b = buf[static_cast<std::size_t>(i + 1)].first;
                if (a == b) {
                    continue;
                }
                const int nl = i + 1;
                const int nr = n - nl;
                if (nl < min_samples_leaf || nr < min_samples_leaf) {
                    continue;
                }
                const double score = static_cast<double>(sumsq_l) / nl +
                                     static_cast<double>(sumsq_r) / nr;
                if (score > best_score) {
                    best_score = score;
                    best_feature = f;
                    double thr = 0.5 * (a + b);
                    if (!(thr < b)) {
                        thr = a;  // midpoint of adjacent doubles rounds up
                    }
                    best_threshold = thr;
                }
            }
        }
        if (best_feature < 0) {
            return make_leaf(counts);
        }

        const auto mid_it = std::partition(
            idx.begin() + start, idx.begin() + end, [&](int row) {
                return value_at(best_feature, row) <= best_threshold;
            });
        const int mid = static_cast<int>(mid_it - idx.begin());

        TreeNode node;
        node.feature = best_feature;
        node.threshold = best_threshold;
        tree.nodes.push_back(std::move(node));
        const auto me = static_cast<std::int32_t>(tree.nodes.size() - 1);
        const std::int32_t li = build(start, mid);
        const std::int32_t ri = build(mid, end);
        tree.nodes[static_cast<std::size_t>(me)].left = li;
        tree.nodes[static_cast<std::size_t>(me)].right = ri;
        return me;
    }
};

}  // namespace

ForestModel fit_forest(const std::vector<FeatureVector>& x,
                       const std::vector<Word>& y, const ForestParams& p,
                       int threads) {
    if (x.empty()) {
        throw EmptyTrainingSet("cannot fit a forest on zero samples");
    }
    if (x.size() != y.size()) {
        throw DimensionMismatch("feature rows (" + std::to_string(x.size()) +
                                ") and labels (" + std::to_string(y.size()) +
                                ") differ");
    }
    const std::size_t n = x.size();
    const std::size_t dim = x[0].values.size();
    for (const auto& row : x) {
        if (row.values.size() != dim) {
            throw DimensionMismatch("feature rows have mixed lengths");
        }
    }
    p.validate(static_cast<int>(dim));

    std::vector<double> cols(dim * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t f = 0; f < dim; ++f) {
            cols[f * n + i] = x[i].values[f];
        }
    }
    std::vector<std::uint8_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = static_cast<std::uint8_t>(word_code(y[i]));
    }

    ForestModel m;
    m.params = p;
    m.n_classes = kNumWords;
    m.feature_dim = static_cast<int>(dim);
    m.trees.resize(static_cast<std::size_t>(p.n_trees));

    const int mtry = p.resolve_max_features(static_cast<int>(dim));
    parallel_for(static_cast<std::size_t>(p.n_trees), threads, [&](std::size_t t) {
        TreeBuilder b{cols,
                      labels,
                      n,
                      kNumWords,
                      static_cast<int>(dim),
                      mtry,
                      p.min_samples_split,
                      p.min_samples_leaf,
                      Rng(derive_seed(p.seed, t))};
        b.idx.resize(n);
        if (p.bootstrap) {
            for (std::size_t i = 0; i < n; ++i) {
                b.idx[i] = static_cast<int>(b.rng.below(n));
            }
        } else {
            std::iota(b.idx.begin(), b.idx.end(), 0);
        }
        b.feat_pool.resize(dim);
        std::iota(b.feat_pool.begin(), b.feat_pool.end(), 0);
        b.build(0, static_cast<int>(n));
        m.trees[t] = std::move(b.tree);
    });
    return m;
}

Prediction predict(const ForestModel& m, const FeatureVector& x) {
    if (x.values.size() != static_cast<std::size_t>(m.feature_dim)) {
        throw DimensionMismatch("feature vector length " +
                                std::to_string(x.values.size()) +
                                " does not match model dimension " +
                                std::to_string(m.feature_dim));
    }
    Prediction out;
    out.probs.assign(static_cast<std::size_t>(m.n_classes), 0.0);
    for (const auto& tree : m.trees) {
        std::size_t i = 0;
        for (;;) {
            const TreeNode& node = tree.nodes[i];
            if (node.feature < 0) {
                double total = 0.0;
                for (const double c : node.counts) {
                    total += c;
                }
                for (int c = 0; c < m.n_classes; ++c) {
                    out.probs[static_cast<std::size_t>(c)] +=
                        node.counts[static_cast<std::size_t>(c)] / total;
                }
                break;
            }
            i = static_cast<std::size_t>(
                x.values[static_cast<std::size_t>(node.feature)] <= node.threshold
                    ? node.left
                    : node.right);
        }
    }
    const auto n_trees = static_cast<double>(m.trees.size());
    int best = 0;
    for (int c = 0; c < m.n_classes; ++c) {
        out.probs[static_cast<std::size_t>(c)] /= n_trees;
        if (out.probs[static_cast<std::size_t>(c)] >
            out.probs[static_cast<std::size_t>(best)]) {
            best = c;
        }
    }
    out.word = *word_from_code(best);
    return out;
}

std::vector<Prediction> predict_many(const ForestModel& m,
                                     const std::vector<FeatureVector>& xs,
                                     int threads) {
    std::vector<Prediction> out(xs.size());
    parallel_for(xs.size(), threads,
                 [&](std::size_t i) { out[i] = predict(m, xs[i]); });
    return out;
}

}  // namespace emgspeech::learn
