#include "emgspeech/splits.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "emgspeech/errors.hpp"
#include "emgspeech/rng.hpp"

namespace emgspeech::learn {

namespace {

std::vector<int> complement(const std::vector<int>& pool, const std::vector<bool>& in_test) {
    std::vector<int> out;
    out.reserve(pool.size());
    for (const int i : pool) {
        if (!in_test[static_cast<std::size_t>(i)]) {
            out.push_back(i);
        }
    }
    return out;
}

}  // namespace

std::vector<Split> session_7fold(const Dataset& d, const std::string& session_id) {
    std::map<std::string, std::vector<int>> batches;
    std::vector<int> session_idx;
    for (std::size_t i = 0; i < d.utterances.size(); ++i) {
        const auto& u = d.utterances[i];
        if (u.session_id == session_id) {
            batches[u.batch_id].push_back(static_cast<int>(i));
            session_idx.push_back(static_cast<int>(i));
        }
    }
    const auto want = static_cast<std::size_t>(d.protocol.batches_per_session);
    if (batches.size() != want) {
        throw MissingBatch("session \"" + session_id + "\" has " +
                           std::to_string(batches.size()) + " batches, expected " +
                           std::to_string(want));
    }

    std::vector<Split> out;
    out.reserve(want);
    std::vector<bool> in_test(d.utterances.size(), false);
    for (const auto& [batch_id, test] : batches) {
        for (const int i : test) {
            in_test[static_cast<std::size_t>(i)] = true;
        }
        Split s;
        s.name = session_id + ":" + batch_id;
        s.test = test;
        s.train = complement(session_idx, in_test);
        out.push_back(std::move(s));
        for (const int i : test) {
            in_test[static_cast<std::size_t>(i)] = false;
        }
    }
    return out;
}

std::vector<Split> global_5fold(const Dataset& d, std::uint64_t seed, int n_folds) {
    if (n_folds < 2) {
        throw InvalidConfig("need at least 2 folds");
    }
    std::vector<long> label_counts(kNumWords, 0);
    for (const auto& u : d.utterances) {
        ++label_counts[static_cast<std::size_t>(word_code(u.word))];
    }
    for (const Word w : kAllWords) {
        const long c = label_counts[static_cast<std::size_t>(word_code(w))];
        if (c < n_folds) {
            throw TooFewPerLabel("label " + std::string(word_name(w)) + " has " +
                                 std::to_string(c) + " utterances, need at least " +
                                 std::to_string(n_folds));
        }
    }

    std::vector<int> order(d.utterances.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    std::vector<int> fold_of(d.utterances.size(), 0);
    std::vector<int> dealt(kNumWords, 0);
    for (const int i : order) {
        const int label = word_code(d.utterances[static_cast<std::size_t>(i)].word);
        fold_of[static_cast<std::size_t>(i)] =
            dealt[static_cast<std::size_t>(label)]++ % n_folds;
    }

    std::vector<Split> out(static_cast<std::size_t>(n_folds));
    for (int f = 0; f < n_folds; ++f) {
        out[static_cast<std::size_t>(f)].name = "fold-" + std::to_string(f);
    }
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
        for (int f = 0; f < n_folds; ++f) {
            auto& s = out[static_cast<std::size_t>(f)];
            (fold_of[i] == f ? s.test : s.train).push_back(static_cast<int>(i));
        }
    }
    return out;
}

std::vector<Split> loso_splits(const Dataset& d) {
    std::map<std::string, std::vector<int>> sessions;
    for (std::size_t i = 0; i < d.utterances.size(); ++i) {
        sessions[d.utterances[i].session_id].push_back(static_cast<int>(i));
    }
    const auto want = static_cast<std::size_t>(d.protocol.n_sessions);
    if (sessions.size() != want) {
        throw WrongSessionCount("dataset has " + std::to_string(sessions.size()) +
                                " sessions, expected " + std::to_string(want));
    }
    std::vector<Split> out;
    out.reserve(want);
    for (const auto& [session_id, test] : sessions) {
        Split s;
        s.name = session_id;
        s.test = test;
        s.train.reserve(d.utterances.size() - test.size());
        for (const auto& [other_id, idx] : sessions) {
            if (other_id != session_id) {
                s.train.insert(s.train.end(), idx.begin(), idx.end());
            }
        }
        std::sort(s.train.begin(), s.train.end());
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace emgspeech::learn
