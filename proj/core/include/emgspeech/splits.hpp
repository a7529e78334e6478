#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emgspeech/recording.hpp"

namespace emgspeech::learn {

/// One train/test partition, as indices into Dataset::utterances.
struct Split {
    std::string name;
    std::vector<int> train;
    std::vector<int> test;
};

/// Fold k tests batch k of the named session (batch ids in sorted order)
/// and trains on the session's other batches. Throws MissingBatch unless
/// the session has exactly batches_per_session batches.
std::vector<Split> session_7fold(const Dataset& d, const std::string& session_id);

/// Stratified k-fold over the whole dataset: indices are shuffled by the
/// seed, then each label's utterances are dealt round-robin across folds,
/// so per-fold label counts differ by at most one. Throws TooFewPerLabel
/// when some label has fewer than n_folds utterances.
std::vector<Split> global_5fold(const Dataset& d, std::uint64_t seed, int n_folds = 5);

/// Leave-one-session-out: split k tests session k (ids in sorted order).
/// Throws WrongSessionCount unless exactly n_sessions sessions are present.
std::vector<Split> loso_splits(const Dataset& d);

}  // namespace emgspeech::learn
