#pragma once

#include <string>
#include <vector>

#include "emgspeech/recording.hpp"

namespace emgspeech {

/// One broken dataset invariant. Violations are data, not faults: a
/// malformed dataset yields a non-empty list instead of an exception.
struct Violation {
    std::string session_id;
    std::string batch_id;
    std::string rule;    // short identifier, e.g. "count-imbalance"
    std::string detail;  // human-readable description naming the word/values
};

/// Checks every Dataset invariant:
///  - per (session, batch), exactly reps_per_batch utterances of every word
///  - every recording has round(articulation_s * sample_rate) samples
///  - every recording has |active_channels| channels at the configured rate
///  - all sample values finite
std::vector<Violation> validate_dataset(const Dataset& d);

}  // namespace emgspeech
