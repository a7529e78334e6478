#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "emgspeech/config.hpp"
#include "emgspeech/recording.hpp"

namespace emgspeech {

/// One prompt of the schedule: which word was shown and where its
/// articulation window starts in the continuous stream.
struct PromptEvent {
    std::string batch_id;
    int prompt_index = 0;
    Word word = Word::Up;
    std::size_t onset_sample = 0;
};

/// Checks that onsets are strictly increasing and spaced by at least
/// articulation + rest. Throws InvalidConfig on violation.
void validate_schedule(const std::vector<PromptEvent>& schedule,
                       const ProtocolConfig& proto, double sample_rate_hz);

/// Cuts one Utterance per PromptEvent out of a continuous stream whose
/// channels are already the active channels. Each utterance covers
/// [onset, onset + articulation samples). Throws OutOfBounds, naming the
/// offending event, when the schedule extends past the stream end.
std::vector<Utterance> segment_utterances(const Recording& stream,
                                          const std::vector<PromptEvent>& schedule,
                                          const ProtocolConfig& proto,
                                          const std::string& session_id = {});

}  // namespace emgspeech
