#include "emgspeech/segment.hpp"

#include "emgspeech/errors.hpp"

namespace emgspeech {

void validate_schedule(const std::vector<PromptEvent>& schedule,
                       const ProtocolConfig& proto, double sample_rate_hz) {
    const std::size_t stride = static_cast<std::size_t>(
        proto.prompt_stride_samples(sample_rate_hz));
    for (std::size_t i = 1; i < schedule.size(); ++i) {
        // events from different batches index different streams
        if (schedule[i].batch_id != schedule[i - 1].batch_id) {
            continue;
        }
        if (schedule[i].onset_sample <= schedule[i - 1].onset_sample) {
            throw InvalidConfig("schedule onsets not strictly increasing at '" +
                                schedule[i].batch_id + "' prompt " +
                                std::to_string(schedule[i].prompt_index));
        }
        if (schedule[i].onset_sample - schedule[i - 1].onset_sample < stride) {
            throw InvalidConfig("schedule onsets closer than articulation+rest at '" +
                                schedule[i].batch_id + "' prompt " +
                                std::to_string(schedule[i].prompt_index));
        }
    }
}

std::vector<Utterance> segment_utterances(const Recording& stream,
                                          const std::vector<PromptEvent>& schedule,
                                          const ProtocolConfig& proto,
                                          const std::string& session_id) {
    const std::size_t len = static_cast<std::size_t>(
        proto.utterance_samples(stream.sample_rate_hz()));
    std::vector<Utterance> out;
    out.reserve(schedule.size());
    for (const PromptEvent& ev : schedule) {
        if (ev.onset_sample + len > stream.n_samples()) {
            throw OutOfBounds("prompt " + std::to_string(ev.prompt_index) +
                              " of batch '" + ev.batch_id + "' (onset " +
                              std::to_string(ev.onset_sample) +
                              ") extends past stream end (" +
                              std::to_string(stream.n_samples()) + " samples)");
        }
        Utterance u;
        u.word = ev.word;
        u.recording = stream.slice(ev.onset_sample, len);
        u.session_id = session_id;
        u.batch_id = ev.batch_id;
        u.prompt_index = ev.prompt_index;
        out.push_back(std::move(u));
    }
    return out;
}

}  // namespace emgspeech
