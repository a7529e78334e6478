#include "emgspeech/validate.hpp"

#include <array>
#include <map>

namespace emgspeech {

std::vector<Violation> validate_dataset(const Dataset& d) {
    std::vector<Violation> out;
    const int want_samples =
        d.protocol.utterance_samples(d.acquisition.sample_rate_hz);
    const int want_channels = d.acquisition.n_active();

    std::map<std::pair<std::string, std::string>, std::array<int, kNumWords>>
        counts;

    for (const Utterance& u : d.utterances) {
        auto& c = counts[{u.session_id, u.batch_id}];
        c[static_cast<std::size_t>(word_code(u.word))] += 1;

        if (static_cast<int>(u.recording.n_samples()) != want_samples) {
            out.push_back({u.session_id, u.batch_id, "length",
                           "utterance '" + std::string(word_name(u.word)) +
                               "' #" + std::to_string(u.prompt_index) + " has " +
                               std::to_string(u.recording.n_samples()) +
                               " samples, expected " +
                               std::to_string(want_samples)});
        }
        if (u.recording.n_channels() != want_channels) {
            out.push_back({u.session_id, u.batch_id, "channels",
                           "utterance '" + std::string(word_name(u.word)) +
                               "' #" + std::to_string(u.prompt_index) + " has " +
                               std::to_string(u.recording.n_channels()) +
                               " channels, expected " +
                               std::to_string(want_channels)});
        }
        if (u.recording.sample_rate_hz() != d.acquisition.sample_rate_hz) {
            out.push_back({u.session_id, u.batch_id, "sample-rate",
                           "utterance '" + std::string(word_name(u.word)) +
                               "' #" + std::to_string(u.prompt_index) +
                               " sample rate differs from acquisition config"});
        }
        if (!u.recording.all_finite()) {
            out.push_back({u.session_id, u.batch_id, "non-finite",
                           "utterance '" + std::string(word_name(u.word)) +
                               "' #" + std::to_string(u.prompt_index) +
                               " contains non-finite samples"});
        }
    }

    for (const auto& [key, c] : counts) {
        for (int w = 0; w < kNumWords; ++w) {
            if (c[static_cast<std::size_t>(w)] != d.protocol.reps_per_batch) {
                out.push_back(
                    {key.first, key.second, "count-imbalance",
                     "word '" +
                         std::string(word_name(static_cast<Word>(w))) +
                         "' appears " +
                         std::to_string(c[static_cast<std::size_t>(w)]) +
                         " times, expected " +
                         std::to_string(d.protocol.reps_per_batch)});
            }
        }
    }
    return out;
}

}  // namespace emgspeech
