#include "emgspeech/window_ops.hpp"

#include <string>

#include "emgspeech/errors.hpp"

namespace emgspeech::dsp {

Recording analysis_window(const Recording& r, const PipelineConfig& cfg) {
    const auto want = static_cast<std::size_t>(cfg.analysis_samples(r.sample_rate_hz()));
    if (r.n_samples() < want) {
        throw TooShort("analysis window needs " + std::to_string(want) +
                       " samples, recording has " + std::to_string(r.n_samples()));
    }
    return r.slice(0, want);
}

Recording analysis_window(const Utterance& u, const PipelineConfig& cfg) {
    return analysis_window(u.recording, cfg);
}

std::vector<Recording> split_windows(const Recording& r, const PipelineConfig& cfg) {
    const auto w = static_cast<std::size_t>(cfg.window_samples(r.sample_rate_hz()));
    const auto want = static_cast<std::size_t>(cfg.n_windows) * w;
    if (r.n_samples() != want) {
        throw LengthMismatch("expected exactly " + std::to_string(cfg.n_windows) +
                             " windows of " + std::to_string(w) + " samples (" +
                             std::to_string(want) + " total), got " +
                             std::to_string(r.n_samples()));
    }
    std::vector<Recording> out;
    out.reserve(static_cast<std::size_t>(cfg.n_windows));
    for (int k = 0; k < cfg.n_windows; ++k) {
        out.push_back(r.slice(static_cast<std::size_t>(k) * w, w));
    }
    return out;
}

}  // namespace emgspeech::dsp
