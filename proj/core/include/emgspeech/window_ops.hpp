#pragma once

#include <vector>

#include "emgspeech/config.hpp"
#include "emgspeech/recording.hpp"

namespace emgspeech::dsp {

/// First analysis_s seconds of the recording (700 samples at 500 SPS),
/// all channels. Throws TooShort when the recording is shorter.
Recording analysis_window(const Recording& r, const PipelineConfig& cfg);

/// analysis_window applied to an utterance's recording.
Recording analysis_window(const Utterance& u, const PipelineConfig& cfg);

/// Splits an analysis-length recording into n_windows non-overlapping
/// windows; window k holds samples [k*w, (k+1)*w) of every channel, so
/// concatenating the windows reproduces the input exactly. Throws
/// LengthMismatch unless the length is exactly n_windows * w.
std::vector<Recording> split_windows(const Recording& r, const PipelineConfig& cfg);

}  // namespace emgspeech::dsp
