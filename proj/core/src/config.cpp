#include "emgspeech/config.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include "emgspeech/errors.hpp"

namespace emgspeech {

std::vector<int> AcquisitionConfig::default_active_channels() {
    std::vector<int> ch(14);
    std::iota(ch.begin(), ch.end(), 0);
    return ch;
}

void AcquisitionConfig::validate() const {
    if (!(sample_rate_hz > 0.0)) {
        throw InvalidConfig("sample_rate_hz must be > 0");
    }
    if (!(gain > 0.0)) {
        throw InvalidConfig("gain must be > 0");
    }
    if (!(vref_v > 0.0)) {
        throw InvalidConfig("vref_v must be > 0");
    }
    if (n_channels_recorded <= 0) {
        throw InvalidConfig("n_channels_recorded must be > 0");
    }
    if (active_channels.empty()) {
        throw InvalidConfig("active_channels must not be empty");
    }
    std::set<int> seen;
    for (int c : active_channels) {
        if (c < 0 || c >= n_channels_recorded) {
            throw InvalidConfig("active channel " + std::to_string(c) +
                                " out of range [0, " +
                                std::to_string(n_channels_recorded) + ")");
        }
        if (!seen.insert(c).second) {
            throw InvalidConfig("duplicate active channel " + std::to_string(c));
        }
    }
}

int ProtocolConfig::utterance_samples(double sample_rate_hz) const {
    return static_cast<int>(std::lround(articulation_s * sample_rate_hz));
}

int ProtocolConfig::prompt_stride_samples(double sample_rate_hz) const {
    return static_cast<int>(std::lround((articulation_s + rest_s) * sample_rate_hz));
}

void ProtocolConfig::validate() const {
    if (n_words <= 0 || reps_per_batch <= 0 || batches_per_session <= 0 ||
        n_sessions <= 0) {
        throw InvalidConfig("protocol counts must be positive");
    }
    if (!(articulation_s > 0.0) || !(rest_s >= 0.0)) {
        throw InvalidConfig("articulation_s must be > 0 and rest_s >= 0");
    }
}

int PipelineConfig::analysis_samples(double sample_rate_hz) const {
    return static_cast<int>(std::lround(analysis_s * sample_rate_hz));
}

int PipelineConfig::window_samples(double sample_rate_hz) const {
    return static_cast<int>(std::lround(window_s * sample_rate_hz));
}

void PipelineConfig::validate(double sample_rate_hz) const {
    if (hp_order < 1) {
        throw InvalidConfig("hp_order must be >= 1");
    }
    if (!(hp_cutoff_hz > 0.0) || hp_cutoff_hz >= sample_rate_hz / 2.0) {
        throw InvalidConfig("hp_cutoff_hz must lie in (0, nyquist)");
    }
    if (!(notch_hz > 0.0) || notch_hz >= sample_rate_hz / 2.0) {
        throw InvalidConfig("notch_hz must lie in (0, nyquist)");
    }
    if (!(notch_q > 0.0)) {
        throw InvalidConfig("notch_q must be > 0");
    }
    if (n_windows <= 0) {
        throw InvalidConfig("n_windows must be > 0");
    }
    const double span = static_cast<double>(n_windows) * window_s;
    if (std::abs(span - analysis_s) > 1e-9) {
        throw InvalidConfig("n_windows * window_s must equal analysis_s");
    }
    if (dwt_level < 1) {
        throw InvalidConfig("dwt_level must be >= 1");
    }
    if (band_edges_hz.size() < 2) {
        throw InvalidConfig("band_edges_hz needs at least two edges");
    }
    for (std::size_t i = 1; i < band_edges_hz.size(); ++i) {
        if (!(band_edges_hz[i] > band_edges_hz[i - 1])) {
            throw InvalidConfig("band_edges_hz must be strictly increasing");
        }
    }
    if (band_edges_hz.back() > sample_rate_hz / 2.0 + 1e-12) {
        throw InvalidConfig("band_edges_hz must not exceed nyquist");
    }
}

}  // namespace emgspeech
