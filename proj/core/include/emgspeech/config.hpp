#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace emgspeech {

/// Front-end acquisition parameters. Defaults mirror the recording setup:
/// 500 SPS, gain 12, 2.4 V reference, 16 recorded differential channels of
/// which the first 14 are active.
struct AcquisitionConfig {
    double sample_rate_hz = 500.0;
    double gain = 12.0;
    double vref_v = 2.4;
    int n_channels_recorded = 16;
    std::vector<int> active_channels = default_active_channels();

    static std::vector<int> default_active_channels();

    int n_active() const { return static_cast<int>(active_channels.size()); }

    /// Throws InvalidConfig when a field is out of range or the active
    /// channel list contains duplicates / out-of-range indices.
    void validate() const;
};

/// Session/batch protocol shape: 8 words x 20 repetitions per batch,
/// 7 batches per session, 3 sessions; 4 s articulation + 1 s rest.
struct ProtocolConfig {
    int n_words = 8;
    double articulation_s = 4.0;
    double rest_s = 1.0;
    int reps_per_batch = 20;
    int batches_per_session = 7;
    int n_sessions = 3;

    int utterances_per_batch() const { return n_words * reps_per_batch; }
    int utterances_per_session() const {
        return batches_per_session * utterances_per_batch();
    }
    int utterances_total() const { return n_sessions * utterances_per_session(); }

    /// Articulation length in samples at the given rate.
    int utterance_samples(double sample_rate_hz) const;
    /// Articulation plus rest, i.e. the minimum spacing between prompts.
    int prompt_stride_samples(double sample_rate_hz) const;

    void validate() const;
};

/// Preprocessing and feature-extraction parameters.
struct PipelineConfig {
    int hp_order = 4;
    double hp_cutoff_hz = 20.0;
    double notch_hz = 50.0;
    double notch_q = 30.0;
    double analysis_s = 1.4;
    double window_s = 0.2;
    int n_windows = 7;
    std::string wavelet = "db4";
    int dwt_level = 3;
    std::vector<double> band_edges_hz = {20.0, 60.0, 120.0, 200.0, 250.0};

    int analysis_samples(double sample_rate_hz) const;
    int window_samples(double sample_rate_hz) const;

    /// Validates internal consistency and, given a sample rate, that the
    /// band edges stay at or below Nyquist.
    void validate(double sample_rate_hz) const;
};

}  // namespace emgspeech
