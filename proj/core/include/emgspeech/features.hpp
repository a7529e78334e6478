#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "emgspeech/config.hpp"
#include "emgspeech/psd.hpp"
#include "emgspeech/recording.hpp"

namespace emgspeech::features {

/// Index names for the time_features output.
enum TimeFeature { kRms, kMax, kMin, kStd, kVar, kMean, kP25, kP75, kZcr };

/// [rms, max, min, std, var, mean, p25, p75, zcr]. Variance and std are
/// population (divide by N); percentiles interpolate linearly between
/// order statistics; zcr counts strict sign changes between consecutive
/// samples, zeros inheriting the previous nonzero sign, divided by N-1.
/// Throws TooShort when len < 2.
std::array<double, 9> time_features(std::span<const double> x);

/// [d3_mean, d3_std]: mean and population std of the deepest-level db4
/// detail coefficients. Propagates TooShort from the transform.
std::array<double, 2> wavelet_features(std::span<const double> x, int dwt_level = 3);

/// [mean_freq_hz, peak_freq_hz, total_power, mean_power, sm2, sm3,
///  band_ratio_1..B] for the B = |edges|-1 bands. mean_freq and the
/// spectral moments sm_n = sum(f^n P) / sum(P) are power-weighted; peak
/// frequency ties break toward the lowest bin; total_power integrates the
/// one-sided density; band membership is edge_i <= f < edge_{i+1}, with
/// the last band closed on the right. A zero-power spectrum yields all
/// zeros by convention.
std::vector<double> freq_features(const Psd& p, std::span<const double> band_edges_hz);

/// Per-window feature count under the given config: 9 + 2 + 6 + bands.
int features_per_window(const PipelineConfig& cfg);

/// FeatureVector length for a channel count: channels x windows x per-window.
std::size_t feature_dim(int n_channels, const PipelineConfig& cfg);

/// All per-window values in the order time, wavelet, freq.
std::vector<double> window_features(std::span<const double> x, double sample_rate_hz,
                                    const PipelineConfig& cfg);

/// Concatenates the window features of the first analysis_s seconds:
/// channel-major, then window, then feature index. Works on the recording
/// as stored; filtering beforehand is the caller's responsibility.
FeatureVector featurize_utterance(const Utterance& u, const PipelineConfig& cfg);

}  // namespace emgspeech::features
