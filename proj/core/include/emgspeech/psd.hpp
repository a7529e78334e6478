#pragma once

#include <span>
#include <vector>

namespace emgspeech::features {

/// One-sided power spectral density on the DFT bin grid. For a 100-sample
/// window at 500 SPS the bins run 0, 5, ..., 250 Hz (51 bins).
struct Psd {
    std::vector<double> freqs_hz;
    std::vector<double> power;

    std::size_t n_bins() const { return power.size(); }
    /// Bin spacing, sample_rate / N.
    double df_hz() const { return freqs_hz.size() > 1 ? freqs_hz[1] - freqs_hz[0] : 0.0; }
};

/// Rectangular-window periodogram: power[k] = c_k |DFT(x)[k]|^2 / (N * fs)
/// with c_k = 1 for k in {0, N/2} and 2 otherwise, so that
/// sum(power) * df = mean(x^2) exactly (Parseval). Requires an even
/// length >= 2; throws LengthMismatch otherwise.
Psd periodogram(std::span<const double> x, double sample_rate_hz);

}  // namespace emgspeech::features
