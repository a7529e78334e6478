#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "emgspeech/config.hpp"
#include "emgspeech/recording.hpp"

namespace emgspeech::dsp {

/// One second-order section, normalized so a0 = 1.
struct BiquadSection {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;

    /// True when both poles lie strictly inside the unit circle.
    bool stable() const;

    /// DC gain (b0+b1+b2)/(1+a1+a2).
    double dc_gain() const;
};

/// A cascade of second-order sections plus its design metadata.
/// Stability is checked on construction.
struct BiquadCascade {
    std::vector<BiquadSection> sections;
    std::string kind;          // "butterworth-highpass" | "notch"
    double design_hz = 0.0;    // cutoff or center frequency
    double order_or_q = 0.0;   // order for the high-pass, Q for the notch
    double sample_rate_hz = 0.0;

    /// |H(e^{j 2 pi f / fs})| of the single-pass cascade.
    double magnitude_at(double freq_hz) const;

    /// Largest pole radius over all sections.
    double max_pole_radius() const;
};

/// Butterworth high-pass of the given order as cascaded second-order
/// sections, designed by bilinear transform with frequency pre-warping so
/// the magnitude at cutoff_hz is exactly 1/sqrt(2). Throws InvalidCutoff.
BiquadCascade design_highpass(int order, double cutoff_hz, double sample_rate_hz);

/// Single-biquad notch with unity gain at DC and Nyquist and a zero on the
/// unit circle at center_hz; the -3 dB bandwidth is about center_hz / q.
/// Throws InvalidCenter.
BiquadCascade design_notch(double center_hz, double q, double sample_rate_hz);

/// Zero-phase (forward-backward) filtering of one channel.
///
/// The input is extended at both ends by odd (point-reflected about the
/// endpoint value) extension of length 3 * (2 * sections + 1); each section
/// starts in its constant-input steady state for the first extended sample,
/// which removes the step transient at the boundary. The extension is
/// discarded, so the output has the input's length; the effective magnitude
/// is |H|^2 and the phase is zero. Throws TooShort when the input is not
/// longer than the extension.
std::vector<double> filt_zero_phase(const BiquadCascade& f,
                                    std::span<const double> x);

/// Single causal (forward-only) pass, each section starting in the
/// constant-input steady state for x[0]. No padding; output length =
/// input length.
std::vector<double> filt_causal(const BiquadCascade& f, std::span<const double> x);

/// Pre-designed filter pair for a fixed sample rate.
struct Preprocessor {
    Preprocessor(const PipelineConfig& cfg, double sample_rate_hz);

    /// High-pass then notch, both zero-phase, per channel independently.
    Recording run(const Recording& r) const;

    /// Same chain on a raw double channel.
    std::vector<double> run_channel(std::span<const double> x) const;

    BiquadCascade highpass;
    BiquadCascade notch;
};

/// Convenience wrapper: design the filters for r's sample rate and run them.
Recording preprocess(const Recording& r, const PipelineConfig& cfg);

}  // namespace emgspeech::dsp
