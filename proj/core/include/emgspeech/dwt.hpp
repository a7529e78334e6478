#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace emgspeech::dsp {

/// 8-tap Daubechies-4 analysis pair (decomposition low-pass / high-pass).
std::span<const double, 8> db4_lowpass() noexcept;
std::span<const double, 8> db4_highpass() noexcept;

/// Coefficient count of one analysis step on an n-sample input:
/// ceil((n + filter_len - 1) / 2) with filter_len = 8.
constexpr std::size_t dwt_step_len(std::size_t n) noexcept {
    return (n + 8) / 2;
}

/// Multi-level analysis output.
struct DwtResult {
    std::vector<double> approx;                // deepest-level approximation
    std::vector<std::vector<double>> details;  // details[k] = level k+1
    std::string boundary = "symmetric-half";   // extension mode identifier
};

/// Cascaded db4 analysis filter bank: half-sample symmetric extension,
/// convolution with the decomposition pair, downsampling by two per level.
/// For a 100-sample window and 3 levels the lengths run 100 -> 54 -> 31
/// with a 19-coefficient final stage. Throws TooShort when
/// len(x) < 2^levels and InvalidConfig when levels < 1.
DwtResult dwt_db4(std::span<const double> x, int levels);

}  // namespace emgspeech::dsp
