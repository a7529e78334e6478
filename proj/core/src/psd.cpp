#include "emgspeech/psd.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "emgspeech/errors.hpp"

namespace emgspeech::features {

Psd periodogram(std::span<const double> x, double sample_rate_hz) {
    const std::size_t n = x.size();
    if (n < 2 || n % 2 != 0) {
        throw LengthMismatch("periodogram needs an even window length >= 2, got " +
                             std::to_string(n));
    }
    if (!(sample_rate_hz > 0.0)) {
        throw InvalidConfig("sample rate must be positive");
    }

    // One twiddle table indexed by (k*t) mod n keeps every DFT angle an
    // exact multiple of 2*pi/n, independent of bin and sample index.
    std::vector<double> cos_tab(n);
    std::vector<double> sin_tab(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(i) /
                         static_cast<double>(n);
        cos_tab[i] = std::cos(a);
        sin_tab[i] = std::sin(a);
    }

    const std::size_t half = n / 2;
    Psd p;
    p.freqs_hz.resize(half + 1);
    p.power.resize(half + 1);
    const double norm = static_cast<double>(n) * sample_rate_hz;
    for (std::size_t k = 0; k <= half; ++k) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const std::size_t idx = (k * t) % n;
            re += x[t] * cos_tab[idx];
            im -= x[t] * sin_tab[idx];
        }
        const double scale = (k == 0 || k == half) ? 1.0 : 2.0;
        p.freqs_hz[k] = static_cast<double>(k) * sample_rate_hz / static_cast<double>(n);
        p.power[k] = scale * (re * re + im * im) / norm;
    }
    return p;
}

}  // namespace emgspeech::features
