#include "emgspeech/dwt.hpp"

#include "emgspeech/errors.hpp"

namespace emgspeech::dsp {

namespace {

constexpr std::array<double, 8> kDb4Lo = {
    -0.010597401784997278, 0.032883011666982945,  0.030841381835986965,
    -0.18703481171888114,  -0.02798376941698385,  0.6308807679295904,
    0.7148465705525415,    0.23037781330885523,
};

// quadrature mirror: hi[k] = (-1)^(k+1) * lo[7-k]
constexpr std::array<double, 8> kDb4Hi = {
    -0.23037781330885523,  0.7148465705525415,    -0.6308807679295904,
    -0.02798376941698385,  0.18703481171888114,   0.030841381835986965,
    -0.032883011666982945, -0.010597401784997278,
};

/// Half-sample symmetric lookup, folding repeatedly so pads longer than
/// the signal still resolve: ... x1 x0 | x0 x1 ... xN-1 | xN-1 xN-2 ...
double ext_at(std::span<const double> x, std::ptrdiff_t i) {
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return x[static_cast<std::size_t>(i)];
}

void analysis_step(std::span<const double> x, std::vector<double>& lo,
                   std::vector<double>& hi) {
    const std::size_t out = dwt_step_len(x.size());
    lo.assign(out, 0.0);
    hi.assign(out, 0.0);
    for (std::size_t k = 0; k < out; ++k) {
        const std::ptrdiff_t base = 2 * static_cast<std::ptrdiff_t>(k) - 7;
        double a = 0.0;
        double d = 0.0;
        for (std::size_t j = 0; j < 8; ++j) {
            const double v = ext_at(x, base + static_cast<std::ptrdiff_t>(j));
            a += kDb4Lo[j] * v;
            d += kDb4Hi[j] * v;
        }
        lo[k] = a;
        hi[k] = d;
    }
}

}  // namespace

std::span<const double, 8> db4_lowpass() noexcept { return kDb4Lo; }
std::span<const double, 8> db4_highpass() noexcept { return kDb4Hi; }

DwtResult dwt_db4(std::span<const double> x, int levels) {
    if (levels < 1) {
        throw InvalidConfig("dwt levels must be >= 1");
    }
    if (x.size() < (std::size_t{1} << levels)) {
        throw TooShort("dwt of " + std::to_string(levels) + " levels needs at least " +
                       std::to_string(std::size_t{1} << levels) + " samples, got " +
                       std::to_string(x.size()));
    }
    DwtResult r;
    std::vector<double> approx(x.begin(), x.end());
    std::vector<double> next;
    for (int level = 0; level < levels; ++level) {
        std::vector<double> detail;
        analysis_step(approx, next, detail);
        r.details.push_back(std::move(detail));
        approx.swap(next);
    }
    r.approx = std::move(approx);
    return r;
}

}  // namespace emgspeech::dsp
