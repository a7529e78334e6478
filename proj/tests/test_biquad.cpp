#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "emgspeech/biquad.hpp"
#include "emgspeech/config.hpp"
#include "emgspeech/errors.hpp"
#include "emgspeech/recording.hpp"
#include "oracles.hpp"

using namespace emgspeech;

namespace {

constexpr double kFs = 500.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> sine(double freq, double fs, std::size_t n, double amp = 1.0) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = amp * std::sin(kTwoPi * freq * static_cast<double>(i) / fs);
    }
    return x;
}

/// RMS-derived amplitude over the central 80%, trimmed to whole cycles of
/// freq so the estimate is unbiased.
double central_amplitude(const std::vector<double>& x, double freq, double fs) {
    const std::size_t lo = x.size() / 10;
    const std::size_t hi = x.size() - lo;
    const auto cycle = static_cast<std::size_t>(std::lround(fs / freq));
    const std::size_t span = ((hi - lo) / cycle) * cycle;
    double s = 0.0;
    for (std::size_t i = lo; i < lo + span; ++i) {
        s += x[i] * x[i];
    }
    return std::sqrt(2.0 * s / static_cast<double>(span));
}

}  // namespace

TEST_CASE("high-pass design hits the Butterworth anchor points") {
    const auto f = dsp::design_highpass(4, 20.0, kFs);
    CHECK(f.sections.size() == 2);
    for (const auto& s : f.sections) {
        CHECK(s.stable());
    }
    CHECK(f.max_pole_radius() < 1.0);

    const double at_cut = 20.0 * std::log10(f.magnitude_at(20.0));
    CHECK(at_cut == doctest::Approx(-3.0102999566398125).epsilon(1e-9));
    CHECK(20.0 * std::log10(f.magnitude_at(10.0)) <= -24.0);
    CHECK(20.0 * std::log10(f.magnitude_at(100.0)) == doctest::Approx(0.0).epsilon(1e-4));
    CHECK(f.magnitude_at(0.0) == doctest::Approx(0.0).epsilon(1e-12));

    // independent complex-polynomial evaluation agrees
    CHECK(oracle::cascade_gain_db(f, 20.0, kFs) == doctest::Approx(at_cut).epsilon(1e-9));
    CHECK(oracle::cascade_gain_db(f, 60.0, kFs) ==
          doctest::Approx(20.0 * std::log10(f.magnitude_at(60.0))).epsilon(1e-9));
}

TEST_CASE("odd-order high-pass gets a first-order tail section") {
    const auto f = dsp::design_highpass(5, 20.0, kFs);
    CHECK(f.sections.size() == 3);
    const double at_cut = 20.0 * std::log10(f.magnitude_at(20.0));
    CHECK(at_cut == doctest::Approx(-3.0102999566398125).epsilon(1e-9));
    for (const auto& s : f.sections) {
        CHECK(s.stable());
    }
}

TEST_CASE("high-pass design rejects bad cutoffs") {
    CHECK_THROWS_AS(dsp::design_highpass(4, 0.0, kFs), InvalidCutoff);
    CHECK_THROWS_AS(dsp::design_highpass(4, 250.0, kFs), InvalidCutoff);
    CHECK_THROWS_AS(dsp::design_highpass(0, 20.0, kFs), InvalidCutoff);
}

TEST_CASE("notch design pins DC, Nyquist and the center") {
    const auto f = dsp::design_notch(50.0, 30.0, kFs);
    CHECK(f.sections.size() == 1);
    CHECK(f.sections[0].stable());
    CHECK(20.0 * std::log10(f.magnitude_at(0.0)) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(20.0 * std::log10(f.magnitude_at(250.0)) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(f.magnitude_at(50.0) < 1e-6);

    // -3 dB width around the center is close to center / q
    const double target = 1.0 / std::sqrt(2.0);
    double lo = 50.0;
    double hi = 50.0;
    while (f.magnitude_at(lo) < target) {
        lo -= 1e-3;
    }
    while (f.magnitude_at(hi) < target) {
        hi += 1e-3;
    }
    CHECK(hi - lo == doctest::Approx(50.0 / 30.0).epsilon(0.1));

    CHECK_THROWS_AS(dsp::design_notch(0.0, 30.0, kFs), InvalidCenter);
    CHECK_THROWS_AS(dsp::design_notch(250.0, 30.0, kFs), InvalidCenter);
    CHECK_THROWS_AS(dsp::design_notch(50.0, 0.0, kFs), InvalidCenter);
}

TEST_CASE("zero-phase high-pass passes a 100 Hz sine at unit gain") {
    const auto f = dsp::design_highpass(4, 20.0, kFs);
    const auto x = sine(100.0, kFs, 2000);
    const auto y = dsp::filt_zero_phase(f, x);
    REQUIRE(y.size() == x.size());
    CHECK(central_amplitude(y, 100.0, kFs) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("zero-phase filtering kills constants exactly enough") {
    const auto f = dsp::design_highpass(4, 20.0, kFs);
    for (double c : {1.0, -3.5, 1000.0}) {
        const std::vector<double> x(500, c);
        const auto y = dsp::filt_zero_phase(f, x);
        double peak = 0.0;
        for (double v : y) {
            peak = std::max(peak, std::fabs(v));
        }
        CHECK(peak <= 1e-6 * std::fabs(c));
    }
}

TEST_CASE("zero-phase notch removes a 50 Hz sine") {
    const auto f = dsp::design_notch(50.0, 30.0, kFs);
    const auto x = sine(50.0, kFs, 6000);
    const auto y = dsp::filt_zero_phase(f, x);
    const std::size_t lo = y.size() / 10;
    double peak = 0.0;
    for (std::size_t i = lo; i < y.size() - lo; ++i) {
        peak = std::max(peak, std::fabs(y[i]));
    }
    CHECK(peak <= 1e-2);
}

TEST_CASE("zero-phase output of a symmetric pulse stays symmetric") {
    const auto f = dsp::design_highpass(4, 20.0, kFs);
    const std::size_t n = 1001;
    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = static_cast<double>(i) - 500.0;
        x[i] = std::exp(-d * d / (2.0 * 15.0 * 15.0));
    }
    const auto y = dsp::filt_zero_phase(f, x);
    double peak = 0.0;
    for (double v : y) {
        peak = std::max(peak, std::fabs(v));
    }
    double asym = 0.0;
    for (std::size_t i = 0; i < n / 2; ++i) {
        asym = std::max(asym, std::fabs(y[i] - y[n - 1 - i]));
    }
    CHECK(asym <= 1e-8 * peak);
}

TEST_CASE("zero-phase filtering needs enough samples to pad") {
    const auto f = dsp::design_highpass(4, 20.0, kFs);
    const std::vector<double> x(15, 1.0);  // pad is 3 * (2*2+1) = 15
    CHECK_THROWS_AS(dsp::filt_zero_phase(f, x), TooShort);
    const std::vector<double> ok(16, 1.0);
    CHECK_NOTHROW(dsp::filt_zero_phase(f, ok));
}

TEST_CASE("causal pass starts in steady state") {
    const auto f = dsp::design_highpass(4, 20.0, kFs);
    const std::vector<double> x(300, 7.0);
    const auto y = dsp::filt_causal(f, x);
    REQUIRE(y.size() == x.size());
    // constant input from the infinite past: a high-pass holds output 0
    for (double v : y) {
        CHECK(std::fabs(v) <= 1e-9);
    }
}

TEST_CASE("preprocess removes hum and offset but keeps the band") {
    PipelineConfig cfg;
    const std::size_t n = 2000;
    Recording rec(2, n, kFs);
    const auto tone = sine(100.0, kFs, n, 50.0);
    const auto hum = sine(50.0, kFs, n, 20.0);
    for (std::size_t i = 0; i < n; ++i) {
        rec.at(0, i) = static_cast<float>(tone[i] + hum[i] + 8.0);
        rec.at(1, i) = static_cast<float>(tone[i]);
    }
    const auto out = dsp::preprocess(rec, cfg);
    REQUIRE(out.n_samples() == n);
    REQUIRE(out.n_channels() == 2);

    // residual against the clean tone over the central 40%: the narrow
    // notch (Q = 30) rings for ~100 samples per edge, so the comparison
    // must stay past several time constants of settling
    const std::size_t lo = 3 * n / 10;
    const std::size_t hi = n - lo;
    double worst = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        worst = std::max(worst, std::fabs(static_cast<double>(out.at(0, i)) - tone[i]));
    }
    CHECK(worst <= 0.02 * 50.0);
}

TEST_CASE("preprocessor and convenience wrapper agree") {
    PipelineConfig cfg;
    Recording rec(1, 1000, kFs);
    for (std::size_t i = 0; i < 1000; ++i) {
        rec.at(0, i) = static_cast<float>(std::sin(0.3 * static_cast<double>(i)) +
                                          0.2 * std::sin(0.9 * static_cast<double>(i)));
    }
    const dsp::Preprocessor pre(cfg, kFs);
    const auto a = pre.run(rec);
    const auto b = dsp::preprocess(rec, cfg);
    for (std::size_t i = 0; i < 1000; ++i) {
        CHECK(a.at(0, i) == b.at(0, i));
    }
}
