#include "emgspeech/biquad.hpp"

#include <cmath>
#include <numbers>

#include "emgspeech/errors.hpp"

namespace emgspeech::dsp {

namespace {

constexpr double kPi = std::numbers::pi;

void check_stable(const BiquadCascade& c) {
    for (const auto& s : c.sections) {
        if (!s.stable()) {
            throw InvalidConfig(c.kind + " design at " +
                                std::to_string(c.design_hz) +
                                " Hz produced an unstable section");
        }
    }
}

}  // namespace

bool BiquadSection::stable() const {
    // stability triangle: |a2| < 1 and |a1| < 1 + a2
    return std::abs(a2) < 1.0 && std::abs(a1) < 1.0 + a2;
}

double BiquadSection::dc_gain() const {
    return (b0 + b1 + b2) / (1.0 + a1 + a2);
}

double BiquadCascade::magnitude_at(double freq_hz) const {
    const std::complex<double> z =
        std::exp(std::complex<double>(0.0, 2.0 * kPi * freq_hz / sample_rate_hz));
    const std::complex<double> zi = 1.0 / z;
    std::complex<double> h = 1.0;
    for (const auto& s : sections) {
        h *= (s.b0 + s.b1 * zi + s.b2 * zi * zi) /
             (1.0 + s.a1 * zi + s.a2 * zi * zi);
    }
    return std::abs(h);
}

double BiquadCascade::max_pole_radius() const {
    double r = 0.0;
    for (const auto& s : sections) {
        const std::complex<double> disc =
            std::sqrt(std::complex<double>(s.a1 * s.a1 - 4.0 * s.a2, 0.0));
        const double r1 = std::abs((-s.a1 + disc) / 2.0);
        const double r2 = std::abs((-s.a1 - disc) / 2.0);
        r = std::max({r, r1, r2});
    }
    return r;
}

BiquadCascade design_highpass(int order, double cutoff_hz, double sample_rate_hz) {
    if (order < 1) {
        throw InvalidCutoff("high-pass order must be >= 1");
    }
    if (!(cutoff_hz > 0.0) || !(cutoff_hz < sample_rate_hz / 2.0)) {
        throw InvalidCutoff("high-pass cutoff must lie in (0, nyquist)");
    }

    const double k = 2.0 * sample_rate_hz;                     // bilinear constant
    const double wa = k * std::tan(kPi * cutoff_hz / sample_rate_hz);  // pre-warped

    BiquadCascade out;
    out.kind = "butterworth-highpass";
    out.design_hz = cutoff_hz;
    out.order_or_q = static_cast<double>(order);
    out.sample_rate_hz = sample_rate_hz;

    // Conjugate pole pairs of the unit Butterworth low-pass prototype,
    // mapped to the high-pass by s -> wa / s, then bilinear-transformed.
    // Pair i has prototype angle theta in (pi/2, pi).
    const int n_pairs = order / 2;
    for (int i = 0; i < n_pairs; ++i) {
        const double theta = kPi * (2.0 * i + order + 1.0) / (2.0 * order);
        const std::complex<double> p(std::cos(theta), std::sin(theta));
        const std::complex<double> q = wa / p;  // analog high-pass pole
        const double re = q.real();
        const double m2 = std::norm(q);
        const double a = k * k - 2.0 * k * re + m2;
        BiquadSection s;
        s.b0 = k * k / a;
        s.b1 = -2.0 * k * k / a;
        s.b2 = k * k / a;
        s.a1 = -2.0 * (k * k - m2) / a;
        s.a2 = (k * k + 2.0 * k * re + m2) / a;
        out.sections.push_back(s);
    }
    if (order % 2 == 1) {
        // real prototype pole at s = -1 -> analog high-pass pole at -wa
        const double q = -wa;
        const double a = k - q;
        BiquadSection s;
        s.b0 = k / a;
        s.b1 = -k / a;
        s.b2 = 0.0;
        s.a1 = -(k + q) / a;
        s.a2 = 0.0;
        out.sections.push_back(s);
    }
    check_stable(out);
    return out;
}

BiquadCascade design_notch(double center_hz, double q, double sample_rate_hz) {
    if (!(center_hz > 0.0) || !(center_hz < sample_rate_hz / 2.0)) {
        throw InvalidCenter("notch center must lie in (0, nyquist)");
    }
    if (!(q > 0.0)) {
        throw InvalidCenter("notch q must be > 0");
    }
    const double w0 = 2.0 * kPi * center_hz / sample_rate_hz;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double cw = std::cos(w0);
    const double a0 = 1.0 + alpha;

    BiquadCascade out;
    out.kind = "notch";
    out.design_hz = center_hz;
    out.order_or_q = q;
    out.sample_rate_hz = sample_rate_hz;

    BiquadSection s;
    s.b0 = 1.0 / a0;
    s.b1 = -2.0 * cw / a0;
    s.b2 = 1.0 / a0;
    s.a1 = -2.0 * cw / a0;
    s.a2 = (1.0 - alpha) / a0;
    out.sections.push_back(s);
    check_stable(out);
    return out;
}

namespace {

/// Single causal pass through the cascade (direct form II transposed).
/// Each section starts in the steady state it would have after an infinite
/// run of its first input value.
void sosfilt_steady(const std::vector<BiquadSection>& sections,
                    std::vector<double>& x) {
    double in0 = x.empty() ? 0.0 : x.front();
    for (const auto& s : sections) {
        const double h1 = s.dc_gain();
        double s1 = (h1 - s.b0) * in0;
        double s2 = (s.b2 - s.a2 * h1) * in0;
        for (double& v : x) {
            const double y = s.b0 * v + s1;
            s1 = s.b1 * v - s.a1 * y + s2;
            s2 = s.b2 * v - s.a2 * y;
            v = y;
        }
        in0 *= h1;  // constant input to the next section
    }
}

}  // namespace

std::vector<double> filt_causal(const BiquadCascade& f, std::span<const double> x) {
    std::vector<double> out(x.begin(), x.end());
    sosfilt_steady(f.sections, out);
    return out;
}

std::vector<double> filt_zero_phase(const BiquadCascade& f,
                                    std::span<const double> x) {
    const std::size_t pad =
        3 * (2 * f.sections.size() + 1);
    if (x.size() <= pad) {
        throw TooShort("zero-phase filtering needs more than " +
                       std::to_string(pad) + " samples, got " +
                       std::to_string(x.size()));
    }
    const std::size_t n = x.size();
    std::vector<double> ext(n + 2 * pad);
    for (std::size_t j = 0; j < pad; ++j) {
        ext[j] = 2.0 * x[0] - x[pad - j];
    }
    for (std::size_t i = 0; i < n; ++i) {
        ext[pad + i] = x[i];
    }
    for (std::size_t j = 0; j < pad; ++j) {
        ext[pad + n + j] = 2.0 * x[n - 1] - x[n - 2 - j];
    }

    sosfilt_steady(f.sections, ext);
    std::reverse(ext.begin(), ext.end());
    sosfilt_steady(f.sections, ext);
    std::reverse(ext.begin(), ext.end());

    return std::vector<double>(ext.begin() + static_cast<std::ptrdiff_t>(pad),
                               ext.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

Preprocessor::Preprocessor(const PipelineConfig& cfg, double sample_rate_hz)
    : highpass(design_highpass(cfg.hp_order, cfg.hp_cutoff_hz, sample_rate_hz)),
      notch(design_notch(cfg.notch_hz, cfg.notch_q, sample_rate_hz)) {}

std::vector<double> Preprocessor::run_channel(std::span<const double> x) const {
    return filt_zero_phase(notch, filt_zero_phase(highpass, x));
}

Recording Preprocessor::run(const Recording& r) const {
    Recording out(r.n_channels(), r.n_samples(), r.sample_rate_hz());
    for (int c = 0; c < r.n_channels(); ++c) {
        const auto y = run_channel(r.channel_f64(c));
        auto dst = out.channel(c);
        for (std::size_t i = 0; i < y.size(); ++i) {
            dst[i] = static_cast<float>(y[i]);
        }
    }
    return out;
}

Recording preprocess(const Recording& r, const PipelineConfig& cfg) {
    return Preprocessor(cfg, r.sample_rate_hz()).run(r);
}

}  // namespace emgspeech::dsp
