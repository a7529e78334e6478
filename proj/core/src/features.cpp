#include "emgspeech/features.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "emgspeech/dwt.hpp"
#include "emgspeech/errors.hpp"
#include "emgspeech/window_ops.hpp"

namespace emgspeech::features {

namespace {

double percentile_linear(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double zero_crossing_rate(std::span<const double> x) {
    int prev = 0;
    long changes = 0;
    for (const double v : x) {
        int s = (v > 0.0) - (v < 0.0);
        if (s == 0) {
            s = prev;
        }
        if (s != 0 && prev != 0 && s != prev) {
            ++changes;
        }
        prev = s;
    }
    return static_cast<double>(changes) / static_cast<double>(x.size() - 1);
}

std::array<double, 2> mean_and_std(std::span<const double> v) {
    const double n = static_cast<double>(v.size());
    double sum = 0.0;
    for (const double x : v) {
        sum += x;
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (const double x : v) {
        const double d = x - mean;
        ss += d * d;
    }
    return {mean, std::sqrt(ss / n)};
}

}  // namespace

std::array<double, 9> time_features(std::span<const double> x) {
    if (x.size() < 2) {
        throw TooShort("time features need at least 2 samples, got " +
                       std::to_string(x.size()));
    }
    const double n = static_cast<double>(x.size());
    double sum = 0.0;
    double sum_sq = 0.0;
    double mx = x[0];
    double mn = x[0];
    for (const double v : x) {
        sum += v;
        sum_sq += v * v;
        mx = std::max(mx, v);
        mn = std::min(mn, v);
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (const double v : x) {
        const double d = v - mean;
        ss += d * d;
    }
    const double var = ss / n;

    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());

    std::array<double, 9> out{};
    out[kRms] = std::sqrt(sum_sq / n);
    out[kMax] = mx;
    out[kMin] = mn;
    out[kStd] = std::sqrt(var);
    out[kVar] = var;
    out[kMean] = mean;
    out[kP25] = percentile_linear(sorted, 0.25);
    out[kP75] = percentile_linear(sorted, 0.75);
    out[kZcr] = zero_crossing_rate(x);
    return out;
}

std::array<double, 2> wavelet_features(std::span<const double> x, int dwt_level) {
    const auto r = dsp::dwt_db4(x, dwt_level);
    return mean_and_std(r.details.back());
}

std::vector<double> freq_features(const Psd& p, std::span<const double> band_edges_hz) {
    if (band_edges_hz.size() < 2) {
        throw InvalidConfig("need at least two band edges");
    }
    const std::size_t n_bands = band_edges_hz.size() - 1;
    std::vector<double> out(6 + n_bands, 0.0);

    double psum = 0.0;
    double f1 = 0.0;
    double f2 = 0.0;
    double f3 = 0.0;
    for (std::size_t k = 0; k < p.n_bins(); ++k) {
        const double f = p.freqs_hz[k];
        const double pw = p.power[k];
        psum += pw;
        f1 += f * pw;
        f2 += f * f * pw;
        f3 += f * f * f * pw;
    }
    if (psum <= 0.0) {
        return out;  // zero-power convention: everything stays 0
    }

    std::size_t peak = 0;
    for (std::size_t k = 1; k < p.n_bins(); ++k) {
        if (p.power[k] > p.power[peak]) {
            peak = k;
        }
    }

    out[0] = f1 / psum;                                     // mean_freq_hz
    out[1] = p.freqs_hz[peak];                              // peak_freq_hz
    out[2] = psum * p.df_hz();                              // total_power
    out[3] = out[2] / static_cast<double>(p.n_bins());      // mean_power
    out[4] = f2 / psum;                                     // sm2
    out[5] = f3 / psum;                                     // sm3
    for (std::size_t b = 0; b < n_bands; ++b) {
        const double lo = band_edges_hz[b];
        const double hi = band_edges_hz[b + 1];
        const bool last = b + 1 == n_bands;
        double band = 0.0;
        for (std::size_t k = 0; k < p.n_bins(); ++k) {
            const double f = p.freqs_hz[k];
            if (f >= lo && (f < hi || (last && f <= hi))) {
                band += p.power[k];
            }
        }
        out[6 + b] = band / psum;
    }
    return out;
}

int features_per_window(const PipelineConfig& cfg) {
    return 9 + 2 + 6 + static_cast<int>(cfg.band_edges_hz.size()) - 1;
}

std::size_t feature_dim(int n_channels, const PipelineConfig& cfg) {
    return static_cast<std::size_t>(n_channels) *
           static_cast<std::size_t>(cfg.n_windows) *
           static_cast<std::size_t>(features_per_window(cfg));
}

std::vector<double> window_features(std::span<const double> x, double sample_rate_hz,
                                    const PipelineConfig& cfg) {
    if (cfg.wavelet != "db4") {
        throw InvalidConfig("unsupported wavelet \"" + cfg.wavelet + "\"");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(features_per_window(cfg)));
    const auto t = time_features(x);
    out.insert(out.end(), t.begin(), t.end());
    const auto w = wavelet_features(x, cfg.dwt_level);
    out.insert(out.end(), w.begin(), w.end());
    const auto f = freq_features(periodogram(x, sample_rate_hz), cfg.band_edges_hz);
    out.insert(out.end(), f.begin(), f.end());
    return out;
}

FeatureVector featurize_utterance(const Utterance& u, const PipelineConfig& cfg) {
    const Recording head = dsp::analysis_window(u.recording, cfg);
    const auto windows = dsp::split_windows(head, cfg);
    FeatureVector fv;
    fv.values.reserve(feature_dim(head.n_channels(), cfg));
    for (int c = 0; c < head.n_channels(); ++c) {
        for (const auto& w : windows) {
            const auto x = w.channel_f64(c);
            const auto vals = window_features(x, w.sample_rate_hz(), cfg);
            fv.values.insert(fv.values.end(), vals.begin(), vals.end());
        }
    }
    return fv;
}

}  // namespace emgspeech::features
