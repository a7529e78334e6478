// Acceptance gate: one PASS/FAIL line per criterion, each with a wall
// clock budget that is part of the pass condition. Exits nonzero when
// anything fails. Criteria 1-5 are desk-checkable numerics against the
// independent oracles in oracles.hpp; 6-8 are statistical properties of
// the end-to-end pipeline at quarter scale; 9 drives the installed CLI.

#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "emgspeech/biquad.hpp"
#include "emgspeech/config.hpp"
#include "emgspeech/dwt.hpp"
#include "emgspeech/errors.hpp"
#include "emgspeech/evaluate.hpp"
#include "emgspeech/features.hpp"
#include "emgspeech/forest.hpp"
#include "emgspeech/frame.hpp"
#include "emgspeech/parallel.hpp"
#include "emgspeech/rng.hpp"
#include "emgspeech/splits.hpp"
#include "emgspeech/synth.hpp"
#include "emgspeech/words.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace emgspeech;

namespace {

int run_threads() { return std::min(hardware_threads(), 4); }

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

struct Checker {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) {
                detail += "; ";
            }
            detail += what;
        }
    }
};

double db(double magnitude) {
    return 20.0 * std::log10(std::max(magnitude, 1e-300));
}

// ---------------------------------------------------------------- 1

void filter_response(Checker& c) {
    const auto hp = dsp::design_highpass(4, 20.0, 500.0);
    const double at_cut = db(hp.magnitude_at(20.0));
    c.require(std::abs(at_cut - (-3.0102999566398125)) <= 0.01,
              "hp cutoff gain " + fmt(at_cut) + " dB");
    const double at_10 = db(hp.magnitude_at(10.0));
    c.require(at_10 <= -24.0, "hp 10 Hz gain " + fmt(at_10) + " dB");

    const auto notch = dsp::design_notch(50.0, 30.0, 500.0);
    const double at_50 = db(notch.magnitude_at(50.0));
    c.require(at_50 <= -40.0, "notch 50 Hz gain " + fmt(at_50) + " dB");
    const double at_dc = db(notch.magnitude_at(0.0));
    const double at_nyq = db(notch.magnitude_at(250.0));
    c.require(std::abs(at_dc) <= 0.1, "notch DC gain " + fmt(at_dc) + " dB");
    c.require(std::abs(at_nyq) <= 0.1, "notch Nyquist gain " + fmt(at_nyq) + " dB");

    // Zero phase: a symmetric pulse must come out symmetric.
    const int n = 1001;
    const int center = 500;
    std::vector<double> pulse(n);
    for (int i = 0; i < n; ++i) {
        const double d = (i - center) / 15.0;
        pulse[i] = std::exp(-0.5 * d * d);
    }
    const dsp::Preprocessor pre(PipelineConfig{}, 500.0);
    const auto y = pre.run_channel(pulse);
    double peak = 0.0;
    double asym = 0.0;
    for (int i = 0; i < n; ++i) {
        peak = std::max(peak, std::abs(y[i]));
    }
    for (int k = 1; k <= center; ++k) {
        asym = std::max(asym, std::abs(y[center + k] - y[center - k]));
    }
    c.require(asym <= 1e-8 * peak,
              "pulse asymmetry " + fmt(asym) + " vs peak " + fmt(peak));
}

// ---------------------------------------------------------------- 2

void dwt_oracle(Checker& c) {
    Rng rng(derive_seed(2024, 2));
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(100);
        for (auto& v : x) {
            v = 20.0 * rng.normal() + 3.0;
        }
        const auto got = dsp::dwt_db4(x, 3);
        for (int level = 1; level <= 3; ++level) {
            const auto want = oracle::dwt_details(x, level);
            const auto& have = got.details[level - 1];
            c.require(have.size() == want.size(), "detail length, level " +
                                                      std::to_string(level));
            for (std::size_t i = 0; i < want.size() && c.ok; ++i) {
                c.require(oracle::close(have[i], want[i], 1e-9, 1e-12),
                          "detail mismatch at level " + std::to_string(level));
            }
        }
        const auto want_a = oracle::dwt_approx(x, 3);
        c.require(got.approx.size() == want_a.size(), "approx length");
        for (std::size_t i = 0; i < want_a.size() && c.ok; ++i) {
            c.require(oracle::close(got.approx[i], want_a[i], 1e-9, 1e-12),
                      "approx mismatch");
        }
        if (!c.ok) {
            return;
        }
    }

    const double value = 5.5;
    const std::vector<double> flat(100, value);
    const auto r = dsp::dwt_db4(flat, 3);
    const double gain = std::pow(2.0, 1.5);
    for (const auto& level : r.details) {
        for (const double v : level) {
            c.require(std::abs(v) <= 1e-9 * value, "constant leaks into details");
        }
    }
    for (const double v : r.approx) {
        c.require(std::abs(v - value * gain) <= 1e-9 * value * gain,
                  "constant approx gain " + fmt(v / value));
    }
}

// ---------------------------------------------------------------- 3

std::vector<double> oracle_features(const std::vector<double>& x, double fs,
                                    const PipelineConfig& cfg) {
    std::vector<double> out;
    out.push_back(oracle::rms(x));
    out.push_back(*std::max_element(x.begin(), x.end()));
    out.push_back(*std::min_element(x.begin(), x.end()));
    out.push_back(std::sqrt(oracle::var(x)));
    out.push_back(oracle::var(x));
    out.push_back(oracle::mean(x));
    out.push_back(oracle::percentile(x, 0.25));
    out.push_back(oracle::percentile(x, 0.75));
    out.push_back(oracle::zcr(x));

    const auto d3 = oracle::dwt_details(x, cfg.dwt_level);
    out.push_back(oracle::mean(d3));
    out.push_back(std::sqrt(oracle::var(d3)));

    const auto sp = oracle::psd(x, fs);
    const double df = sp.freqs[1] - sp.freqs[0];
    double psum = 0.0;
    double fsum = 0.0;
    double f2sum = 0.0;
    double f3sum = 0.0;
    std::size_t peak = 0;
    for (std::size_t i = 0; i < sp.power.size(); ++i) {
        psum += sp.power[i];
        fsum += sp.freqs[i] * sp.power[i];
        f2sum += sp.freqs[i] * sp.freqs[i] * sp.power[i];
        f3sum += sp.freqs[i] * sp.freqs[i] * sp.freqs[i] * sp.power[i];
        if (sp.power[i] > sp.power[peak]) {
            peak = i;
        }
    }
    out.push_back(fsum / psum);
    out.push_back(sp.freqs[peak]);
    out.push_back(psum * df);
    out.push_back(psum * df / static_cast<double>(sp.power.size()));
    out.push_back(f2sum / psum);
    out.push_back(f3sum / psum);
    const auto& e = cfg.band_edges_hz;
    for (std::size_t b = 0; b + 1 < e.size(); ++b) {
        double band = 0.0;
        for (std::size_t i = 0; i < sp.power.size(); ++i) {
            const bool last = b + 2 == e.size();
            const bool in = sp.freqs[i] >= e[b] &&
                            (last ? sp.freqs[i] <= e[b + 1] : sp.freqs[i] < e[b + 1]);
            if (in) {
                band += sp.power[i];
            }
        }
        out.push_back(band / psum);
    }
    return out;
}

void feature_oracle(Checker& c) {
    const PipelineConfig cfg;
    const double fs = 500.0;
    Rng rng(derive_seed(2024, 3));
    for (int trial = 0; trial < 100 && c.ok; ++trial) {
        std::vector<double> x(100);
        for (auto& v : x) {
            v = 20.0 * rng.normal() + 3.0;
        }
        const auto got = features::window_features(x, fs, cfg);
        const auto want = oracle_features(x, fs, cfg);
        c.require(got.size() == 21 && want.size() == 21, "feature count");
        for (std::size_t i = 0; i < want.size() && c.ok; ++i) {
            c.require(oracle::close(got[i], want[i], 1e-9, 1e-12),
                      "feature " + std::to_string(i) + ": " + fmt(got[i]) +
                          " vs oracle " + fmt(want[i]));
        }

        // Amplitude scaling must act on each feature in its known way.
        const double alpha = 2.5;
        std::vector<double> xs(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            xs[i] = alpha * x[i];
        }
        const auto scaled = features::window_features(xs, fs, cfg);
        auto want_scaled = got;
        for (const int i : {0, 1, 2, 3, 5, 6, 7, 9, 10}) {
            want_scaled[static_cast<std::size_t>(i)] *= alpha;
        }
        for (const int i : {4, 13, 14}) {
            want_scaled[static_cast<std::size_t>(i)] *= alpha * alpha;
        }
        for (std::size_t i = 0; i < scaled.size() && c.ok; ++i) {
            c.require(oracle::close(scaled[i], want_scaled[i], 1e-9, 1e-12),
                      "scaling of feature " + std::to_string(i));
        }
    }
}

// ---------------------------------------------------------------- 4

void parser_roundtrip(Checker& c) {
    const AcquisitionConfig acq;
    Rng rng(derive_seed(2024, 4));
    const int n_ch = acq.n_channels_recorded;
    std::vector<std::int32_t> codes;
    codes.reserve(100000 + n_ch);
    for (int i = 0; i < 100000; ++i) {
        codes.push_back(static_cast<std::int32_t>(rng.below(1u << 24)) +
                        wire::kCodeMin);
    }
    codes.push_back(wire::kCodeMin);
    codes.push_back(wire::kCodeMax);
    while (codes.size() % static_cast<std::size_t>(n_ch) != 0) {
        codes.push_back(0);
    }

    std::uint16_t seq = 0;
    for (std::size_t f = 0; f < codes.size() / n_ch && c.ok; ++f) {
        wire::Frame frame;
        frame.seq = seq++;
        frame.codes.assign(codes.begin() + static_cast<std::ptrdiff_t>(f * n_ch),
                           codes.begin() + static_cast<std::ptrdiff_t>((f + 1) * n_ch));
        const auto bytes = wire::emit_frame(frame);
        const auto back = wire::parse_frame(bytes, n_ch);
        c.require(back.seq == frame.seq && back.codes == frame.codes,
                  "frame round trip at frame " + std::to_string(f));
    }

    // Injected drops must be reported exactly where they happened.
    auto stream_with = [&](const std::vector<std::uint16_t>& seqs) {
        std::vector<std::uint8_t> bytes;
        for (const auto s : seqs) {
            wire::Frame frame;
            frame.seq = s;
            frame.codes.assign(static_cast<std::size_t>(n_ch), 1000 + s);
            const auto b = wire::emit_frame(frame);
            bytes.insert(bytes.end(), b.begin(), b.end());
        }
        return bytes;
    };
    const auto r =
        wire::ingest_packet_stream(stream_with({0, 1, 2, 5, 6, 10}), acq);
    c.require(r.recording.n_samples() == 11,
              "filled length " + std::to_string(r.recording.n_samples()));
    c.require(r.gaps.size() == 2, "gap count " + std::to_string(r.gaps.size()));
    if (r.gaps.size() == 2) {
        c.require(r.gaps[0].after_seq == 2 && r.gaps[0].frames_lost == 2 &&
                      r.gaps[0].at_sample == 3,
                  "first gap location");
        c.require(r.gaps[1].after_seq == 6 && r.gaps[1].frames_lost == 3 &&
                      r.gaps[1].at_sample == 7,
                  "second gap location");
    }
    const auto wrap = wire::ingest_packet_stream(stream_with({65534, 65535, 0, 1}), acq);
    c.require(wrap.gaps.empty() && wrap.recording.n_samples() == 4,
              "counter wrap treated as a gap");
}

// ---------------------------------------------------------------- 5

Dataset shape_dataset(const ProtocolConfig& proto) {
    Dataset d;
    d.protocol = proto;
    for (int s = 0; s < proto.n_sessions; ++s) {
        for (int b = 0; b < proto.batches_per_session; ++b) {
            for (int p = 0; p < proto.utterances_per_batch(); ++p) {
                Utterance u;
                u.word = kAllWords[static_cast<std::size_t>(p % kNumWords)];
                u.session_id = "session-" + std::to_string(s);
                u.batch_id = "batch-" + std::to_string(b);
                u.prompt_index = p;
                u.recording = Recording(1, 1, d.acquisition.sample_rate_hz);
                d.utterances.push_back(std::move(u));
            }
        }
    }
    return d;
}

void check_partition(Checker& c, const std::vector<learn::Split>& folds,
                     std::size_t universe, const std::string& label) {
    std::set<int> tests;
    for (const auto& f : folds) {
        for (const int i : f.test) {
            c.require(tests.insert(i).second, label + ": test index repeated");
        }
        std::set<int> train(f.train.begin(), f.train.end());
        for (const int i : f.test) {
            c.require(train.count(i) == 0, label + ": train/test overlap");
        }
    }
    c.require(tests.size() == universe,
              label + ": coverage " + std::to_string(tests.size()) + " of " +
                  std::to_string(universe));
}

void split_counts(Checker& c) {
    const ProtocolConfig proto;
    const auto d = shape_dataset(proto);

    const auto session = learn::session_7fold(d, "session-1");
    c.require(session.size() == 7, "session fold count");
    for (const auto& f : session) {
        c.require(f.test.size() == 160, "session test size " +
                                            std::to_string(f.test.size()));
        c.require(f.train.size() == 960, "session train size " +
                                             std::to_string(f.train.size()));
        for (const int i : f.test) {
            c.require(d.utterances[static_cast<std::size_t>(i)].session_id ==
                          "session-1",
                      "session fold leaks another session");
        }
    }
    check_partition(c, session, 1120, "session");

    const auto global = learn::global_5fold(d, 77);
    c.require(global.size() == 5, "global fold count");
    for (const auto& f : global) {
        c.require(f.test.size() == 672, "global test size " +
                                            std::to_string(f.test.size()));
        c.require(f.train.size() == 2688, "global train size");
        std::array<int, kNumWords> per_label{};
        for (const int i : f.test) {
            ++per_label[static_cast<std::size_t>(
                word_code(d.utterances[static_cast<std::size_t>(i)].word))];
        }
        for (const int n : per_label) {
            c.require(n == 84, "global per-label test count " + std::to_string(n));
        }
    }
    check_partition(c, global, 3360, "global");

    const auto loso = learn::loso_splits(d);
    c.require(loso.size() == 3, "loso fold count");
    for (const auto& f : loso) {
        c.require(f.test.size() == 1120 && f.train.size() == 2240,
                  "loso sizes " + std::to_string(f.test.size()) + "/" +
                      std::to_string(f.train.size()));
        for (const int i : f.test) {
            c.require(d.utterances[static_cast<std::size_t>(i)].session_id == f.name,
                      "loso test outside its session");
        }
        for (const int i : f.train) {
            c.require(d.utterances[static_cast<std::size_t>(i)].session_id != f.name,
                      "loso train inside the held-out session");
        }
    }
    check_partition(c, loso, 3360, "loso");
}

// ------------------------------------------------------- shared 6-8

ProtocolConfig quarter_protocol() {
    ProtocolConfig proto;
    proto.reps_per_batch = 5;  // quarter scale: 840 utterances
    return proto;
}

std::vector<FeatureVector> featurize_all(const Dataset& d,
                                         const PipelineConfig& cfg, int threads) {
    const dsp::Preprocessor pre(cfg, d.acquisition.sample_rate_hz);
    std::vector<FeatureVector> rows(d.utterances.size());
    parallel_for(d.utterances.size(), threads, [&](std::size_t i) {
        Utterance u = d.utterances[i];
        u.recording = pre.run(u.recording);
        rows[i] = features::featurize_utterance(u, cfg);
    });
    return rows;
}

double eval_accuracy(const std::vector<FeatureVector>& rows, const Dataset& d,
                     learn::Scheme scheme, std::uint64_t seed) {
    learn::ForestParams params;
    params.seed = seed;
    const auto report =
        learn::evaluate_features(rows, d, scheme, params, run_threads());
    return report.overall.mean;
}

// ---------------------------------------------------------------- 6

void chance_level(Checker& c) {
    const auto proto = quarter_protocol();
    const AcquisitionConfig acq;
    synth::SynthConfig sc;
    sc.seed = 2026;
    auto d = synth::generate_dataset(proto, acq, sc, run_threads());

    std::vector<Word> labels;
    labels.reserve(d.utterances.size());
    for (const auto& u : d.utterances) {
        labels.push_back(u.word);
    }
    Rng rng(derive_seed(2026, 6));
    rng.shuffle(labels);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        d.utterances[i].word = labels[i];
    }

    const auto rows = featurize_all(d, PipelineConfig{}, run_threads());
    const double acc = eval_accuracy(rows, d, learn::Scheme::Global5Fold, 61);
    c.require(std::abs(acc - 0.125) <= 0.05,
              "label-permuted accuracy " + fmt(acc) + " not within 0.125 +/- 0.05");
}

// ---------------------------------------------------------------- 7

void separable_oracle(Checker& c) {
    const auto proto = quarter_protocol();
    const AcquisitionConfig acq;
    const auto d = synth::oracle_dataset(proto, acq, 1000.0);
    const auto rows = featurize_all(d, PipelineConfig{}, run_threads());
    for (const auto scheme : {learn::Scheme::Session7Fold,
                              learn::Scheme::Global5Fold, learn::Scheme::Loso}) {
        const double acc = eval_accuracy(rows, d, scheme, 7);
        c.require(acc == 1.0, std::string(learn::scheme_name(scheme)) +
                                  " accuracy " + fmt(acc) + " != 1.0");
    }
}

// ---------------------------------------------------------------- 8

void qualitative_trends(Checker& c) {
    const auto proto = quarter_protocol();
    const AcquisitionConfig acq;
    const PipelineConfig cfg;
    int global_beats_loso = 0;
    int high_beats_low = 0;
    int all_above_margin = 0;
    std::string log;
    for (const std::uint64_t seed : {301u, 302u, 303u}) {
        synth::SynthConfig high;
        high.seed = seed;
        high.snr_db = 10.0;
        high.repositioning_strength = 0.5;
        const auto d_high = synth::generate_dataset(proto, acq, high, run_threads());
        const auto rows_high = featurize_all(d_high, cfg, run_threads());
        const double g_high =
            eval_accuracy(rows_high, d_high, learn::Scheme::Global5Fold, seed);
        const double l_high =
            eval_accuracy(rows_high, d_high, learn::Scheme::Loso, seed);

        synth::SynthConfig low = high;
        low.snr_db = 3.0;
        const auto d_low = synth::generate_dataset(proto, acq, low, run_threads());
        const auto rows_low = featurize_all(d_low, cfg, run_threads());
        const double g_low =
            eval_accuracy(rows_low, d_low, learn::Scheme::Global5Fold, seed);

        global_beats_loso += g_high >= l_high ? 1 : 0;
        high_beats_low += g_high >= g_low ? 1 : 0;
        all_above_margin += std::min({g_high, l_high, g_low}) > 0.225 ? 1 : 0;
        log += " seed " + std::to_string(seed) + ": global " + fmt(g_high) +
               ", loso " + fmt(l_high) + ", snr3 global " + fmt(g_low) + ";";
    }
    c.require(global_beats_loso >= 2, "global >= loso in only " +
                                          std::to_string(global_beats_loso) +
                                          "/3 seeds:" + log);
    c.require(high_beats_low >= 2, "snr 10 >= snr 3 in only " +
                                       std::to_string(high_beats_low) +
                                       "/3 seeds:" + log);
    c.require(all_above_margin >= 2, "above chance + 0.10 in only " +
                                         std::to_string(all_above_margin) +
                                         "/3 seeds:" + log);
}

// ---------------------------------------------------------------- 9

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void determinism(Checker& c) {
    const fs::path root = fs::temp_directory_path() /
                          ("emgspeech-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(root);
    const fs::path config = root / "config.json";
    {
        std::ofstream out(config);
        out << R"({"protocol": {"reps_per_batch": 1}, "synth": {"seed": 7}})";
    }
    const std::string cli = EMGSPEECH_CLI_PATH;
    auto run = [&](const std::string& args) {
        const std::string cmd =
            cli + " " + args + " > /dev/null 2> " + (root / "stderr.txt").string();
        return std::system(cmd.c_str());
    };

    for (const int variant : {1, 2}) {
        const std::string tag = std::to_string(variant);
        const int threads = variant == 1 ? 1 : 3;
        int rc = run("simulate --config " + config.string() + " --threads " +
                     std::to_string(threads) + " --out " +
                     (root / ("store" + tag)).string());
        c.require(rc == 0, "simulate run " + tag + " failed");
        rc = run("evaluate --store " + (root / ("store" + tag)).string() +
                 " --scheme global --seed 7 --threads " + std::to_string(threads) +
                 " --out " + (root / ("eval" + tag)).string());
        c.require(rc == 0, "evaluate run " + tag + " failed");
    }
    if (c.ok) {
        const auto m1 = nlohmann::json::parse(slurp(root / "store1" / "run_manifest.json"));
        const auto m2 = nlohmann::json::parse(slurp(root / "store2" / "run_manifest.json"));
        c.require(m1.at("checksums") == m2.at("checksums"),
                  "store checksums differ between runs");
        c.require(slurp(root / "eval1" / "report.json") ==
                      slurp(root / "eval2" / "report.json"),
                  "report.json differs between runs");
        c.require(slurp(root / "eval1" / "report.csv") ==
                      slurp(root / "eval2" / "report.csv"),
                  "report.csv differs between runs");
    }
    std::error_code ec;
    fs::remove_all(root, ec);
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double limit_s;
        std::function<void(Checker&)> body;
    };
    const std::vector<Criterion> criteria = {
        {"filter-response", 1.0, filter_response},
        {"dwt-oracle", 5.0, dwt_oracle},
        {"feature-oracle", 10.0, feature_oracle},
        {"parser-roundtrip", 5.0, parser_roundtrip},
        {"split-counts", 5.0, split_counts},
        {"chance-level", 120.0, chance_level},
        {"separable-oracle", 300.0, separable_oracle},
        {"qualitative-trends", 1200.0, qualitative_trends},
        {"determinism", 600.0, determinism},
    };

    int failed = 0;
    for (const auto& cr : criteria) {
        Checker c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            cr.body(c);
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        c.require(elapsed <= cr.limit_s, "over time budget");
        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(1);
        line << (c.ok ? "PASS" : "FAIL") << "  " << cr.name << "  (" << elapsed
             << "s, limit " << cr.limit_s << "s)";
        std::cout << line.str() << "\n";
        if (!c.ok) {
            std::cout << "      " << c.detail << "\n";
            ++failed;
        }
    }
    if (failed == 0) {
        std::cout << "all acceptance criteria passed\n";
        return 0;
    }
    std::cout << failed << " criterion(s) failed\n";
    return 1;
}
