#include "emgspeech/synth.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "emgspeech/biquad.hpp"
#include "emgspeech/errors.hpp"
#include "emgspeech/frame.hpp"
#include "emgspeech/parallel.hpp"
#include "emgspeech/rng.hpp"

namespace emgspeech::synth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Stream tags separating independent random choices under one seed.
constexpr std::uint64_t kStreamPrompts = 1;
constexpr std::uint64_t kStreamMixing = 2;
constexpr std::uint64_t kStreamSamples = 3;

constexpr std::uint64_t kOracleSeed = 0x0E46'5370'33C4'11ULL;

struct SessionMix {
    bool identity = true;
    std::vector<double> angles;  // rotation of channel pair (c, c+1)
    std::vector<double> gains;
};

SessionMix make_mix(int session, double strength, int n_channels,
                    std::uint64_t seed) {
    SessionMix m;
    if (session == 0 || strength <= 0.0 || n_channels < 2) {
        return m;
    }
    Rng rng(derive_seed(seed, kStreamMixing, static_cast<std::uint64_t>(session)));
    m.identity = false;
    m.angles.resize(static_cast<std::size_t>(n_channels - 1));
    for (double& a : m.angles) {
        a = strength * rng.uniform(-0.6, 0.6);
    }
    m.gains.resize(static_cast<std::size_t>(n_channels));
    for (double& g : m.gains) {
        g = 1.0 + strength * rng.uniform(-0.25, 0.25);
    }
    return m;
}

void apply_mix(std::vector<std::vector<double>>& chans, const SessionMix& m) {
    if (m.identity) {
        return;
    }
    const std::size_t n_samples = chans[0].size();
    for (std::size_t c = 0; c + 1 < chans.size(); ++c) {
        const double ca = std::cos(m.angles[c]);
        const double sa = std::sin(m.angles[c]);
        auto& a = chans[c];
        auto& b = chans[c + 1];
        for (std::size_t k = 0; k < n_samples; ++k) {
            const double x = a[k];
            const double y = b[k];
            a[k] = ca * x - sa * y;
            b[k] = sa * x + ca * y;
        }
    }
    for (std::size_t c = 0; c < chans.size(); ++c) {
        for (double& v : chans[c]) {
            v *= m.gains[c];
        }
    }
}

/// Quantizes a double microvolt value onto the ADC code lattice and
/// narrows to the storage type.
float quantize(double uv, const AcquisitionConfig& acq) {
    return static_cast<float>(
        wire::code_to_microvolts(wire::microvolts_to_code(uv, acq), acq));
}

std::vector<Word> batch_prompts(const ProtocolConfig& proto, std::uint64_t seed,
                                int session, int batch) {
    std::vector<Word> order;
    order.reserve(static_cast<std::size_t>(proto.utterances_per_batch()));
    for (int rep = 0; rep < proto.reps_per_batch; ++rep) {
        for (const Word w : kAllWords) {
            order.push_back(w);
        }
    }
    Rng rng(derive_seed(derive_seed(seed, kStreamPrompts),
                        static_cast<std::uint64_t>(session),
                        static_cast<std::uint64_t>(batch)));
    rng.shuffle(order);
    return order;
}

}  // namespace

void to_json(nlohmann::json& j, const ClassTemplate& t) {
    j = nlohmann::json{{"channels", t.channels},
                       {"gains", t.gains},
                       {"onset_s", t.onset_s},
                       {"duration_s", t.duration_s}};
}

void from_json(const nlohmann::json& j, ClassTemplate& t) {
    t = ClassTemplate{};
    if (j.contains("channels")) j.at("channels").get_to(t.channels);
    if (j.contains("gains")) j.at("gains").get_to(t.gains);
    if (j.contains("onset_s")) j.at("onset_s").get_to(t.onset_s);
    if (j.contains("duration_s")) j.at("duration_s").get_to(t.duration_s);
}

void to_json(nlohmann::json& j, const SynthConfig& c) {
    j = nlohmann::json{{"seed", c.seed},
                       {"snr_db", c.snr_db},
                       {"powerline_amp_uv", c.powerline_amp_uv},
                       {"repositioning_strength", c.repositioning_strength},
                       {"baseline_noise_uv", c.baseline_noise_uv},
                       {"condition", std::string(condition_name(c.condition))},
                       {"class_templates", c.class_templates}};
}

void from_json(const nlohmann::json& j, SynthConfig& c) {
    c = SynthConfig{};
    if (j.contains("seed")) j.at("seed").get_to(c.seed);
    if (j.contains("snr_db")) j.at("snr_db").get_to(c.snr_db);
    if (j.contains("powerline_amp_uv")) {
        j.at("powerline_amp_uv").get_to(c.powerline_amp_uv);
    }
    if (j.contains("repositioning_strength")) {
        j.at("repositioning_strength").get_to(c.repositioning_strength);
    }
    if (j.contains("baseline_noise_uv")) {
        j.at("baseline_noise_uv").get_to(c.baseline_noise_uv);
    }
    if (j.contains("condition")) {
        const auto name = j.at("condition").get<std::string>();
        const auto cond = condition_from_name(name);
        if (!cond) {
            throw FormatError("unknown condition \"" + name + "\"");
        }
        c.condition = *cond;
    }
    if (j.contains("class_templates")) {
        j.at("class_templates").get_to(c.class_templates);
    }
}

void SynthConfig::validate(const ProtocolConfig& proto,
                           const AcquisitionConfig& acq) const {
    if (!std::isfinite(snr_db)) {
        throw InvalidConfig("snr_db must be finite");
    }
    if (repositioning_strength < 0.0 || repositioning_strength > 1.0) {
        throw InvalidConfig("repositioning_strength must lie in [0, 1]");
    }
    if (powerline_amp_uv < 0.0) {
        throw InvalidConfig("powerline_amp_uv must be >= 0");
    }
    if (!(baseline_noise_uv > 0.0)) {
        throw InvalidConfig("baseline_noise_uv must be > 0");
    }
    const auto& templates =
        class_templates.empty() ? default_templates(proto, acq) : class_templates;
    if (templates.size() != static_cast<std::size_t>(proto.n_words)) {
        throw InvalidConfig("need one class template per word");
    }
    for (const auto& t : templates) {
        if (t.channels.empty() || t.channels.size() != t.gains.size()) {
            throw InvalidConfig("template channels and gains must match and be non-empty");
        }
        for (const int c : t.channels) {
            if (c < 0 || c >= acq.n_active()) {
                throw InvalidConfig("template channel " + std::to_string(c) +
                                    " out of range");
            }
        }
        if (t.onset_s < 0.0 || !(t.duration_s > 0.0) ||
            t.onset_s + t.duration_s > proto.articulation_s) {
            throw InvalidConfig("template activation must fit the articulation window");
        }
    }
}

std::vector<ClassTemplate> default_templates(const ProtocolConfig& proto,
                                             const AcquisitionConfig& acq) {
    const int n_ch = acq.n_active();
    std::vector<ClassTemplate> out;
    out.reserve(static_cast<std::size_t>(proto.n_words));
    for (int w = 0; w < proto.n_words; ++w) {
        ClassTemplate t;
        t.channels = {w % n_ch, (w + 3) % n_ch, (w + 7) % n_ch};
        t.gains = {1.0, 0.8, 0.6};
        t.onset_s = 0.15 + 0.05 * w;
        t.duration_s = 0.7 + 0.1 * (w % 4);
        out.push_back(std::move(t));
    }
    return out;
}

Dataset generate_dataset(const ProtocolConfig& proto, const AcquisitionConfig& acq,
                         const SynthConfig& sc, int threads) {
    proto.validate();
    acq.validate();
    sc.validate(proto, acq);
    const auto templates =
        sc.class_templates.empty() ? default_templates(proto, acq) : sc.class_templates;

    const double fs = acq.sample_rate_hz;
    const int n_ch = acq.n_active();
    const auto n = static_cast<std::size_t>(proto.utterance_samples(fs));
    const double carrier_sigma =
        sc.baseline_noise_uv * std::pow(10.0, sc.snr_db / 20.0);
    const dsp::BiquadCascade carrier_band = dsp::design_highpass(4, 20.0, fs);
    const double hum_w = kTwoPi * 50.0 / fs;

    std::vector<SessionMix> mixes;
    mixes.reserve(static_cast<std::size_t>(proto.n_sessions));
    for (int s = 0; s < proto.n_sessions; ++s) {
        mixes.push_back(make_mix(s, sc.repositioning_strength, n_ch, sc.seed));
    }

    struct Slot {
        int session, batch, prompt;
        Word word;
    };
    std::vector<Slot> slots;
    slots.reserve(static_cast<std::size_t>(proto.utterances_total()));
    for (int s = 0; s < proto.n_sessions; ++s) {
        for (int b = 0; b < proto.batches_per_session; ++b) {
            const auto order = batch_prompts(proto, sc.seed, s, b);
            for (int p = 0; p < static_cast<int>(order.size()); ++p) {
                slots.push_back({s, b, p, order[static_cast<std::size_t>(p)]});
            }
        }
    }

    Dataset d;
    d.condition = sc.condition;
    d.acquisition = acq;
    d.protocol = proto;
    d.utterances.resize(slots.size());

    const std::uint64_t sample_base = derive_seed(sc.seed, kStreamSamples);
    parallel_for(slots.size(), threads, [&](std::size_t i) {
        const Slot& slot = slots[i];
        Rng rng(derive_seed(sample_base, static_cast<std::uint64_t>(slot.session),
                            static_cast<std::uint64_t>(slot.batch),
                            static_cast<std::uint64_t>(slot.prompt)));

        std::vector<std::vector<double>> chans(
            static_cast<std::size_t>(n_ch), std::vector<double>(n, 0.0));

        // baseline noise plus shared-phase powerline interference
        const double phase = rng.uniform(0.0, kTwoPi);
        for (int c = 0; c < n_ch; ++c) {
            auto& x = chans[static_cast<std::size_t>(c)];
            double hum_re = sc.powerline_amp_uv * std::cos(phase);
            double hum_im = sc.powerline_amp_uv * std::sin(phase);
            const double cw = std::cos(hum_w);
            const double sw = std::sin(hum_w);
            for (std::size_t k = 0; k < n; ++k) {
                x[k] = sc.baseline_noise_uv * rng.normal() + hum_im;
                const double re = hum_re * cw - hum_im * sw;
                hum_im = hum_re * sw + hum_im * cw;
                hum_re = re;
            }
        }

        // one band-limited carrier, fanned out over the template channels
        const ClassTemplate& tpl = templates[static_cast<std::size_t>(word_code(slot.word))];
        const auto onset = static_cast<std::size_t>(std::lround(tpl.onset_s * fs));
        const auto dur = static_cast<std::size_t>(std::lround(tpl.duration_s * fs));
        std::vector<double> white(dur);
        for (double& v : white) {
            v = carrier_sigma * rng.normal();
        }
        const auto carrier = dsp::filt_causal(carrier_band, white);
        for (std::size_t t = 0; t < tpl.channels.size(); ++t) {
            auto& x = chans[static_cast<std::size_t>(tpl.channels[t])];
            const double gain = tpl.gains[t];
            for (std::size_t k = 0; k < dur && onset + k < n; ++k) {
                const double env =
                    0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(k) /
                                          static_cast<double>(dur)));
                x[onset + k] += gain * env * carrier[k];
            }
        }

        apply_mix(chans, mixes[static_cast<std::size_t>(slot.session)]);

        Utterance u;
        u.word = slot.word;
        u.session_id = "session-" + std::to_string(slot.session);
        u.batch_id = "batch-" + std::to_string(slot.batch);
        u.prompt_index = slot.prompt;
        u.recording = Recording(n_ch, n, fs);
        for (int c = 0; c < n_ch; ++c) {
            auto dst = u.recording.channel(c);
            const auto& src = chans[static_cast<std::size_t>(c)];
            for (std::size_t k = 0; k < n; ++k) {
                dst[k] = quantize(src[k], acq);
            }
        }
        d.utterances[i] = std::move(u);
    });
    return d;
}

Dataset oracle_dataset(const ProtocolConfig& proto, const AcquisitionConfig& acq,
                       double separation_uv) {
    proto.validate();
    acq.validate();
    if (!(separation_uv > 0.0)) {
        throw InvalidConfig("separation_uv must be > 0");
    }
    const double fs = acq.sample_rate_hz;
    const int n_ch = acq.n_active();
    const auto n = static_cast<std::size_t>(proto.utterance_samples(fs));
    const double noise_sigma = separation_uv * 1e-3;

    Dataset d;
    d.condition = Condition::Silent;
    d.acquisition = acq;
    d.protocol = proto;

    for (int s = 0; s < proto.n_sessions; ++s) {
        for (int b = 0; b < proto.batches_per_session; ++b) {
            const auto order = batch_prompts(proto, kOracleSeed, s, b);
            for (int p = 0; p < static_cast<int>(order.size()); ++p) {
                const Word word = order[static_cast<std::size_t>(p)];
                Rng rng(derive_seed(derive_seed(kOracleSeed, kStreamSamples),
                                    static_cast<std::uint64_t>(s),
                                    static_cast<std::uint64_t>(b),
                                    static_cast<std::uint64_t>(p)));
                Utterance u;
                u.word = word;
                u.session_id = "session-" + std::to_string(s);
                u.batch_id = "batch-" + std::to_string(b);
                u.prompt_index = p;
                u.recording = Recording(n_ch, n, fs);
                const double offset = word_code(word) * separation_uv;
                for (int c = 0; c < n_ch; ++c) {
                    auto dst = u.recording.channel(c);
                    for (std::size_t k = 0; k < n; ++k) {
                        double v = noise_sigma * rng.normal();
                        if (c == 0) {
                            v += offset *
                                 (1.0 + 0.5 * std::sin(kTwoPi * 100.0 *
                                                       static_cast<double>(k) / fs));
                        }
                        dst[k] = quantize(v, acq);
                    }
                }
                d.utterances.push_back(std::move(u));
            }
        }
    }
    return d;
}

}  // namespace emgspeech::synth
