#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "emgspeech/config.hpp"
#include "emgspeech/recording.hpp"

namespace emgspeech::synth {

/// Where one word lights up: the carrier-bearing channels with their
/// gains, under a shared raised-cosine activation bump.
struct ClassTemplate {
    std::vector<int> channels;
    std::vector<double> gains;
    double onset_s = 0.1;
    double duration_s = 0.8;
};

struct SynthConfig {
    std::uint64_t seed = 1;
    double snr_db = 10.0;  // activation-to-baseline amplitude ratio, in dB
    double powerline_amp_uv = 20.0;
    double repositioning_strength = 0.0;  // [0, 1]
    double baseline_noise_uv = 8.0;       // baseline Gaussian sigma
    Condition condition = Condition::Silent;
    std::vector<ClassTemplate> class_templates;  // empty = default_templates

    /// Throws InvalidConfig on out-of-range fields or malformed templates.
    void validate(const ProtocolConfig& proto, const AcquisitionConfig& acq) const;
};

void to_json(nlohmann::json& j, const ClassTemplate& t);
void from_json(const nlohmann::json& j, ClassTemplate& t);
void to_json(nlohmann::json& j, const SynthConfig& c);
void from_json(const nlohmann::json& j, SynthConfig& c);

/// One distinct (channel triple, onset, duration) signature per word.
std::vector<ClassTemplate> default_templates(const ProtocolConfig& proto,
                                             const AcquisitionConfig& acq);

/// Labeled synthetic dataset with the full session/batch/prompt shape.
/// Per channel: baseline Gaussian noise + the word's activation envelope
/// times a band-limited Gaussian carrier + a 50 Hz interference tone with
/// per-utterance phase. Sessions after the first get a fixed channel
/// mixing perturbation (adjacent-pair rotations plus gain jitter) scaled
/// by repositioning_strength. Prompt order is randomized per batch. Every
/// sample is quantized to the ADC code lattice, so captures and stores
/// round-trip exactly. Deterministic in (configs, seed), including across
/// thread counts.
Dataset generate_dataset(const ProtocolConfig& proto, const AcquisitionConfig& acq,
                         const SynthConfig& sc, int threads = 1);

/// Trivially separable fixture: word w drives channel 0 with
/// w * separation_uv * (1 + 0.5 sin(2 pi 100 t)) over tiny noise, so the
/// classes stay separable both raw (window means) and after DC-removing
/// filters (tone amplitude). Throws InvalidConfig when separation_uv <= 0.
Dataset oracle_dataset(const ProtocolConfig& proto, const AcquisitionConfig& acq,
                       double separation_uv);

}  // namespace emgspeech::synth
