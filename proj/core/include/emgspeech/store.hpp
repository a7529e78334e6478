#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "emgspeech/config.hpp"
#include "emgspeech/recording.hpp"
#include "emgspeech/segment.hpp"

namespace emgspeech {

// JSON mappings for the configuration types and schedule entries, shared
// by the session manifest and the CLI config file.
void to_json(nlohmann::json& j, const AcquisitionConfig& c);
void from_json(const nlohmann::json& j, AcquisitionConfig& c);
void to_json(nlohmann::json& j, const ProtocolConfig& c);
void from_json(const nlohmann::json& j, ProtocolConfig& c);
void to_json(nlohmann::json& j, const PipelineConfig& c);
void from_json(const nlohmann::json& j, PipelineConfig& c);
void to_json(nlohmann::json& j, const PromptEvent& e);
void from_json(const nlohmann::json& j, PromptEvent& e);

}  // namespace emgspeech

namespace emgspeech::store {

inline constexpr std::uint16_t kBatchFormatVersion = 1;

/// Writes one directory per session under root: a manifest.json holding
/// {session_id, condition, acquisition, protocol, schedule} plus one
/// <batch_id>.emgs sample stream per batch. Streams are rebuilt from the
/// utterances: prompt p sits at p * (articulation + rest) samples, with
/// zeros filling the rest periods. Throws IoError / InvalidConfig.
void save_dataset(const Dataset& d, const std::filesystem::path& root);

/// Loads every session directory under root (sorted by name) back into a
/// Dataset: parses its manifest, reads each batch stream, and cuts the
/// utterances at the scheduled onsets. Sample values round-trip bit for
/// bit. Throws IoError / FormatError.
Dataset load_store(const std::filesystem::path& root);

/// One continuous multichannel stream as a little-endian binary file:
/// header {magic "EMGS", version u16, n_channels u16, n_samples u64,
/// sample_rate_hz f64}, then f32 microvolt samples, channel-major.
void write_batch_file(const std::filesystem::path& path, const Recording& r);
Recording read_batch_file(const std::filesystem::path& path);

/// Feature/label CSV: header session_id,batch_id,word_code,f0000..,
/// then one row per utterance with full double precision.
void write_feature_csv(const std::filesystem::path& path, const Dataset& d,
                       const std::vector<FeatureVector>& features);

}  // namespace emgspeech::store
