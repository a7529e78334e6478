#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emgspeech/config.hpp"
#include "emgspeech/words.hpp"

namespace emgspeech {

/// A channels x samples block of microvolt values at a fixed sample rate.
/// Samples are stored as f32, matching the on-disk batch format; anything
/// produced by the parser or the generator is therefore exactly
/// representable and round-trips through the store bit for bit.
class Recording {
public:
    Recording() = default;
    Recording(int n_channels, std::size_t n_samples, double sample_rate_hz)
        : n_channels_(n_channels),
          n_samples_(n_samples),
          sample_rate_hz_(sample_rate_hz),
          data_(static_cast<std::size_t>(n_channels) * n_samples, 0.0f) {}

    int n_channels() const { return n_channels_; }
    std::size_t n_samples() const { return n_samples_; }
    double sample_rate_hz() const { return sample_rate_hz_; }
    bool empty() const { return data_.empty(); }

    std::span<float> channel(int c) {
        return {data_.data() + static_cast<std::size_t>(c) * n_samples_, n_samples_};
    }
    std::span<const float> channel(int c) const {
        return {data_.data() + static_cast<std::size_t>(c) * n_samples_, n_samples_};
    }

    float& at(int c, std::size_t i) {
        return data_[static_cast<std::size_t>(c) * n_samples_ + i];
    }
    float at(int c, std::size_t i) const {
        return data_[static_cast<std::size_t>(c) * n_samples_ + i];
    }

    std::vector<float>& raw() { return data_; }
    const std::vector<float>& raw() const { return data_; }

    /// Channel as doubles, the working precision of the dsp stage.
    std::vector<double> channel_f64(int c) const {
        const auto src = channel(c);
        return std::vector<double>(src.begin(), src.end());
    }

    /// True when every stored value is finite.
    bool all_finite() const;

    /// Copy of the given sample range [start, start + count) on all channels.
    Recording slice(std::size_t start, std::size_t count) const;

    /// Copy of the listed channels, in the listed order.
    Recording select_channels(const std::vector<int>& channels) const;

private:
    int n_channels_ = 0;
    std::size_t n_samples_ = 0;
    double sample_rate_hz_ = 0.0;
    std::vector<float> data_;
};

enum class Condition : std::uint8_t { Vocalized = 0, Silent = 1 };

std::string_view condition_name(Condition c) noexcept;  // "VOCALIZED" | "SILENT"
std::optional<Condition> condition_from_name(std::string_view name) noexcept;

/// One labeled articulation with its session and batch origin.
struct Utterance {
    Word word = Word::Up;
    Recording recording;
    std::string session_id;
    std::string batch_id;
    int prompt_index = 0;
};

/// A full corpus: every utterance of every batch of every session.
struct Dataset {
    std::vector<Utterance> utterances;
    Condition condition = Condition::Silent;
    AcquisitionConfig acquisition;
    ProtocolConfig protocol;
};

/// Flat per-utterance feature vector, channel-major, then window, then
/// feature index within the window.
struct FeatureVector {
    std::vector<double> values;
};

}  // namespace emgspeech
