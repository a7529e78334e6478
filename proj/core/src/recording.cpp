#include "emgspeech/recording.hpp"

#include <cmath>
#include <cstring>

#include "emgspeech/errors.hpp"

namespace emgspeech {

bool Recording::all_finite() const {
    for (float v : data_) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

Recording Recording::slice(std::size_t start, std::size_t count) const {
    if (start + count > n_samples_) {
        throw OutOfBounds("slice [" + std::to_string(start) + ", " +
                          std::to_string(start + count) +
                          ") exceeds recording length " +
                          std::to_string(n_samples_));
    }
    Recording out(n_channels_, count, sample_rate_hz_);
    for (int c = 0; c < n_channels_; ++c) {
        const auto src = channel(c);
        std::memcpy(out.channel(c).data(), src.data() + start,
                    count * sizeof(float));
    }
    return out;
}

Recording Recording::select_channels(const std::vector<int>& channels) const {
    Recording out(static_cast<int>(channels.size()), n_samples_, sample_rate_hz_);
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const int c = channels[i];
        if (c < 0 || c >= n_channels_) {
            throw OutOfBounds("channel " + std::to_string(c) +
                              " out of range [0, " + std::to_string(n_channels_) + ")");
        }
        std::memcpy(out.channel(static_cast<int>(i)).data(), channel(c).data(),
                    n_samples_ * sizeof(float));
    }
    return out;
}

std::string_view condition_name(Condition c) noexcept {
    return c == Condition::Vocalized ? "VOCALIZED" : "SILENT";
}

std::optional<Condition> condition_from_name(std::string_view name) noexcept {
    if (name == "VOCALIZED") {
        return Condition::Vocalized;
    }
    if (name == "SILENT") {
        return Condition::Silent;
    }
    return std::nullopt;
}

}  // namespace emgspeech
