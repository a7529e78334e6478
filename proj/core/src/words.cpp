#include "emgspeech/words.hpp"

namespace emgspeech {

namespace {
constexpr std::array<std::string_view, kNumWords> kNames = {
    "UP", "DOWN", "LEFT", "RIGHT", "FORWARD", "BACKWARD", "GO", "STOP",
};
}  // namespace

std::string_view word_name(Word w) noexcept {
    return kNames[static_cast<std::size_t>(w)];
}

std::optional<Word> word_from_name(std::string_view name) noexcept {
    for (int c = 0; c < kNumWords; ++c) {
        if (kNames[static_cast<std::size_t>(c)] == name) {
            return static_cast<Word>(c);
        }
    }
    return std::nullopt;
}

std::optional<Word> word_from_code(int code) noexcept {
    if (code < 0 || code >= kNumWords) {
        return std::nullopt;
    }
    return static_cast<Word>(code);
}

}  // namespace emgspeech
