#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace emgspeech {

/// The eight command words of the vocabulary. Codes 0..7 are stable and
/// used everywhere a label is stored on disk.
enum class Word : std::uint8_t {
    Up = 0,
    Down = 1,
    Left = 2,
    Right = 3,
    Forward = 4,
    Backward = 5,
    Go = 6,
    Stop = 7,
};

inline constexpr int kNumWords = 8;

inline constexpr std::array<Word, kNumWords> kAllWords = {
    Word::Up,   Word::Down,    Word::Left, Word::Right,
    Word::Forward, Word::Backward, Word::Go,   Word::Stop,
};

constexpr int word_code(Word w) noexcept { return static_cast<int>(w); }

std::string_view word_name(Word w) noexcept;

/// Inverse of word_name; empty for unknown names.
std::optional<Word> word_from_name(std::string_view name) noexcept;

/// Inverse of word_code; empty for codes outside 0..7.
std::optional<Word> word_from_code(int code) noexcept;

}  // namespace emgspeech
