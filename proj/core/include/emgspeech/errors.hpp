#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace emgspeech {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidConfig : Error {
    using Error::Error;
};

// -- wire / ingest ------------------------------------------------------

/// Frame boundary did not start with the expected magic byte.
struct BadMagic : Error {
    std::size_t byte_offset;
    explicit BadMagic(std::size_t offset)
        : Error("bad frame magic at byte offset " + std::to_string(offset)),
          byte_offset(offset) {}
};

/// Input ended in the middle of a frame.
struct ShortFrame : Error {
    std::size_t byte_offset;
    ShortFrame(std::size_t offset, std::size_t want, std::size_t have)
        : Error("truncated frame at byte offset " + std::to_string(offset) +
                ": need " + std::to_string(want) + " bytes, have " +
                std::to_string(have)),
          byte_offset(offset) {}
};

/// A prompt event whose utterance extends past the end of the stream.
struct OutOfBounds : Error {
    using Error::Error;
};

// -- dsp ----------------------------------------------------------------

struct InvalidCutoff : InvalidConfig {
    using InvalidConfig::InvalidConfig;
};

struct InvalidCenter : InvalidConfig {
    using InvalidConfig::InvalidConfig;
};

/// Signal too short for the requested operation.
struct TooShort : Error {
    using Error::Error;
};

struct LengthMismatch : Error {
    using Error::Error;
};

// -- learn --------------------------------------------------------------

struct EmptyTrainingSet : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct MissingBatch : Error {
    using Error::Error;
};

struct TooFewPerLabel : Error {
    using Error::Error;
};

struct WrongSessionCount : Error {
    using Error::Error;
};

// -- io -----------------------------------------------------------------

struct IoError : Error {
    using Error::Error;
};

struct FormatError : Error {
    using Error::Error;
};

}  // namespace emgspeech
