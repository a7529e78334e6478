#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "emgspeech/config.hpp"
#include "emgspeech/recording.hpp"

namespace emgspeech::wire {

inline constexpr std::uint8_t kFrameMagic = 0xA5;
inline constexpr std::int32_t kCodeMax = 8388607;   //  2^23 - 1
inline constexpr std::int32_t kCodeMin = -8388608;  // -2^23

/// One acquisition packet: a u16 sequence counter and one signed 24-bit
/// sample code per recorded channel.
struct Frame {
    std::uint16_t seq = 0;
    std::vector<std::int32_t> codes;
};

/// Wire size of a frame: magic, seq (LE), reserved byte, 3 bytes/channel.
constexpr std::size_t frame_size(int n_channels) {
    return 4 + 3 * static_cast<std::size_t>(n_channels);
}

/// Decodes one frame. Channel samples are big-endian two's complement with
/// bit 23 sign-extended. Throws BadMagic / ShortFrame.
Frame parse_frame(std::span<const std::uint8_t> bytes, int n_channels);

/// Encodes a frame in the exact layout parse_frame expects.
/// Codes must lie in [kCodeMin, kCodeMax].
std::vector<std::uint8_t> emit_frame(const Frame& frame);

/// Linear code -> microvolt conversion. Full scale (vref / gain) maps to
/// the maximum positive code, so code kCodeMax is exactly +vref/gain.
double code_to_microvolts(std::int32_t code, const AcquisitionConfig& cfg);

/// Nearest-code inverse of code_to_microvolts, clamped to the code range.
std::int32_t microvolts_to_code(double uv, const AcquisitionConfig& cfg);

/// One sequence-counter discontinuity found while parsing a packet stream.
struct Gap {
    std::uint16_t after_seq = 0;     // last good counter before the gap
    std::size_t at_sample = 0;       // stream index of the first lost sample
    int frames_lost = 0;
};

struct IngestResult {
    Recording recording;        // recorded channels, microvolts
    std::vector<Gap> gaps;      // one entry per counter discontinuity
};

/// Parses a concatenation of frames into a continuous Recording over all
/// recorded channels. Lost frames (counter jumps, mod 2^16) are filled by
/// repeating the previous sample per channel and reported in gaps. Throws
/// BadMagic with the byte offset when a frame boundary is corrupt and
/// ShortFrame when the input ends mid-frame.
IngestResult ingest_packet_stream(std::span<const std::uint8_t> bytes,
                                  const AcquisitionConfig& cfg);

/// Serializes a recording of code-lattice microvolt values into the packet
/// format, with sequence counters starting at seq0.
std::vector<std::uint8_t> emit_packet_stream(const Recording& recording,
                                             const AcquisitionConfig& cfg,
                                             std::uint16_t seq0 = 0);

}  // namespace emgspeech::wire
