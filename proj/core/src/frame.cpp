#include "emgspeech/frame.hpp"

#include <algorithm>
#include <cmath>

#include "emgspeech/errors.hpp"

namespace emgspeech::wire {

Frame parse_frame(std::span<const std::uint8_t> bytes, int n_channels) {
    const std::size_t want = frame_size(n_channels);
    if (bytes.size() < want) {
        throw ShortFrame(0, want, bytes.size());
    }
    if (bytes[0] != kFrameMagic) {
        throw BadMagic(0);
    }
    Frame f;
    f.seq = static_cast<std::uint16_t>(bytes[1] | (bytes[2] << 8));
    f.codes.resize(static_cast<std::size_t>(n_channels));
    for (int c = 0; c < n_channels; ++c) {
        const std::size_t o = 4 + 3 * static_cast<std::size_t>(c);
        std::uint32_t raw = (static_cast<std::uint32_t>(bytes[o]) << 16) |
                            (static_cast<std::uint32_t>(bytes[o + 1]) << 8) |
                            static_cast<std::uint32_t>(bytes[o + 2]);
        if (raw & 0x800000u) {
            raw |= 0xFF000000u;  // sign-extend bit 23
        }
        f.codes[static_cast<std::size_t>(c)] = static_cast<std::int32_t>(raw);
    }
    return f;
}

std::vector<std::uint8_t> emit_frame(const Frame& frame) {
    std::vector<std::uint8_t> out;
    out.reserve(frame_size(static_cast<int>(frame.codes.size())));
    out.push_back(kFrameMagic);
    out.push_back(static_cast<std::uint8_t>(frame.seq & 0xFF));
    out.push_back(static_cast<std::uint8_t>(frame.seq >> 8));
    out.push_back(0x00);  // reserved
    for (std::int32_t code : frame.codes) {
        const auto u = static_cast<std::uint32_t>(code);
        out.push_back(static_cast<std::uint8_t>((u >> 16) & 0xFF));
        out.push_back(static_cast<std::uint8_t>((u >> 8) & 0xFF));
        out.push_back(static_cast<std::uint8_t>(u & 0xFF));
    }
    return out;
}

double code_to_microvolts(std::int32_t code, const AcquisitionConfig& cfg) {
    const double volts_per_code =
        cfg.vref_v / (cfg.gain * static_cast<double>(kCodeMax));
    return static_cast<double>(code) * volts_per_code * 1e6;
}

std::int32_t microvolts_to_code(double uv, const AcquisitionConfig& cfg) {
    const double codes_per_uv =
        cfg.gain * static_cast<double>(kCodeMax) / (cfg.vref_v * 1e6);
    const double c = std::round(uv * codes_per_uv);
    if (c <= static_cast<double>(kCodeMin)) {
        return kCodeMin;
    }
    if (c >= static_cast<double>(kCodeMax)) {
        return kCodeMax;
    }
    return static_cast<std::int32_t>(c);
}

IngestResult ingest_packet_stream(std::span<const std::uint8_t> bytes,
                                  const AcquisitionConfig& cfg) {
    cfg.validate();
    const int nch = cfg.n_channels_recorded;
    const std::size_t fsize = frame_size(nch);

    // First pass: count output samples (frames plus gap fill).
    std::vector<Frame> frames;
    frames.reserve(bytes.size() / fsize);
    std::size_t offset = 0;
    while (offset < bytes.size()) {
        if (bytes.size() - offset < fsize) {
            throw ShortFrame(offset, fsize, bytes.size() - offset);
        }
        if (bytes[offset] != kFrameMagic) {
            throw BadMagic(offset);
        }
        frames.push_back(parse_frame(bytes.subspan(offset, fsize), nch));
        offset += fsize;
    }

    IngestResult result;
    if (frames.empty()) {
        result.recording = Recording(nch, 0, cfg.sample_rate_hz);
        return result;
    }

    std::size_t total = frames.size();
    std::vector<int> lost_before(frames.size(), 0);
    for (std::size_t i = 1; i < frames.size(); ++i) {
        const int lost = static_cast<int>(
            static_cast<std::uint16_t>(frames[i].seq - frames[i - 1].seq - 1));
        lost_before[i] = lost;
        total += static_cast<std::size_t>(lost);
    }

    Recording rec(nch, total, cfg.sample_rate_hz);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (lost_before[i] > 0) {
            result.gaps.push_back(
                {frames[i - 1].seq, pos, lost_before[i]});
            // last-value hold across the gap
            for (int c = 0; c < nch; ++c) {
                const float held = rec.at(c, pos - 1);
                for (int k = 0; k < lost_before[i]; ++k) {
                    rec.at(c, pos + static_cast<std::size_t>(k)) = held;
                }
            }
            pos += static_cast<std::size_t>(lost_before[i]);
        }
        for (int c = 0; c < nch; ++c) {
            rec.at(c, pos) = static_cast<float>(code_to_microvolts(
                frames[i].codes[static_cast<std::size_t>(c)], cfg));
        }
        ++pos;
    }
    result.recording = std::move(rec);
    return result;
}

std::vector<std::uint8_t> emit_packet_stream(const Recording& recording,
                                             const AcquisitionConfig& cfg,
                                             std::uint16_t seq0) {
    const int nch = recording.n_channels();
    std::vector<std::uint8_t> out;
    out.reserve(recording.n_samples() * frame_size(nch));
    Frame f;
    f.codes.resize(static_cast<std::size_t>(nch));
    for (std::size_t i = 0; i < recording.n_samples(); ++i) {
        f.seq = static_cast<std::uint16_t>(seq0 + i);
        for (int c = 0; c < nch; ++c) {
            f.codes[static_cast<std::size_t>(c)] =
                microvolts_to_code(recording.at(c, i), cfg);
        }
        const auto bytes = emit_frame(f);
        out.insert(out.end(), bytes.begin(), bytes.end());
    }
    return out;
}

}  // namespace emgspeech::wire
