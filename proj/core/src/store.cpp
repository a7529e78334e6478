#include "emgspeech/store.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "emgspeech/errors.hpp"

namespace emgspeech {

void to_json(nlohmann::json& j, const AcquisitionConfig& c) {
    j = {{"sample_rate_hz", c.sample_rate_hz},
         {"gain", c.gain},
         {"vref_v", c.vref_v},
         {"n_channels_recorded", c.n_channels_recorded},
         {"active_channels", c.active_channels}};
}

void from_json(const nlohmann::json& j, AcquisitionConfig& c) {
    c = AcquisitionConfig{};
    if (j.contains("sample_rate_hz")) j.at("sample_rate_hz").get_to(c.sample_rate_hz);
    if (j.contains("gain")) j.at("gain").get_to(c.gain);
    if (j.contains("vref_v")) j.at("vref_v").get_to(c.vref_v);
    if (j.contains("n_channels_recorded")) {
        j.at("n_channels_recorded").get_to(c.n_channels_recorded);
    }
    if (j.contains("active_channels")) {
        j.at("active_channels").get_to(c.active_channels);
    }
}

void to_json(nlohmann::json& j, const ProtocolConfig& c) {
    j = {{"n_words", c.n_words},
         {"articulation_s", c.articulation_s},
         {"rest_s", c.rest_s},
         {"reps_per_batch", c.reps_per_batch},
         {"batches_per_session", c.batches_per_session},
         {"n_sessions", c.n_sessions}};
}

void from_json(const nlohmann::json& j, ProtocolConfig& c) {
    c = ProtocolConfig{};
    if (j.contains("n_words")) j.at("n_words").get_to(c.n_words);
    if (j.contains("articulation_s")) j.at("articulation_s").get_to(c.articulation_s);
    if (j.contains("rest_s")) j.at("rest_s").get_to(c.rest_s);
    if (j.contains("reps_per_batch")) j.at("reps_per_batch").get_to(c.reps_per_batch);
    if (j.contains("batches_per_session")) {
        j.at("batches_per_session").get_to(c.batches_per_session);
    }
    if (j.contains("n_sessions")) j.at("n_sessions").get_to(c.n_sessions);
}

void to_json(nlohmann::json& j, const PipelineConfig& c) {
    j = {{"hp_order", c.hp_order},
         {"hp_cutoff_hz", c.hp_cutoff_hz},
         {"notch_hz", c.notch_hz},
         {"notch_q", c.notch_q},
         {"analysis_s", c.analysis_s},
         {"window_s", c.window_s},
         {"n_windows", c.n_windows},
         {"wavelet", c.wavelet},
         {"dwt_level", c.dwt_level},
         {"band_edges_hz", c.band_edges_hz}};
}

void from_json(const nlohmann::json& j, PipelineConfig& c) {
    c = PipelineConfig{};
    if (j.contains("hp_order")) j.at("hp_order").get_to(c.hp_order);
    if (j.contains("hp_cutoff_hz")) j.at("hp_cutoff_hz").get_to(c.hp_cutoff_hz);
    if (j.contains("notch_hz")) j.at("notch_hz").get_to(c.notch_hz);
    if (j.contains("notch_q")) j.at("notch_q").get_to(c.notch_q);
    if (j.contains("analysis_s")) j.at("analysis_s").get_to(c.analysis_s);
    if (j.contains("window_s")) j.at("window_s").get_to(c.window_s);
    if (j.contains("n_windows")) j.at("n_windows").get_to(c.n_windows);
    if (j.contains("wavelet")) j.at("wavelet").get_to(c.wavelet);
    if (j.contains("dwt_level")) j.at("dwt_level").get_to(c.dwt_level);
    if (j.contains("band_edges_hz")) j.at("band_edges_hz").get_to(c.band_edges_hz);
}

void to_json(nlohmann::json& j, const PromptEvent& e) {
    j = {{"batch", e.batch_id},
         {"index", e.prompt_index},
         {"word", std::string(word_name(e.word))},
         {"onset_sample", e.onset_sample}};
}

void from_json(const nlohmann::json& j, PromptEvent& e) {
    e.batch_id = j.at("batch").get<std::string>();
    e.prompt_index = j.at("index").get<int>();
    const auto name = j.at("word").get<std::string>();
    const auto w = word_from_name(name);
    if (!w) {
        throw FormatError("unknown word \"" + name + "\" in schedule");
    }
    e.word = *w;
    e.onset_sample = j.at("onset_sample").get<std::size_t>();
}

}  // namespace emgspeech

namespace emgspeech::store {

namespace {

constexpr char kBatchMagic[4] = {'E', 'M', 'G', 'S'};

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
}

std::uint16_t get_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) {
        v = (v << 8) | p[i];
    }
    return v;
}

Condition parse_condition(const std::string& name) {
    const auto c = condition_from_name(name);
    if (!c) {
        throw FormatError("unknown condition \"" + name + "\"");
    }
    return *c;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace

void write_batch_file(const std::filesystem::path& path, const Recording& r) {
    std::string header;
    header.append(kBatchMagic, 4);
    put_u16(header, kBatchFormatVersion);
    put_u16(header, static_cast<std::uint16_t>(r.n_channels()));
    put_u64(header, r.n_samples());
    put_u64(header, std::bit_cast<std::uint64_t>(r.sample_rate_hz()));

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot create " + path.string());
    }
    out.write(header.data(), static_cast<std::streamsize>(header.size()));

    std::string body;
    body.reserve(r.raw().size() * 4);
    for (const float v : r.raw()) {
        const auto bits = std::bit_cast<std::uint32_t>(v);
        for (int i = 0; i < 4; ++i) {
            body.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
        }
    }
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) {
        throw IoError("short write to " + path.string());
    }
}

Recording read_batch_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    unsigned char header[24];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (in.gcount() != sizeof(header)) {
        throw FormatError(path.string() + ": truncated header");
    }
    if (std::memcmp(header, kBatchMagic, 4) != 0) {
        throw FormatError(path.string() + ": bad magic");
    }
    const std::uint16_t version = get_u16(header + 4);
    if (version != kBatchFormatVersion) {
        throw FormatError(path.string() + ": unsupported version " +
                          std::to_string(version));
    }
    const std::uint16_t n_channels = get_u16(header + 6);
    const std::uint64_t n_samples = get_u64(header + 8);
    const double rate = std::bit_cast<double>(get_u64(header + 16));

    Recording r(n_channels, n_samples, rate);
    const std::size_t n_bytes = r.raw().size() * 4;
    std::vector<unsigned char> body(n_bytes);
    in.read(reinterpret_cast<char*>(body.data()),
            static_cast<std::streamsize>(n_bytes));
    if (in.gcount() != static_cast<std::streamsize>(n_bytes)) {
        throw FormatError(path.string() + ": truncated sample data");
    }
    for (std::size_t i = 0; i < r.raw().size(); ++i) {
        const unsigned char* p = body.data() + 4 * i;
        const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                                   (static_cast<std::uint32_t>(p[1]) << 8) |
                                   (static_cast<std::uint32_t>(p[2]) << 16) |
                                   (static_cast<std::uint32_t>(p[3]) << 24);
        r.raw()[i] = std::bit_cast<float>(bits);
    }
    return r;
}

void save_dataset(const Dataset& d, const std::filesystem::path& root) {
    d.acquisition.validate();
    d.protocol.validate();
    const double fs = d.acquisition.sample_rate_hz;
    const auto stride = static_cast<std::size_t>(d.protocol.prompt_stride_samples(fs));
    const auto utt_len = static_cast<std::size_t>(d.protocol.utterance_samples(fs));

    std::map<std::string, std::map<std::string, std::vector<const Utterance*>>> sessions;
    for (const auto& u : d.utterances) {
        sessions[u.session_id][u.batch_id].push_back(&u);
    }

    std::error_code ec;
    std::filesystem::create_directories(root, ec);
    if (ec) {
        throw IoError("cannot create " + root.string() + ": " + ec.message());
    }

    for (auto& [session_id, batches] : sessions) {
        const auto dir = root / session_id;
        std::filesystem::create_directories(dir, ec);
        if (ec) {
            throw IoError("cannot create " + dir.string() + ": " + ec.message());
        }

        std::vector<PromptEvent> schedule;
        for (auto& [batch_id, utts] : batches) {
            std::sort(utts.begin(), utts.end(),
                      [](const Utterance* a, const Utterance* b) {
                          return a->prompt_index < b->prompt_index;
                      });
            int max_index = 0;
            for (const Utterance* u : utts) {
                max_index = std::max(max_index, u->prompt_index);
            }
            const std::size_t stream_len =
                (static_cast<std::size_t>(max_index) + 1) * stride;
            Recording stream(utts.front()->recording.n_channels(), stream_len, fs);
            for (const Utterance* u : utts) {
                if (u->recording.n_samples() != utt_len ||
                    u->recording.n_channels() != stream.n_channels()) {
                    throw InvalidConfig("utterance shape does not match protocol");
                }
                const std::size_t onset =
                    static_cast<std::size_t>(u->prompt_index) * stride;
                for (int c = 0; c < stream.n_channels(); ++c) {
                    std::memcpy(stream.channel(c).data() + onset,
                                u->recording.channel(c).data(),
                                utt_len * sizeof(float));
                }
                PromptEvent e;
                e.batch_id = u->batch_id;
                e.prompt_index = u->prompt_index;
                e.word = u->word;
                e.onset_sample = onset;
                schedule.push_back(e);
            }
            write_batch_file(dir / (batch_id + ".emgs"), stream);
        }

        nlohmann::ordered_json manifest;
        manifest["session_id"] = session_id;
        manifest["condition"] = std::string(condition_name(d.condition));
        manifest["acquisition"] = nlohmann::json(d.acquisition);
        manifest["protocol"] = nlohmann::json(d.protocol);
        manifest["schedule"] = nlohmann::json(schedule);
        std::ofstream out(dir / "manifest.json");
        if (!out) {
            throw IoError("cannot create " + (dir / "manifest.json").string());
        }
        out << manifest.dump(2) << "\n";
        if (!out) {
            throw IoError("short write to " + (dir / "manifest.json").string());
        }
    }
}

Dataset load_store(const std::filesystem::path& root) {
    if (!std::filesystem::is_directory(root)) {
        throw IoError("store directory " + root.string() + " does not exist");
    }
    std::vector<std::filesystem::path> session_dirs;
    for (const auto& entry : std::filesystem::directory_iterator(root)) {
        if (entry.is_directory() &&
            std::filesystem::exists(entry.path() / "manifest.json")) {
            session_dirs.push_back(entry.path());
        }
    }
    std::sort(session_dirs.begin(), session_dirs.end());
    if (session_dirs.empty()) {
        throw FormatError("no session directories under " + root.string());
    }

    Dataset d;
    bool first = true;
    for (const auto& dir : session_dirs) {
        const auto manifest = read_json_file(dir / "manifest.json");
        AcquisitionConfig acq = manifest.at("acquisition").get<AcquisitionConfig>();
        ProtocolConfig proto = manifest.at("protocol").get<ProtocolConfig>();
        const Condition condition =
            parse_condition(manifest.at("condition").get<std::string>());
        if (first) {
            d.acquisition = acq;
            d.protocol = proto;
            d.condition = condition;
            first = false;
        } else if (nlohmann::json(acq) != nlohmann::json(d.acquisition) ||
                   nlohmann::json(proto) != nlohmann::json(d.protocol) ||
                   condition != d.condition) {
            throw FormatError(dir.string() +
                              ": configs differ from the first session's");
        }
        const auto session_id = manifest.at("session_id").get<std::string>();
        const auto schedule =
            manifest.at("schedule").get<std::vector<PromptEvent>>();

        std::map<std::string, std::vector<PromptEvent>> by_batch;
        for (const auto& e : schedule) {
            by_batch[e.batch_id].push_back(e);
        }
        for (auto& [batch_id, events] : by_batch) {
            std::sort(events.begin(), events.end(),
                      [](const PromptEvent& a, const PromptEvent& b) {
                          return a.onset_sample < b.onset_sample;
                      });
            const Recording stream = read_batch_file(dir / (batch_id + ".emgs"));
            if (stream.sample_rate_hz() != acq.sample_rate_hz) {
                throw FormatError(batch_id + ": sample rate differs from manifest");
            }
            if (stream.n_channels() != acq.n_active()) {
                throw FormatError(batch_id + ": channel count differs from manifest");
            }
            auto utts = segment_utterances(stream, events, d.protocol, session_id);
            for (auto& u : utts) {
                d.utterances.push_back(std::move(u));
            }
        }
    }
    return d;
}

void write_feature_csv(const std::filesystem::path& path, const Dataset& d,
                       const std::vector<FeatureVector>& features) {
    if (features.size() != d.utterances.size()) {
        throw InvalidConfig("feature rows do not match utterance count");
    }
    std::ostringstream out;
    out.precision(17);
    out << "session_id,batch_id,word_code";
    const std::size_t dim = features.empty() ? 0 : features[0].values.size();
    for (std::size_t f = 0; f < dim; ++f) {
        char col[8];
        std::snprintf(col, sizeof(col), "f%04zu", f);
        out << ',' << col;
    }
    out << '\n';
    for (std::size_t i = 0; i < features.size(); ++i) {
        const auto& u = d.utterances[i];
        if (features[i].values.size() != dim) {
            throw InvalidConfig("feature rows have mixed lengths");
        }
        out << u.session_id << ',' << u.batch_id << ',' << word_code(u.word);
        for (const double v : features[i].values) {
            out << ',' << v;
        }
        out << '\n';
    }
    std::ofstream file(path);
    if (!file) {
        throw IoError("cannot create " + path.string());
    }
    file << out.str();
    if (!file) {
        throw IoError("short write to " + path.string());
    }
}

}  // namespace emgspeech::store
