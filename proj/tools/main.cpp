// emgspeech: simulate, ingest, featurize, evaluate and report on
// synthetic silent-speech EMG sessions. Every subcommand that writes
// artifacts drops a run_manifest.json next to them with the resolved
// configuration, seeds, paths and checksums needed to reproduce the run.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "emgspeech/biquad.hpp"
#include "emgspeech/config.hpp"
#include "emgspeech/errors.hpp"
#include "emgspeech/evaluate.hpp"
#include "emgspeech/features.hpp"
#include "emgspeech/frame.hpp"
#include "emgspeech/parallel.hpp"
#include "emgspeech/recording.hpp"
#include "emgspeech/segment.hpp"
#include "emgspeech/store.hpp"
#include "emgspeech/synth.hpp"
#include "emgspeech/validate.hpp"
#include "emgspeech/words.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct CommonOpts {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 1;
    std::string out_dir;
};

struct FileConfig {
    emgspeech::AcquisitionConfig acquisition;
    emgspeech::ProtocolConfig protocol;
    emgspeech::PipelineConfig pipeline;
    emgspeech::synth::SynthConfig synth;
};

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw emgspeech::IoError("cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw emgspeech::FormatError(path.string() + ": " + e.what());
    }
}

FileConfig load_config(const std::string& path) {
    FileConfig c;
    if (path.empty()) {
        return c;
    }
    const json j = read_json_file(path);
    if (j.contains("acquisition")) j.at("acquisition").get_to(c.acquisition);
    if (j.contains("protocol")) j.at("protocol").get_to(c.protocol);
    if (j.contains("pipeline")) j.at("pipeline").get_to(c.pipeline);
    if (j.contains("synth")) j.at("synth").get_to(c.synth);
    return c;
}

std::uint64_t fnv1a64(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw emgspeech::IoError("cannot open " + path.string());
    }
    std::uint64_t h = 0xCBF29CE484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const auto got = static_cast<std::size_t>(in.gcount());
        for (std::size_t i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x00000100000001B3ULL;
        }
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(v));
    return buf;
}

/// Checksums of every regular file under the output directory,
/// keyed by path relative to it, in sorted order.
ordered_json checksum_tree(const fs::path& root) {
    std::map<std::string, std::string> sums;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        if (entry.path().filename() == "run_manifest.json") {
            continue;
        }
        sums[fs::relative(entry.path(), root).generic_string()] =
            hex64(fnv1a64(entry.path()));
    }
    ordered_json j = ordered_json::object();
    for (const auto& [k, v] : sums) {
        j[k] = v;
    }
    return j;
}

class ManifestWriter {
public:
    ManifestWriter(std::string command, std::vector<std::string> argv)
        : start_(std::chrono::steady_clock::now()) {
        doc_["command"] = std::move(command);
        doc_["argv"] = std::move(argv);
    }

    ordered_json& doc() { return doc_; }

    void write(const fs::path& out_dir) {
        doc_["checksums"] = checksum_tree(out_dir);
        const auto elapsed = std::chrono::duration<double>(
            std::chrono::steady_clock::now() - start_);
        doc_["duration_seconds"] = elapsed.count();
        std::ofstream out(out_dir / "run_manifest.json");
        if (!out) {
            throw emgspeech::IoError("cannot write " +
                                     (out_dir / "run_manifest.json").string());
        }
        out << doc_.dump(2) << "\n";
    }

private:
    ordered_json doc_;
    std::chrono::steady_clock::time_point start_;
};

fs::path ensure_out_dir(const std::string& out) {
    const fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw emgspeech::IoError("cannot create output directory " + out);
    }
    return dir;
}

std::vector<std::string> collect_argv(int argc, char** argv) {
    return {argv, argv + argc};
}

/// Re-expands a 14-channel active stream back onto the 16 recorded
/// channels (zeros on the inactive ones) so the packet emitter produces
/// a capture the ingest path can parse.
emgspeech::Recording to_recorded_layout(const emgspeech::Recording& active,
                                        const emgspeech::AcquisitionConfig& acq) {
    emgspeech::Recording full(acq.n_channels_recorded, active.n_samples(),
                              active.sample_rate_hz());
    for (int i = 0; i < acq.n_active(); ++i) {
        const auto src = active.channel(i);
        auto dst = full.channel(acq.active_channels[static_cast<std::size_t>(i)]);
        std::copy(src.begin(), src.end(), dst.begin());
    }
    return full;
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw emgspeech::IoError("cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

/// Emits each session of the freshly written store as one continuous
/// raw packet capture plus the matching schedule file with stream-global
/// onsets, under <out>/captures/.
void emit_captures(const emgspeech::Dataset& d, const fs::path& out_dir) {
    const auto cap_root = out_dir / "captures";
    fs::create_directories(cap_root);
    const int stride = d.protocol.prompt_stride_samples(d.acquisition.sample_rate_hz);

    std::map<std::string, std::map<std::string, std::vector<const emgspeech::Utterance*>>>
        sessions;
    for (const auto& u : d.utterances) {
        sessions[u.session_id][u.batch_id].push_back(&u);
    }
    for (const auto& [session_id, batches] : sessions) {
        std::vector<std::uint8_t> capture;
        ordered_json schedule = ordered_json::array();
        std::size_t base = 0;
        std::uint16_t seq = 0;
        for (const auto& [batch_id, utts] : batches) {
            int max_index = 0;
            for (const auto* u : utts) {
                max_index = std::max(max_index, u->prompt_index);
            }
            const auto len =
                static_cast<std::size_t>(max_index + 1) * static_cast<std::size_t>(stride);
            emgspeech::Recording stream(d.acquisition.n_active(), len,
                                        d.acquisition.sample_rate_hz);
            for (const auto* u : utts) {
                const auto onset =
                    static_cast<std::size_t>(u->prompt_index) *
                    static_cast<std::size_t>(stride);
                for (int c = 0; c < stream.n_channels(); ++c) {
                    const auto src = u->recording.channel(c);
                    std::copy(src.begin(), src.end(),
                              stream.channel(c).begin() + static_cast<std::ptrdiff_t>(onset));
                }
                ordered_json ev;
                ev["batch"] = batch_id;
                ev["index"] = u->prompt_index;
                ev["word"] = std::string(emgspeech::word_name(u->word));
                ev["onset_sample"] = base + onset;
                schedule.push_back(std::move(ev));
            }
            const auto bytes = emgspeech::wire::emit_packet_stream(
                to_recorded_layout(stream, d.acquisition), d.acquisition, seq);
            capture.insert(capture.end(), bytes.begin(), bytes.end());
            seq = static_cast<std::uint16_t>(seq + len);
            base += len;
        }
        write_bytes(cap_root / (session_id + ".cap"), capture);

        ordered_json sched_doc;
        sched_doc["session_id"] = session_id;
        sched_doc["condition"] = std::string(emgspeech::condition_name(d.condition));
        sched_doc["acquisition"] = json(d.acquisition);
        sched_doc["protocol"] = json(d.protocol);
        sched_doc["schedule"] = std::move(schedule);
        std::ofstream out(cap_root / (session_id + ".schedule.json"));
        if (!out) {
            throw emgspeech::IoError("cannot write schedule for " + session_id);
        }
        out << sched_doc.dump(2) << "\n";
    }
}

int cmd_simulate(const CommonOpts& opts, bool emit_capture,
                 const std::vector<std::string>& argv) {
    FileConfig cfg = load_config(opts.config_path);
    if (opts.seed_given) {
        cfg.synth.seed = opts.seed;
    }
    const auto out_dir = ensure_out_dir(opts.out_dir);
    ManifestWriter manifest("simulate", argv);
    manifest.doc()["config"] = {{"acquisition", json(cfg.acquisition)},
                                {"protocol", json(cfg.protocol)},
                                {"synth", json(cfg.synth)}};
    manifest.doc()["seed"] = cfg.synth.seed;
    manifest.doc()["threads"] = opts.threads;
    manifest.doc()["inputs"] =
        opts.config_path.empty()
            ? ordered_json::object()
            : ordered_json{{"config", opts.config_path}};
    manifest.doc()["outputs"] = {{"store", out_dir.generic_string()}};

    const auto d = emgspeech::synth::generate_dataset(cfg.protocol, cfg.acquisition,
                                                      cfg.synth, opts.threads);
    const auto violations = emgspeech::validate_dataset(d);
    if (!violations.empty()) {
        throw emgspeech::InvalidConfig("generated dataset failed validation: " +
                                       violations.front().rule);
    }
    emgspeech::store::save_dataset(d, out_dir);
    if (emit_capture) {
        emit_captures(d, out_dir);
    }
    manifest.write(out_dir);

    std::cout << "wrote " << d.utterances.size() << " utterances ("
              << cfg.protocol.n_sessions << " sessions x "
              << cfg.protocol.batches_per_session << " batches x "
              << cfg.protocol.utterances_per_batch() << " prompts) to "
              << out_dir.generic_string() << "\n";
    return 0;
}

int cmd_ingest(const std::string& capture_path, const std::string& schedule_path,
               const CommonOpts& opts, const std::vector<std::string>& argv) {
    const json sched_doc = read_json_file(schedule_path);
    emgspeech::AcquisitionConfig acq =
        sched_doc.at("acquisition").get<emgspeech::AcquisitionConfig>();
    emgspeech::ProtocolConfig proto =
        sched_doc.at("protocol").get<emgspeech::ProtocolConfig>();
    const auto cond_name = sched_doc.at("condition").get<std::string>();
    const auto condition = emgspeech::condition_from_name(cond_name);
    if (!condition) {
        throw emgspeech::FormatError("unknown condition \"" + cond_name + "\"");
    }
    const auto session_id = sched_doc.at("session_id").get<std::string>();
    auto schedule =
        sched_doc.at("schedule").get<std::vector<emgspeech::PromptEvent>>();

    std::ifstream in(capture_path, std::ios::binary);
    if (!in) {
        throw emgspeech::IoError("cannot open " + capture_path);
    }
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>()};

    const auto out_dir = ensure_out_dir(opts.out_dir);
    ManifestWriter manifest("ingest", argv);
    manifest.doc()["config"] = {{"acquisition", json(acq)}, {"protocol", json(proto)}};
    manifest.doc()["inputs"] = {{"capture", capture_path},
                                {"schedule", schedule_path}};
    manifest.doc()["outputs"] = {{"store", out_dir.generic_string()}};

    const auto ingested = emgspeech::wire::ingest_packet_stream(bytes, acq);
    std::cout << "parsed " << ingested.recording.n_samples() << " samples, "
              << ingested.gaps.size() << " gap(s)\n";
    for (const auto& g : ingested.gaps) {
        std::cout << "  gap after seq " << g.after_seq << ": " << g.frames_lost
                  << " frame(s) lost at sample " << g.at_sample
                  << ", filled by repeating the previous value\n";
    }
    manifest.doc()["gaps"] = ingested.gaps.size();

    emgspeech::Dataset d;
    d.condition = *condition;
    d.acquisition = acq;
    d.protocol = proto;
    if (schedule.empty()) {
        std::cout << "warning: empty schedule, writing an empty store\n";
    } else {
        emgspeech::validate_schedule(schedule, proto, acq.sample_rate_hz);
        const auto active = ingested.recording.select_channels(acq.active_channels);
        d.utterances = emgspeech::segment_utterances(active, schedule, proto, session_id);
        emgspeech::store::save_dataset(d, out_dir);
    }
    manifest.write(out_dir);
    std::cout << "wrote " << d.utterances.size() << " utterances to "
              << out_dir.generic_string() << "\n";
    return 0;
}

int cmd_featurize(const std::string& store_path, const CommonOpts& opts,
                  const std::vector<std::string>& argv) {
    FileConfig cfg = load_config(opts.config_path);
    const auto out_dir = ensure_out_dir(opts.out_dir);
    ManifestWriter manifest("featurize", argv);

    const auto d = emgspeech::store::load_store(store_path);
    cfg.pipeline.validate(d.acquisition.sample_rate_hz);
    manifest.doc()["config"] = {{"pipeline", json(cfg.pipeline)}};
    manifest.doc()["threads"] = opts.threads;
    manifest.doc()["inputs"] = {{"store", store_path}};
    manifest.doc()["outputs"] = {
        {"features", (out_dir / "features.csv").generic_string()}};

    const emgspeech::dsp::Preprocessor pre(cfg.pipeline,
                                           d.acquisition.sample_rate_hz);
    std::vector<emgspeech::FeatureVector> features(d.utterances.size());
    emgspeech::parallel_for(d.utterances.size(), opts.threads, [&](std::size_t i) {
        emgspeech::Utterance u = d.utterances[i];
        u.recording = pre.run(u.recording);
        features[i] = emgspeech::features::featurize_utterance(u, cfg.pipeline);
    });
    emgspeech::store::write_feature_csv(out_dir / "features.csv", d, features);
    manifest.write(out_dir);

    std::cout << "wrote " << features.size() << " feature rows of length "
              << (features.empty() ? 0 : features.front().values.size()) << " to "
              << (out_dir / "features.csv").generic_string() << "\n";
    return 0;
}

void print_report_summary(const emgspeech::learn::EvalReport& r) {
    std::cout << "scheme " << emgspeech::learn::scheme_name(r.scheme) << ", "
              << r.folds.size() << " folds\n";
    char line[128];
    std::snprintf(line, sizeof(line), "overall accuracy %.3f +/- %.3f\n",
                  r.overall.mean, r.overall.std);
    std::cout << line;
    for (int w = 0; w < emgspeech::kNumWords; ++w) {
        std::snprintf(line, sizeof(line), "  %-8s %.3f +/- %.3f\n",
                      std::string(emgspeech::word_name(
                          emgspeech::kAllWords[static_cast<std::size_t>(w)]))
                          .c_str(),
                      r.per_label[static_cast<std::size_t>(w)].mean,
                      r.per_label[static_cast<std::size_t>(w)].std);
        std::cout << line;
    }
    std::cout << "chance = 0.125\n";
}

int cmd_evaluate(const std::string& store_path, const std::string& scheme_flag,
                 const CommonOpts& opts, const std::vector<std::string>& argv) {
    const auto scheme = emgspeech::learn::scheme_from_name(scheme_flag);
    if (!scheme) {
        throw emgspeech::InvalidConfig("unknown scheme \"" + scheme_flag +
                                       "\" (session|global|loso)");
    }
    FileConfig cfg = load_config(opts.config_path);
    emgspeech::learn::ForestParams params;
    if (opts.seed_given) {
        params.seed = opts.seed;
    }
    const auto out_dir = ensure_out_dir(opts.out_dir);
    ManifestWriter manifest("evaluate", argv);

    const auto d = emgspeech::store::load_store(store_path);
    cfg.pipeline.validate(d.acquisition.sample_rate_hz);
    manifest.doc()["config"] = {{"pipeline", json(cfg.pipeline)}};
    manifest.doc()["scheme"] = std::string(emgspeech::learn::scheme_name(*scheme));
    manifest.doc()["seed"] = params.seed;
    manifest.doc()["threads"] = opts.threads;
    manifest.doc()["inputs"] = {{"store", store_path}};
    manifest.doc()["outputs"] = {
        {"report_json", (out_dir / "report.json").generic_string()},
        {"report_csv", (out_dir / "report.csv").generic_string()}};

    const auto report =
        emgspeech::learn::evaluate(d, *scheme, params, cfg.pipeline, opts.threads);
    {
        std::ofstream out(out_dir / "report.json");
        if (!out) {
            throw emgspeech::IoError("cannot write report.json");
        }
        out << emgspeech::learn::report_to_json(report);
    }
    {
        std::ofstream out(out_dir / "report.csv");
        if (!out) {
            throw emgspeech::IoError("cannot write report.csv");
        }
        out << emgspeech::learn::report_to_csv(report);
    }
    manifest.write(out_dir);
    print_report_summary(report);
    return 0;
}

int cmd_report(const std::string& report_path) {
    const json j = read_json_file(report_path);
    std::cout << "scheme " << j.at("scheme").get<std::string>() << ", "
              << j.at("n_folds").get<int>() << " folds\n";
    char line[128];
    std::snprintf(line, sizeof(line), "overall accuracy %.3f +/- %.3f\n",
                  j.at("overall").at("mean").get<double>(),
                  j.at("overall").at("std").get<double>());
    std::cout << line;
    for (const auto& [name, stats] : j.at("per_label").items()) {
        std::snprintf(line, sizeof(line), "  %-8s %.3f +/- %.3f\n", name.c_str(),
                      stats.at("mean").get<double>(),
                      stats.at("std").get<double>());
        std::cout << line;
    }
    std::cout << "chance = 0.125\n";
    if (j.contains("reference_points")) {
        std::cout << "reference points (fixed annotations):\n";
        for (const auto& [name, value] : j.at("reference_points").items()) {
            std::cout << "  " << name << " = " << value.dump() << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Silent-speech EMG pipeline: synthetic sessions, packet ingest, "
                 "feature extraction and Random Forest evaluation"};
    app.require_subcommand(1);
    const auto all_args = collect_argv(argc, argv);

    CommonOpts opts;
    bool emit_capture = false;
    std::string capture_path, schedule_path, store_path, report_path;
    std::string scheme_flag = "global";

    auto add_common = [&](CLI::App* cmd, bool with_seed, bool with_threads) {
        cmd->add_option("--config", opts.config_path,
                        "JSON config file (acquisition/protocol/pipeline/synth)");
        if (with_seed) {
            cmd->add_option("--seed", opts.seed, "base random seed")
                ->each([&](const std::string&) { opts.seed_given = true; });
        }
        if (with_threads) {
            cmd->add_option("--threads", opts.threads, "worker thread count")
                ->check(CLI::PositiveNumber);
        }
        cmd->add_option("--out", opts.out_dir, "output directory")->required();
    };

    auto* simulate = app.add_subcommand("simulate", "generate a synthetic session store");
    add_common(simulate, true, true);
    simulate->add_flag("--emit-capture", emit_capture,
                       "also write raw packet captures and schedules");

    auto* ingest = app.add_subcommand("ingest", "parse a raw packet capture into a store");
    ingest->add_option("--capture", capture_path, "raw packet capture file")->required();
    ingest->add_option("--schedule", schedule_path, "schedule JSON file")->required();
    add_common(ingest, false, false);

    auto* featurize = app.add_subcommand("featurize", "extract feature rows from a store");
    featurize->add_option("--store", store_path, "session store directory")->required();
    add_common(featurize, false, true);

    auto* evaluate = app.add_subcommand("evaluate", "cross-validated forest evaluation");
    evaluate->add_option("--store", store_path, "session store directory")->required();
    evaluate->add_option("--scheme", scheme_flag, "session | global | loso");
    add_common(evaluate, true, true);

    auto* report = app.add_subcommand("report", "print a saved report.json");
    report->add_option("report", report_path, "path to report.json")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            return cmd_simulate(opts, emit_capture, all_args);
        }
        if (ingest->parsed()) {
            return cmd_ingest(capture_path, schedule_path, opts, all_args);
        }
        if (featurize->parsed()) {
            return cmd_featurize(store_path, opts, all_args);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(store_path, scheme_flag, opts, all_args);
        }
        if (report->parsed()) {
            return cmd_report(report_path);
        }
    } catch (const emgspeech::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
