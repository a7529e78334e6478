#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <set>
#include <vector>

#include "emgspeech/config.hpp"
#include "emgspeech/errors.hpp"
#include "emgspeech/parallel.hpp"
#include "emgspeech/rng.hpp"
#include "emgspeech/words.hpp"

using namespace emgspeech;

TEST_CASE("word codes and names round-trip") {
    CHECK(kNumWords == 8);
    const char* names[] = {"UP",       "DOWN", "LEFT", "RIGHT",
                           "FORWARD", "BACKWARD", "GO", "STOP"};
    for (int c = 0; c < kNumWords; ++c) {
        const auto w = word_from_code(c);
        REQUIRE(w.has_value());
        CHECK(word_code(*w) == c);
        CHECK(word_name(*w) == names[c]);
        const auto back = word_from_name(names[c]);
        REQUIRE(back.has_value());
        CHECK(*back == *w);
    }
    CHECK_FALSE(word_from_code(8).has_value());
    CHECK_FALSE(word_from_code(-1).has_value());
    CHECK_FALSE(word_from_name("SIDEWAYS").has_value());
}

TEST_CASE("acquisition config defaults and validation") {
    AcquisitionConfig acq;
    CHECK(acq.sample_rate_hz == 500.0);
    CHECK(acq.gain == 12.0);
    CHECK(acq.vref_v == 2.4);
    CHECK(acq.n_channels_recorded == 16);
    CHECK(acq.n_active() == 14);
    for (int i = 0; i < 14; ++i) {
        CHECK(acq.active_channels[static_cast<std::size_t>(i)] == i);
    }
    CHECK_NOTHROW(acq.validate());

    AcquisitionConfig bad = acq;
    bad.sample_rate_hz = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidConfig);

    bad = acq;
    bad.active_channels = {0, 0};
    CHECK_THROWS_AS(bad.validate(), InvalidConfig);

    bad = acq;
    bad.active_channels = {16};
    CHECK_THROWS_AS(bad.validate(), InvalidConfig);
}

TEST_CASE("protocol config counts") {
    ProtocolConfig proto;
    CHECK(proto.utterances_per_batch() == 160);
    CHECK(proto.utterances_per_session() == 1120);
    CHECK(proto.utterances_total() == 3360);
    CHECK(proto.utterance_samples(500.0) == 2000);
    CHECK(proto.prompt_stride_samples(500.0) == 2500);
    CHECK_NOTHROW(proto.validate());

    ProtocolConfig bad = proto;
    bad.n_words = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidConfig);
}

TEST_CASE("pipeline config window arithmetic") {
    PipelineConfig cfg;
    CHECK(cfg.analysis_samples(500.0) == 700);
    CHECK(cfg.window_samples(500.0) == 100);
    CHECK_NOTHROW(cfg.validate(500.0));

    PipelineConfig bad = cfg;
    bad.band_edges_hz = {20.0, 300.0};
    CHECK_THROWS_AS(bad.validate(500.0), InvalidConfig);

    bad = cfg;
    bad.n_windows = 0;
    CHECK_THROWS_AS(bad.validate(500.0), InvalidConfig);

    bad = cfg;
    bad.window_s = 0.3;  // 1.4 s does not hold 7 x 0.3 s
    CHECK_THROWS_AS(bad.validate(500.0), InvalidConfig);
}

TEST_CASE("derive_seed decorrelates streams") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t a = 0; a < 10; ++a) {
        for (std::uint64_t b = 0; b < 10; ++b) {
            seen.insert(derive_seed(42, a, b));
        }
    }
    CHECK(seen.size() == 100);
    CHECK(derive_seed(42, 1, 2) != derive_seed(42, 2, 1));
    CHECK(derive_seed(42, 1) == derive_seed(42, 1, 0, 0));
}

TEST_CASE("rng is deterministic and well ranged") {
    Rng a(7);
    Rng b(7);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    Rng r(11);
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const double v = r.uniform(-2.0, 3.0);
        CHECK(v >= -2.0);
        CHECK(v < 3.0);
        CHECK(r.below(17) < 17);
    }
}

TEST_CASE("rng normal has roughly standard moments") {
    Rng r(3);
    const int n = 200000;
    double sum = 0.0;
    double sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = r.normal();
        sum += v;
        sumsq += v * v;
    }
    const double m = sum / n;
    const double var = sumsq / n - m * m;
    CHECK(std::fabs(m) < 0.02);
    CHECK(std::fabs(var - 1.0) < 0.03);
}

TEST_CASE("rng shuffle produces a permutation, deterministically") {
    std::vector<int> v(100);
    for (int i = 0; i < 100; ++i) {
        v[static_cast<std::size_t>(i)] = i;
    }
    auto w = v;
    Rng r1(5);
    Rng r2(5);
    r1.shuffle(v);
    r2.shuffle(w);
    CHECK(v == w);
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 100; ++i) {
        CHECK(sorted[static_cast<std::size_t>(i)] == i);
    }
}

TEST_CASE("parallel_for covers every index once for any thread count") {
    for (int threads : {1, 2, 5}) {
        std::vector<std::atomic<int>> hits(257);
        parallel_for(hits.size(), threads, [&](std::size_t i) {
            hits[i].fetch_add(1);
        });
        for (const auto& h : hits) {
            CHECK(h.load() == 1);
        }
    }
}

TEST_CASE("parallel_for propagates exceptions") {
    CHECK_THROWS_AS(parallel_for(100, 4,
                                 [](std::size_t i) {
                                     if (i == 57) {
                                         throw InvalidConfig("boom");
                                     }
                                 }),
                    InvalidConfig);
}
