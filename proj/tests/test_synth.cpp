#include <doctest.h>

#include <set>

#include "bidlab/error.hpp"
#include "bidlab/io.hpp"
#include "bidlab/pipeline.hpp"
#include "bidlab/synth.hpp"
#include "support.hpp"

using namespace bidlab;

TEST_CASE("rng helpers stay in range") {
    SplitRng rng(5);
    std::vector<int> seen(7, 0);
    for (int i = 0; i < 7000; ++i) {
        const double u = rng.uniform();
        CHECK((u >= 0.0 && u < 1.0));
        ++seen[rng.below(7)];
    }
    for (int c : seen) CHECK(c > 800);
    std::vector<int> v{1, 2, 3, 4, 5, 6};
    rng.shuffle(v);
    CHECK(std::multiset<int>(v.begin(), v.end()) == std::multiset<int>{1, 2, 3, 4, 5, 6});
}

TEST_CASE("generated bids have the configured shape and codes") {
    SynthConfig cfg;
    const auto conf = generate(cfg);
    CHECK(conf.bids.n_submissions() == cfg.n_submissions);
    CHECK(conf.bids.n_referees() == cfg.n_referees);
    for (auto c : conf.bids.cells()) CHECK(c <= 4);
    CHECK(conf.truth.fatigue_referees.size() == cfg.n_fatigue_referees);
    CHECK(conf.corpus.size() == cfg.n_submissions);
    CHECK(conf.truth.narrowest_topic == 0);

    const std::set<std::string> fatigue(conf.truth.fatigue_referees.begin(), conf.truth.fatigue_referees.end());
    for (std::size_t r = 0; r < conf.bids.n_referees(); ++r) {
        if (!fatigue.contains(conf.bids.referees()[r])) continue;
        for (auto c : conf.bids.referee_column(r)) CHECK(c != 3);
    }
    // Fatigue referees are detected after the transform.
    const auto filtered = filter_bids(transform_bids(conf.bids), {}).matrix;
    const auto detected = fatigue_referees(filtered);
    CHECK(std::set<std::string>(detected.begin(), detected.end()) == fatigue);
}

TEST_CASE("seeds determine the conference") {
    SynthConfig cfg;
    CHECK(same_seed_reproducibility(cfg));
    const auto a = generate(cfg);
    for (std::uint64_t seed = 1000; seed < 1100; ++seed) {
        SynthConfig other = cfg;
        other.seed = seed;
        CHECK_FALSE(generate(other).bids == a.bids);
    }
    SynthConfig small = cfg;
    small.n_submissions = 30;
    small.n_referees = 25;
    small.n_fatigue_referees = 3;
    const auto s = generate(small);
    CHECK(s.bids.n_submissions() == 30);
    CHECK(s.bids.n_referees() == 25);
}

TEST_CASE("same-topic submissions are more similar than cross-topic ones") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        SynthConfig cfg;
        cfg.seed = seed;
        const auto conf = generate(cfg);
        const auto bids = filter_bids(transform_bids(conf.bids), {}).matrix;
        const auto sim = submission_similarity(bids).matrix;
        double same = 0, cross = 0;
        std::size_t n_same = 0, n_cross = 0;
        for (std::size_t i = 0; i < sim.size(); ++i)
            for (std::size_t j = i + 1; j < sim.size(); ++j) {
                const bool together = conf.truth.submission_topic.at(sim.labels()[i]) ==
                                      conf.truth.submission_topic.at(sim.labels()[j]);
                (together ? same : cross) += sim(i, j);
                ++(together ? n_same : n_cross);
            }
        CHECK(same / static_cast<double>(n_same) > cross / static_cast<double>(n_cross));
    }
}

TEST_CASE("all-wildcard conferences are rejected by the filter") {
    SynthConfig cfg;
    cfg.p_wildcard = 1.0;
    const auto conf = generate(cfg);
    CHECK_THROWS_AS(filter_bids(transform_bids(conf.bids), {}), Error);
}

TEST_CASE("config validation and json round trip") {
    SynthConfig cfg;
    cfg.seed = 9;
    cfg.p_wildcard = 0.35;
    const auto back = parse_synth_config(synth_config_json(cfg));
    CHECK(synth_config_json(back) == synth_config_json(cfg));
    CHECK(parse_synth_config("{\"seed\": 3}").n_topics == SynthConfig{}.n_topics);
    CHECK_THROWS_AS(parse_synth_config("{\"colour\": 1}"), Error);

    SynthConfig bad;
    bad.p_expert_match = 1.5;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = SynthConfig{};
    bad.n_fatigue_referees = 61;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("written conferences read back") {
    const auto dir = testing::scratch_dir("synth");
    const auto conf = generate(SynthConfig{});
    write_conference(conf, dir);
    CHECK(read_bid_csv(dir / "bids.csv") == conf.bids);
    CHECK(read_corpus_jsonl(dir / "corpus.jsonl").size() == conf.corpus.size());
    CHECK(read_publications_jsonl(dir / "publications.jsonl").size() == conf.publications.size());
    CHECK(parse_synth_config(read_text_file(dir / "synth_config.json")).seed == 42);
}

TEST_CASE("adjusted rand index") {
    CHECK(adjusted_rand_index({0, 0, 1, 1}, {5, 5, 2, 2}) == 1.0);
    CHECK(adjusted_rand_index({0, 0, 1, 1}, {0, 1, 0, 1}) == doctest::Approx(-0.5));
    CHECK_THROWS_AS(adjusted_rand_index({0, 1}, {0}), Error);
}

TEST_CASE("planted topics are recovered by the bid clustering") {
    // Regression values for the default generator at a few seeds.
    const std::pair<std::uint64_t, double> expected[] = {{42, 1.0}, {3, 0.980447}, {9, 0.962222}};
    for (const auto& [seed, ari] : expected) {
        PipelineConfig cfg;
        SynthConfig s;
        s.seed = seed;
        cfg.synthetic = s;
        cfg.cluster_count = s.n_topics;
        const auto rep = reproduce(cfg);
        const auto conf = generate(s);
        std::vector<std::size_t> truth;
        for (const auto& id : rep.all.clusters.leaves) truth.push_back(conf.truth.submission_topic.at(id));
        const double got = adjusted_rand_index(rep.all.clusters.assignment(), truth);
        CHECK(got >= 0.8);
        CHECK(got == doctest::Approx(ari).epsilon(1e-6));
    }
}
