#pragma once

// Synthetic conferences with planted topics: raw bids, abstracts and a
// publication corpus, plus the ground truth that generated them.
//
// Randomness comes from std::mt19937_64 (its output sequence is fixed by the
// C++ standard) with hand-written conversions to doubles and bounded
// integers, so a seed produces the same conference on every platform.

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "bidlab/bids.hpp"
#include "bidlab/graph.hpp"
#include "bidlab/text.hpp"

namespace bidlab {

class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    // Uniform in [0, n), rejection sampled (no modulo bias).
    std::uint64_t below(std::uint64_t n);
    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

struct SynthConfig {
    std::uint64_t seed = 42;
    std::size_t n_submissions = 120;
    std::size_t n_referees = 60;
    std::size_t n_topics = 8;
    double p_expert_match = 0.95;
    double p_expert_mismatch = 0.03;
    double p_wildcard = 0.2;
    // Wildcard bids that are conflicts of interest (raw code 4) rather than 0.
    double p_conflict = 0.1;
    std::size_t n_fatigue_referees = 19;
    // Referees left out of the publication corpus.
    std::size_t n_offline_referees = 0;
    // Topic t (0-based) gets max(2, vocab_per_topic * (t + 1) / n_topics)
    // words, so topic 0 has the narrowest vocabulary.
    std::size_t vocab_per_topic = 64;
    std::size_t shared_vocab = 2000;
    std::size_t abstract_length = 80;
    // Probability that an abstract word comes from the topic vocabulary.
    double topic_word_share = 0.4;
    double coauthor_intra_prob = 0.5;
    double coauthor_inter_prob = 0.02;
    std::size_t max_authors_per_paper = 4;
    std::size_t pool_authors_per_topic = 10;

    // Throws invalid_config.
    void validate() const;
};

std::string synth_config_json(const SynthConfig& cfg);
// Missing keys keep their defaults; unknown keys are rejected.
SynthConfig parse_synth_config(const std::string& json_text);

struct GroundTruth {
    std::map<std::string, std::size_t> submission_topic;
    std::map<std::string, std::size_t> referee_topic;
    std::vector<std::string> fatigue_referees;
    std::vector<std::string> offline_referees;
    std::vector<std::size_t> topic_vocab_size;
    std::size_t narrowest_topic = 0;
};

std::string ground_truth_json(const GroundTruth& truth);

struct SynthConference {
    SynthConfig config;
    RawBidMatrix bids;
    std::vector<Document> corpus;
    std::vector<PublicationRecord> publications;
    GroundTruth truth;
};

SynthConference generate(const SynthConfig& cfg);

// Writes bids.csv, corpus.jsonl, publications.jsonl, truth.json and
// synth_config.json into `dir` (created if needed).
void write_conference(const SynthConference& conf, const std::filesystem::path& dir);

// Generates twice and compares every serialized output byte for byte.
bool same_seed_reproducibility(const SynthConfig& cfg);

// Adjusted Rand index between two labelings of the same items.
double adjusted_rand_index(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

}  // namespace bidlab
