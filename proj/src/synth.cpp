#include "bidlab/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "bidlab/error.hpp"
#include "bidlab/io.hpp"

namespace bidlab {

using nlohmann::ordered_json;

std::uint64_t SplitRng::below(std::uint64_t n) {
    if (n <= 1) return 0;
    // Largest multiple of n that fits; draws above it are rejected.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

void SynthConfig::validate() const {
    auto prob = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0))
            throw input_error("invalid_config", std::string(name) + " must lie in [0, 1]");
    };
    prob(p_expert_match, "p_expert_match");
    prob(p_expert_mismatch, "p_expert_mismatch");
    prob(p_wildcard, "p_wildcard");
    prob(p_conflict, "p_conflict");
    prob(topic_word_share, "topic_word_share");
    prob(coauthor_intra_prob, "coauthor_intra_prob");
    prob(coauthor_inter_prob, "coauthor_inter_prob");
    auto positive = [](std::size_t v, const char* name) {
        if (v == 0) throw input_error("invalid_config", std::string(name) + " must be positive");
    };
    positive(n_submissions, "n_submissions");
    positive(n_referees, "n_referees");
    positive(n_topics, "n_topics");
    positive(vocab_per_topic, "vocab_per_topic");
    positive(abstract_length, "abstract_length");
    positive(max_authors_per_paper, "max_authors_per_paper");
    positive(pool_authors_per_topic, "pool_authors_per_topic");
    if (n_fatigue_referees + n_offline_referees > n_referees)
        throw input_error("invalid_config", "fatigue plus offline referees exceed n_referees");
}

namespace {

ordered_json config_to_json(const SynthConfig& c) {
    ordered_json j;
    j["seed"] = c.seed;
    j["n_submissions"] = c.n_submissions;
    j["n_referees"] = c.n_referees;
    j["n_topics"] = c.n_topics;
    j["p_expert_match"] = c.p_expert_match;
    j["p_expert_mismatch"] = c.p_expert_mismatch;
    j["p_wildcard"] = c.p_wildcard;
    j["p_conflict"] = c.p_conflict;
    j["n_fatigue_referees"] = c.n_fatigue_referees;
    j["n_offline_referees"] = c.n_offline_referees;
    j["vocab_per_topic"] = c.vocab_per_topic;
    j["shared_vocab"] = c.shared_vocab;
    j["abstract_length"] = c.abstract_length;
    j["topic_word_share"] = c.topic_word_share;
    j["coauthor_intra_prob"] = c.coauthor_intra_prob;
    j["coauthor_inter_prob"] = c.coauthor_inter_prob;
    j["max_authors_per_paper"] = c.max_authors_per_paper;
    j["pool_authors_per_topic"] = c.pool_authors_per_topic;
    return j;
}

}  // namespace

std::string synth_config_json(const SynthConfig& cfg) { return config_to_json(cfg).dump(1) + "\n"; }

SynthConfig parse_synth_config(const std::string& json_text) {
    SynthConfig c;
    try {
        const auto j = nlohmann::json::parse(json_text);
        const auto known = config_to_json(c);
        for (const auto& [key, value] : j.items())
            if (!known.contains(key)) throw input_error("invalid_config", "unknown synth config key '" + key + "'");
        auto get = [&](const char* key, auto& field) {
            if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
        };
        get("seed", c.seed);
        get("n_submissions", c.n_submissions);
        get("n_referees", c.n_referees);
        get("n_topics", c.n_topics);
        get("p_expert_match", c.p_expert_match);
        get("p_expert_mismatch", c.p_expert_mismatch);
        get("p_wildcard", c.p_wildcard);
        get("p_conflict", c.p_conflict);
        get("n_fatigue_referees", c.n_fatigue_referees);
        get("n_offline_referees", c.n_offline_referees);
        get("vocab_per_topic", c.vocab_per_topic);
        get("shared_vocab", c.shared_vocab);
        get("abstract_length", c.abstract_length);
        get("topic_word_share", c.topic_word_share);
        get("coauthor_intra_prob", c.coauthor_intra_prob);
        get("coauthor_inter_prob", c.coauthor_inter_prob);
        get("max_authors_per_paper", c.max_authors_per_paper);
        get("pool_authors_per_topic", c.pool_authors_per_topic);
    } catch (const nlohmann::json::exception& e) {
        throw input_error("invalid_config", std::string("synth config: ") + e.what());
    }
    c.validate();
    return c;
}

std::string ground_truth_json(const GroundTruth& truth) {
    ordered_json j;
    ordered_json subs = ordered_json::object(), refs = ordered_json::object();
    for (const auto& [id, t] : truth.submission_topic) subs[id] = t;
    for (const auto& [id, t] : truth.referee_topic) refs[id] = t;
    j["submission_topic"] = std::move(subs);
    j["referee_topic"] = std::move(refs);
    j["fatigue_referees"] = truth.fatigue_referees;
    j["offline_referees"] = truth.offline_referees;
    j["topic_vocab_size"] = truth.topic_vocab_size;
    j["narrowest_topic"] = truth.narrowest_topic;
    return j.dump(1) + "\n";
}

namespace {

std::string padded(const char* prefix, std::size_t value, std::size_t count) {
    const std::size_t width = std::to_string(count).size();
    std::string digits = std::to_string(value);
    return prefix + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

// Pronounceable pseudo-words whose Porter stems are pairwise distinct and
// never stopwords.
class WordFactory {
public:
    explicit WordFactory(SplitRng& rng) : rng_(rng) {}

    std::vector<std::string> make(std::size_t count) {
        std::vector<std::string> words;
        while (words.size() < count) {
            auto w = candidate();
            const auto stem = porter_stem(w);
            if (stem.size() < 3 || StopwordList::english().contains(w) ||
                StopwordList::english().contains(stem) || !stems_.insert(stem).second)
                continue;
            words.push_back(std::move(w));
        }
        return words;
    }

private:
    std::string candidate() {
        static constexpr std::string_view consonants = "bdfgklmnprstvz";
        static constexpr std::string_view vowels = "aeiou";
        std::string w;
        const auto syllables = 2 + rng_.below(3);
        for (std::uint64_t s = 0; s < syllables; ++s) {
            w += consonants[rng_.below(consonants.size())];
            w += vowels[rng_.below(vowels.size())];
        }
        if (rng_.bernoulli(0.5)) w += consonants[rng_.below(consonants.size())];
        return w;
    }

    SplitRng& rng_;
    std::unordered_set<std::string> stems_;
};

// Draws from p(r) proportional to 1/(r+1).
class ZipfSampler {
public:
    explicit ZipfSampler(std::size_t n) : cumulative_(n) {
        double total = 0.0;
        for (std::size_t r = 0; r < n; ++r) cumulative_[r] = total += 1.0 / static_cast<double>(r + 1);
        for (auto& c : cumulative_) c /= total;
    }
    std::size_t operator()(SplitRng& rng) const {
        const double u = rng.uniform();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
    }

private:
    std::vector<double> cumulative_;
};

// k distinct entries of `from`, in draw order.
std::vector<std::string> sample_distinct(SplitRng& rng, std::vector<std::string> from, std::size_t k) {
    k = std::min(k, from.size());
    for (std::size_t i = 0; i < k; ++i) std::swap(from[i], from[i + rng.below(from.size() - i)]);
    from.resize(k);
    return from;
}

constexpr std::array<std::string_view, 10> kFillers{"the", "of", "and", "in", "for",
                                                      "with", "to", "a", "on", "by"};

}  // namespace

SynthConference generate(const SynthConfig& cfg) {
    cfg.validate();
    SplitRng rng(cfg.seed);
    SynthConference conf;
    conf.config = cfg;
    auto& truth = conf.truth;
    const std::size_t topics = cfg.n_topics;

    // Vocabularies.
    WordFactory words(rng);
    std::vector<std::vector<std::string>> topic_vocab(topics);
    for (std::size_t t = 0; t < topics; ++t) {
        const std::size_t size = std::max<std::size_t>(2, cfg.vocab_per_topic * (t + 1) / topics);
        topic_vocab[t] = words.make(size);
        truth.topic_vocab_size.push_back(size);
    }
    truth.narrowest_topic = static_cast<std::size_t>(
        std::min_element(truth.topic_vocab_size.begin(), truth.topic_vocab_size.end()) -
        truth.topic_vocab_size.begin());
    const auto shared = words.make(cfg.shared_vocab);

    // Referees: a random subset are fatigue referees, the next ones offline.
    Labels referees;
    for (std::size_t j = 0; j < cfg.n_referees; ++j) referees.push_back(padded("r", j + 1, cfg.n_referees));
    std::vector<std::size_t> order(cfg.n_referees);
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    rng.shuffle(order);
    std::vector<bool> fatigue(cfg.n_referees, false), offline(cfg.n_referees, false);
    for (std::size_t k = 0; k < cfg.n_fatigue_referees; ++k) fatigue[order[k]] = true;
    for (std::size_t k = 0; k < cfg.n_offline_referees; ++k) offline[order[cfg.n_fatigue_referees + k]] = true;

    // Topics are dealt round-robin separately to fatigue and regular
    // referees so every topic keeps its share of informative bidders.
    std::vector<std::size_t> referee_topic(cfg.n_referees);
    std::size_t next_regular = 0, next_fatigue = 0;
    for (std::size_t j = 0; j < cfg.n_referees; ++j) {
        referee_topic[j] = fatigue[j] ? next_fatigue++ % topics : next_regular++ % topics;
        truth.referee_topic[referees[j]] = referee_topic[j];
        if (fatigue[j]) truth.fatigue_referees.push_back(referees[j]);
        if (offline[j]) truth.offline_referees.push_back(referees[j]);
    }

    Labels submissions;
    std::vector<std::size_t> submission_topic(cfg.n_submissions);
    for (std::size_t i = 0; i < cfg.n_submissions; ++i) {
        submissions.push_back(padded("s", i + 1, cfg.n_submissions));
        submission_topic[i] = i % topics;
        truth.submission_topic[submissions[i]] = submission_topic[i];
    }

    // Raw bids.
    std::vector<BidCode> cells;
    cells.reserve(cfg.n_submissions * cfg.n_referees);
    for (std::size_t i = 0; i < cfg.n_submissions; ++i) {
        for (std::size_t j = 0; j < cfg.n_referees; ++j) {
            BidCode code;
            if (rng.bernoulli(cfg.p_wildcard)) {
                code = rng.bernoulli(cfg.p_conflict) ? 4 : 0;
            } else if (fatigue[j]) {
                code = 2;
            } else {
                const double p = submission_topic[i] == referee_topic[j] ? cfg.p_expert_match
                                                                         : cfg.p_expert_mismatch;
                if (rng.bernoulli(p)) code = rng.bernoulli(0.5) ? 1 : 2;
                else code = 3;
            }
            cells.push_back(code);
        }
    }
    conf.bids = RawBidMatrix(submissions, referees, std::move(cells));

    // Author pools per topic.
    std::vector<std::vector<std::string>> pool(topics);
    for (std::size_t t = 0; t < topics; ++t)
        for (std::size_t k = 0; k < cfg.pool_authors_per_topic; ++k)
            pool[t].push_back("a" + std::to_string(t + 1) + "-" +
                              padded("", k + 1, cfg.pool_authors_per_topic));

    // Abstracts.
    const ZipfSampler shared_sampler(std::max<std::size_t>(shared.size(), 1));
    for (std::size_t i = 0; i < cfg.n_submissions; ++i) {
        const auto& vocab = topic_vocab[submission_topic[i]];
        Document d;
        d.id = submissions[i];
        for (int w = 0; w < 4; ++w) {
            std::string word = vocab[rng.below(vocab.size())];
            word[0] = static_cast<char>(word[0] - 'a' + 'A');
            d.title += (w ? " " : "") + word;
        }
        std::string text;
        for (std::size_t w = 0; w < cfg.abstract_length; ++w) {
            const bool topical = shared.empty() || rng.bernoulli(cfg.topic_word_share);
            std::string word = topical ? vocab[rng.below(vocab.size())] : shared[shared_sampler(rng)];
            if (w % 12 == 0) word[0] = static_cast<char>(word[0] - 'a' + 'A');
            text += word;
            if (w + 1 == cfg.abstract_length || w % 12 == 11) {
                text += ". ";
            } else {
                text += ' ';
                if (rng.bernoulli(0.35)) {
                    text += kFillers[rng.below(kFillers.size())];
                    text += ' ';
                }
            }
        }
        text.pop_back();
        d.abstract = std::move(text);
        d.authors = sample_distinct(rng, pool[submission_topic[i]], 1 + rng.below(3));
        conf.corpus.push_back(std::move(d));
    }

    // Publication corpus.
    std::size_t paper = 0;
    const std::size_t max_authors = cfg.max_authors_per_paper;
    auto add_paper = [&](std::vector<std::string> authors) {
        conf.publications.push_back({padded("p", ++paper, 99999), std::move(authors)});
    };
    for (std::size_t t = 0; t < topics; ++t) {
        std::vector<std::string> members = pool[t];
        for (std::size_t j = 0; j < cfg.n_referees; ++j)
            if (!offline[j] && referee_topic[j] == t) members.push_back(referees[j]);
        for (std::size_t m = 0; m < members.size(); ++m) {
            std::vector<std::string> others;
            for (std::size_t o = 0; o < members.size(); ++o)
                if (o != m) others.push_back(members[o]);
            for (int rep = 0; rep < 2; ++rep) {
                std::vector<std::string> authors{members[m]};
                for (auto& a : sample_distinct(rng, others, rng.below(max_authors))) authors.push_back(std::move(a));
                add_paper(std::move(authors));
            }
        }
    }
    if (max_authors >= 2) {
        for (std::size_t a = 0; a < cfg.n_referees; ++a) {
            if (offline[a]) continue;
            for (std::size_t b = a + 1; b < cfg.n_referees; ++b) {
                if (offline[b]) continue;
                const bool same = referee_topic[a] == referee_topic[b];
                if (!rng.bernoulli(same ? cfg.coauthor_intra_prob : cfg.coauthor_inter_prob)) continue;
                std::vector<std::string> authors{referees[a], referees[b]};
                for (auto& x : sample_distinct(rng, pool[referee_topic[a]], rng.below(max_authors - 1)))
                    authors.push_back(std::move(x));
                add_paper(std::move(authors));
            }
        }
    }
    return conf;
}

void write_conference(const SynthConference& conf, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_text_file(dir / "bids.csv", bid_csv(conf.bids));
    write_text_file(dir / "corpus.jsonl", corpus_jsonl(conf.corpus));
    write_text_file(dir / "publications.jsonl", publications_jsonl(conf.publications));
    write_text_file(dir / "truth.json", ground_truth_json(conf.truth));
    write_text_file(dir / "synth_config.json", synth_config_json(conf.config));
}

bool same_seed_reproducibility(const SynthConfig& cfg) {
    const auto a = generate(cfg);
    const auto b = generate(cfg);
    return bid_csv(a.bids) == bid_csv(b.bids) && corpus_jsonl(a.corpus) == corpus_jsonl(b.corpus) &&
           publications_jsonl(a.publications) == publications_jsonl(b.publications) &&
           ground_truth_json(a.truth) == ground_truth_json(b.truth);
}

double adjusted_rand_index(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    if (a.size() != b.size()) throw input_error("length_mismatch", "labelings differ in length");
    const std::size_t n = a.size();
    if (n < 2) return 1.0;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> joint;
    std::map<std::size_t, std::size_t> ca, cb;
    for (std::size_t i = 0; i < n; ++i) {
        ++joint[{a[i], b[i]}];
        ++ca[a[i]];
        ++cb[b[i]];
    }
    auto pairs = [](std::size_t k) { return static_cast<double>(k) * static_cast<double>(k - (k > 0)) / 2.0; };
    double index = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& [key, count] : joint) index += pairs(count);
    for (const auto& [key, count] : ca) sum_a += pairs(count);
    for (const auto& [key, count] : cb) sum_b += pairs(count);
    const double expected = sum_a * sum_b / pairs(n);
    const double max_index = 0.5 * (sum_a + sum_b);
    if (max_index == expected) return 1.0;
    return (index - expected) / (max_index - expected);
}

}  // namespace bidlab
