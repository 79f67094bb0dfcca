#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "bidlab/error.hpp"
#include "bidlab/tfidf.hpp"

using namespace bidlab;

namespace {

FrequencyVector group(const std::string& owner, std::vector<std::size_t> counts) {
    std::size_t total = 0;
    for (auto c : counts) total += c;
    return {owner, std::move(counts), total};
}

ClusterSet clusters_of(const std::vector<std::string>& ids, const std::vector<std::size_t>& assignment) {
    ClusterSet c;
    c.leaves = ids;
    std::size_t k = 0;
    for (auto a : assignment) k = std::max(k, a + 1);
    c.members.resize(k);
    for (std::size_t i = 0; i < ids.size(); ++i) c.members[assignment[i]].push_back(i);
    return c;
}

}  // namespace

TEST_CASE("dictionary is sorted and duplicate free") {
    std::vector<ProcessedDocument> docs{{"a", {"node", "graph", "node"}}, {"b", {"edge", "graph"}}};
    const auto dict = TermDictionary::from_documents(docs);
    CHECK(dict.terms() == std::vector<std::string>{"edge", "graph", "node"});
    CHECK(dict.index_of("graph") == 1u);
    CHECK_FALSE(dict.index_of("rank").has_value());
}

TEST_CASE("cluster frequencies") {
    SUBCASE("one cluster, one document") {
        std::vector<ProcessedDocument> docs{{"d", {"graph", "graph", "node"}}};
        const auto dict = TermDictionary::from_documents(docs);
        const auto f = cluster_frequencies(docs, clusters_of({"d"}, {0}), dict);
        REQUIRE(f.size() == 1);
        CHECK(f[0].owner == "C1");
        CHECK(f[0].counts == std::vector<std::size_t>{2, 1});
        CHECK(f[0].total == 3);
    }
    SUBCASE("random partitions match a per-document recount") {
        std::mt19937_64 rng(4);
        const std::vector<std::string> vocab{"alpha", "beta", "gamma", "delta", "eps", "zeta"};
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<ProcessedDocument> docs;
            std::vector<std::string> ids;
            std::vector<std::size_t> assignment;
            for (int d = 0; d < 12; ++d) {
                ProcessedDocument doc{"d" + std::to_string(d), {}};
                const int len = 1 + static_cast<int>(rng() % 10);
                for (int w = 0; w < len; ++w) doc.terms.push_back(vocab[rng() % vocab.size()]);
                ids.push_back(doc.id);
                assignment.push_back(d < 3 ? static_cast<std::size_t>(d) : rng() % 3);
                docs.push_back(doc);
            }
            const auto dict = TermDictionary::from_documents(docs);
            const auto f = cluster_frequencies(docs, clusters_of(ids, assignment), dict);
            for (std::size_t c = 0; c < 3; ++c) {
                std::map<std::string, std::size_t> want;
                std::size_t total = 0;
                for (std::size_t d = 0; d < docs.size(); ++d)
                    if (assignment[d] == c)
                        for (const auto& t : docs[d].terms) {
                            ++want[t];
                            ++total;
                        }
                CHECK(f[c].total == total);
                for (std::size_t j = 0; j < dict.size(); ++j) CHECK(f[c].counts[j] == want[dict.term(j)]);
            }
        }
    }
    SUBCASE("documents outside every cluster are rejected") {
        std::vector<ProcessedDocument> docs{{"x", {"graph"}}};
        const auto dict = TermDictionary::from_documents(docs);
        CHECK_THROWS_AS(cluster_frequencies(docs, clusters_of({"y"}, {0}), dict), Error);
    }
}

TEST_CASE("tfidf on the printed feature vectors") {
    // browser, built, bureau, bush for clusters 3, 4, 5 (taken as the whole set, N = 3).
    const auto w = tfidf({group("3", {3, 7, 3, 1}), group("4", {4, 3, 2, 0}), group("5", {1, 0, 1, 0})});
    const int zero_cells[][2] = {{0, 0}, {0, 2}, {1, 0}, {1, 2}, {1, 3}, {2, 0}, {2, 1}, {2, 2}, {2, 3}};
    for (const auto& cell : zero_cells) CHECK(w[cell[0]].weights[cell[1]] == 0.0);
    // Printed to two decimals.
    CHECK(std::floor(w[0].weights[1] * 100) / 100 == doctest::Approx(0.08));
    CHECK(std::floor(w[0].weights[3] * 100) / 100 == doctest::Approx(0.03));
    CHECK(std::floor(w[1].weights[1] * 100) / 100 == doctest::Approx(0.05));
}

TEST_CASE("tfidf hand-computed two-group fixture") {
    const auto w = tfidf({group("A", {2, 2}), group("B", {0, 3})});
    CHECK(w[0].weights[0] == doctest::Approx(0.15051499783199057).epsilon(1e-12));
    CHECK(w[0].weights[1] == 0.0);
    CHECK(w[1].weights[0] == 0.0);
    CHECK(w[1].weights[1] == 0.0);
    CHECK_THROWS_AS(tfidf({group("A", {0, 0}), group("B", {1, 1})}), Error);
}

TEST_CASE("tfidf properties") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<FrequencyVector> groups;
        for (int g = 0; g < 5; ++g) {
            std::vector<std::size_t> counts(7);
            for (auto& c : counts) c = rng() % 3 == 0 ? 0 : rng() % 6;
            counts[0] += 1;  // never an empty group
            groups.push_back(group("g" + std::to_string(g), counts));
        }
        const auto w = tfidf(groups);
        for (std::size_t j = 0; j < 7; ++j) {
            std::size_t nc = 0;
            for (const auto& g : groups) nc += g.counts[j] > 0;
            for (std::size_t g = 0; g < groups.size(); ++g) {
                if (groups[g].counts[j] == 0) CHECK(w[g].weights[j] == 0.0);
                else CHECK((w[g].weights[j] == 0.0) == (nc == groups.size()));
                if (groups[g].counts[j] > 0 && nc < groups.size()) CHECK(w[g].weights[j] > 0.0);
            }
        }
        // Scaling one group's counts leaves its weights unchanged.
        auto scaled = groups;
        for (auto& c : scaled[2].counts) c *= 3;
        scaled[2].total *= 3;
        const auto ws = tfidf(scaled);
        for (std::size_t j = 0; j < 7; ++j) CHECK(ws[2].weights[j] == doctest::Approx(w[2].weights[j]).epsilon(1e-14));
    }
}

TEST_CASE("document tfidf") {
    std::vector<ProcessedDocument> docs{
        {"d1", {"graph", "node"}}, {"d2", {"graph", "edge", "edge"}}, {"d3", {"graph", "rank"}}};
    const auto dict = TermDictionary::from_documents(docs);
    const auto t = document_tfidf(docs, dict);
    CHECK(t.row_labels == Labels{"d1", "d2", "d3"});
    CHECK(t.col_labels == Labels{"edge", "graph", "node", "rank"});
    // log10(3) = 0.47712125471966244
    const double expected[3][4] = {{0, 0, 0.23856062735983122, 0},
                                   {0.31808083647977496, 0, 0, 0},
                                   {0, 0, 0, 0.23856062735983122}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) CHECK(t.values(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-12));
}

TEST_CASE("top-k selection and normalization") {
    WeightVector w{"C1", {0.3, 0.0, 0.1, 0.1, 0.2}};
    const auto top = top_k_terms(w, 3);
    REQUIRE(top.size() == 3);
    CHECK(top[0].term == 0);
    CHECK(top[1].term == 4);
    CHECK(top[2].term == 2);  // tie with term 3 broken by dictionary order

    const auto two = top_k_normalize(WeightVector{"x", {0.3, 0.1}}, 2);
    CHECK(two[0].weight == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(two[1].weight == doctest::Approx(0.25).epsilon(1e-15));

    const auto one = top_k_normalize(w, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].weight == 1.0);

    const auto uniform = top_k_normalize(WeightVector{"u", std::vector<double>(10, 0.05)}, 10);
    for (const auto& t : uniform) CHECK(t.weight == doctest::Approx(0.1).epsilon(1e-15));

    CHECK(top_k_normalize(w, 50).size() == 4);
    CHECK_THROWS_AS(top_k_normalize(WeightVector{"z", {0.0, 0.0}}, 3), Error);
    CHECK_THROWS_AS(top_k_terms(w, 0), Error);
}

TEST_CASE("entropy") {
    const std::vector<double> uniform(10, 0.1);
    CHECK(entropy(uniform) == doctest::Approx(std::log2(10.0)).epsilon(1e-12));
    CHECK(entropy(std::vector<double>{1.0, 0.0, 0.0}) == 0.0);
    CHECK_THROWS_AS(entropy(std::vector<double>{0.5, 0.6}), Error);
    CHECK_THROWS_AS(entropy(std::vector<double>{1.5, -0.5}), Error);

    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> p(1 + trial % 12);
        double sum = 0.0;
        for (auto& x : p) sum += x = u(rng);
        for (auto& x : p) x /= sum;
        const double h = entropy(p);
        CHECK(h >= 0.0);
        CHECK(h <= std::log2(static_cast<double>(p.size())) + 1e-12);
    }
}

TEST_CASE("cosine similarity") {
    LabeledMatrix t{{"a", "b", "c", "d", "z"}, {"x", "y", "w"}, DenseMatrix(5, 3)};
    const double rows[5][3] = {{1, 2, 0}, {2, 1, 0}, {2, 4, 0}, {0, 0, 5}, {0, 0, 0}};
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 3; ++j) t.values(i, j) = rows[i][j];
    const auto r = cosine_similarity_matrix(t);
    CHECK(r.matrix(0, 1) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(r.matrix(0, 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.matrix(0, 3) == 0.0);
    CHECK(r.zero_rows == std::vector<std::string>{"z"});
    CHECK(r.matrix(4, 4) == 1.0);
    CHECK(r.matrix(4, 0) == 0.0);

    // Positive row scaling leaves the matrix unchanged.
    auto scaled = t;
    for (int j = 0; j < 3; ++j) scaled.values(1, j) *= 7.5;
    const auto rs = cosine_similarity_matrix(scaled, 2);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) CHECK(rs.matrix(i, j) == doctest::Approx(r.matrix(i, j)).epsilon(1e-14));

    t.values(0, 0) = -1.0;
    CHECK_THROWS_AS(cosine_similarity_matrix(t), Error);
}
