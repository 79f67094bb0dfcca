#include "bidlab/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "bidlab/error.hpp"
#include "bidlab/parallel.hpp"

namespace bidlab {

TermDictionary::TermDictionary(std::vector<std::string> terms) : terms_(std::move(terms)) {
    std::sort(terms_.begin(), terms_.end());
    terms_.erase(std::unique(terms_.begin(), terms_.end()), terms_.end());
    index_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], i);
}

TermDictionary TermDictionary::from_documents(const std::vector<ProcessedDocument>& docs) {
    std::vector<std::string> all;
    for (const auto& d : docs) all.insert(all.end(), d.terms.begin(), d.terms.end());
    return TermDictionary(std::move(all));
}

std::optional<std::size_t> TermDictionary::index_of(const std::string& term) const {
    auto it = index_.find(term);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

FrequencyVector count_terms(const std::string& owner, const std::vector<std::string>& terms,
                            const TermDictionary& dict) {
    FrequencyVector f{owner, std::vector<std::size_t>(dict.size(), 0), 0};
    for (const auto& t : terms) {
        if (auto idx = dict.index_of(t)) {
            ++f.counts[*idx];
            ++f.total;
        }
    }
    return f;
}

std::vector<FrequencyVector> cluster_frequencies(const std::vector<ProcessedDocument>& docs,
                                                 const ClusterSet& clusters,
                                                 const TermDictionary& dict) {
    std::unordered_map<std::string, std::size_t> cluster_of;
    for (std::size_t c = 0; c < clusters.size(); ++c)
        for (auto leaf : clusters.members[c]) cluster_of.emplace(clusters.leaves[leaf], c);

    std::vector<FrequencyVector> out;
    for (std::size_t c = 0; c < clusters.size(); ++c)
        out.push_back({"C" + std::to_string(c + 1), std::vector<std::size_t>(dict.size(), 0), 0});

    for (const auto& d : docs) {
        auto it = cluster_of.find(d.id);
        if (it == cluster_of.end())
            throw input_error("unassigned_document", "document '" + d.id + "' is not in any cluster");
        auto& f = out[it->second];
        for (const auto& t : d.terms) {
            if (auto idx = dict.index_of(t)) {
                ++f.counts[*idx];
                ++f.total;
            }
        }
    }
    return out;
}

std::vector<WeightVector> tfidf(const std::vector<FrequencyVector>& groups) {
    if (groups.empty()) return {};
    const std::size_t dim = groups.front().counts.size();
    const double n_groups = static_cast<double>(groups.size());

    std::vector<std::size_t> group_freq(dim, 0);
    for (const auto& g : groups) {
        if (g.counts.size() != dim)
            throw input_error("shape_mismatch", "frequency vectors use different dictionaries");
        for (std::size_t j = 0; j < dim; ++j)
            if (g.counts[j] > 0) ++group_freq[j];
    }
    std::vector<double> idf(dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j)
        if (group_freq[j] > 0) idf[j] = std::log10(n_groups / static_cast<double>(group_freq[j]));

    std::vector<WeightVector> out;
    out.reserve(groups.size());
    for (const auto& g : groups) {
        if (g.total == 0)
            throw input_error("empty_group", "group '" + g.owner + "' has no dictionary terms");
        WeightVector w{g.owner, std::vector<double>(dim, 0.0)};
        const double n = static_cast<double>(g.total);
        for (std::size_t j = 0; j < dim; ++j)
            if (g.counts[j] > 0) w.weights[j] = static_cast<double>(g.counts[j]) / n * idf[j];
        out.push_back(std::move(w));
    }
    return out;
}

LabeledMatrix document_tfidf(const std::vector<ProcessedDocument>& docs,
                             const TermDictionary& dict) {
    std::vector<FrequencyVector> freqs;
    freqs.reserve(docs.size());
    for (const auto& d : docs) freqs.push_back(count_terms(d.id, d.terms, dict));
    auto weights = tfidf(freqs);

    LabeledMatrix t;
    t.col_labels = dict.terms();
    t.values = DenseMatrix(docs.size(), dict.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        t.row_labels.push_back(weights[i].owner);
        std::copy(weights[i].weights.begin(), weights[i].weights.end(), t.values.row(i).begin());
    }
    return t;
}

std::vector<TermWeight> top_k_terms(const WeightVector& w, std::size_t k) {
    if (k == 0) throw input_error("invalid_argument", "top-k must be at least 1");
    std::vector<TermWeight> positive;
    for (std::size_t j = 0; j < w.weights.size(); ++j)
        if (w.weights[j] > 0.0) positive.push_back({j, w.weights[j]});
    const auto by_weight = [](const TermWeight& a, const TermWeight& b) {
        return a.weight != b.weight ? a.weight > b.weight : a.term < b.term;
    };
    const std::size_t take = std::min(k, positive.size());
    std::partial_sort(positive.begin(), positive.begin() + static_cast<std::ptrdiff_t>(take),
                      positive.end(), by_weight);
    positive.resize(take);
    return positive;
}

std::vector<TermWeight> top_k_normalize(const WeightVector& w, std::size_t k) {
    if (k == 0) throw input_error("invalid_argument", "top-k needs k >= 1");
    auto top = top_k_terms(w, k);
    if (top.empty())
        throw input_error("zero_weights", "weight vector '" + w.owner + "' has no positive weight");
    double sum = 0.0;
    for (const auto& t : top) sum += t.weight;
    for (auto& t : top) t.weight /= sum;
    return top;
}

double entropy(std::span<const double> p) {
    double sum = 0.0;
    for (double x : p) {
        if (!(x >= 0.0)) throw input_error("not_normalized", "probability entries must be >= 0");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw input_error("not_normalized", "probabilities sum to " + std::to_string(sum));
    double h = 0.0;
    for (double x : p)
        if (x > 0.0) h -= x * std::log2(x);
    return h;
}

CosineResult cosine_similarity_matrix(const LabeledMatrix& t, unsigned jobs) {
    const std::size_t n = t.values.rows();
    std::vector<double> norms(n, 0.0);
    CosineResult result{SimilarityMatrix(t.row_labels), {}};
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = t.values.row(i);
        if (std::any_of(row.begin(), row.end(), [](double v) { return !(v >= 0.0); }))
            throw input_error("negative_weight", "row '" + t.row_labels[i] + "' has a negative weight");
        norms[i] = std::sqrt(std::inner_product(row.begin(), row.end(), row.begin(), 0.0));
        if (norms[i] == 0.0) result.zero_rows.push_back(t.row_labels[i]);
    }
    parallel_for(n, jobs, [&](std::size_t i) {
        if (norms[i] == 0.0) return;  // off-diagonal cells stay 0
        const auto a = t.values.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            if (norms[j] == 0.0) continue;
            const auto b = t.values.row(j);
            double s = std::inner_product(a.begin(), a.end(), b.begin(), 0.0) / (norms[i] * norms[j]);
            result.matrix.set_pair(i, j, std::clamp(s, 0.0, 1.0));
        }
    });
    return result;
}

}  // namespace bidlab
