#pragma once

// Term dictionary, group-level and document-level TFIDF, top-k
// normalization, entropy and cosine similarity.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bidlab/cluster.hpp"
#include "bidlab/matrix.hpp"
#include "bidlab/text.hpp"

namespace bidlab {

// Sorted, duplicate-free stems.
class TermDictionary {
public:
    TermDictionary() = default;
    explicit TermDictionary(std::vector<std::string> terms);

    static TermDictionary from_documents(const std::vector<ProcessedDocument>& docs);

    std::size_t size() const noexcept { return terms_.size(); }
    const std::vector<std::string>& terms() const noexcept { return terms_; }
    const std::string& term(std::size_t index) const { return terms_[index]; }
    std::optional<std::size_t> index_of(const std::string& term) const;

private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Dense counts over a dictionary; `total` is n(i).
struct FrequencyVector {
    std::string owner;
    std::vector<std::size_t> counts;
    std::size_t total = 0;
};

struct WeightVector {
    std::string owner;
    std::vector<double> weights;
};

FrequencyVector count_terms(const std::string& owner, const std::vector<std::string>& terms,
                            const TermDictionary& dict);

// Per-cluster summed counts; owners are "C1".."Ck" in cluster order.
// Throws unassigned_document when a document is in no cluster.
std::vector<FrequencyVector> cluster_frequencies(const std::vector<ProcessedDocument>& docs,
                                                 const ClusterSet& clusters,
                                                 const TermDictionary& dict);

// weight(i,j) = freq(i,j)/n(i) * log10(N/n_c(j)) with N = number of groups.
// Throws empty_group when n(i) = 0.
std::vector<WeightVector> tfidf(const std::vector<FrequencyVector>& groups);

// Documents as groups: one row per document, columns follow the dictionary.
LabeledMatrix document_tfidf(const std::vector<ProcessedDocument>& docs,
                             const TermDictionary& dict);

struct TermWeight {
    std::size_t term = 0;
    double weight = 0.0;
};

// The k largest weights (ties by dictionary order) among the strictly
// positive ones, in descending order. Throws invalid_argument for k = 0.
std::vector<TermWeight> top_k_terms(const WeightVector& w, std::size_t k);

// top_k_terms rescaled to sum to 1. Uses every positive weight when fewer
// than k are positive. Throws zero_weights on an all-zero vector.
std::vector<TermWeight> top_k_normalize(const WeightVector& w, std::size_t k);

// Shannon entropy in bits, 0 log 0 = 0. Throws not_normalized unless the
// entries are non-negative and sum to 1 within 1e-9.
double entropy(std::span<const double> p);

struct CosineResult {
    SimilarityMatrix matrix;
    // Rows with zero norm: similarity 0 off-diagonal.
    std::vector<std::string> zero_rows;
};

CosineResult cosine_similarity_matrix(const LabeledMatrix& t, unsigned jobs = 1);

}  // namespace bidlab
