#include "bidlab/bids.hpp"

#include <algorithm>
#include <unordered_set>

#include "bidlab/error.hpp"
#include "bidlab/parallel.hpp"

namespace bidlab {

namespace {

void require_unique(const Labels& labels, const char* what) {
    std::unordered_set<std::string> seen;
    for (const auto& l : labels)
        if (!seen.insert(l).second)
            throw input_error("duplicate_label", std::string("duplicate ") + what + " id '" + l + "'");
}

}  // namespace

template <BidCode MaxCode>
BidTable<MaxCode>::BidTable(Labels submissions, Labels referees, std::vector<BidCode> cells)
    : submissions_(std::move(submissions)), referees_(std::move(referees)), cells_(std::move(cells)) {
    if (cells_.size() != submissions_.size() * referees_.size())
        throw input_error("shape_mismatch", "bid cells do not match " +
                                                std::to_string(submissions_.size()) + "x" +
                                                std::to_string(referees_.size()));
    require_unique(submissions_, "submission");
    require_unique(referees_, "referee");
    const std::size_t cols = referees_.size();
    for (std::size_t k = 0; k < cells_.size(); ++k) {
        if (cells_[k] > MaxCode)
            throw input_error("invalid_code", "bid code " + std::to_string(cells_[k]) +
                                                  " at submission '" + submissions_[k / cols] +
                                                  "', referee '" + referees_[k % cols] +
                                                  "' is outside {0.." + std::to_string(MaxCode) + "}");
    }
}

template <BidCode MaxCode>
std::vector<BidCode> BidTable<MaxCode>::referee_column(std::size_t ref) const {
    std::vector<BidCode> col(submissions_.size());
    for (std::size_t i = 0; i < submissions_.size(); ++i) col[i] = (*this)(i, ref);
    return col;
}

template <BidCode MaxCode>
BidTable<MaxCode> BidTable<MaxCode>::transposed() const {
    std::vector<BidCode> t(cells_.size());
    const std::size_t rows = submissions_.size(), cols = referees_.size();
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) t[j * rows + i] = cells_[i * cols + j];
    return BidTable(referees_, submissions_, std::move(t));
}

template class BidTable<4>;
template class BidTable<2>;

BidCode transform_code(BidCode raw) {
    switch (raw) {
        case 0: return kWildcard;
        case 1:
        case 2: return kExpert;
        case 3: return kNotExpert;
        case 4: return kWildcard;
        default: throw input_error("invalid_code", "raw bid code " + std::to_string(raw) + " outside {0..4}");
    }
}

BidMatrix transform_bids(const RawBidMatrix& raw) {
    std::vector<BidCode> cells(raw.cells().size());
    std::transform(raw.cells().begin(), raw.cells().end(), cells.begin(), transform_code);
    return BidMatrix(raw.submissions(), raw.referees(), std::move(cells));
}

namespace {

// Subset of rows/cols, both given as ascending index lists.
BidMatrix subset(const BidMatrix& b, const std::vector<std::size_t>& rows,
                 const std::vector<std::size_t>& cols) {
    Labels subs, refs;
    for (auto i : rows) subs.push_back(b.submissions()[i]);
    for (auto j : cols) refs.push_back(b.referees()[j]);
    std::vector<BidCode> cells;
    cells.reserve(rows.size() * cols.size());
    for (auto i : rows)
        for (auto j : cols) cells.push_back(b(i, j));
    return BidMatrix(std::move(subs), std::move(refs), std::move(cells));
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return v;
}

std::vector<std::size_t> nonzero_rows(const BidMatrix& b, const std::vector<std::size_t>& rows,
                                      const std::vector<std::size_t>& cols) {
    std::vector<std::size_t> keep;
    for (auto i : rows)
        if (std::any_of(cols.begin(), cols.end(), [&](auto j) { return b(i, j) != kWildcard; }))
            keep.push_back(i);
    return keep;
}

}  // namespace

FilterResult filter_bids(const BidMatrix& bids, const std::set<std::string>& excluded_referees) {
    FilterResult result;
    auto& report = result.report;

    auto cols = all_indices(bids.n_referees());
    auto rows = nonzero_rows(bids, all_indices(bids.n_submissions()), cols);
    report.empty_rows_removed = bids.n_submissions() - rows.size();

    std::vector<std::size_t> bid_cols;
    for (auto j : cols)
        if (std::any_of(rows.begin(), rows.end(), [&](auto i) { return bids(i, j) != kWildcard; }))
            bid_cols.push_back(j);
    report.empty_cols_removed = cols.size() - bid_cols.size();

    std::vector<std::size_t> kept_cols;
    for (auto j : bid_cols)
        if (!excluded_referees.contains(bids.referees()[j])) kept_cols.push_back(j);
    report.excluded_cols_removed = bid_cols.size() - kept_cols.size();

    for (const auto& id : excluded_referees)
        if (std::find(bids.referees().begin(), bids.referees().end(), id) == bids.referees().end())
            report.excluded_not_found.push_back(id);

    auto kept_rows = nonzero_rows(bids, rows, kept_cols);
    report.rows_removed_after_exclusion = rows.size() - kept_rows.size();

    if (kept_rows.empty() || kept_cols.empty())
        throw input_error("empty_matrix", "no bid data left after filtering");
    result.matrix = subset(bids, kept_rows, kept_cols);
    return result;
}

BidMatrix select_referees(const BidMatrix& bids, const std::set<std::string>& keep) {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < bids.n_referees(); ++j)
        if (keep.contains(bids.referees()[j])) cols.push_back(j);
    return subset(bids, all_indices(bids.n_submissions()), cols);
}

std::optional<double> hamming_similarity(std::span<const BidCode> u, std::span<const BidCode> v) {
    if (u.size() != v.size())
        throw input_error("length_mismatch", "bid vectors differ in length (" +
                                                 std::to_string(u.size()) + " vs " +
                                                 std::to_string(v.size()) + ")");
    std::size_t length = 0, distance = 0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (u[k] == kWildcard || v[k] == kWildcard) continue;
        ++length;
        if (u[k] != v[k]) ++distance;
    }
    if (length == 0) return std::nullopt;
    return 1.0 - static_cast<double>(distance) / static_cast<double>(length);
}

namespace {

SimilarityResult row_similarity(const BidMatrix& b, unsigned jobs) {
    const std::size_t n = b.n_submissions();
    SimilarityResult result{SimilarityMatrix(b.submissions()), 0};
    std::vector<std::size_t> undefined(n, 0);
    // Row i owns pairs (i, j > i); writes are disjoint.
    parallel_for(n, jobs, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            auto s = hamming_similarity(b.submission_row(i), b.submission_row(j));
            if (!s) ++undefined[i];
            result.matrix.set_pair(i, j, s.value_or(0.0));
        }
    });
    for (auto u : undefined) result.undefined_pairs += u;
    return result;
}

}  // namespace

SimilarityResult submission_similarity(const BidMatrix& bids, unsigned jobs) {
    return row_similarity(bids, jobs);
}

SimilarityResult referee_similarity(const BidMatrix& bids, unsigned jobs) {
    return row_similarity(bids.transposed(), jobs);
}

std::vector<std::string> fatigue_referees(const BidMatrix& bids) {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < bids.n_referees(); ++j) {
        bool any = false, all_expert = true;
        for (std::size_t i = 0; i < bids.n_submissions(); ++i) {
            const BidCode c = bids(i, j);
            if (c == kWildcard) continue;
            any = true;
            if (c != kExpert) {
                all_expert = false;
                break;
            }
        }
        if (any && all_expert) out.push_back(bids.referees()[j]);
    }
    return out;
}

}  // namespace bidlab
