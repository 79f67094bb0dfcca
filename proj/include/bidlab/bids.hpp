#pragma once

// Bid matrices, the expertise-category transform, filtering, and
// wildcard-aware Hamming similarity over submissions and referees.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bidlab/matrix.hpp"

namespace bidlab {

using BidCode = std::uint8_t;

// Codes in the transformed (modified) bid matrix.
inline constexpr BidCode kWildcard = 0;
inline constexpr BidCode kExpert = 1;
inline constexpr BidCode kNotExpert = 2;

// Submissions x referees table of bid codes in [0, MaxCode].
template <BidCode MaxCode>
class BidTable {
public:
    static constexpr BidCode max_code = MaxCode;

    BidTable() = default;

    // Throws invalid_code (naming row/col) or duplicate_label.
    BidTable(Labels submissions, Labels referees, std::vector<BidCode> cells);

    std::size_t n_submissions() const noexcept { return submissions_.size(); }
    std::size_t n_referees() const noexcept { return referees_.size(); }
    const Labels& submissions() const noexcept { return submissions_; }
    const Labels& referees() const noexcept { return referees_; }
    const std::vector<BidCode>& cells() const noexcept { return cells_; }

    BidCode operator()(std::size_t sub, std::size_t ref) const {
        return cells_[sub * referees_.size() + ref];
    }

    std::span<const BidCode> submission_row(std::size_t sub) const {
        return {cells_.data() + sub * referees_.size(), referees_.size()};
    }

    std::vector<BidCode> referee_column(std::size_t ref) const;

    // Swaps the roles of rows and columns.
    BidTable transposed() const;

    bool operator==(const BidTable&) const = default;

private:
    Labels submissions_;
    Labels referees_;
    std::vector<BidCode> cells_;
};

using RawBidMatrix = BidTable<4>;
using BidMatrix = BidTable<2>;

extern template class BidTable<4>;
extern template class BidTable<2>;

// 0->0, 1->1, 2->1, 3->2, 4->0.
BidCode transform_code(BidCode raw);

BidMatrix transform_bids(const RawBidMatrix& raw);

struct FilterReport {
    std::size_t empty_rows_removed = 0;
    std::size_t empty_cols_removed = 0;
    std::size_t excluded_cols_removed = 0;
    std::size_t rows_removed_after_exclusion = 0;
    // Excluded ids that were not columns of the input.
    std::vector<std::string> excluded_not_found;
};

struct FilterResult {
    BidMatrix matrix;
    FilterReport report;
};

// Drops all-zero rows, then all-zero columns, then excluded columns, then
// rows left all-zero. Throws empty_matrix when nothing survives.
FilterResult filter_bids(const BidMatrix& bids, const std::set<std::string>& excluded_referees);

// Keeps only the listed referee columns, in their original order.
BidMatrix select_referees(const BidMatrix& bids, const std::set<std::string>& keep);

// 1 - h/l over positions where neither vector holds a wildcard. Returns
// nullopt when every position is masked. Throws length_mismatch.
std::optional<double> hamming_similarity(std::span<const BidCode> u, std::span<const BidCode> v);

struct SimilarityResult {
    SimilarityMatrix matrix;
    // Off-diagonal pairs with no comparable position, stored as 0.0.
    std::size_t undefined_pairs = 0;
};

// S_b over submission rows. `jobs` caps worker threads (0 = hardware).
SimilarityResult submission_similarity(const BidMatrix& bids, unsigned jobs = 1);

// R_b over referee columns; same as submission_similarity on the transpose.
SimilarityResult referee_similarity(const BidMatrix& bids, unsigned jobs = 1);

// Referees whose unmasked bids are all "expert" (no variation in their bid
// vector). Referees with no unmasked bid are not reported.
std::vector<std::string> fatigue_referees(const BidMatrix& bids);

}  // namespace bidlab
