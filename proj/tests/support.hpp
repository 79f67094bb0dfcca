#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "bidlab/bids.hpp"

namespace testing {

inline bidlab::Labels numbered(const std::string& prefix, std::size_t n, std::size_t first = 1) {
    bidlab::Labels out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(first + i));
    return out;
}

template <bidlab::BidCode MaxCode>
bidlab::BidTable<MaxCode> table(const bidlab::Labels& rows, const bidlab::Labels& cols,
                                const std::vector<std::vector<int>>& cells) {
    std::vector<bidlab::BidCode> flat;
    for (const auto& r : cells)
        for (int c : r) flat.push_back(static_cast<bidlab::BidCode>(c));
    return bidlab::BidTable<MaxCode>(rows, cols, std::move(flat));
}

// The worked example: raw bids of submissions 13..17 by referees 1..5.
inline bidlab::RawBidMatrix example_raw_bids() {
    return table<4>(numbered("", 5, 13), numbered("", 5),
                    {{1, 2, 2, 3, 3}, {2, 3, 2, 3, 3}, {4, 2, 3, 1, 1}, {3, 3, 1, 2, 0}, {1, 3, 2, 3, 3}});
}

inline bidlab::BidMatrix example_bids() {
    return table<2>(numbered("", 5, 13), numbered("", 5),
                    {{1, 1, 1, 2, 2}, {1, 2, 1, 2, 2}, {0, 1, 2, 1, 1}, {2, 2, 1, 1, 0}, {1, 2, 1, 2, 2}});
}

inline bidlab::BidMatrix random_bids(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                     double p_wildcard = 0.3) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<bidlab::BidCode> cells;
    for (std::size_t k = 0; k < rows * cols; ++k)
        cells.push_back(u(rng) < p_wildcard ? 0 : (u(rng) < 0.5 ? 1 : 2));
    return bidlab::BidMatrix(numbered("s", rows), numbered("r", cols), std::move(cells));
}

// Fresh empty directory in the system temp area.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("bidlab-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testing
