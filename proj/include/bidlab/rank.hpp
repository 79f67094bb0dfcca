#pragma once

// Weighted relative rank: random walk with restart from a source author.

#include <cstddef>
#include <string>
#include <vector>

#include "bidlab/graph.hpp"
#include "bidlab/matrix.hpp"

namespace bidlab {

struct RankConfig {
    double restart_probability = 0.15;
    double tolerance = 1e-9;
    std::size_t max_iterations = 1000;

    // Throws invalid_config.
    void validate() const;
};

struct RankVector {
    std::vector<double> scores;  // indexed like graph.nodes()
    std::size_t iterations = 0;
    bool converged = false;
    double last_change = 0.0;    // L1 distance of the final step
};

// Power iteration of x <- a e_s + (1 - a) P^T x, where P moves to a neighbor
// with probability proportional to edge weight and nodes without edges send
// all their mass back to the source. Stops when the L1 change falls below
// the tolerance. Throws unknown_author.
RankVector relative_rank(const CoauthorGraph& graph, const std::string& source,
                         const RankConfig& config);

struct RelativeRankMatrix {
    Labels labels;
    DenseMatrix values;  // row l: ranks from referee l at referee columns
    std::vector<std::size_t> iterations;
    std::vector<bool> converged;
    RankConfig config;

    bool all_converged() const;
    LabeledMatrix as_labeled() const { return {labels, labels, values}; }
};

// Throws missing_referees listing every id absent from the graph.
RelativeRankMatrix referee_rank_matrix(const CoauthorGraph& graph, const Labels& referees,
                                       const RankConfig& config, unsigned jobs = 1);

// (R + R^T) / 2.
DenseMatrix symmetrized(const DenseMatrix& m);

std::string rank_metadata_json(const RelativeRankMatrix& m);

}  // namespace bidlab
