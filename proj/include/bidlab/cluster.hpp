#pragma once

// Agglomerative hierarchical clustering over a similarity matrix.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "bidlab/matrix.hpp"

namespace bidlab {

enum class Linkage { single, complete, average, ward };

std::string_view to_string(Linkage linkage);
Linkage parse_linkage(std::string_view name);

// Nodes 0..n-1 are leaves; merge k creates node n + k.
struct Merge {
    std::size_t left = 0;
    std::size_t right = 0;
    double height = 0.0;
    std::size_t size = 0;
};

struct Dendrogram {
    Labels leaves;
    std::vector<Merge> merges;
    Linkage linkage = Linkage::average;

    double root_height() const { return merges.empty() ? 0.0 : merges.back().height; }
};

// Distances are 1 - similarity. Ward uses the Lance-Williams update on
// squared distances and reports heights as square roots, so its heights may
// exceed 1. Among (near-)equal candidate pairs the one with the smallest
// (min leaf index, min leaf index) is merged first. Throws when n < 2.
Dendrogram build_dendrogram(const SimilarityMatrix& similarity, Linkage linkage);

struct ClusterSet {
    // Leaf indices; members ascending, clusters ordered by first member.
    std::vector<std::vector<std::size_t>> members;
    Labels leaves;
    double threshold = 0.0;

    std::size_t size() const noexcept { return members.size(); }
    std::vector<std::string> member_ids(std::size_t cluster) const;
    // cluster index per leaf.
    std::vector<std::size_t> assignment() const;
};

// Drops every merge higher than the threshold; the remaining connected
// components are the clusters.
ClusterSet cut_dendrogram(const Dendrogram& dendrogram, double threshold);

// Midpoint of the gap between the two merge heights that separate exactly
// k clusters. Throws when the gap is empty (tied heights) or k is out of range.
double threshold_for_cluster_count(const Dendrogram& dendrogram, std::size_t k);

// Newick with branch lengths (parent height - child height).
std::string to_newick(const Dendrogram& dendrogram);
std::string dendrogram_json(const Dendrogram& dendrogram);
std::string clusters_json(const ClusterSet& clusters);
ClusterSet parse_clusters_json(const std::string& text);

}  // namespace bidlab
