#pragma once

// Weighted co-authorship network.

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bidlab {

struct PublicationRecord {
    std::string id;
    std::vector<std::string> authors;
};

// Unicode NFC followed by whitespace trim.
std::string normalize_author_id(const std::string& raw);

struct Neighbor {
    std::size_t node = 0;
    double weight = 0.0;
};

// Undirected, no self-loops, positive weights. Nodes are sorted by id and
// adjacency lists by neighbor index, so iteration order is deterministic.
class CoauthorGraph {
public:
    CoauthorGraph() = default;

    // `edges` holds (a, b, weight) with a != b; each unordered pair at most once.
    CoauthorGraph(std::vector<std::string> nodes,
                  const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges);

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    const std::string& node(std::size_t index) const { return nodes_[index]; }
    std::optional<std::size_t> index_of(const std::string& id) const;
    bool contains(const std::string& id) const { return index_.contains(id); }

    const std::vector<Neighbor>& neighbors(std::size_t node) const { return adjacency_[node]; }
    double strength(std::size_t node) const { return strength_[node]; }

    // 0 when the pair is not connected.
    double weight(std::size_t a, std::size_t b) const;

    struct Edge {
        std::size_t a, b;
        double weight;
    };
    // Each edge once with a < b, in (a, b) order.
    std::vector<Edge> edges() const;

    bool operator==(const CoauthorGraph& other) const;

private:
    std::vector<std::string> nodes_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::vector<double> strength_;
    std::size_t edge_count_ = 0;
};

// Each record with A >= 2 authors adds 1/(A-1) to every author pair.
// Per-edge contributions are summed in a fixed order, so the result does not
// depend on record order. Throws duplicate_author.
CoauthorGraph build_graph(const std::vector<PublicationRecord>& records);

// Throws unknown_author for ids not in the graph.
CoauthorGraph induced_subgraph(const CoauthorGraph& graph, const std::set<std::string>& keep,
                               bool drop_isolated = false);

struct GraphStats {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t components = 0;
    std::size_t isolated_nodes = 0;
    std::size_t min_degree = 0;
    std::size_t max_degree = 0;
    double mean_degree = 0.0;
    double total_weight = 0.0;
    double min_weight = 0.0;
    double max_weight = 0.0;
    double mean_weight = 0.0;
};

GraphStats graph_stats(const CoauthorGraph& graph);
std::string graph_stats_json(const GraphStats& stats);

// author_a,author_b,weight with a < b.
std::string edge_list_csv(const CoauthorGraph& graph);
std::string graph_dot(const CoauthorGraph& graph);

}  // namespace bidlab
