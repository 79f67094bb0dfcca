#include "bidlab/graph.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include <json.hpp>
#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "bidlab/error.hpp"
#include "bidlab/io.hpp"

namespace bidlab {

std::string normalize_author_id(const std::string& raw) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    std::string out;
    if (U_SUCCESS(status)) {
        const auto normalized = nfc->normalize(icu::UnicodeString::fromUTF8(raw), status);
        if (U_SUCCESS(status)) normalized.toUTF8String(out);
    }
    if (U_FAILURE(status)) out = raw;
    const auto b = out.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = out.find_last_not_of(" \t\r\n");
    return out.substr(b, e - b + 1);
}

CoauthorGraph::CoauthorGraph(std::vector<std::string> nodes,
                             const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges)
    : nodes_(std::move(nodes)), adjacency_(nodes_.size()), strength_(nodes_.size(), 0.0) {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (!index_.emplace(nodes_[i], i).second)
            throw input_error("duplicate_label", "duplicate author '" + nodes_[i] + "'");
    for (const auto& [a, b, w] : edges) {
        if (a == b || a >= nodes_.size() || b >= nodes_.size() || !(w > 0.0))
            throw input_error("invalid_edge", "edges need two distinct known nodes and a positive weight");
        adjacency_[a].push_back({b, w});
        adjacency_[b].push_back({a, w});
        ++edge_count_;
    }
    for (std::size_t i = 0; i < adjacency_.size(); ++i) {
        auto& adj = adjacency_[i];
        std::sort(adj.begin(), adj.end(), [](const Neighbor& x, const Neighbor& y) { return x.node < y.node; });
        for (std::size_t k = 1; k < adj.size(); ++k)
            if (adj[k].node == adj[k - 1].node)
                throw input_error("invalid_edge", "edge '" + nodes_[i] + "' - '" + nodes_[adj[k].node] +
                                                      "' listed twice");
        for (const auto& nb : adj) strength_[i] += nb.weight;
    }
}

std::optional<std::size_t> CoauthorGraph::index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

double CoauthorGraph::weight(std::size_t a, std::size_t b) const {
    const auto& adj = adjacency_[a];
    auto it = std::lower_bound(adj.begin(), adj.end(), b,
                               [](const Neighbor& x, std::size_t node) { return x.node < node; });
    return it != adj.end() && it->node == b ? it->weight : 0.0;
}

std::vector<CoauthorGraph::Edge> CoauthorGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (std::size_t a = 0; a < adjacency_.size(); ++a)
        for (const auto& nb : adjacency_[a])
            if (a < nb.node) out.push_back({a, nb.node, nb.weight});
    return out;
}

bool CoauthorGraph::operator==(const CoauthorGraph& other) const {
    if (nodes_ != other.nodes_ || edge_count_ != other.edge_count_) return false;
    for (std::size_t i = 0; i < adjacency_.size(); ++i) {
        const auto& x = adjacency_[i];
        const auto& y = other.adjacency_[i];
        if (x.size() != y.size()) return false;
        for (std::size_t k = 0; k < x.size(); ++k)
            if (x[k].node != y[k].node || x[k].weight != y[k].weight) return false;
    }
    return true;
}

CoauthorGraph build_graph(const std::vector<PublicationRecord>& records) {
    std::map<std::string, std::size_t> ids;  // ordered: node index follows sorted id
    std::vector<std::vector<std::string>> normalized;
    normalized.reserve(records.size());
    for (const auto& r : records) {
        std::vector<std::string> authors;
        for (const auto& a : r.authors) {
            auto id = normalize_author_id(a);
            if (id.empty()) throw input_error("empty_author", "record '" + r.id + "' has an empty author id");
            authors.push_back(std::move(id));
        }
        auto sorted = authors;
        std::sort(sorted.begin(), sorted.end());
        if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end())
            throw input_error("duplicate_author", "record '" + r.id + "' lists author '" + *dup + "' twice");
        for (const auto& a : sorted) ids.emplace(a, 0);
        normalized.push_back(std::move(sorted));
    }
    std::vector<std::string> nodes;
    nodes.reserve(ids.size());
    for (auto& [id, idx] : ids) {
        idx = nodes.size();
        nodes.push_back(id);
    }

    // Denominators A(m) - 1 per pair; summed in ascending order below so the
    // total is independent of record order.
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> contributions;
    for (const auto& authors : normalized) {
        if (authors.size() < 2) continue;
        const std::size_t denom = authors.size() - 1;
        for (std::size_t x = 0; x < authors.size(); ++x)
            for (std::size_t y = x + 1; y < authors.size(); ++y)
                contributions[{ids.at(authors[x]), ids.at(authors[y])}].push_back(denom);
    }
    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    edges.reserve(contributions.size());
    for (auto& [pair, denoms] : contributions) {
        std::sort(denoms.begin(), denoms.end());
        double w = 0.0;
        for (auto d : denoms) w += 1.0 / static_cast<double>(d);
        edges.emplace_back(pair.first, pair.second, w);
    }
    return CoauthorGraph(std::move(nodes), edges);
}

CoauthorGraph induced_subgraph(const CoauthorGraph& graph, const std::set<std::string>& keep,
                               bool drop_isolated) {
    std::vector<std::string> unknown;
    for (const auto& id : keep)
        if (!graph.contains(id)) unknown.push_back(id);
    if (!unknown.empty()) {
        std::string list;
        for (const auto& u : unknown) list += (list.empty() ? "" : ", ") + u;
        throw input_error("unknown_author", "authors not in graph: " + list);
    }

    std::vector<bool> kept(graph.node_count(), false);
    for (const auto& id : keep) kept[*graph.index_of(id)] = true;
    if (drop_isolated) {
        for (std::size_t i = 0; i < graph.node_count(); ++i) {
            if (!kept[i]) continue;
            const auto& adj = graph.neighbors(i);
            kept[i] = std::any_of(adj.begin(), adj.end(), [&](const Neighbor& nb) {
                return keep.contains(graph.node(nb.node));
            });
        }
    }
    std::vector<std::size_t> new_index(graph.node_count(), std::numeric_limits<std::size_t>::max());
    std::vector<std::string> nodes;
    for (std::size_t i = 0; i < graph.node_count(); ++i)
        if (kept[i]) {
            new_index[i] = nodes.size();
            nodes.push_back(graph.node(i));
        }
    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    for (const auto& e : graph.edges())
        if (kept[e.a] && kept[e.b]) edges.emplace_back(new_index[e.a], new_index[e.b], e.weight);
    return CoauthorGraph(std::move(nodes), edges);
}

GraphStats graph_stats(const CoauthorGraph& graph) {
    GraphStats s;
    s.nodes = graph.node_count();
    s.edges = graph.edge_count();
    if (s.nodes == 0) return s;

    std::vector<std::size_t> component(s.nodes, std::numeric_limits<std::size_t>::max());
    std::vector<std::size_t> stack;
    s.min_degree = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < s.nodes; ++i) {
        const std::size_t deg = graph.neighbors(i).size();
        s.min_degree = std::min(s.min_degree, deg);
        s.max_degree = std::max(s.max_degree, deg);
        if (deg == 0) ++s.isolated_nodes;
        if (component[i] != std::numeric_limits<std::size_t>::max()) continue;
        component[i] = s.components;
        stack.push_back(i);
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            for (const auto& nb : graph.neighbors(u))
                if (component[nb.node] == std::numeric_limits<std::size_t>::max()) {
                    component[nb.node] = s.components;
                    stack.push_back(nb.node);
                }
        }
        ++s.components;
    }
    s.mean_degree = 2.0 * static_cast<double>(s.edges) / static_cast<double>(s.nodes);
    if (s.edges > 0) {
        s.min_weight = std::numeric_limits<double>::infinity();
        for (const auto& e : graph.edges()) {
            s.total_weight += e.weight;
            s.min_weight = std::min(s.min_weight, e.weight);
            s.max_weight = std::max(s.max_weight, e.weight);
        }
        s.mean_weight = s.total_weight / static_cast<double>(s.edges);
    }
    return s;
}

std::string graph_stats_json(const GraphStats& s) {
    nlohmann::ordered_json j;
    j["nodes"] = s.nodes;
    j["edges"] = s.edges;
    j["components"] = s.components;
    j["isolated_nodes"] = s.isolated_nodes;
    j["min_degree"] = s.min_degree;
    j["max_degree"] = s.max_degree;
    j["mean_degree"] = s.mean_degree;
    j["total_weight"] = s.total_weight;
    j["min_weight"] = s.min_weight;
    j["max_weight"] = s.max_weight;
    j["mean_weight"] = s.mean_weight;
    return j.dump(1) + "\n";
}

std::string edge_list_csv(const CoauthorGraph& graph) {
    std::string out = "author_a,author_b,weight\n";
    for (const auto& e : graph.edges())
        out += csv_escape(graph.node(e.a)) + "," + csv_escape(graph.node(e.b)) + "," +
               format_number(e.weight) + "\n";
    return out;
}

std::string graph_dot(const CoauthorGraph& graph) {
    auto quote = [](const std::string& s) {
        std::string q = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') q += '\\';
            q += c;
        }
        return q + "\"";
    };
    std::string out = "graph coauthors {\n";
    for (const auto& id : graph.nodes()) out += "  " + quote(id) + ";\n";
    for (const auto& e : graph.edges())
        out += "  " + quote(graph.node(e.a)) + " -- " + quote(graph.node(e.b)) +
               " [weight=" + format_number(e.weight) + "];\n";
    return out + "}\n";
}

}  // namespace bidlab
