#include "bidlab/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

#include "bidlab/error.hpp"
#include "bidlab/io.hpp"

namespace bidlab {

namespace {

// Candidate distances closer than this are treated as ties.
constexpr double kTieTolerance = 1e-12;

}  // namespace

std::string_view to_string(Linkage linkage) {
    switch (linkage) {
        case Linkage::single: return "single";
        case Linkage::complete: return "complete";
        case Linkage::average: return "average";
        case Linkage::ward: return "ward";
    }
    return "average";
}

Linkage parse_linkage(std::string_view name) {
    if (name == "single") return Linkage::single;
    if (name == "complete") return Linkage::complete;
    if (name == "average") return Linkage::average;
    if (name == "ward") return Linkage::ward;
    throw input_error("invalid_argument", "unknown linkage '" + std::string(name) + "'");
}

Dendrogram build_dendrogram(const SimilarityMatrix& similarity, Linkage linkage) {
    const std::size_t n = similarity.size();
    if (n < 2) throw input_error("too_few_entities", "clustering needs at least 2 entities");

    // Slot i holds the cluster whose smallest leaf is i, so slot order is the
    // tie-break order.
    DenseMatrix dist(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double d = i == j ? 0.0 : 1.0 - similarity(i, j);
            dist(i, j) = linkage == Linkage::ward ? d * d : d;
        }

    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), 0);
    std::vector<std::size_t> node_of(active), size(n, 1);

    Dendrogram tree;
    tree.leaves = similarity.labels();
    tree.linkage = linkage;
    tree.merges.reserve(n - 1);
    double last_height = 0.0;

    while (active.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x < active.size(); ++x)
            for (std::size_t y = x + 1; y < active.size(); ++y)
                best = std::min(best, dist(active[x], active[y]));
        std::size_t ax = 0, ay = 0;
        bool found = false;
        for (std::size_t x = 0; x < active.size() && !found; ++x)
            for (std::size_t y = x + 1; y < active.size(); ++y)
                if (dist(active[x], active[y]) <= best + kTieTolerance) {
                    ax = x;
                    ay = y;
                    found = true;
                    break;
                }

        const std::size_t a = active[ax], b = active[ay];
        const double raw = dist(a, b);
        double height = linkage == Linkage::ward ? std::sqrt(std::max(raw, 0.0)) : raw;
        height = std::max(height, last_height);
        last_height = height;
        tree.merges.push_back({node_of[a], node_of[b], height, size[a] + size[b]});

        const double na = static_cast<double>(size[a]), nb = static_cast<double>(size[b]);
        for (std::size_t k : active) {
            if (k == a || k == b) continue;
            const double dka = dist(k, a), dkb = dist(k, b);
            double d = 0.0;
            switch (linkage) {
                case Linkage::single: d = std::min(dka, dkb); break;
                case Linkage::complete: d = std::max(dka, dkb); break;
                case Linkage::average: d = (na * dka + nb * dkb) / (na + nb); break;
                case Linkage::ward: {
                    const double nk = static_cast<double>(size[k]);
                    d = ((na + nk) * dka + (nb + nk) * dkb - nk * raw) / (na + nb + nk);
                    break;
                }
            }
            dist(k, a) = d;
            dist(a, k) = d;
        }
        size[a] += size[b];
        node_of[a] = n + tree.merges.size() - 1;
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(ay));
    }
    return tree;
}

std::vector<std::string> ClusterSet::member_ids(std::size_t cluster) const {
    std::vector<std::string> ids;
    for (auto leaf : members[cluster]) ids.push_back(leaves[leaf]);
    return ids;
}

std::vector<std::size_t> ClusterSet::assignment() const {
    std::vector<std::size_t> out(leaves.size(), 0);
    for (std::size_t c = 0; c < members.size(); ++c)
        for (auto leaf : members[c]) out[leaf] = c;
    return out;
}

ClusterSet cut_dendrogram(const Dendrogram& dendrogram, double threshold) {
    if (!(threshold >= 0.0)) throw input_error("invalid_argument", "threshold must be >= 0");
    const std::size_t n = dendrogram.leaves.size();

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    // Any leaf below a node stands in for it.
    std::vector<std::size_t> leaf_of(n + dendrogram.merges.size());
    std::iota(leaf_of.begin(), leaf_of.begin() + static_cast<std::ptrdiff_t>(n), 0);
    for (std::size_t k = 0; k < dendrogram.merges.size(); ++k) {
        const auto& m = dendrogram.merges[k];
        leaf_of[n + k] = leaf_of[m.left];
        if (m.height <= threshold) {
            const auto ra = find(leaf_of[m.left]), rb = find(leaf_of[m.right]);
            if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
        }
    }

    ClusterSet out;
    out.leaves = dendrogram.leaves;
    out.threshold = threshold;
    std::unordered_map<std::size_t, std::size_t> index_of_root;
    for (std::size_t leaf = 0; leaf < n; ++leaf) {
        const auto root = find(leaf);
        auto [it, inserted] = index_of_root.emplace(root, out.members.size());
        if (inserted) out.members.emplace_back();
        out.members[it->second].push_back(leaf);
    }
    return out;
}

double threshold_for_cluster_count(const Dendrogram& dendrogram, std::size_t k) {
    const std::size_t n = dendrogram.leaves.size();
    if (k == 0 || k > n)
        throw input_error("invalid_argument", "cluster count must be in [1, " + std::to_string(n) + "]");
    const auto& m = dendrogram.merges;
    if (k == 1) return dendrogram.root_height();
    const double upper = m[n - k].height;
    const double lower = k == n ? 0.0 : m[n - k - 1].height;
    if (!(upper > lower))
        throw numerical_error("ambiguous_cut", "tied merge heights: no threshold yields exactly " +
                                                   std::to_string(k) + " clusters");
    return k == n ? upper / 2.0 : (lower + upper) / 2.0;
}

namespace {

std::string newick_label(const std::string& label) {
    if (label.find_first_of(" ()[]':;,\t") == std::string::npos && !label.empty()) return label;
    std::string out = "'";
    for (char c : label) {
        if (c == '\'') out += '\'';
        out += c;
    }
    return out + "'";
}

}  // namespace

std::string to_newick(const Dendrogram& dendrogram) {
    const std::size_t n = dendrogram.leaves.size();
    if (n == 1) return newick_label(dendrogram.leaves[0]) + ";\n";
    auto height_of = [&](std::size_t node) { return node < n ? 0.0 : dendrogram.merges[node - n].height; };
    std::string out;
    std::function<void(std::size_t)> emit = [&](std::size_t node) {
        if (node < n) {
            out += newick_label(dendrogram.leaves[node]);
            return;
        }
        const auto& m = dendrogram.merges[node - n];
        out += '(';
        emit(m.left);
        out += ':' + format_number(m.height - height_of(m.left)) + ',';
        emit(m.right);
        out += ':' + format_number(m.height - height_of(m.right)) + ')';
    };
    emit(n + dendrogram.merges.size() - 1);
    return out + ";\n";
}

std::string dendrogram_json(const Dendrogram& dendrogram) {
    nlohmann::ordered_json j;
    j["linkage"] = std::string(to_string(dendrogram.linkage));
    j["leaves"] = dendrogram.leaves;
    auto merges = nlohmann::ordered_json::array();
    for (const auto& m : dendrogram.merges)
        merges.push_back({{"left", m.left}, {"right", m.right}, {"height", m.height}, {"size", m.size}});
    j["merges"] = std::move(merges);
    return j.dump(1) + "\n";
}

std::string clusters_json(const ClusterSet& clusters) {
    nlohmann::ordered_json j;
    j["threshold"] = clusters.threshold;
    j["leaves"] = clusters.leaves;
    nlohmann::ordered_json map = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < clusters.size(); ++c) map[std::to_string(c)] = clusters.member_ids(c);
    j["clusters"] = std::move(map);
    return j.dump(1) + "\n";
}

ClusterSet parse_clusters_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        ClusterSet out;
        out.threshold = j.value("threshold", 0.0);
        out.leaves = j.at("leaves").get<Labels>();
        std::unordered_map<std::string, std::size_t> leaf_index;
        for (std::size_t i = 0; i < out.leaves.size(); ++i) leaf_index.emplace(out.leaves[i], i);

        const auto& map = j.at("clusters");
        out.members.resize(map.size());
        std::vector<bool> seen(out.leaves.size(), false);
        for (const auto& [key, ids] : map.items()) {
            const std::size_t c = std::stoul(key);
            if (c >= out.members.size())
                throw input_error("parse_error", "cluster index " + key + " out of range");
            for (const auto& id : ids.get<Labels>()) {
                auto it = leaf_index.find(id);
                if (it == leaf_index.end() || seen[it->second])
                    throw input_error("parse_error", "cluster member '" + id + "' is unknown or repeated");
                seen[it->second] = true;
                out.members[c].push_back(it->second);
            }
        }
        if (std::find(seen.begin(), seen.end(), false) != seen.end())
            throw input_error("parse_error", "clusters do not cover every leaf");
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw input_error("parse_error", std::string("clusters JSON: ") + e.what());
    } catch (const std::logic_error& e) {
        throw input_error("parse_error", std::string("clusters JSON: ") + e.what());
    }
}

}  // namespace bidlab
