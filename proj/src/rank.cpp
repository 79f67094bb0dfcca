#include "bidlab/rank.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "bidlab/error.hpp"
#include "bidlab/parallel.hpp"

namespace bidlab {

void RankConfig::validate() const {
    if (!(restart_probability > 0.0 && restart_probability < 1.0))
        throw input_error("invalid_config", "restart probability must lie in (0, 1)");
    if (!(tolerance > 0.0)) throw input_error("invalid_config", "rank tolerance must be > 0");
    if (max_iterations == 0) throw input_error("invalid_config", "max_iterations must be positive");
}

RankVector relative_rank(const CoauthorGraph& graph, const std::string& source,
                         const RankConfig& config) {
    config.validate();
    const auto src = graph.index_of(source);
    if (!src) throw input_error("unknown_author", "source '" + source + "' is not in the graph");

    const std::size_t n = graph.node_count();
    const double alpha = config.restart_probability;
    RankVector out;
    out.scores.assign(n, 0.0);
    out.scores[*src] = 1.0;
    std::vector<double> next(n);

    for (out.iterations = 1; out.iterations <= config.max_iterations; ++out.iterations) {
        std::fill(next.begin(), next.end(), 0.0);
        double to_source = alpha;
        for (std::size_t u = 0; u < n; ++u) {
            const double mass = out.scores[u];
            if (mass == 0.0) continue;
            const double strength = graph.strength(u);
            if (strength == 0.0) {
                to_source += (1.0 - alpha) * mass;
                continue;
            }
            const double share = (1.0 - alpha) * mass / strength;
            for (const auto& nb : graph.neighbors(u)) next[nb.node] += share * nb.weight;
        }
        next[*src] += to_source;

        double change = 0.0;
        for (std::size_t u = 0; u < n; ++u) change += std::abs(next[u] - out.scores[u]);
        out.scores.swap(next);
        out.last_change = change;
        if (change < config.tolerance) {
            out.converged = true;
            return out;
        }
    }
    out.iterations = config.max_iterations;
    return out;
}

bool RelativeRankMatrix::all_converged() const {
    return std::all_of(converged.begin(), converged.end(), [](bool c) { return c; });
}

RelativeRankMatrix referee_rank_matrix(const CoauthorGraph& graph, const Labels& referees,
                                       const RankConfig& config, unsigned jobs) {
    config.validate();
    std::string missing;
    std::vector<std::size_t> columns;
    for (const auto& r : referees) {
        if (auto idx = graph.index_of(r)) columns.push_back(*idx);
        else missing += (missing.empty() ? "" : ", ") + r;
    }
    if (!missing.empty())
        throw input_error("missing_referees", "referees absent from the co-authorship graph: " + missing);

    const std::size_t m = referees.size();
    RelativeRankMatrix out{referees, DenseMatrix(m, m), std::vector<std::size_t>(m, 0),
                           std::vector<bool>(m, false), config};
    std::vector<char> converged(m, 0);  // vector<bool> is not safe to write concurrently
    parallel_for(m, jobs, [&](std::size_t l) {
        const auto rank = relative_rank(graph, referees[l], config);
        for (std::size_t j = 0; j < m; ++j) out.values(l, j) = rank.scores[columns[j]];
        out.iterations[l] = rank.iterations;
        converged[l] = rank.converged ? 1 : 0;
    });
    for (std::size_t l = 0; l < m; ++l) out.converged[l] = converged[l] != 0;
    return out;
}

DenseMatrix symmetrized(const DenseMatrix& m) {
    DenseMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = 0.5 * (m(i, j) + m(j, i));
    return out;
}

std::string rank_metadata_json(const RelativeRankMatrix& m) {
    nlohmann::ordered_json j;
    j["alpha"] = m.config.restart_probability;
    j["tolerance"] = m.config.tolerance;
    j["max_iterations"] = m.config.max_iterations;
    j["labels"] = m.labels;
    j["iterations"] = m.iterations;
    auto conv = nlohmann::ordered_json::array();
    for (bool c : m.converged) conv.push_back(c);
    j["converged"] = std::move(conv);
    return j.dump(1) + "\n";
}

}  // namespace bidlab
