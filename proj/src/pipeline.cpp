#include "bidlab/pipeline.hpp"

#include <cmath>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "bidlab/error.hpp"
#include "bidlab/io.hpp"

namespace bidlab {

using nlohmann::ordered_json;

namespace {

// Prefixes errors with the stage that raised them.
template <typename F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.kind(), e.code(), "stage '" + name + "': " + e.what());
    }
}

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json config_object(const PipelineConfig& cfg) {
    ordered_json j;
    j["version"] = kVersion;
    j["bids"] = cfg.bids.string();
    j["corpus"] = cfg.corpus.string();
    j["publications"] = cfg.publications.string();
    j["stopwords"] = cfg.stopwords.string();
    j["synthetic"] = cfg.synthetic ? ordered_json::parse(synth_config_json(*cfg.synthetic)) : ordered_json(nullptr);
    j["linkage"] = std::string(to_string(cfg.linkage));
    j["threshold"] = cfg.threshold;
    j["cluster_count"] = cfg.cluster_count ? ordered_json(*cfg.cluster_count) : ordered_json(nullptr);
    j["top_k"] = cfg.top_k;
    j["rank"] = {{"restart_probability", cfg.rank.restart_probability},
                 {"tolerance", cfg.rank.tolerance},
                 {"max_iterations", cfg.rank.max_iterations}};
    j["symmetrize_rank"] = cfg.symmetrize_rank;
    j["flatten"] = std::string(to_string(cfg.flatten));
    j["exclude_fatigue"] = cfg.exclude_fatigue;
    return j;
}

ordered_json correlation_object(const CorrelationResult& c) {
    return ordered_json::parse(correlation_json(c));
}

ordered_json cluster_terms_object(const std::vector<ClusterTerms>& terms, const TermDictionary& dict) {
    auto out = ordered_json::array();
    for (const auto& ct : terms) {
        ordered_json c;
        c["cluster"] = ct.cluster;
        c["size"] = ct.size;
        c["entropy"] = ct.entropy ? ordered_json(*ct.entropy) : ordered_json(nullptr);
        auto list = ordered_json::array();
        for (std::size_t r = 0; r < ct.top.size(); ++r)
            list.push_back({{"term", dict.term(ct.top[r].term)},
                            {"tfidf", ct.top[r].weight},
                            {"normalized", ct.normalized[r].weight}});
        c["terms"] = std::move(list);
        out.push_back(std::move(c));
    }
    return out;
}

ordered_json track_object(const TrackResults& t) {
    ordered_json j;
    j["submissions"] = t.bids.n_submissions();
    j["referees"] = t.bids.n_referees();
    j["linkage"] = std::string(to_string(t.submission_tree.linkage));
    j["cut_threshold"] = t.cut_threshold;
    j["clusters"] = t.clusters.size();
    j["dictionary_size"] = t.dictionary.size();
    j["undefined_submission_pairs"] = t.submission_sim.undefined_pairs;
    j["undefined_referee_pairs"] = t.referee_sim.undefined_pairs;
    j["zero_term_rows"] = t.term_sim.zero_rows;
    j["track1"] = correlation_object(t.track1);
    j["track2"] = correlation_object(t.track2);
    j["rank_converged"] = t.rank.all_converged();
    j["cluster_terms"] = cluster_terms_object(t.cluster_terms, t.dictionary);
    ordered_json corr;
    corr["labels"] = t.cluster_corr.labels;
    auto rows = ordered_json::array();
    for (std::size_t i = 0; i < t.cluster_corr.values.rows(); ++i) {
        auto row = ordered_json::array();
        for (std::size_t k = 0; k < t.cluster_corr.values.cols(); ++k)
            row.push_back(number_or_null(t.cluster_corr.values(i, k)));
        rows.push_back(std::move(row));
    }
    corr["values"] = std::move(rows);
    j["cluster_correlation"] = std::move(corr);
    j["warnings"] = t.warnings;
    return j;
}

std::vector<Document> documents_for(const Labels& submissions, const std::vector<Document>& corpus) {
    std::unordered_map<std::string, const Document*> by_id;
    for (const auto& d : corpus)
        if (!by_id.emplace(d.id, &d).second)
            throw input_error("duplicate_document", "corpus lists '" + d.id + "' twice");
    std::vector<Document> out;
    out.reserve(submissions.size());
    std::string missing;
    for (const auto& s : submissions) {
        auto it = by_id.find(s);
        if (it == by_id.end()) missing += (missing.empty() ? "" : ", ") + s;
        else out.push_back(*it->second);
    }
    if (!missing.empty()) throw input_error("missing_document", "no abstract for submissions: " + missing);
    return out;
}

}  // namespace

std::string pipeline_config_json(const PipelineConfig& cfg) { return config_object(cfg).dump(1) + "\n"; }

PipelineConfig parse_pipeline_config(const std::string& json_text) {
    PipelineConfig cfg;
    try {
        const auto j = nlohmann::json::parse(json_text);
        const auto known = config_object(cfg);
        for (const auto& [key, value] : j.items())
            if (!known.contains(key) && key != "output_dir" && key != "jobs")
                throw input_error("invalid_config", "unknown pipeline config key '" + key + "'");
        auto path = [&](const char* key, std::filesystem::path& field) {
            if (j.contains(key)) field = j.at(key).get<std::string>();
        };
        path("bids", cfg.bids);
        path("corpus", cfg.corpus);
        path("publications", cfg.publications);
        path("stopwords", cfg.stopwords);
        path("output_dir", cfg.output_dir);
        if (j.contains("synthetic") && !j.at("synthetic").is_null())
            cfg.synthetic = parse_synth_config(j.at("synthetic").dump());
        if (j.contains("linkage")) cfg.linkage = parse_linkage(j.at("linkage").get<std::string>());
        if (j.contains("threshold")) cfg.threshold = j.at("threshold").get<double>();
        if (j.contains("cluster_count") && !j.at("cluster_count").is_null())
            cfg.cluster_count = j.at("cluster_count").get<std::size_t>();
        if (j.contains("top_k")) cfg.top_k = j.at("top_k").get<std::size_t>();
        if (j.contains("rank")) {
            const auto& r = j.at("rank");
            cfg.rank.restart_probability = r.value("restart_probability", cfg.rank.restart_probability);
            cfg.rank.tolerance = r.value("tolerance", cfg.rank.tolerance);
            cfg.rank.max_iterations = r.value("max_iterations", cfg.rank.max_iterations);
        }
        if (j.contains("symmetrize_rank")) cfg.symmetrize_rank = j.at("symmetrize_rank").get<bool>();
        if (j.contains("flatten")) cfg.flatten = parse_flatten_mode(j.at("flatten").get<std::string>());
        if (j.contains("exclude_fatigue")) cfg.exclude_fatigue = j.at("exclude_fatigue").get<bool>();
        if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<unsigned>();
    } catch (const nlohmann::json::exception& e) {
        throw input_error("invalid_config", std::string("pipeline config: ") + e.what());
    }
    cfg.rank.validate();
    return cfg;
}

std::string terms_csv(const std::vector<ClusterTerms>& terms, const TermDictionary& dict) {
    std::string out = "cluster,rank,term,tfidf,normalized\n";
    for (const auto& ct : terms)
        for (std::size_t r = 0; r < ct.top.size(); ++r)
            out += ct.cluster + "," + std::to_string(r + 1) + "," + csv_escape(dict.term(ct.top[r].term)) + "," +
                   format_number(ct.top[r].weight) + "," + format_number(ct.normalized[r].weight) + "\n";
    return out;
}

std::string entropy_csv(const std::vector<ClusterTerms>& terms) {
    std::string out = "cluster,size,entropy\n";
    for (const auto& ct : terms)
        out += ct.cluster + "," + std::to_string(ct.size) + "," +
               (ct.entropy ? format_number(*ct.entropy) : std::string()) + "\n";
    return out;
}

std::string group_table_csv(const std::vector<std::string>& owners, const std::vector<std::vector<double>>& rows,
                            const TermDictionary& dict) {
    std::string out = "group";
    for (const auto& t : dict.terms()) out += "," + csv_escape(t);
    out += "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out += csv_escape(owners[i]);
        for (double v : rows[i]) out += "," + format_number(v);
        out += "\n";
    }
    return out;
}

std::vector<ClusterTerms> describe_clusters(const std::vector<WeightVector>& weights, const ClusterSet& clusters,
                                            std::size_t top_k, std::vector<std::string>& warnings) {
    if (top_k == 0) throw input_error("invalid_argument", "top_k must be positive");
    std::vector<ClusterTerms> out;
    for (std::size_t c = 0; c < weights.size(); ++c) {
        ClusterTerms ct;
        ct.cluster = weights[c].owner;
        ct.size = clusters.members[c].size();
        ct.top = top_k_terms(weights[c], top_k);
        if (ct.top.empty()) {
            warnings.push_back("cluster " + ct.cluster + " has no positive term weight; entropy undefined");
        } else {
            ct.normalized = top_k_normalize(weights[c], top_k);
            std::vector<double> p;
            for (const auto& tw : ct.normalized) p.push_back(tw.weight);
            ct.entropy = entropy(p);
        }
        out.push_back(std::move(ct));
    }
    return out;
}

PipelineInputs load_inputs(const PipelineConfig& cfg) {
    PipelineInputs in;
    if (cfg.synthetic) {
        auto conf = generate(*cfg.synthetic);
        in.raw_bids = std::move(conf.bids);
        in.corpus = std::move(conf.corpus);
        in.publications = std::move(conf.publications);
    } else {
        in.raw_bids = read_bid_csv(cfg.bids);
        in.corpus = read_corpus_jsonl(cfg.corpus);
        in.publications = read_publications_jsonl(cfg.publications);
    }
    in.stopwords = cfg.stopwords.empty() ? StopwordList::english() : StopwordList::from_file(cfg.stopwords.string());
    return in;
}

TrackResults run_tracks(const BidMatrix& bids, const std::vector<Document>& corpus, const CoauthorGraph& graph,
                        const StopwordList& stopwords, const PipelineConfig& cfg) {
    TrackResults t;
    t.bids = bids;

    // Track 1
    t.submission_sim = stage("submission similarity", [&] { return submission_similarity(bids, cfg.jobs); });
    if (t.submission_sim.undefined_pairs > 0)
        t.warnings.push_back(std::to_string(t.submission_sim.undefined_pairs) +
                             " submission pairs share no comparable bid; stored as 0");
    t.submission_tree = stage("submission dendrogram", [&] { return build_dendrogram(t.submission_sim.matrix, cfg.linkage); });
    t.cut_threshold = cfg.cluster_count
                          ? stage("cut", [&] { return threshold_for_cluster_count(t.submission_tree, *cfg.cluster_count); })
                          : cfg.threshold;
    t.clusters = stage("cut", [&] { return cut_dendrogram(t.submission_tree, t.cut_threshold); });

    const auto processed = stage("text preprocessing", [&] {
        return preprocess_corpus(documents_for(bids.submissions(), corpus), stopwords);
    });
    t.dictionary = TermDictionary::from_documents(processed);
    stage("cluster terms", [&] {
        t.cluster_freqs = cluster_frequencies(processed, t.clusters, t.dictionary);
        t.cluster_weights = tfidf(t.cluster_freqs);
        t.cluster_terms = describe_clusters(t.cluster_weights, t.clusters, cfg.top_k, t.warnings);
        t.cluster_corr = correlate_term_vectors(t.cluster_weights);
    });
    t.term_sim = stage("term similarity", [&] {
        return cosine_similarity_matrix(document_tfidf(processed, t.dictionary), cfg.jobs);
    });
    for (const auto& id : t.term_sim.zero_rows)
        t.warnings.push_back("document " + id + " has an all-zero TFIDF row");
    t.track1 = stage("track 1 correlation", [&] {
        return correlate_matrices(t.submission_sim.matrix.values(), t.term_sim.matrix.values(), cfg.flatten);
    });

    // Track 2
    t.referee_sim = stage("referee similarity", [&] { return referee_similarity(bids, cfg.jobs); });
    if (t.referee_sim.undefined_pairs > 0)
        t.warnings.push_back(std::to_string(t.referee_sim.undefined_pairs) +
                             " referee pairs share no comparable bid; stored as 0");
    t.referee_tree = stage("referee dendrogram", [&] { return build_dendrogram(t.referee_sim.matrix, cfg.linkage); });
    t.rank = stage("relative rank", [&] { return referee_rank_matrix(graph, bids.referees(), cfg.rank, cfg.jobs); });
    for (std::size_t l = 0; l < t.rank.labels.size(); ++l)
        if (!t.rank.converged[l])
            t.warnings.push_back("relative rank from " + t.rank.labels[l] + " did not converge");
    t.rank_used = cfg.symmetrize_rank ? symmetrized(t.rank.values) : t.rank.values;
    t.track2 = stage("track 2 correlation", [&] {
        return correlate_matrices(t.referee_sim.matrix.values(), t.rank_used, cfg.flatten);
    });
    return t;
}

ReproduceReport reproduce(const PipelineConfig& cfg) {
    ReproduceReport report;
    const auto inputs = stage("load inputs", [&] { return load_inputs(cfg); });
    const auto graph = stage("co-authorship graph", [&] { return build_graph(inputs.publications); });
    report.graph = graph_stats(graph);

    std::vector<std::string> warnings;
    std::set<std::string> offline;
    for (const auto& r : inputs.raw_bids.referees())
        if (!graph.contains(r)) offline.insert(r);
    for (const auto& r : offline) warnings.push_back("referee " + r + " has no publications; excluded");

    auto filtered = stage("filter bids", [&] { return filter_bids(transform_bids(inputs.raw_bids), offline); });
    report.filter = filtered.report;
    report.fatigue_referees = fatigue_referees(filtered.matrix);

    report.all = run_tracks(filtered.matrix, inputs.corpus, graph, inputs.stopwords, cfg);
    if (!report.fatigue_referees.empty()) {
        const std::set<std::string> fatigue(report.fatigue_referees.begin(), report.fatigue_referees.end());
        auto reduced = stage("remove fatigue referees", [&] { return filter_bids(filtered.matrix, fatigue); });
        report.no_fatigue = run_tracks(reduced.matrix, inputs.corpus, graph, inputs.stopwords, cfg);
    } else if (cfg.exclude_fatigue) {
        warnings.push_back("no fatigue referees found; primary outputs use every referee");
    }

    ordered_json j;
    j["version"] = kVersion;
    j["config"] = config_object(cfg);
    j["filter"] = {{"empty_rows_removed", report.filter.empty_rows_removed},
                   {"empty_cols_removed", report.filter.empty_cols_removed},
                   {"excluded_cols_removed", report.filter.excluded_cols_removed},
                   {"rows_removed_after_exclusion", report.filter.rows_removed_after_exclusion},
                   {"excluded_not_found", report.filter.excluded_not_found}};
    j["graph"] = ordered_json::parse(graph_stats_json(report.graph));
    j["fatigue_referees"] = report.fatigue_referees;
    j["primary"] = cfg.exclude_fatigue && report.no_fatigue ? "no_fatigue" : "all";
    j["all"] = track_object(report.all);
    j["no_fatigue"] = report.no_fatigue ? track_object(*report.no_fatigue) : ordered_json(nullptr);
    if (report.no_fatigue) {
        j["fatigue_effect"] = {{"track1_delta", report.no_fatigue->track1.r - report.all.track1.r},
                               {"track2_delta", report.no_fatigue->track2.r - report.all.track2.r}};
    }
    j["warnings"] = warnings;
    report.report_json = j.dump(1) + "\n";
    return report;
}

void write_outputs(const ReproduceReport& report, const PipelineConfig& cfg) {
    const auto& dir = cfg.output_dir;
    const TrackResults& t = cfg.exclude_fatigue && report.no_fatigue ? *report.no_fatigue : report.all;
    write_text_file(dir / "b_prime.csv", bid_csv(t.bids));
    write_text_file(dir / "s_b.csv", matrix_csv(t.submission_sim.matrix.as_labeled()));
    write_text_file(dir / "s_t.csv", matrix_csv(t.term_sim.matrix.as_labeled()));
    write_text_file(dir / "r_b.csv", matrix_csv(t.referee_sim.matrix.as_labeled()));
    write_text_file(dir / "r_g.csv", matrix_csv({t.rank.labels, t.rank.labels, t.rank_used}));
    write_text_file(dir / "rank_meta.json", rank_metadata_json(t.rank));
    write_text_file(dir / "dendrogram.newick", to_newick(t.submission_tree));
    write_text_file(dir / "dendrogram.json", dendrogram_json(t.submission_tree));
    write_text_file(dir / "referee_dendrogram.newick", to_newick(t.referee_tree));
    write_text_file(dir / "referee_dendrogram.json", dendrogram_json(t.referee_tree));
    write_text_file(dir / "clusters.json", clusters_json(t.clusters));
    write_text_file(dir / "terms.csv", terms_csv(t.cluster_terms, t.dictionary));
    write_text_file(dir / "entropy.csv", entropy_csv(t.cluster_terms));
    std::vector<std::string> owners;
    std::vector<std::vector<double>> rows;
    for (const auto& w : t.cluster_weights) {
        owners.push_back(w.owner);
        rows.push_back(w.weights);
    }
    write_text_file(dir / "cluster_tfidf.csv", group_table_csv(owners, rows, t.dictionary));
    write_text_file(dir / "cluster_corr.csv",
                    matrix_csv({t.cluster_corr.labels, t.cluster_corr.labels, t.cluster_corr.values}));
    write_text_file(dir / "report.json", report.report_json);
    write_text_file(dir / "run_config.json", pipeline_config_json(cfg));
}

}  // namespace bidlab
