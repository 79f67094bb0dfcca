#include "cli.hpp"

#include <cstdlib>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bidlab/error.hpp"
#include "bidlab/io.hpp"
#include "bidlab/pipeline.hpp"

namespace bidlab {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

fs::path default_output_root() {
    if (const char* env = std::getenv("BIDLAB_OUTPUT_ROOT"); env && *env) return env;
    return "bidlab-out";
}

std::vector<std::string> split_ids(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    for (const auto& item : raw) {
        std::stringstream ss(item);
        std::string id;
        while (std::getline(ss, id, ','))
            if (!id.empty()) out.push_back(id);
    }
    return out;
}

// Cluster-level term tables shared by the terms and entropy commands.
struct ClusterTables {
    TermDictionary dictionary;
    std::vector<WeightVector> weights;
    std::vector<ClusterTerms> terms;
    TermCorrelationTable correlation;
};

ClusterTables cluster_tables(const fs::path& corpus_path, const fs::path& clusters_path,
                             const fs::path& stopwords_path, std::size_t top_k,
                             std::vector<std::string>& warnings) {
    const auto clusters = parse_clusters_json(read_text_file(clusters_path));
    const auto corpus = read_corpus_jsonl(corpus_path);
    std::unordered_map<std::string, const Document*> by_id;
    for (const auto& d : corpus) by_id.emplace(d.id, &d);
    std::vector<Document> docs;
    for (const auto& id : clusters.leaves) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw input_error("missing_document", "no abstract for submission '" + id + "'");
        docs.push_back(*it->second);
    }
    const auto stopwords = stopwords_path.empty() ? StopwordList::english()
                                                  : StopwordList::from_file(stopwords_path.string());
    const auto processed = preprocess_corpus(docs, stopwords);
    ClusterTables t;
    t.dictionary = TermDictionary::from_documents(processed);
    t.weights = tfidf(cluster_frequencies(processed, clusters, t.dictionary));
    t.terms = describe_clusters(t.weights, clusters, top_k, warnings);
    t.correlation = correlate_term_vectors(t.weights);
    return t;
}

class Runner {
public:
    Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(int argc, const char* const* argv);

private:
    void finish(const std::string& command, ordered_json params, const std::vector<std::string>& warnings) {
        ordered_json j;
        j["command"] = command;
        j["version"] = kVersion;
        j["parameters"] = std::move(params);
        j["warnings"] = warnings;
        write_text_file(out_dir_ / (command + ".meta.json"), j.dump(1) + "\n");
        for (const auto& w : warnings) err_ << "warning: " << w << "\n";
        out_ << command << ": wrote " << out_dir_.string() << "\n";
    }

    void cmd_transform();
    void cmd_sim(bool referees);
    void cmd_cluster();
    void cmd_terms(bool entropy_only);
    void cmd_doc_tfidf();
    void cmd_cosine();
    void cmd_graph();
    int cmd_rank();
    void cmd_corr();
    void cmd_reproduce(CLI::App& sub);
    void cmd_synth();

    std::ostream& out_;
    std::ostream& err_;

    // Shared
    fs::path out_dir_;
    unsigned jobs_ = 1;
    bool error_json_ = false;

    std::string bids_, corpus_, publications_, stopwords_, similarity_, clusters_path_, matrix_;
    std::string matrix_a_, matrix_b_, config_path_, synth_config_path_;
    std::vector<std::string> exclude_;
    bool no_filter_ = false, exclude_fatigue_ = false, symmetrize_ = false, synthetic_ = false;
    std::string linkage_ = "average", flatten_ = "full", tree_name_ = "dendrogram", corr_name_ = "correlation";
    double threshold_ = 1.1;
    std::size_t cluster_count_ = 0, top_k_ = 10;
    RankConfig rank_;
    std::uint64_t seed_ = 42;
    CLI::Option* threshold_opt_ = nullptr;
    CLI::Option* clusters_opt_ = nullptr;
    CLI::Option* seed_opt_ = nullptr;
};

void Runner::cmd_transform() {
    const auto raw = read_bid_csv(bids_);
    auto transformed = transform_bids(raw);
    std::vector<std::string> warnings;
    ordered_json params{{"bids", bids_}, {"filter", !no_filter_}, {"exclude_fatigue", exclude_fatigue_}};
    if (no_filter_) {
        if (!exclude_.empty() || !publications_.empty() || exclude_fatigue_)
            throw input_error("invalid_argument", "--no-filter cannot be combined with exclusions");
        write_text_file(out_dir_ / "b_prime.csv", bid_csv(transformed));
        finish("transform", std::move(params), warnings);
        return;
    }
    const auto ids = split_ids(exclude_);
    std::set<std::string> excluded(ids.begin(), ids.end());
    if (!publications_.empty()) {
        const auto graph = build_graph(read_publications_jsonl(publications_));
        for (const auto& r : raw.referees())
            if (!graph.contains(r)) {
                excluded.insert(r);
                warnings.push_back("referee " + r + " has no publications; excluded");
            }
        params["publications"] = publications_;
    }
    auto filtered = filter_bids(transformed, excluded);
    for (const auto& id : filtered.report.excluded_not_found)
        warnings.push_back("excluded referee " + id + " is not a column of the bid matrix");
    const auto fatigue = fatigue_referees(filtered.matrix);
    params["excluded"] = std::vector<std::string>(excluded.begin(), excluded.end());
    params["fatigue_referees"] = fatigue;
    if (exclude_fatigue_ && !fatigue.empty())
        filtered = filter_bids(filtered.matrix, std::set<std::string>(fatigue.begin(), fatigue.end()));
    params["submissions"] = filtered.matrix.n_submissions();
    params["referees"] = filtered.matrix.n_referees();
    write_text_file(out_dir_ / "b_prime.csv", bid_csv(filtered.matrix));
    finish("transform", std::move(params), warnings);
}

void Runner::cmd_sim(bool referees) {
    const auto bids = read_transformed_bid_csv(bids_);
    const auto result = referees ? referee_similarity(bids, jobs_) : submission_similarity(bids, jobs_);
    std::vector<std::string> warnings;
    if (result.undefined_pairs > 0)
        warnings.push_back(std::to_string(result.undefined_pairs) + " pairs share no comparable bid; stored as 0");
    write_text_file(out_dir_ / (referees ? "r_b.csv" : "s_b.csv"), matrix_csv(result.matrix.as_labeled()));
    finish(referees ? "sim-refs" : "sim-subs",
           {{"bids", bids_}, {"size", result.matrix.size()}, {"undefined_pairs", result.undefined_pairs}}, warnings);
}

void Runner::cmd_cluster() {
    const auto sim = read_similarity_csv(similarity_);
    const auto tree = build_dendrogram(sim, parse_linkage(linkage_));
    const double threshold = clusters_opt_->count() ? threshold_for_cluster_count(tree, cluster_count_) : threshold_;
    const auto clusters = cut_dendrogram(tree, threshold);
    std::vector<std::string> warnings;
    if (clusters.size() == 1 && tree.leaves.size() > 1)
        warnings.push_back("threshold " + format_number(threshold) + " is at or above the root height " +
                           format_number(tree.root_height()) + "; single cluster");
    write_text_file(out_dir_ / (tree_name_ + ".newick"), to_newick(tree));
    write_text_file(out_dir_ / (tree_name_ + ".json"), dendrogram_json(tree));
    const std::string clusters_file = tree_name_ == "dendrogram" ? "clusters.json" : tree_name_ + "_clusters.json";
    write_text_file(out_dir_ / clusters_file, clusters_json(clusters));
    ordered_json params{{"similarity", similarity_}, {"linkage", linkage_}, {"threshold", threshold},
                        {"root_height", tree.root_height()}, {"clusters", clusters.size()}};
    finish("cluster", std::move(params), warnings);
}

void Runner::cmd_terms(bool entropy_only) {
    std::vector<std::string> warnings;
    const auto t = cluster_tables(corpus_, clusters_path_, stopwords_, top_k_, warnings);
    if (entropy_only) {
        write_text_file(out_dir_ / "entropy.csv", entropy_csv(t.terms));
    } else {
        write_text_file(out_dir_ / "terms.csv", terms_csv(t.terms, t.dictionary));
        std::vector<std::string> owners;
        std::vector<std::vector<double>> rows;
        for (const auto& w : t.weights) {
            owners.push_back(w.owner);
            rows.push_back(w.weights);
        }
        write_text_file(out_dir_ / "cluster_tfidf.csv", group_table_csv(owners, rows, t.dictionary));
        write_text_file(out_dir_ / "cluster_corr.csv",
                        matrix_csv({t.correlation.labels, t.correlation.labels, t.correlation.values}));
    }
    ordered_json params{{"corpus", corpus_}, {"clusters", clusters_path_}, {"stopwords", stopwords_},
                        {"top_k", top_k_}, {"dictionary_size", t.dictionary.size()}};
    finish(entropy_only ? "entropy" : "terms", std::move(params), warnings);
}

void Runner::cmd_doc_tfidf() {
    auto corpus = read_corpus_jsonl(corpus_);
    if (!bids_.empty()) {
        const auto bids = read_transformed_bid_csv(bids_);
        std::unordered_map<std::string, const Document*> by_id;
        for (const auto& d : corpus) by_id.emplace(d.id, &d);
        std::vector<Document> selected;
        for (const auto& id : bids.submissions()) {
            auto it = by_id.find(id);
            if (it == by_id.end()) throw input_error("missing_document", "no abstract for submission '" + id + "'");
            selected.push_back(*it->second);
        }
        corpus = std::move(selected);
    }
    const auto stopwords = stopwords_.empty() ? StopwordList::english() : StopwordList::from_file(stopwords_);
    const auto processed = preprocess_corpus(corpus, stopwords);
    const auto dict = TermDictionary::from_documents(processed);
    write_text_file(out_dir_ / "doc_tfidf.csv", matrix_csv(document_tfidf(processed, dict)));
    finish("doc-tfidf",
           {{"corpus", corpus_}, {"bids", bids_}, {"stopwords", stopwords_}, {"documents", processed.size()},
            {"dictionary_size", dict.size()}},
           {});
}

void Runner::cmd_cosine() {
    const auto result = cosine_similarity_matrix(read_matrix_csv(matrix_), jobs_);
    std::vector<std::string> warnings;
    for (const auto& id : result.zero_rows) warnings.push_back("row " + id + " is all zero");
    write_text_file(out_dir_ / "s_t.csv", matrix_csv(result.matrix.as_labeled()));
    finish("cosine", {{"matrix", matrix_}, {"zero_rows", result.zero_rows}}, warnings);
}

void Runner::cmd_graph() {
    const auto graph = build_graph(read_publications_jsonl(publications_));
    const auto stats = graph_stats(graph);
    write_text_file(out_dir_ / "edges.csv", edge_list_csv(graph));
    write_text_file(out_dir_ / "graph.dot", graph_dot(graph));
    write_text_file(out_dir_ / "graph_stats.json", graph_stats_json(stats));
    finish("graph", {{"publications", publications_}, {"nodes", stats.nodes}, {"edges", stats.edges}}, {});
}

int Runner::cmd_rank() {
    const auto graph = build_graph(read_publications_jsonl(publications_));
    const auto bids = read_transformed_bid_csv(bids_);
    const auto rank = referee_rank_matrix(graph, bids.referees(), rank_, jobs_);
    const DenseMatrix used = symmetrize_ ? symmetrized(rank.values) : rank.values;
    write_text_file(out_dir_ / "r_g.csv", matrix_csv({rank.labels, rank.labels, used}));
    write_text_file(out_dir_ / "rank_meta.json", rank_metadata_json(rank));
    std::vector<std::string> warnings;
    for (std::size_t l = 0; l < rank.labels.size(); ++l)
        if (!rank.converged[l]) warnings.push_back("relative rank from " + rank.labels[l] + " did not converge");
    finish("rank",
           {{"publications", publications_}, {"bids", bids_}, {"alpha", rank_.restart_probability},
            {"tolerance", rank_.tolerance}, {"max_iterations", rank_.max_iterations}, {"symmetrize", symmetrize_}},
           warnings);
    return rank.all_converged() ? 0 : 3;
}

void Runner::cmd_corr() {
    const auto a = read_matrix_csv(matrix_a_);
    const auto b = read_matrix_csv(matrix_b_);
    if (a.row_labels != b.row_labels || a.col_labels != b.col_labels)
        throw input_error("label_mismatch", "matrices '" + matrix_a_ + "' and '" + matrix_b_ + "' have different labels");
    const auto result = correlate_matrices(a.values, b.values, parse_flatten_mode(flatten_));
    const auto json = correlation_json(result);
    write_text_file(out_dir_ / (corr_name_ + ".json"), json);
    out_ << json;
    finish("corr", {{"a", matrix_a_}, {"b", matrix_b_}, {"flatten", flatten_}, {"name", corr_name_}}, {});
}

void Runner::cmd_reproduce(CLI::App& sub) {
    PipelineConfig cfg;
    if (!config_path_.empty()) {
        for (const auto* opt : sub.get_options())
            if (opt->count() && opt->get_name() != "--config" && opt->get_name() != "--out-dir" &&
                opt->get_name() != "--jobs")
                throw input_error("invalid_argument", "--config cannot be combined with " + opt->get_name());
        cfg = parse_pipeline_config(read_text_file(config_path_));
    } else {
        if (synthetic_) {
            SynthConfig synth = synth_config_path_.empty() ? SynthConfig{}
                                                           : parse_synth_config(read_text_file(synth_config_path_));
            if (seed_opt_->count()) synth.seed = seed_;
            cfg.synthetic = synth;
            if (!threshold_opt_->count() && !clusters_opt_->count()) cfg.cluster_count = synth.n_topics;
        } else {
            if (bids_.empty() || corpus_.empty() || publications_.empty())
                throw input_error("invalid_argument", "reproduce needs --synthetic or --bids, --corpus and --publications");
            cfg.bids = bids_;
            cfg.corpus = corpus_;
            cfg.publications = publications_;
            cfg.stopwords = stopwords_;
        }
        cfg.linkage = parse_linkage(linkage_);
        cfg.threshold = threshold_;
        if (clusters_opt_->count()) cfg.cluster_count = cluster_count_;
        cfg.top_k = top_k_;
        cfg.rank = rank_;
        cfg.symmetrize_rank = symmetrize_;
        cfg.flatten = parse_flatten_mode(flatten_);
        cfg.exclude_fatigue = exclude_fatigue_;
    }
    cfg.output_dir = out_dir_;
    cfg.jobs = jobs_;
    const auto report = reproduce(cfg);
    write_outputs(report, cfg);
    auto line = [&](const char* name, const TrackResults& t) {
        out_ << name << ": track1 r=" << format_number(t.track1.r) << " df=" << t.track1.df
             << " p=" << format_number(t.track1.p_value) << "; track2 r=" << format_number(t.track2.r)
             << " df=" << t.track2.df << " p=" << format_number(t.track2.p_value) << "\n";
    };
    line("all referees", report.all);
    if (report.no_fatigue) line("without fatigue referees", *report.no_fatigue);
    for (const auto& w : report.all.warnings) err_ << "warning: " << w << "\n";
    out_ << "reproduce: wrote " << out_dir_.string() << "\n";
}

void Runner::cmd_synth() {
    SynthConfig cfg = synth_config_path_.empty() ? SynthConfig{} : parse_synth_config(read_text_file(synth_config_path_));
    if (seed_opt_->count()) cfg.seed = seed_;
    write_conference(generate(cfg), out_dir_);
    out_ << "synth: wrote " << out_dir_.string() << "\n";
}

int Runner::run(int argc, const char* const* argv) {
    CLI::App app{"Referee bid analysis: bid similarity, clustering, term statistics, co-authorship rank"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    std::string out_dir;
    app.add_option("--out-dir,-o", out_dir, "Output directory (default: $BIDLAB_OUTPUT_ROOT or ./bidlab-out)");
    app.add_option("--jobs,-j", jobs_, "Worker threads, 0 = all cores")->capture_default_str();
    app.add_flag("--error-json", error_json_, "Report errors as JSON on stderr");
    app.fallthrough();

    auto* transform = app.add_subcommand("transform", "Recode raw bids and apply the filtering rules");
    transform->add_option("--bids", bids_, "Raw bid CSV")->required();
    transform->add_option("--exclude", exclude_, "Referee ids to drop (comma separated)");
    transform->add_option("--publications", publications_, "Drop referees absent from this publication corpus");
    transform->add_flag("--no-filter", no_filter_, "Recode only");
    transform->add_flag("--exclude-fatigue", exclude_fatigue_, "Also drop referees bidding expert on everything");

    auto* sim_subs = app.add_subcommand("sim-subs", "Submission similarity S_b");
    sim_subs->add_option("--bids", bids_, "Transformed bid CSV")->required();
    auto* sim_refs = app.add_subcommand("sim-refs", "Referee similarity R_b");
    sim_refs->add_option("--bids", bids_, "Transformed bid CSV")->required();

    auto* cluster = app.add_subcommand("cluster", "Dendrogram and threshold cut");
    cluster->add_option("--similarity", similarity_, "Similarity matrix CSV")->required();
    cluster->add_option("--linkage", linkage_, "single, complete, average or ward")->capture_default_str();
    auto* cluster_threshold = cluster->add_option("--threshold", threshold_, "Cut height")->capture_default_str();
    auto* cluster_count = cluster->add_option("--clusters", cluster_count_, "Cut into this many clusters instead");
    cluster_count->excludes(cluster_threshold);
    cluster->add_option("--name", tree_name_, "Output file stem")->capture_default_str();

    auto* terms = app.add_subcommand("terms", "Cluster TFIDF, top terms and inter-cluster correlation");
    auto* entropy_cmd = app.add_subcommand("entropy", "Entropy of each cluster's normalized top terms");
    for (auto* sub : {terms, entropy_cmd}) {
        sub->add_option("--corpus", corpus_, "Corpus JSONL")->required();
        sub->add_option("--clusters", clusters_path_, "clusters.json from the cluster command")->required();
        sub->add_option("--stopwords", stopwords_, "Stopword list (default: built-in English)");
        sub->add_option("--top-k", top_k_, "Terms per cluster")->capture_default_str();
    }

    auto* doc_tfidf = app.add_subcommand("doc-tfidf", "Document TFIDF matrix T");
    doc_tfidf->add_option("--corpus", corpus_, "Corpus JSONL")->required();
    doc_tfidf->add_option("--bids", bids_, "Restrict to and order by the submissions of this bid CSV");
    doc_tfidf->add_option("--stopwords", stopwords_, "Stopword list (default: built-in English)");

    auto* cosine = app.add_subcommand("cosine", "Row cosine similarity S_t");
    cosine->add_option("--matrix", matrix_, "Non-negative matrix CSV")->required();

    auto* graph = app.add_subcommand("graph", "Co-authorship graph");
    graph->add_option("--publications", publications_, "Publication JSONL")->required();

    auto* rank = app.add_subcommand("rank", "Relative rank matrix R_g between referees");
    rank->add_option("--publications", publications_, "Publication JSONL")->required();
    rank->add_option("--bids", bids_, "Transformed bid CSV whose columns are the referees")->required();

    auto* corr = app.add_subcommand("corr", "Pearson correlation of two matrices");
    corr->add_option("--a", matrix_a_, "First matrix CSV")->required();
    corr->add_option("--b", matrix_b_, "Second matrix CSV")->required();
    corr->add_option("--name", corr_name_, "Output file stem")->capture_default_str();

    auto* reproduce_cmd = app.add_subcommand("reproduce", "Run both tracks end to end");
    reproduce_cmd->add_option("--config", config_path_, "Replay a run_config.json");
    auto* synthetic_flag = reproduce_cmd->add_flag("--synthetic", synthetic_, "Generate a synthetic conference");
    reproduce_cmd->add_option("--synth-config", synth_config_path_, "Synthetic conference parameters (JSON)")
        ->needs(synthetic_flag);
    reproduce_cmd->add_option("--bids", bids_, "Raw bid CSV")->excludes(synthetic_flag);
    reproduce_cmd->add_option("--corpus", corpus_, "Corpus JSONL")->excludes(synthetic_flag);
    reproduce_cmd->add_option("--publications", publications_, "Publication JSONL")->excludes(synthetic_flag);
    reproduce_cmd->add_option("--stopwords", stopwords_, "Stopword list (default: built-in English)");
    reproduce_cmd->add_option("--linkage", linkage_, "single, complete, average or ward")->capture_default_str();
    threshold_opt_ = reproduce_cmd->add_option("--threshold", threshold_, "Cut height")->capture_default_str();
    clusters_opt_ = reproduce_cmd->add_option("--clusters", cluster_count_, "Cut into this many clusters instead");
    clusters_opt_->excludes(threshold_opt_);
    reproduce_cmd->add_option("--top-k", top_k_, "Terms per cluster")->capture_default_str();
    reproduce_cmd->add_flag("--exclude-fatigue", exclude_fatigue_, "Write the fatigue-free variant as primary output");
    seed_opt_ = reproduce_cmd->add_option("--seed", seed_, "Synthetic seed")->needs(synthetic_flag);

    for (auto* sub : {rank, reproduce_cmd}) {
        sub->add_option("--alpha", rank_.restart_probability, "Restart probability")->capture_default_str();
        sub->add_option("--tolerance", rank_.tolerance, "L1 convergence tolerance")->capture_default_str();
        sub->add_option("--max-iterations", rank_.max_iterations, "Iteration cap")->capture_default_str();
        sub->add_flag("--symmetrize", symmetrize_, "Use (R + R^T) / 2");
    }
    for (auto* sub : {corr, reproduce_cmd})
        sub->add_option("--flatten", flatten_, "full, off-diagonal or upper-triangle")->capture_default_str();

    auto* synth = app.add_subcommand("synth", "Write a synthetic conference");
    synth->add_option("--config", synth_config_path_, "Synthetic conference parameters (JSON)");
    auto* synth_seed = synth->add_option("--seed", seed_, "Seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out_, err_);
        return code == 0 ? 0 : 2;
    }

    out_dir_ = out_dir.empty() ? default_output_root() : fs::path(out_dir);
    if (synth->parsed()) seed_opt_ = synth_seed;
    if (cluster->parsed()) clusters_opt_ = cluster_count;

    if (transform->parsed()) cmd_transform();
    else if (sim_subs->parsed()) cmd_sim(false);
    else if (sim_refs->parsed()) cmd_sim(true);
    else if (cluster->parsed()) cmd_cluster();
    else if (terms->parsed()) cmd_terms(false);
    else if (entropy_cmd->parsed()) cmd_terms(true);
    else if (doc_tfidf->parsed()) cmd_doc_tfidf();
    else if (cosine->parsed()) cmd_cosine();
    else if (graph->parsed()) cmd_graph();
    else if (rank->parsed()) return cmd_rank();
    else if (corr->parsed()) cmd_corr();
    else if (reproduce_cmd->parsed()) cmd_reproduce(*reproduce_cmd);
    else if (synth->parsed()) cmd_synth();
    return 0;
}

int exit_code(ErrorKind kind) { return kind == ErrorKind::input ? 2 : 3; }

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    bool error_json = false;
    for (int i = 1; i < argc; ++i)
        if (std::string_view(argv[i]) == "--error-json") error_json = true;
    auto report = [&](const char* kind, const std::string& code, const std::string& message) {
        if (error_json) {
            ordered_json j;
            j["error"] = {{"kind", kind}, {"code", code}, {"message", message}};
            err << j.dump() << "\n";
        } else {
            err << "error: " << message << "\n";
        }
    };
    try {
        Runner runner(out, err);
        return runner.run(argc, argv);
    } catch (const Error& e) {
        report(e.kind() == ErrorKind::input ? "input" : "numerical", e.code(), e.what());
        return exit_code(e.kind());
    } catch (const fs::filesystem_error& e) {
        report("input", "filesystem", e.what());
        return 2;
    } catch (const std::exception& e) {
        report("internal", "internal", e.what());
        return 1;
    }
}

int run_cli(int argc, const char* const* argv) { return run_cli(argc, argv, std::cout, std::cerr); }

}  // namespace bidlab
