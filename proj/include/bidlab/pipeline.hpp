#pragma once

// End-to-end experiment: Track 1 (bids vs abstract terms) and Track 2 (bids
// vs co-authorship rank), with and without fatigue referees.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bidlab/bids.hpp"
#include "bidlab/cluster.hpp"
#include "bidlab/graph.hpp"
#include "bidlab/rank.hpp"
#include "bidlab/stats.hpp"
#include "bidlab/synth.hpp"
#include "bidlab/text.hpp"
#include "bidlab/tfidf.hpp"

namespace bidlab {

inline constexpr const char* kVersion = "1.0.0";

struct PipelineConfig {
    std::filesystem::path bids;
    std::filesystem::path corpus;
    std::filesystem::path publications;
    std::filesystem::path stopwords;  // empty: built-in list
    std::optional<SynthConfig> synthetic;

    Linkage linkage = Linkage::average;
    double threshold = 1.1;
    // When set, the cut threshold is derived from the dendrogram instead.
    std::optional<std::size_t> cluster_count;
    std::size_t top_k = 10;
    RankConfig rank;
    bool symmetrize_rank = false;
    FlattenMode flatten = FlattenMode::full;
    // Which variant's matrices and tables are written as the primary outputs;
    // the report always carries both correlations.
    bool exclude_fatigue = false;
    std::filesystem::path output_dir;
    unsigned jobs = 1;
};

std::string pipeline_config_json(const PipelineConfig& cfg);
PipelineConfig parse_pipeline_config(const std::string& json_text);

struct ClusterTerms {
    std::string cluster;
    std::size_t size = 0;
    std::vector<TermWeight> top;         // raw tfidf weights
    std::vector<TermWeight> normalized;  // top_k_normalize
    std::optional<double> entropy;       // empty when the cluster has no positive weight
};

// Everything computed from one filtered bid matrix.
struct TrackResults {
    BidMatrix bids;
    // Track 1
    SimilarityResult submission_sim;
    Dendrogram submission_tree;
    double cut_threshold = 0.0;
    ClusterSet clusters;
    TermDictionary dictionary;
    std::vector<FrequencyVector> cluster_freqs;
    std::vector<WeightVector> cluster_weights;
    std::vector<ClusterTerms> cluster_terms;
    TermCorrelationTable cluster_corr;
    CosineResult term_sim;
    CorrelationResult track1;
    // Track 2
    SimilarityResult referee_sim;
    Dendrogram referee_tree;
    RelativeRankMatrix rank;
    DenseMatrix rank_used;  // R_g as correlated (symmetrized if requested)
    CorrelationResult track2;
    std::vector<std::string> warnings;
};

struct PipelineInputs {
    RawBidMatrix raw_bids;
    std::vector<Document> corpus;
    std::vector<PublicationRecord> publications;
    StopwordList stopwords;
};

// Reads every input named by the config (or generates the synthetic set).
PipelineInputs load_inputs(const PipelineConfig& cfg);

// Runs both tracks on an already filtered matrix.
TrackResults run_tracks(const BidMatrix& bids, const std::vector<Document>& corpus,
                        const CoauthorGraph& graph, const StopwordList& stopwords,
                        const PipelineConfig& cfg);

struct ReproduceReport {
    FilterReport filter;
    std::vector<std::string> fatigue_referees;
    TrackResults all;                       // every filtered referee
    std::optional<TrackResults> no_fatigue;  // fatigue referees removed
    GraphStats graph;
    std::string report_json;
};

ReproduceReport reproduce(const PipelineConfig& cfg);

// Writes the fixed output layout into cfg.output_dir.
void write_outputs(const ReproduceReport& report, const PipelineConfig& cfg);

// Shared by the CLI subcommands so that they write identical bytes.
std::string terms_csv(const std::vector<ClusterTerms>& terms, const TermDictionary& dict);
std::string entropy_csv(const std::vector<ClusterTerms>& terms);
std::string group_table_csv(const std::vector<std::string>& owners,
                            const std::vector<std::vector<double>>& rows,
                            const TermDictionary& dict);
std::vector<ClusterTerms> describe_clusters(const std::vector<WeightVector>& weights,
                                            const ClusterSet& clusters, std::size_t top_k,
                                            std::vector<std::string>& warnings);

}  // namespace bidlab
