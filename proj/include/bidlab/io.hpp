#pragma once

// File formats: labeled CSV matrices, bid CSV, JSON-lines corpora.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bidlab/bids.hpp"
#include "bidlab/matrix.hpp"

namespace bidlab {

struct Document;
struct PublicationRecord;

// Shortest decimal form that round-trips to the same double.
std::string format_number(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

// Splits one CSV line; supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_escape(const std::string& field);

// First row: corner cell then referee ids. First column: submission ids.
RawBidMatrix parse_bid_csv(const std::string& text);
RawBidMatrix read_bid_csv(const std::filesystem::path& path);
// Same layout, codes restricted to {0,1,2}.
BidMatrix read_transformed_bid_csv(const std::filesystem::path& path);

template <BidCode MaxCode>
std::string bid_csv(const BidTable<MaxCode>& bids);

// Labeled matrix CSV: header "id,<col labels>", then one row per label.
std::string matrix_csv(const LabeledMatrix& m);
LabeledMatrix parse_matrix_csv(const std::string& text);
LabeledMatrix read_matrix_csv(const std::filesystem::path& path);

// Reads a matrix CSV and validates it as a similarity matrix.
SimilarityMatrix read_similarity_csv(const std::filesystem::path& path);

std::string matrix_json(const LabeledMatrix& m);

// {"id", "title", "abstract", "authors"} per line. Blank lines are skipped.
std::vector<Document> parse_corpus_jsonl(const std::string& text);
std::vector<Document> read_corpus_jsonl(const std::filesystem::path& path);
std::string corpus_jsonl(const std::vector<Document>& docs);

// {"id", "authors"} per line.
std::vector<PublicationRecord> parse_publications_jsonl(const std::string& text);
std::vector<PublicationRecord> read_publications_jsonl(const std::filesystem::path& path);
std::string publications_jsonl(const std::vector<PublicationRecord>& records);

// One entry per non-empty line, surrounding whitespace trimmed.
std::vector<std::string> read_word_list(const std::filesystem::path& path);

}  // namespace bidlab
