#include "bidlab/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bidlab/error.hpp"
#include "bidlab/graph.hpp"
#include "bidlab/text.hpp"

namespace bidlab {

using nlohmann::json;

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    (void)ec;
    return std::string(buf.data(), end);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("file_not_found", "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw input_error("write_failed", "cannot write '" + path.string() + "'");
    out << content;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Non-empty lines as CSV records (fields trimmed).
std::vector<std::vector<std::string>> csv_records(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        for (auto& f : fields) f = trim(f);
        rows.push_back(std::move(fields));
    }
    return rows;
}

double parse_double(const std::string& s, std::size_t row, std::size_t col) {
    if (s == "nan" || s == "NA") return std::nan("");
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw input_error("parse_error", "not a number at row " + std::to_string(row) +
                                             ", column " + std::to_string(col) + ": '" + s + "'");
    return v;
}

}  // namespace

RawBidMatrix parse_bid_csv(const std::string& text) {
    auto rows = csv_records(text);
    if (rows.empty()) throw input_error("parse_error", "bid CSV is empty");
    Labels referees(rows[0].begin() + 1, rows[0].end());
    Labels subs;
    std::vector<BidCode> cells;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != referees.size() + 1)
            throw input_error("parse_error", "bid CSV row " + std::to_string(r + 1) + " has " +
                                                 std::to_string(row.size()) + " fields, expected " +
                                                 std::to_string(referees.size() + 1));
        subs.push_back(row[0]);
        for (std::size_t c = 1; c < row.size(); ++c) {
            int code = -1;
            const auto& f = row[c];
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), code);
            if (ec != std::errc() || ptr != f.data() + f.size() || code < 0 || code > 255)
                throw input_error("invalid_code", "bid '" + f + "' at submission '" + row[0] +
                                                      "', referee '" + referees[c - 1] +
                                                      "' is not an integer code");
            cells.push_back(static_cast<BidCode>(code));
        }
    }
    return RawBidMatrix(std::move(subs), std::move(referees), std::move(cells));
}

RawBidMatrix read_bid_csv(const std::filesystem::path& path) {
    return parse_bid_csv(read_text_file(path));
}

BidMatrix read_transformed_bid_csv(const std::filesystem::path& path) {
    const auto raw = read_bid_csv(path);
    return BidMatrix(raw.submissions(), raw.referees(), raw.cells());
}

template <BidCode MaxCode>
std::string bid_csv(const BidTable<MaxCode>& bids) {
    std::string out = "sub/ref";
    for (const auto& r : bids.referees()) out += "," + csv_escape(r);
    out += '\n';
    for (std::size_t i = 0; i < bids.n_submissions(); ++i) {
        out += csv_escape(bids.submissions()[i]);
        for (std::size_t j = 0; j < bids.n_referees(); ++j) {
            out += ',';
            out += static_cast<char>('0' + bids(i, j));
        }
        out += '\n';
    }
    return out;
}

template std::string bid_csv(const BidTable<4>&);
template std::string bid_csv(const BidTable<2>&);

std::string matrix_csv(const LabeledMatrix& m) {
    std::string out = "id";
    for (const auto& c : m.col_labels) out += "," + csv_escape(c);
    out += '\n';
    for (std::size_t i = 0; i < m.values.rows(); ++i) {
        out += csv_escape(m.row_labels[i]);
        for (std::size_t j = 0; j < m.values.cols(); ++j) out += "," + format_number(m.values(i, j));
        out += '\n';
    }
    return out;
}

LabeledMatrix parse_matrix_csv(const std::string& text) {
    auto rows = csv_records(text);
    if (rows.empty()) throw input_error("parse_error", "matrix CSV is empty");
    LabeledMatrix m;
    m.col_labels.assign(rows[0].begin() + 1, rows[0].end());
    m.values = DenseMatrix(rows.size() - 1, m.col_labels.size());
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != m.col_labels.size() + 1)
            throw input_error("parse_error", "matrix CSV row " + std::to_string(r + 1) +
                                                 " has the wrong number of fields");
        m.row_labels.push_back(rows[r][0]);
        for (std::size_t c = 1; c < rows[r].size(); ++c)
            m.values(r - 1, c - 1) = parse_double(rows[r][c], r + 1, c + 1);
    }
    return m;
}

LabeledMatrix read_matrix_csv(const std::filesystem::path& path) {
    return parse_matrix_csv(read_text_file(path));
}

SimilarityMatrix read_similarity_csv(const std::filesystem::path& path) {
    auto m = read_matrix_csv(path);
    if (m.row_labels != m.col_labels)
        throw input_error("shape_mismatch", "'" + path.string() + "' row and column labels differ");
    return SimilarityMatrix::from_values(std::move(m.row_labels), std::move(m.values));
}

std::string matrix_json(const LabeledMatrix& m) {
    json j;
    j["rows"] = m.row_labels;
    j["cols"] = m.col_labels;
    json values = json::array();
    for (std::size_t i = 0; i < m.values.rows(); ++i) {
        json row = json::array();
        for (double v : m.values.row(i)) row.push_back(std::isfinite(v) ? json(v) : json(nullptr));
        values.push_back(std::move(row));
    }
    j["values"] = std::move(values);
    return j.dump(1) + "\n";
}

namespace {

template <typename F>
void for_each_json_line(const std::string& text, const char* what, F&& f) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw input_error("parse_error", std::string(what) + " line " + std::to_string(lineno) +
                                                 ": " + e.what());
        }
        try {
            f(j);
        } catch (const json::exception& e) {
            throw input_error("parse_error", std::string(what) + " line " + std::to_string(lineno) +
                                                 ": " + e.what());
        }
    }
}

std::string id_field(const json& j) {
    const auto& id = j.at("id");
    return id.is_string() ? id.get<std::string>() : id.dump();
}

}  // namespace

std::vector<Document> parse_corpus_jsonl(const std::string& text) {
    std::vector<Document> docs;
    for_each_json_line(text, "corpus", [&](const json& j) {
        Document d;
        d.id = id_field(j);
        d.title = j.value("title", std::string{});
        d.abstract = j.at("abstract").get<std::string>();
        if (j.contains("authors")) d.authors = j.at("authors").get<std::vector<std::string>>();
        if (d.abstract.empty())
            throw input_error("empty_document", "document '" + d.id + "' has an empty abstract");
        docs.push_back(std::move(d));
    });
    return docs;
}

std::vector<Document> read_corpus_jsonl(const std::filesystem::path& path) {
    return parse_corpus_jsonl(read_text_file(path));
}

std::string corpus_jsonl(const std::vector<Document>& docs) {
    std::string out;
    for (const auto& d : docs) {
        json j;
        j["id"] = d.id;
        j["title"] = d.title;
        j["abstract"] = d.abstract;
        j["authors"] = d.authors;
        out += j.dump() + "\n";
    }
    return out;
}

std::vector<PublicationRecord> parse_publications_jsonl(const std::string& text) {
    std::vector<PublicationRecord> records;
    for_each_json_line(text, "publications", [&](const json& j) {
        PublicationRecord r;
        r.id = id_field(j);
        r.authors = j.at("authors").get<std::vector<std::string>>();
        if (r.authors.empty())
            throw input_error("empty_record", "publication '" + r.id + "' has no authors");
        records.push_back(std::move(r));
    });
    return records;
}

std::vector<PublicationRecord> read_publications_jsonl(const std::filesystem::path& path) {
    return parse_publications_jsonl(read_text_file(path));
}

std::string publications_jsonl(const std::vector<PublicationRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        json j;
        j["id"] = r.id;
        j["authors"] = r.authors;
        out += j.dump() + "\n";
    }
    return out;
}

std::vector<std::string> read_word_list(const std::filesystem::path& path) {
    std::vector<std::string> words;
    std::istringstream in(read_text_file(path));
    std::string line;
    while (std::getline(in, line)) {
        auto w = trim(line);
        if (!w.empty()) words.push_back(std::move(w));
    }
    return words;
}

}  // namespace bidlab
