#pragma once

// Abstract text processing: tokenization, stopword removal, Porter stemming.

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace bidlab {

struct Document {
    std::string id;
    std::string title;
    std::string abstract;
    std::vector<std::string> authors;
};

// Classic Porter (1980) suffix stripper, steps 1a through 5b. Expects a
// lowercase ASCII word; words of length <= 2 are returned unchanged.
std::string porter_stem(std::string_view word);

class StopwordList {
public:
    StopwordList() = default;
    explicit StopwordList(std::vector<std::string> words);

    // Built-in English list (identical to data/stopwords_en.txt).
    static const StopwordList& english();
    static StopwordList from_file(const std::string& path);

    bool contains(std::string_view word) const { return words_.contains(std::string(word)); }
    std::size_t size() const noexcept { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

// The built-in list, one word per line, in file order.
const std::vector<std::string>& english_stopwords();

// Lowercases ASCII letters and splits on every non-alphanumeric byte.
std::vector<std::string> tokenize(std::string_view text);

// tokenize, drop stopwords and tokens shorter than 2 chars, stem, and drop
// stems that are themselves stopwords.
std::vector<std::string> preprocess(std::string_view text, const StopwordList& stopwords);

struct ProcessedDocument {
    std::string id;
    std::vector<std::string> terms;
};

// Abstracts only; titles are not part of the term analysis.
std::vector<ProcessedDocument> preprocess_corpus(const std::vector<Document>& docs,
                                                 const StopwordList& stopwords);

}  // namespace bidlab
