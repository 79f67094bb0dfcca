#include <algorithm>
#include <cctype>

#include "bidlab/io.hpp"
#include "bidlab/text.hpp"

namespace bidlab {

const std::vector<std::string>& english_stopwords() {
    static const std::vector<std::string> words = {
        "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any",
        "are", "as", "at", "be", "because", "been", "before", "being", "below", "between", "both",
        "but", "by", "can", "could", "did", "do", "does", "doing", "down", "during", "each", "few",
        "for", "from", "further", "had", "has", "have", "having", "he", "her", "here", "hers",
        "herself", "him", "himself", "his", "how", "however", "i", "if", "in", "into", "is", "it",
        "its", "itself", "just", "let", "me", "more", "most", "my", "myself", "no", "nor", "not",
        "now", "of", "off", "on", "once", "only", "or", "other", "ought", "our", "ours",
        "ourselves", "out", "over", "own", "same", "she", "should", "so", "some", "such", "than",
        "that", "the", "their", "theirs", "them", "themselves", "then", "there", "these", "they",
        "this", "those", "through", "thus", "to", "too", "under", "until", "up", "upon", "us",
        "very", "was", "we", "were", "what", "when", "where", "which", "while", "who", "whom",
        "whose", "why", "will", "with", "within", "without", "would", "yet", "you", "your", "yours",
        "yourself", "yourselves", "across", "along", "already", "although", "among", "amongst",
        "another", "anyone", "anything", "around", "away", "become", "becomes", "cannot", "done",
        "either", "else", "enough", "etc", "even", "ever", "every", "everyone", "everything",
        "first", "may", "might", "must", "never", "often", "onto", "others", "perhaps", "rather",
        "several", "since", "still", "therefore", "though", "toward", "towards", "unless", "via",
        "whether",
    };
    return words;
}

StopwordList::StopwordList(std::vector<std::string> words)
    : words_(std::make_move_iterator(words.begin()), std::make_move_iterator(words.end())) {}

const StopwordList& StopwordList::english() {
    static const StopwordList list(english_stopwords());
    return list;
}

StopwordList StopwordList::from_file(const std::string& path) {
    auto words = read_word_list(path);
    for (auto& w : words)
        std::transform(w.begin(), w.end(), w.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return StopwordList(std::move(words));
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (unsigned char c : text) {
        if (c < 0x80 && std::isalnum(c)) {
            cur += static_cast<char>(std::tolower(c));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

std::vector<std::string> preprocess(std::string_view text, const StopwordList& stopwords) {
    std::vector<std::string> stems;
    for (auto& token : tokenize(text)) {
        if (token.size() < 2 || stopwords.contains(token)) continue;
        auto stem = porter_stem(token);
        if (stopwords.contains(stem)) continue;
        stems.push_back(std::move(stem));
    }
    return stems;
}

std::vector<ProcessedDocument> preprocess_corpus(const std::vector<Document>& docs,
                                                 const StopwordList& stopwords) {
    std::vector<ProcessedDocument> out;
    out.reserve(docs.size());
    for (const auto& d : docs) out.push_back({d.id, preprocess(d.abstract, stopwords)});
    return out;
}

}  // namespace bidlab
