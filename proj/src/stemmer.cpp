#include <array>
#include <string>
#include <string_view>
#include <utility>

#include "bidlab/text.hpp"

namespace bidlab {

namespace {

bool is_consonant(std::string_view w, std::size_t i) {
    switch (w[i]) {
        case 'a': case 'e': case 'i': case 'o': case 'u': return false;
        case 'y': return i == 0 || !is_consonant(w, i - 1);
        default: return true;
    }
}

// m in [C](VC)^m[V].
std::size_t measure(std::string_view stem) {
    std::size_t m = 0;
    std::size_t i = 0;
    const std::size_t n = stem.size();
    while (i < n && is_consonant(stem, i)) ++i;
    while (i < n) {
        while (i < n && !is_consonant(stem, i)) ++i;
        if (i == n) break;
        while (i < n && is_consonant(stem, i)) ++i;
        ++m;
    }
    return m;
}

bool contains_vowel(std::string_view stem) {
    for (std::size_t i = 0; i < stem.size(); ++i)
        if (!is_consonant(stem, i)) return true;
    return false;
}

bool ends_double_consonant(std::string_view w) {
    const std::size_t n = w.size();
    return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: ends consonant-vowel-consonant, last consonant not w, x or y.
bool ends_cvc(std::string_view w) {
    const std::size_t n = w.size();
    if (n < 3) return false;
    if (!is_consonant(w, n - 3) || is_consonant(w, n - 2) || !is_consonant(w, n - 1)) return false;
    const char c = w[n - 1];
    return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(std::string_view w, std::string_view suffix) {
    return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

using Condition = bool (*)(std::string_view);

struct Rule {
    std::string_view suffix;
    std::string_view replacement;
    Condition condition;
};

bool m_gt0(std::string_view s) { return measure(s) > 0; }
bool m_gt1(std::string_view s) { return measure(s) > 1; }
bool m_gt1_st(std::string_view s) {
    return measure(s) > 1 && !s.empty() && (s.back() == 's' || s.back() == 't');
}

// The first rule whose suffix matches decides; a failed condition leaves the
// word unchanged.
template <std::size_t N>
void apply_rules(std::string& w, const std::array<Rule, N>& rules) {
    for (const auto& r : rules) {
        if (!ends_with(w, r.suffix)) continue;
        const std::string_view stem(w.data(), w.size() - r.suffix.size());
        if (r.condition(stem)) {
            w.resize(stem.size());
            w += r.replacement;
        }
        return;
    }
}

void step1a(std::string& w) {
    if (ends_with(w, "sses")) w.resize(w.size() - 2);
    else if (ends_with(w, "ies")) w.resize(w.size() - 2);
    else if (ends_with(w, "ss")) return;
    else if (ends_with(w, "s")) w.pop_back();
}

void step1b(std::string& w) {
    if (ends_with(w, "eed")) {
        if (measure(std::string_view(w).substr(0, w.size() - 3)) > 0) w.pop_back();
        return;
    }
    std::size_t cut = 0;
    if (ends_with(w, "ed") && contains_vowel(std::string_view(w).substr(0, w.size() - 2))) cut = 2;
    else if (ends_with(w, "ing") && contains_vowel(std::string_view(w).substr(0, w.size() - 3))) cut = 3;
    if (cut == 0) return;
    w.resize(w.size() - cut);
    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
        w += 'e';
    } else if (ends_double_consonant(w) && w.back() != 'l' && w.back() != 's' && w.back() != 'z') {
        w.pop_back();
    } else if (measure(w) == 1 && ends_cvc(w)) {
        w += 'e';
    }
}

void step1c(std::string& w) {
    if (ends_with(w, "y") && contains_vowel(std::string_view(w).substr(0, w.size() - 1)))
        w.back() = 'i';
}

constexpr std::array<Rule, 20> kStep2{{
    {"ational", "ate", m_gt0}, {"tional", "tion", m_gt0}, {"enci", "ence", m_gt0},
    {"anci", "ance", m_gt0},   {"izer", "ize", m_gt0},    {"abli", "able", m_gt0},
    {"alli", "al", m_gt0},     {"entli", "ent", m_gt0},   {"eli", "e", m_gt0},
    {"ousli", "ous", m_gt0},   {"ization", "ize", m_gt0}, {"ation", "ate", m_gt0},
    {"ator", "ate", m_gt0},    {"alism", "al", m_gt0},    {"iveness", "ive", m_gt0},
    {"fulness", "ful", m_gt0}, {"ousness", "ous", m_gt0}, {"aliti", "al", m_gt0},
    {"iviti", "ive", m_gt0},   {"biliti", "ble", m_gt0},
}};

constexpr std::array<Rule, 7> kStep3{{
    {"icate", "ic", m_gt0}, {"ative", "", m_gt0}, {"alize", "al", m_gt0}, {"iciti", "ic", m_gt0},
    {"ical", "ic", m_gt0},  {"ful", "", m_gt0},   {"ness", "", m_gt0},
}};

constexpr std::array<Rule, 19> kStep4{{
    {"al", "", m_gt1},    {"ance", "", m_gt1}, {"ence", "", m_gt1},   {"er", "", m_gt1},
    {"ic", "", m_gt1},    {"able", "", m_gt1}, {"ible", "", m_gt1},   {"ant", "", m_gt1},
    {"ement", "", m_gt1}, {"ment", "", m_gt1}, {"ent", "", m_gt1},    {"ion", "", m_gt1_st},
    {"ou", "", m_gt1},    {"ism", "", m_gt1},  {"ate", "", m_gt1},    {"iti", "", m_gt1},
    {"ous", "", m_gt1},   {"ive", "", m_gt1},  {"ize", "", m_gt1},
}};

void step5a(std::string& w) {
    if (!ends_with(w, "e")) return;
    const std::string_view stem(w.data(), w.size() - 1);
    const std::size_t m = measure(stem);
    if (m > 1 || (m == 1 && !ends_cvc(stem))) w.pop_back();
}

void step5b(std::string& w) {
    if (measure(w) > 1 && ends_double_consonant(w) && w.back() == 'l') w.pop_back();
}

}  // namespace

std::string porter_stem(std::string_view word) {
    std::string w(word);
    if (w.size() <= 2) return w;
    step1a(w);
    step1b(w);
    step1c(w);
    apply_rules(w, kStep2);
    apply_rules(w, kStep3);
    apply_rules(w, kStep4);
    step5a(w);
    step5b(w);
    return w;
}

}  // namespace bidlab
