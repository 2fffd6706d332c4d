#ifndef GROUPDYN_TEXT_HPP
#define GROUPDYN_TEXT_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "core.hpp"

namespace groupdyn {

// Light suffix stripper, the default stemmer. Full lemmatization is out of
// scope; the interface is pluggable for anything heavier.
inline std::string stem_light(std::string word) {
    auto ends_with = [&](std::string_view suf) {
        return word.size() >= suf.size() &&
               word.compare(word.size() - suf.size(), suf.size(), suf) == 0;
    };
    if (ends_with("sses"))
        word.erase(word.size() - 2);
    else if (ends_with("ies") && word.size() > 4)
        word.replace(word.size() - 3, 3, "y");
    else if (!ends_with("ss") && !ends_with("us") && ends_with("s") && word.size() > 3)
        word.pop_back();
    return word;
}

struct TokenizerConfig {
    std::set<std::string> stopwords;
    std::function<std::string(std::string)> stemmer = stem_light;  // nullptr disables
};

inline TokenizerConfig load_stopwords(const std::string& path) {
    TokenizerConfig cfg;
    std::ifstream in(path);
    if (!in) throw Error("cannot open stopword list: " + path);
    std::string line;
    while (std::getline(in, line)) {
        std::string w = to_lower(trim(line));
        if (!w.empty() && w[0] != '#') cfg.stopwords.insert(w);
    }
    return cfg;
}

// Lowercase, split on non-alphanumerics, drop stop words, stem.
inline std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        if (!cfg.stopwords.count(cur)) out.push_back(cfg.stemmer ? cfg.stemmer(cur) : cur);
        cur.clear();
    };
    for (char c : text) {
        if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
        if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'))
            cur += c;
        else
            flush();
    }
    flush();
    return out;
}

struct TokenizedDoc {
    std::string message_id;
    std::vector<std::uint32_t> tokens;  // vocabulary indices
};

class Vocabulary {
public:
    // Indices are assigned in lexicographic word order over the corpus.
    static Vocabulary build(const std::vector<std::vector<std::string>>& docs) {
        Vocabulary v;
        std::set<std::string> words;
        for (const auto& doc : docs)
            for (const auto& w : doc) words.insert(w);
        v.words_.assign(words.begin(), words.end());
        for (std::uint32_t i = 0; i < v.words_.size(); ++i) v.index_[v.words_[i]] = i;
        v.df_.assign(v.words_.size(), 0);
        for (const auto& doc : docs) {
            std::set<std::string> seen(doc.begin(), doc.end());
            for (const auto& w : seen) ++v.df_[v.index_.at(w)];
        }
        v.docs_ = docs.size();
        return v;
    }

    std::optional<std::uint32_t> id(const std::string& word) const {
        auto it = index_.find(word);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    const std::string& word(std::uint32_t i) const { return words_.at(i); }
    std::uint32_t df(std::uint32_t i) const { return df_.at(i); }
    std::size_t size() const { return words_.size(); }
    std::uint64_t document_count() const { return docs_; }
    const std::vector<std::string>& words() const { return words_; }

    TokenizedDoc encode(const std::string& message_id,
                        const std::vector<std::string>& tokens) const {
        TokenizedDoc d;
        d.message_id = message_id;
        for (const auto& w : tokens)
            if (auto i = id(w)) d.tokens.push_back(*i);
        return d;
    }

    // Restore from persisted state; df/docs must match the training slice.
    static Vocabulary restore(std::vector<std::string> words, std::vector<std::uint32_t> df,
                              std::uint64_t docs) {
        Vocabulary v;
        v.words_ = std::move(words);
        v.df_ = std::move(df);
        v.docs_ = docs;
        for (std::uint32_t i = 0; i < v.words_.size(); ++i) v.index_[v.words_[i]] = i;
        return v;
    }

private:
    std::vector<std::string> words_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::vector<std::uint32_t> df_;
    std::uint64_t docs_ = 0;
};

enum class KeywordSource { tfidf, lda, tags };

struct KeywordSet {
    std::string scope_id;  // message id or other scope
    std::set<std::string> words;
    KeywordSource source = KeywordSource::tfidf;
};

// weight(w) = tf(w,d) * ln(N / df(w)); natural log, no smoothing. Ties break
// lexicographically. Words present in every document weigh zero and are only
// returned when nothing outranks them.
inline KeywordSet tfidf_keywords(const TokenizedDoc& doc, const Vocabulary& vocab, int top_n) {
    if (vocab.document_count() < 1) throw Error("tfidf: empty corpus");
    std::unordered_map<std::uint32_t, std::uint32_t> tf;
    for (std::uint32_t t : doc.tokens) ++tf[t];
    std::vector<std::pair<double, std::string>> weighted;
    weighted.reserve(tf.size());
    const double n = static_cast<double>(vocab.document_count());
    for (const auto& [token, count] : tf)
        weighted.emplace_back(count * std::log(n / vocab.df(token)), vocab.word(token));
    std::sort(weighted.begin(), weighted.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    KeywordSet out;
    out.scope_id = doc.message_id;
    out.source = KeywordSource::tfidf;
    for (int i = 0; i < top_n && i < static_cast<int>(weighted.size()); ++i)
        out.words.insert(weighted[i].second);
    return out;
}

// Overlap coefficient |s1 ∩ s2| / min(|s1|, |s2|). Undefined for empty sets.
inline std::optional<double> keyword_similarity(const KeywordSet& s1, const KeywordSet& s2) {
    if (s1.words.empty() || s2.words.empty()) return std::nullopt;
    std::size_t inter = 0;
    for (const auto& w : s1.words) inter += s2.words.count(w);
    return static_cast<double>(inter) /
           static_cast<double>(std::min(s1.words.size(), s2.words.size()));
}

// Bucketed counts of similarity values over [0,1]; 1.0 lands in the last
// bucket. Default width 5%.
struct ConvergenceHistogram {
    double bucket_width = 0.05;
    std::vector<std::uint64_t> counts;

    int bucket_of(double v) const {
        const int n = static_cast<int>(counts.size());
        return std::min(static_cast<int>(v / bucket_width), n - 1);
    }
};

inline ConvergenceHistogram convergence_histogram(const std::vector<double>& similarities,
                                                  double bucket_width = 0.05) {
    if (!(bucket_width > 0.0 && bucket_width <= 1.0)) throw Error("bad histogram bucket width");
    ConvergenceHistogram h;
    h.bucket_width = bucket_width;
    h.counts.assign(static_cast<std::size_t>(std::ceil(1.0 / bucket_width)), 0);
    for (double v : similarities) ++h.counts[h.bucket_of(v)];
    return h;
}

}  // namespace groupdyn

#endif
