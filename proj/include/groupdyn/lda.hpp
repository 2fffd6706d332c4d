#ifndef GROUPDYN_LDA_HPP
#define GROUPDYN_LDA_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "text.hpp"

namespace groupdyn {

// Fully specified uniform double in [0,1); keeps sampling reproducible across
// standard-library implementations.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct LdaParams {
    int topics = 350;
    double alpha = 0.0;  // 0 means auto: 50/T
    double beta = 0.01;
    int iterations = 1000;
    int avg_window = 100;  // final-phase iterations averaged into topic_word
    int infer_iterations = 100;
    int infer_avg_window = 50;
    std::uint64_t seed = 42;

    double effective_alpha() const { return alpha > 0.0 ? alpha : 50.0 / topics; }
};

struct LdaInference {
    std::vector<double> theta;  // length T, sums to 1
    bool uniform_fallback = false;  // no in-vocabulary tokens
};

class LdaModel {
public:
    LdaModel() = default;

    int topics() const { return t_; }
    std::size_t vocab_size() const { return v_; }
    const LdaParams& params() const { return params_; }
    const std::vector<std::string>& vocab_words() const { return vocab_words_; }

    // Row k of the topic-word matrix; non-negative, sums to 1.
    const double* topic_row(int k) const { return topic_word_.data() + static_cast<std::size_t>(k) * v_; }
    const std::vector<double>& topic_word() const { return topic_word_; }

    const std::vector<LdaInference>& doc_topics() const { return doc_topics_; }
    const std::vector<std::string>& doc_ids() const { return doc_ids_; }

    // Collapsed Gibbs sampling. topic_word averages the count state over the
    // final avg_window iterations; per-document vectors come from the
    // deterministic fold-in below, so equal documents get equal vectors.
    static LdaModel train(const std::vector<TokenizedDoc>& docs, const Vocabulary& vocab,
                          const LdaParams& params) {
        if (docs.empty()) throw Error("lda: no documents");
        if (params.topics < 2) throw Error("lda: need at least 2 topics");
        if (static_cast<std::size_t>(params.topics) > vocab.size())
            throw Error("lda: more topics than vocabulary words");
        if (params.iterations < 1 || params.avg_window < 1 ||
            params.avg_window > params.iterations)
            throw Error("lda: bad iteration counts");

        LdaModel m;
        m.t_ = params.topics;
        m.v_ = vocab.size();
        m.params_ = params;
        m.vocab_words_ = vocab.words();
        m.df_.resize(vocab.size());
        for (std::uint32_t i = 0; i < vocab.size(); ++i) m.df_[i] = vocab.df(i);
        m.training_docs_ = vocab.document_count();

        const int T = m.t_;
        const std::size_t V = m.v_;
        const double alpha = params.effective_alpha();
        const double beta = params.beta;

        std::size_t total_tokens = 0;
        for (const auto& d : docs) total_tokens += d.tokens.size();
        if (total_tokens == 0) throw Error("lda: corpus has zero tokens");

        std::vector<std::uint32_t> n_dk(docs.size() * T, 0);
        std::vector<std::uint32_t> n_kw(static_cast<std::size_t>(T) * V, 0);
        std::vector<std::uint64_t> n_k(T, 0);
        std::vector<std::uint32_t> z(total_tokens);

        std::mt19937_64 rng(params.seed);
        std::size_t pos = 0;
        for (std::size_t d = 0; d < docs.size(); ++d)
            for (std::uint32_t w : docs[d].tokens) {
                const auto k = static_cast<std::uint32_t>(rng() % T);
                z[pos++] = k;
                ++n_dk[d * T + k];
                ++n_kw[static_cast<std::size_t>(k) * V + w];
                ++n_k[k];
            }

        std::vector<std::uint64_t> acc_kw(static_cast<std::size_t>(T) * V, 0);
        std::vector<double> p(T);
        const double vbeta = static_cast<double>(V) * beta;
        for (int iter = 0; iter < params.iterations; ++iter) {
            pos = 0;
            for (std::size_t d = 0; d < docs.size(); ++d) {
                std::uint32_t* dk = n_dk.data() + d * T;
                for (std::uint32_t w : docs[d].tokens) {
                    const std::uint32_t old = z[pos];
                    --dk[old];
                    --n_kw[static_cast<std::size_t>(old) * V + w];
                    --n_k[old];
                    double total = 0.0;
                    for (int k = 0; k < T; ++k) {
                        total += (dk[k] + alpha) *
                                 (n_kw[static_cast<std::size_t>(k) * V + w] + beta) /
                                 (n_k[k] + vbeta);
                        p[k] = total;
                    }
                    const double u = uniform01(rng) * total;
                    int k = 0;
                    while (k + 1 < T && u >= p[k]) ++k;
                    z[pos++] = static_cast<std::uint32_t>(k);
                    ++dk[k];
                    ++n_kw[static_cast<std::size_t>(k) * V + w];
                    ++n_k[k];
                }
            }
            if (iter >= params.iterations - params.avg_window)
                for (std::size_t i = 0; i < acc_kw.size(); ++i) acc_kw[i] += n_kw[i];
        }

        m.topic_word_.assign(static_cast<std::size_t>(T) * V, 0.0);
        const double window = static_cast<double>(params.avg_window);
        for (int k = 0; k < T; ++k) {
            double row_sum = 0.0;
            for (std::size_t w = 0; w < V; ++w) {
                const double avg = static_cast<double>(acc_kw[static_cast<std::size_t>(k) * V + w]) / window;
                const double val = avg + beta;
                m.topic_word_[static_cast<std::size_t>(k) * V + w] = val;
                row_sum += val;
            }
            for (std::size_t w = 0; w < V; ++w)
                m.topic_word_[static_cast<std::size_t>(k) * V + w] /= row_sum;
        }

        m.doc_ids_.reserve(docs.size());
        m.doc_topics_.reserve(docs.size());
        for (const auto& d : docs) {
            m.doc_ids_.push_back(d.message_id);
            m.doc_topics_.push_back(m.infer(d.tokens));
        }
        return m;
    }

    // Folding-in Gibbs with the topic-word matrix fixed. The chain is seeded
    // from the model seed and the token sequence, so identical documents map
    // to identical vectors.
    LdaInference infer(const std::vector<std::uint32_t>& tokens) const {
        LdaInference out;
        const int T = t_;
        std::vector<std::uint32_t> usable;
        for (std::uint32_t w : tokens)
            if (w < v_) usable.push_back(w);
        if (usable.empty()) {
            out.theta.assign(T, 1.0 / T);
            out.uniform_fallback = true;
            return out;
        }
        const double alpha = params_.effective_alpha();
        const int iters = params_.infer_iterations;
        const int avg_window = std::min(params_.infer_avg_window, iters);

        std::mt19937_64 rng(fnv1a_range(usable.begin(), usable.end(), fnv1a_u64(params_.seed)));
        std::vector<std::uint32_t> dk(T, 0);
        std::vector<std::uint32_t> z(usable.size());
        for (std::size_t i = 0; i < usable.size(); ++i) {
            const auto k = static_cast<std::uint32_t>(rng() % T);
            z[i] = k;
            ++dk[k];
        }
        std::vector<double> p(T);
        std::vector<double> theta_acc(T, 0.0);
        for (int iter = 0; iter < iters; ++iter) {
            for (std::size_t i = 0; i < usable.size(); ++i) {
                const std::uint32_t w = usable[i];
                --dk[z[i]];
                double total = 0.0;
                for (int k = 0; k < T; ++k) {
                    total += (dk[k] + alpha) * topic_word_[static_cast<std::size_t>(k) * v_ + w];
                    p[k] = total;
                }
                const double u = uniform01(rng) * total;
                int k = 0;
                while (k + 1 < T && u >= p[k]) ++k;
                z[i] = static_cast<std::uint32_t>(k);
                ++dk[k];
            }
            if (iter >= iters - avg_window) {
                const double denom = static_cast<double>(usable.size()) + T * alpha;
                for (int k = 0; k < T; ++k) theta_acc[k] += (dk[k] + alpha) / denom;
            }
        }
        out.theta.resize(T);
        double sum = 0.0;
        for (int k = 0; k < T; ++k) sum += theta_acc[k];
        for (int k = 0; k < T; ++k) out.theta[k] = theta_acc[k] / sum;
        return out;
    }

    // Most probable words of one topic; ties lexicographic.
    KeywordSet topic_keywords(int topic, int top_n) const {
        if (topic < 0 || topic >= t_) throw Error("lda: topic index out of range");
        std::vector<std::pair<double, std::string>> weighted;
        weighted.reserve(v_);
        for (std::size_t w = 0; w < v_; ++w)
            weighted.emplace_back(topic_row(topic)[w], vocab_words_[w]);
        std::sort(weighted.begin(), weighted.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        KeywordSet out;
        out.scope_id = "topic:" + std::to_string(topic);
        out.source = KeywordSource::lda;
        for (int i = 0; i < top_n && i < static_cast<int>(weighted.size()); ++i)
            out.words.insert(weighted[i].second);
        return out;
    }

    Vocabulary vocabulary() const { return Vocabulary::restore(vocab_words_, df_, training_docs_); }

    void save(const std::string& path) const {
        nlohmann::json j;
        j["topics"] = t_;
        j["vocab_size"] = v_;
        j["alpha"] = params_.alpha;
        j["beta"] = params_.beta;
        j["iterations"] = params_.iterations;
        j["avg_window"] = params_.avg_window;
        j["infer_iterations"] = params_.infer_iterations;
        j["infer_avg_window"] = params_.infer_avg_window;
        j["seed"] = params_.seed;
        j["vocab"] = vocab_words_;
        j["df"] = df_;
        j["training_docs"] = training_docs_;
        nlohmann::json rows = nlohmann::json::array();
        for (int k = 0; k < t_; ++k)
            rows.push_back(std::vector<double>(topic_row(k), topic_row(k) + v_));
        j["topic_word"] = std::move(rows);
        nlohmann::json docs = nlohmann::json::array();
        for (std::size_t d = 0; d < doc_ids_.size(); ++d)
            docs.push_back({{"id", doc_ids_[d]},
                            {"theta", doc_topics_[d].theta},
                            {"uniform", doc_topics_[d].uniform_fallback}});
        j["doc_topic"] = std::move(docs);
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write " + path);
        out << j.dump() << '\n';
    }

    static LdaModel load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error("cannot open " + path);
        nlohmann::json j;
        in >> j;
        LdaModel m;
        m.t_ = j.at("topics").get<int>();
        m.v_ = j.at("vocab_size").get<std::size_t>();
        m.params_.topics = m.t_;
        m.params_.alpha = j.at("alpha").get<double>();
        m.params_.beta = j.at("beta").get<double>();
        m.params_.iterations = j.at("iterations").get<int>();
        m.params_.avg_window = j.at("avg_window").get<int>();
        m.params_.infer_iterations = j.at("infer_iterations").get<int>();
        m.params_.infer_avg_window = j.at("infer_avg_window").get<int>();
        m.params_.seed = j.at("seed").get<std::uint64_t>();
        m.vocab_words_ = j.at("vocab").get<std::vector<std::string>>();
        m.df_ = j.at("df").get<std::vector<std::uint32_t>>();
        m.training_docs_ = j.at("training_docs").get<std::uint64_t>();
        m.topic_word_.reserve(static_cast<std::size_t>(m.t_) * m.v_);
        for (const auto& row : j.at("topic_word"))
            for (const auto& val : row) m.topic_word_.push_back(val.get<double>());
        for (const auto& doc : j.at("doc_topic")) {
            m.doc_ids_.push_back(doc.at("id").get<std::string>());
            LdaInference inf;
            inf.theta = doc.at("theta").get<std::vector<double>>();
            inf.uniform_fallback = doc.at("uniform").get<bool>();
            m.doc_topics_.push_back(std::move(inf));
        }
        return m;
    }

private:
    int t_ = 0;
    std::size_t v_ = 0;
    LdaParams params_;
    std::vector<double> topic_word_;  // T x V, row-major
    std::vector<std::string> vocab_words_;
    std::vector<std::uint32_t> df_;
    std::uint64_t training_docs_ = 0;
    std::vector<std::string> doc_ids_;
    std::vector<LdaInference> doc_topics_;
};

// Dominant topic of an inference, ties to the lowest index.
inline int dominant_topic(const std::vector<double>& theta) {
    int best = 0;
    for (int k = 1; k < static_cast<int>(theta.size()); ++k)
        if (theta[k] > theta[best]) best = k;
    return best;
}

}  // namespace groupdyn

#endif
