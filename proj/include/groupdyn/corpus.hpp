#ifndef GROUPDYN_CORPUS_HPP
#define GROUPDYN_CORPUS_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "core.hpp"

namespace groupdyn {

enum class MessageKind { post, comment };

inline const char* to_string(MessageKind k) {
    return k == MessageKind::post ? "post" : "comment";
}

struct Message {
    std::string id;
    std::string author;
    std::int64_t timestamp = 0;  // UTC seconds
    MessageKind kind = MessageKind::post;
    std::string post_id;                       // for posts, equals id
    std::optional<std::string> parent_comment_id;
    std::string text;
    std::vector<std::string> tags;             // lowercase, posts only
    std::vector<std::string> mentions;         // @-names from the body, lowercase, in order

    // First extracted @-mention, if any.
    std::optional<std::string> mention() const {
        if (mentions.empty()) return std::nullopt;
        return mentions.front();
    }
};

struct Interaction {
    std::string source;  // commenter
    std::string target;  // commented-on user
    std::int64_t timestamp = 0;
    std::string message_id;
};

struct Rejection {
    std::uint64_t line = 0;
    std::string id;  // may be empty when the record had none
    std::string reason;
};

enum class CorpusFormat { jsonl, csv };

inline CorpusFormat parse_format(std::string_view s) {
    if (s == "jsonl") return CorpusFormat::jsonl;
    if (s == "csv") return CorpusFormat::csv;
    throw Error("unknown corpus format: " + std::string(s));
}

struct ParseOptions {
    // Optional corpus date range [from_day, to_day], inclusive; records outside
    // are rejected.
    std::optional<std::int32_t> from_day;
    std::optional<std::int32_t> to_day;
};

struct ParseResult {
    std::vector<Message> messages;
    std::vector<Rejection> rejections;
    std::uint64_t records = 0;  // accepted + rejected
};

// ---------------------------------------------------------------------------
// @-mention extraction. A mention is '@' followed by name characters
// [A-Za-z0-9_.-]; trailing punctuation is trimmed and the name lowercased.

inline std::vector<std::string> extract_mentions(std::string_view text) {
    std::vector<std::string> out;
    auto is_name_char = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '_' || c == '.' || c == '-';
    };
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '@') continue;
        size_t j = i + 1;
        while (j < text.size() && is_name_char(text[j])) ++j;
        size_t e = j;
        while (e > i + 1 && (text[e - 1] == '.' || text[e - 1] == '-' || text[e - 1] == '_'))
            --e;
        if (e > i + 1) out.push_back(to_lower(text.substr(i + 1, e - i - 1)));
        i = j - 1;
    }
    return out;
}

namespace detail {

inline std::string normalize_tag(std::string_view raw) { return to_lower(trim(raw)); }

inline std::optional<std::string> validate(Message& m, const ParseOptions& opt) {
    if (m.id.empty()) return "missing id";
    if (m.author.empty()) return "missing author";
    if (m.kind == MessageKind::post) {
        if (m.parent_comment_id) return "post with parent_comment_id";
        if (m.post_id.empty()) m.post_id = m.id;
        if (m.post_id != m.id) return "post with post_id != id";
    } else {
        if (m.post_id.empty()) return "comment without post_id";
    }
    if (opt.from_day && m.timestamp < *opt.from_day * kSecondsPerDay)
        return "timestamp before corpus range";
    if (opt.to_day && m.timestamp >= (*opt.to_day + 1) * kSecondsPerDay)
        return "timestamp after corpus range";
    return std::nullopt;
}

inline Message message_from_json(const nlohmann::json& j) {
    Message m;
    m.id = j.at("id").get<std::string>();
    m.author = j.at("author").get<std::string>();
    m.timestamp = parse_timestamp(j.at("ts").get<std::string>());
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "post")
        m.kind = MessageKind::post;
    else if (kind == "comment")
        m.kind = MessageKind::comment;
    else
        throw Error("bad kind: " + kind);
    if (j.contains("post_id") && !j["post_id"].is_null())
        m.post_id = j["post_id"].get<std::string>();
    if (j.contains("parent_comment_id") && !j["parent_comment_id"].is_null())
        m.parent_comment_id = j["parent_comment_id"].get<std::string>();
    if (j.contains("text") && !j["text"].is_null()) m.text = j["text"].get<std::string>();
    if (j.contains("tags") && j["tags"].is_array() && m.kind == MessageKind::post)
        for (const auto& t : j["tags"]) {
            std::string tag = normalize_tag(t.get<std::string>());
            if (!tag.empty()) m.tags.push_back(tag);
        }
    m.mentions = extract_mentions(m.text);
    return m;
}

// RFC-4180 style row reader; returns false at end of input. Quoted fields may
// contain separators, doubled quotes and newlines.
inline bool read_csv_row(std::istream& in, std::vector<std::string>& fields,
                         std::uint64_t& line_no) {
    fields.clear();
    int c = in.get();
    if (c == EOF) return false;
    std::string field;
    bool quoted = false;
    ++line_no;
    while (true) {
        if (c == EOF) {
            fields.push_back(field);
            return true;
        }
        char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                int next = in.get();
                if (next == '"') {
                    field += '"';
                } else {
                    quoted = false;
                    c = next;
                    continue;
                }
            } else {
                if (ch == '\n') ++line_no;
                field += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(field);
            field.clear();
        } else if (ch == '\n') {
            fields.push_back(field);
            return true;
        } else if (ch != '\r') {
            field += ch;
        }
        c = in.get();
    }
}

inline const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = {"id",      "kind", "author",
                                                  "ts",      "post_id", "parent_comment_id",
                                                  "text",    "tags"};
    return cols;
}

}  // namespace detail

// Parse one JSONL corpus stream. Malformed records are skipped and reported;
// duplicate ids are fatal.
inline ParseResult parse_jsonl(std::istream& in, const ParseOptions& opt = {}) {
    ParseResult out;
    std::unordered_set<std::string> seen;
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++out.records;
        Message m;
        try {
            m = detail::message_from_json(nlohmann::json::parse(line));
        } catch (const std::exception& e) {
            out.rejections.push_back({line_no, "", e.what()});
            continue;
        }
        if (auto err = detail::validate(m, opt)) {
            out.rejections.push_back({line_no, m.id, *err});
            continue;
        }
        if (!seen.insert(m.id).second) throw Error("duplicate message id: " + m.id);
        out.messages.push_back(std::move(m));
    }
    return out;
}

// CSV variant: same columns as JSONL, tags pipe-delimited, header row required.
inline ParseResult parse_csv(std::istream& in, const ParseOptions& opt = {}) {
    ParseResult out;
    std::unordered_set<std::string> seen;
    std::vector<std::string> fields;
    std::uint64_t line_no = 0;
    if (!detail::read_csv_row(in, fields, line_no) || fields != detail::csv_columns())
        throw Error("csv: missing or wrong header row");
    while (detail::read_csv_row(in, fields, line_no)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        ++out.records;
        if (fields.size() != detail::csv_columns().size()) {
            out.rejections.push_back({line_no, "", "wrong column count"});
            continue;
        }
        Message m;
        try {
            m.id = fields[0];
            if (fields[1] == "post")
                m.kind = MessageKind::post;
            else if (fields[1] == "comment")
                m.kind = MessageKind::comment;
            else
                throw Error("bad kind: " + fields[1]);
            m.author = fields[2];
            m.timestamp = parse_timestamp(fields[3]);
            m.post_id = fields[4];
            if (!fields[5].empty()) m.parent_comment_id = fields[5];
            m.text = fields[6];
            if (m.kind == MessageKind::post && !fields[7].empty())
                for (const auto& t : split(fields[7], '|')) {
                    std::string tag = detail::normalize_tag(t);
                    if (!tag.empty()) m.tags.push_back(tag);
                }
            m.mentions = extract_mentions(m.text);
        } catch (const std::exception& e) {
            out.rejections.push_back({line_no, fields[0], e.what()});
            continue;
        }
        if (auto err = detail::validate(m, opt)) {
            out.rejections.push_back({line_no, m.id, *err});
            continue;
        }
        if (!seen.insert(m.id).second) throw Error("duplicate message id: " + m.id);
        out.messages.push_back(std::move(m));
    }
    return out;
}

inline ParseResult parse_corpus(const std::string& path, CorpusFormat format,
                                const ParseOptions& opt = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open corpus file: " + path);
    return format == CorpusFormat::jsonl ? parse_jsonl(in, opt) : parse_csv(in, opt);
}

// ---------------------------------------------------------------------------
// Comment target resolution. An @-mention that names the author of a comment
// under the same post wins; everything else falls back to the post author.

class CorpusIndex {
public:
    explicit CorpusIndex(const std::vector<Message>& messages) {
        for (const auto& m : messages) {
            if (m.kind == MessageKind::post) {
                post_author_.emplace(m.id, m.author);
            } else {
                commenters_[m.post_id][to_lower(m.author)].insert(m.author);
            }
        }
    }

    const std::string* post_author(const std::string& post_id) const {
        auto it = post_author_.find(post_id);
        return it == post_author_.end() ? nullptr : &it->second;
    }

    // Authors of comments under `post_id` whose lowercased name equals `name`.
    const std::set<std::string>* comment_authors(const std::string& post_id,
                                                 const std::string& name) const {
        auto it = commenters_.find(post_id);
        if (it == commenters_.end()) return nullptr;
        auto jt = it->second.find(name);
        return jt == it->second.end() ? nullptr : &jt->second;
    }

private:
    std::unordered_map<std::string, std::string> post_author_;
    std::unordered_map<std::string, std::map<std::string, std::set<std::string>>> commenters_;
};

struct ResolveOutcome {
    std::optional<Interaction> interaction;
    std::optional<std::string> note;  // ambiguity or rejection reason
};

inline ResolveOutcome resolve_target(const Message& comment, const CorpusIndex& index) {
    if (comment.kind != MessageKind::comment)
        throw Error("resolve_target: not a comment: " + comment.id);
    const std::string* post_author = index.post_author(comment.post_id);
    if (!post_author)
        return {std::nullopt, "dangling post_id " + comment.post_id};
    ResolveOutcome out;
    Interaction ia{comment.author, *post_author, comment.timestamp, comment.id};
    for (const auto& mention : comment.mentions) {
        const auto* authors = index.comment_authors(comment.post_id, mention);
        if (!authors) continue;
        if (authors->size() > 1) {
            out.note = "ambiguous mention @" + mention + ", using post author";
            break;
        }
        ia.target = *authors->begin();
        break;
    }
    out.interaction = ia;
    return out;
}

struct ResolveResult {
    std::vector<Interaction> interactions;
    std::vector<Rejection> rejections;
    std::uint64_t ambiguous_mentions = 0;
};

// Every accepted comment yields exactly one interaction.
inline ResolveResult resolve_all(const std::vector<Message>& messages) {
    CorpusIndex index(messages);
    ResolveResult out;
    for (const auto& m : messages) {
        if (m.kind != MessageKind::comment) continue;
        ResolveOutcome r = resolve_target(m, index);
        if (!r.interaction) {
            out.rejections.push_back({0, m.id, *r.note});
            continue;
        }
        if (r.note) ++out.ambiguous_mentions;
        out.interactions.push_back(std::move(*r.interaction));
    }
    return out;
}

// ---------------------------------------------------------------------------

struct CorpusStats {
    std::uint64_t users = 0;
    std::uint64_t posts = 0;
    std::uint64_t comments = 0;
    std::uint64_t distinct_tags = 0;
    std::optional<std::int64_t> first_ts;
    std::optional<std::int64_t> last_ts;
};

inline CorpusStats corpus_stats(const std::vector<Message>& messages) {
    CorpusStats s;
    std::unordered_set<std::string> users, tags;
    for (const auto& m : messages) {
        users.insert(m.author);
        if (m.kind == MessageKind::post)
            ++s.posts;
        else
            ++s.comments;
        for (const auto& t : m.tags) tags.insert(t);
        if (!s.first_ts || m.timestamp < *s.first_ts) s.first_ts = m.timestamp;
        if (!s.last_ts || m.timestamp > *s.last_ts) s.last_ts = m.timestamp;
    }
    s.users = users.size();
    s.distinct_tags = tags.size();
    return s;
}

// ---------------------------------------------------------------------------
// Normalized store round-trip.

inline nlohmann::json message_to_json(const Message& m) {
    nlohmann::json j;
    j["id"] = m.id;
    j["kind"] = to_string(m.kind);
    j["author"] = m.author;
    j["ts"] = format_timestamp(m.timestamp);
    j["post_id"] = m.post_id;
    if (m.parent_comment_id)
        j["parent_comment_id"] = *m.parent_comment_id;
    else
        j["parent_comment_id"] = nullptr;
    j["text"] = m.text;
    j["tags"] = m.tags;
    return j;
}

inline void write_messages_jsonl(const std::string& path, const std::vector<Message>& messages) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    for (const auto& m : messages) out << message_to_json(m).dump() << '\n';
}

inline void write_interactions_csv(const std::string& path,
                                   const std::vector<Interaction>& interactions) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << "source,target,ts,message_id\n";
    for (const auto& ia : interactions)
        out << ia.source << ',' << ia.target << ',' << format_timestamp(ia.timestamp) << ','
            << ia.message_id << '\n';
}

inline std::vector<Interaction> read_interactions_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::vector<Interaction> out;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto f = split(line, ',');
        if (f.size() != 4) throw Error("bad interactions row: " + line);
        out.push_back({f[0], f[1], parse_timestamp(f[2]), f[3]});
    }
    return out;
}

}  // namespace groupdyn

#endif
