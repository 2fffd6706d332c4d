#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "groupdyn/corpus.hpp"

using namespace groupdyn;

namespace {

std::string record(const std::string& id, const std::string& kind, const std::string& author,
                   const std::string& ts, const std::string& post_id,
                   const std::string& parent, const std::string& text,
                   const std::vector<std::string>& tags = {}) {
    nlohmann::json j;
    j["id"] = id;
    j["kind"] = kind;
    j["author"] = author;
    j["ts"] = ts;
    j["post_id"] = post_id;
    if (parent.empty())
        j["parent_comment_id"] = nullptr;
    else
        j["parent_comment_id"] = parent;
    j["text"] = text;
    j["tags"] = tags;
    return j.dump();
}

ParseResult parse_lines(const std::vector<std::string>& lines, const ParseOptions& opt = {}) {
    std::string blob;
    for (const auto& l : lines) blob += l + "\n";
    std::istringstream in(blob);
    return parse_jsonl(in, opt);
}

}  // namespace

TEST_CASE("jsonl: valid records parse cleanly") {
    auto r = parse_lines({
        record("p1", "post", "anna", "2020-01-01T10:00:00Z", "p1", "", "hello", {"News", " Tech "}),
        record("c1", "comment", "bob", "2020-01-01T11:00:00Z", "p1", "", "hi @Anna!"),
        record("c2", "comment", "carol", "2020-01-01T12:00:00Z", "p1", "c1", "agreed"),
    });
    REQUIRE(r.messages.size() == 3);
    REQUIRE(r.rejections.empty());
    REQUIRE(r.records == 3);
    CHECK(r.messages[0].tags == std::vector<std::string>{"news", "tech"});
    CHECK(r.messages[1].mention() == "anna");
    CHECK(r.messages[2].parent_comment_id == "c1");
}

TEST_CASE("jsonl: malformed line is rejected with its line number") {
    auto r = parse_lines({
        record("p1", "post", "anna", "2020-01-01T10:00:00Z", "p1", "", "a"),
        "{not json",
        record("c1", "comment", "bob", "2020-01-01T11:00:00Z", "p1", "", "b"),
        record("c2", "comment", "carol", "2020-01-01T12:00:00Z", "p1", "", "c"),
    });
    REQUIRE(r.messages.size() == 3);
    REQUIRE(r.rejections.size() == 1);
    CHECK(r.rejections[0].line == 2);
    CHECK(r.records == 4);
}

TEST_CASE("jsonl: accepted plus rejected equals record count") {
    auto r = parse_lines({
        record("p1", "post", "anna", "2020-01-01T10:00:00Z", "p1", "", "a"),
        record("bad1", "post", "anna", "2020-01-01T10:00:00Z", "other", "", "post id mismatch"),
        record("bad2", "post", "anna", "2020-01-01T10:00:00Z", "bad2", "c0", "post with parent"),
        record("bad3", "comment", "anna", "2020-01-01T10:00:00Z", "", "", "comment sans post"),
    });
    CHECK(r.messages.size() + r.rejections.size() == r.records);
    CHECK(r.messages.size() == 1);
}

TEST_CASE("jsonl: duplicate id is fatal") {
    CHECK_THROWS_AS(parse_lines({
                        record("p1", "post", "anna", "2020-01-01T10:00:00Z", "p1", "", "a"),
                        record("p1", "post", "anna", "2020-01-02T10:00:00Z", "p1", "", "b"),
                    }),
                    Error);
}

TEST_CASE("jsonl: timestamps outside the configured range are rejected") {
    ParseOptions opt;
    opt.from_day = parse_date("2020-01-01");
    opt.to_day = parse_date("2020-01-31");
    auto r = parse_lines(
        {
            record("p1", "post", "anna", "2020-01-31T23:59:59Z", "p1", "", "in"),
            record("p2", "post", "anna", "2020-02-01T00:00:00Z", "p2", "", "out"),
        },
        opt);
    REQUIRE(r.messages.size() == 1);
    CHECK(r.messages[0].id == "p1");
    REQUIRE(r.rejections.size() == 1);
}

TEST_CASE("format names") {
    CHECK(parse_format("jsonl") == CorpusFormat::jsonl);
    CHECK(parse_format("csv") == CorpusFormat::csv);
    CHECK_THROWS_AS(parse_format("xml"), Error);
}

TEST_CASE("mention extraction trims punctuation and lowercases") {
    CHECK(extract_mentions("@anna I disagree") == std::vector<std::string>{"anna"});
    CHECK(extract_mentions("fine by me, @Bob.") == std::vector<std::string>{"bob"});
    CHECK(extract_mentions("@x-1 and @y_2, plus @") ==
          std::vector<std::string>{"x-1", "y_2"});
    CHECK(extract_mentions("mail me at a@b.com") == std::vector<std::string>{"b.com"});
    CHECK(extract_mentions("no mentions here").empty());
}

namespace {

std::vector<Message> thread_fixture() {
    auto r = parse_lines({
        record("p1", "post", "bob", "2020-01-01T10:00:00Z", "p1", "", "post body"),
        record("c1", "comment", "anna", "2020-01-01T11:00:00Z", "p1", "", "first!"),
        record("c2", "comment", "dave", "2020-01-01T12:00:00Z", "p1", "c1", "@anna I disagree"),
        record("c3", "comment", "erin", "2020-01-01T13:00:00Z", "p1", "", "@ghost hello?"),
        record("c4", "comment", "frank", "2020-01-01T14:00:00Z", "p1", "c1", "plain reply"),
    });
    REQUIRE(r.rejections.empty());
    return r.messages;
}

}  // namespace

TEST_CASE("resolve: mention matching a comment author wins") {
    auto messages = thread_fixture();
    CorpusIndex index(messages);
    auto out = resolve_target(messages[2], index);  // c2
    REQUIRE(out.interaction);
    CHECK(out.interaction->source == "dave");
    CHECK(out.interaction->target == "anna");
}

TEST_CASE("resolve: no mention falls back to the post author") {
    auto messages = thread_fixture();
    CorpusIndex index(messages);
    auto c1 = resolve_target(messages[1], index);
    REQUIRE(c1.interaction);
    CHECK(c1.interaction->target == "bob");
    auto c4 = resolve_target(messages[4], index);  // reply to a comment, no mention
    REQUIRE(c4.interaction);
    CHECK(c4.interaction->target == "bob");
}

TEST_CASE("resolve: unmatched mention falls back to the post author") {
    auto messages = thread_fixture();
    CorpusIndex index(messages);
    auto out = resolve_target(messages[3], index);  // @ghost
    REQUIRE(out.interaction);
    CHECK(out.interaction->target == "bob");
}

TEST_CASE("resolve: ambiguous mention falls back and is noted") {
    auto r = parse_lines({
        record("p1", "post", "bob", "2020-01-01T10:00:00Z", "p1", "", "post"),
        record("c1", "comment", "Anna", "2020-01-01T11:00:00Z", "p1", "", "x"),
        record("c2", "comment", "anna", "2020-01-01T12:00:00Z", "p1", "", "y"),
        record("c3", "comment", "dave", "2020-01-01T13:00:00Z", "p1", "", "@anna who?"),
    });
    CorpusIndex index(r.messages);
    auto out = resolve_target(r.messages[3], index);
    REQUIRE(out.interaction);
    CHECK(out.interaction->target == "bob");
    CHECK(out.note.has_value());
}

TEST_CASE("resolve: dangling post_id rejects the comment") {
    auto r = parse_lines({
        record("c9", "comment", "dave", "2020-01-01T13:00:00Z", "nope", "", "hello"),
    });
    auto resolved = resolve_all(r.messages);
    CHECK(resolved.interactions.empty());
    REQUIRE(resolved.rejections.size() == 1);
    CHECK(resolved.rejections[0].id == "c9");
}

TEST_CASE("resolve: every accepted comment yields exactly one interaction") {
    auto messages = thread_fixture();
    auto resolved = resolve_all(messages);
    CHECK(resolved.interactions.size() == 4);
    CHECK(resolved.rejections.empty());
}

TEST_CASE("resolve: self-reply to own post is kept") {
    auto r = parse_lines({
        record("p1", "post", "anna", "2020-01-01T10:00:00Z", "p1", "", "post"),
        record("c1", "comment", "anna", "2020-01-01T11:00:00Z", "p1", "", "addendum"),
    });
    auto resolved = resolve_all(r.messages);
    REQUIRE(resolved.interactions.size() == 1);
    CHECK(resolved.interactions[0].source == "anna");
    CHECK(resolved.interactions[0].target == "anna");
}

TEST_CASE("corpus_stats basics") {
    CHECK(corpus_stats({}).users == 0);
    CHECK_FALSE(corpus_stats({}).first_ts.has_value());

    auto r = parse_lines({
        record("p1", "post", "anna", "2020-01-01T10:00:00Z", "p1", "", "a", {"x"}),
        record("p2", "post", "anna", "2020-01-03T10:00:00Z", "p2", "", "b", {"x", "y"}),
    });
    auto s = corpus_stats(r.messages);
    CHECK(s.users == 1);
    CHECK(s.posts == 2);
    CHECK(s.comments == 0);
    CHECK(s.distinct_tags == 2);
    CHECK(*s.first_ts == parse_timestamp("2020-01-01T10:00:00Z"));
    CHECK(*s.last_ts == parse_timestamp("2020-01-03T10:00:00Z"));
}

TEST_CASE("csv: quoted fields, pipes in tags, bad rows") {
    std::istringstream in(
        "id,kind,author,ts,post_id,parent_comment_id,text,tags\n"
        "p1,post,anna,2020-01-01T10:00:00Z,p1,,\"hello, world\n second line\",News|Tech\n"
        "c1,comment,bob,2020-01-01T11:00:00Z,p1,,\"quote \"\"this\"\"\",\n"
        "c2,comment,carol,bad-timestamp,p1,,oops,\n"
        "short,row\n");
    auto r = parse_csv(in);
    REQUIRE(r.records == 4);
    REQUIRE(r.messages.size() == 2);
    REQUIRE(r.rejections.size() == 2);
    CHECK(r.messages[0].text == "hello, world\n second line");
    CHECK(r.messages[0].tags == std::vector<std::string>{"news", "tech"});
    CHECK(r.messages[1].text == "quote \"this\"");
}

TEST_CASE("csv: header required") {
    std::istringstream in("id,kind\n");
    CHECK_THROWS_AS(parse_csv(in), Error);
}

TEST_CASE("normalized store round-trips") {
    auto messages = thread_fixture();
    std::string blob;
    for (const auto& m : messages) blob += message_to_json(m).dump() + "\n";
    std::istringstream in(blob);
    auto again = parse_jsonl(in);
    REQUIRE(again.messages.size() == messages.size());
    for (std::size_t i = 0; i < messages.size(); ++i) {
        CHECK(again.messages[i].id == messages[i].id);
        CHECK(again.messages[i].author == messages[i].author);
        CHECK(again.messages[i].timestamp == messages[i].timestamp);
        CHECK(again.messages[i].kind == messages[i].kind);
        CHECK(again.messages[i].text == messages[i].text);
    }
}

TEST_CASE("date round-trips") {
    CHECK(format_date(parse_date("2008-01-01")) == "2008-01-01");
    CHECK(format_date(parse_date("2012-03-31")) == "2012-03-31");
    CHECK(parse_date("2012-03-31") - parse_date("2008-01-01") == 1551);
    CHECK(format_timestamp(parse_timestamp("2020-06-15T23:59:59Z")) == "2020-06-15T23:59:59Z");
    CHECK_THROWS_AS(parse_date("2020/01/01"), Error);
    CHECK_THROWS_AS(parse_timestamp("2020-01-01T10:00:00"), Error);
}
