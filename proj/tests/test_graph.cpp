#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <random>

#include "groupdyn/snapshot.hpp"

using namespace groupdyn;

namespace {

Interaction ia(const std::string& s, const std::string& t, int n = 0) {
    return {s, t, 1000 + n, "m" + std::to_string(n)};
}

}  // namespace

TEST_CASE("repeated interactions accumulate weight on one arc") {
    auto snap = build_snapshot(0, {ia("a", "b", 1), ia("a", "b", 2), ia("a", "b", 3)});
    REQUIRE(snap.arcs.size() == 1);
    CHECK(snap.arcs[0].weight == 3);
    CHECK(snap.names == std::vector<std::string>{"a", "b"});
}

TEST_CASE("direction is preserved") {
    auto snap = build_snapshot(0, {ia("a", "b", 1), ia("b", "a", 2)});
    REQUIRE(snap.arcs.size() == 2);
    CHECK(snap.has_arc(0, 1));
    CHECK(snap.has_arc(1, 0));
}

TEST_CASE("self-replies produce no arc and no node") {
    auto snap = build_snapshot(0, {ia("a", "a", 1)});
    CHECK(snap.arcs.empty());
    CHECK(snap.names.empty());

    auto snap2 = build_snapshot(0, {ia("a", "a", 1), ia("a", "b", 2)});
    CHECK(snap2.names == std::vector<std::string>{"a", "b"});
    REQUIRE(snap2.arcs.size() == 1);
}

TEST_CASE("arc weights sum to the non-self interaction count") {
    std::mt19937_64 rng(3);
    std::vector<Interaction> interactions;
    std::uint64_t non_self = 0;
    for (int i = 0; i < 300; ++i) {
        std::string s = "u" + std::to_string(rng() % 9);
        std::string t = "u" + std::to_string(rng() % 9);
        if (s != t) ++non_self;
        interactions.push_back(ia(s, t, i));
    }
    auto snap = build_snapshot(0, interactions);
    std::uint64_t total = 0;
    for (const auto& a : snap.arcs) total += a.weight;
    CHECK(total == non_self);
}

TEST_CASE("build_snapshot is insensitive to input order") {
    std::vector<Interaction> interactions;
    std::mt19937_64 rng(5);
    for (int i = 0; i < 60; ++i)
        interactions.push_back(ia("u" + std::to_string(rng() % 6), "u" + std::to_string(rng() % 6), i));
    auto sorted = build_snapshot(0, interactions);
    std::shuffle(interactions.begin(), interactions.end(), rng);
    auto shuffled = build_snapshot(0, interactions);
    REQUIRE(sorted.arcs.size() == shuffled.arcs.size());
    CHECK(sorted.names == shuffled.names);
    for (std::size_t i = 0; i < sorted.arcs.size(); ++i) {
        CHECK(sorted.arcs[i].source == shuffled.arcs[i].source);
        CHECK(sorted.arcs[i].target == shuffled.arcs[i].target);
        CHECK(sorted.arcs[i].weight == shuffled.arcs[i].weight);
    }
}

TEST_CASE("symmetrize merges opposing arcs") {
    auto snap = build_snapshot(0, {ia("a", "b", 1), ia("a", "b", 2), ia("b", "a", 3),
                                   ia("b", "a", 4), ia("b", "a", 5)});
    auto edges = symmetrize(snap);
    REQUIRE(edges.size() == 1);
    CHECK(edges[0].weight == 5);

    auto single = symmetrize(build_snapshot(0, {ia("a", "b", 1)}));
    REQUIRE(single.size() == 1);
    CHECK(single[0].weight == 1);

    CHECK(symmetrize(build_snapshot(0, {})).empty());
}

TEST_CASE("min_weight filters weak arcs") {
    SnapshotOptions opt;
    opt.min_weight = 2;
    auto snap = build_snapshot(0, {ia("a", "b", 1), ia("a", "b", 2), ia("b", "c", 3)}, opt);
    REQUIRE(snap.arcs.size() == 1);
    CHECK(snap.names == std::vector<std::string>{"a", "b"});
}

TEST_CASE("provenance records message ids when enabled") {
    SnapshotOptions opt;
    opt.provenance = true;
    auto snap = build_snapshot(0, {ia("a", "b", 2), ia("a", "b", 1)}, opt);
    REQUIRE(snap.arcs.size() == 1);
    CHECK(snap.arcs[0].message_ids == std::vector<std::string>{"m1", "m2"});
}

TEST_CASE("edge-list csv round-trips") {
    auto snap = build_snapshot(4, {ia("a", "b", 1), ia("a", "b", 2), ia("c", "a", 3)});
    auto path = std::filesystem::temp_directory_path() / "groupdyn_slot_4.csv";
    write_snapshot_csv(path.string(), snap);
    auto again = read_snapshot_csv(path.string(), 4);
    REQUIRE(again.arcs.size() == snap.arcs.size());
    CHECK(again.names == snap.names);
    for (std::size_t i = 0; i < snap.arcs.size(); ++i)
        CHECK(again.arcs[i].weight == snap.arcs[i].weight);
    std::filesystem::remove(path);
}
