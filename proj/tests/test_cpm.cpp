#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "groupdyn/cpm.hpp"
#include "support/cpm_oracle.hpp"

using namespace groupdyn;

namespace {

// Bidirectional arcs between every listed pair.
Snapshot graph(const std::vector<std::pair<std::string, std::string>>& edges,
               bool bidirectional = true) {
    std::vector<Interaction> interactions;
    int n = 0;
    for (const auto& [u, v] : edges) {
        interactions.push_back({u, v, 0, "m" + std::to_string(n++)});
        if (bidirectional) interactions.push_back({v, u, 0, "m" + std::to_string(n++)});
    }
    return build_snapshot(0, interactions);
}

Snapshot complete_graph(int n) {
    std::vector<std::pair<std::string, std::string>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            edges.emplace_back("u" + std::to_string(i), "u" + std::to_string(j));
    return graph(edges);
}

std::set<std::vector<std::string>> member_sets(const std::vector<Community>& communities) {
    std::set<std::vector<std::string>> out;
    for (const auto& c : communities) out.insert(c.members);
    return out;
}

}  // namespace

TEST_CASE("complete graph on 4 nodes has four undirected 3-cliques") {
    auto snap = complete_graph(4);
    auto cliques = enumerate_k_cliques(snap, 3, CpmMode::undirected);
    CHECK(cliques.size() == 4);
}

TEST_CASE("a directed 3-cycle is not a directed clique") {
    auto snap = graph({{"a", "b"}, {"b", "c"}, {"c", "a"}}, false);
    CHECK(enumerate_k_cliques(snap, 3, CpmMode::directed).empty());
    // The same triangle counts in undirected mode.
    CHECK(enumerate_k_cliques(snap, 3, CpmMode::undirected).size() == 1);
}

TEST_CASE("an acyclic orientation is a directed clique") {
    auto snap = graph({{"a", "b"}, {"a", "c"}, {"b", "c"}}, false);
    CHECK(enumerate_k_cliques(snap, 3, CpmMode::directed).size() == 1);
}

TEST_CASE("bidirectional pairs impose no order") {
    // a<->b, b<->c plus single arc c->a: no cycle among single-direction arcs.
    auto snap = build_snapshot(0, {{"a", "b", 0, "m1"},
                                   {"b", "a", 0, "m2"},
                                   {"b", "c", 0, "m3"},
                                   {"c", "b", 0, "m4"},
                                   {"c", "a", 0, "m5"}});
    CHECK(enumerate_k_cliques(snap, 3, CpmMode::directed).size() == 1);
}

TEST_CASE("empty graph yields no cliques and no communities") {
    auto snap = build_snapshot(0, {});
    CHECK(enumerate_k_cliques(snap, 4, CpmMode::undirected).empty());
    CHECK(detect(snap, 4, CpmMode::undirected).empty());
}

TEST_CASE("k below 3 is rejected") {
    auto snap = complete_graph(3);
    CHECK_THROWS_AS(enumerate_k_cliques(snap, 2, CpmMode::undirected), Error);
    CHECK_THROWS_AS(detect(snap, 0, CpmMode::directed), Error);
}

TEST_CASE("two triangles sharing an edge percolate into one community") {
    auto snap = graph({{"a", "b"}, {"a", "c"}, {"b", "c"}, {"b", "d"}, {"c", "d"}});
    auto communities = detect(snap, 3, CpmMode::undirected);
    REQUIRE(communities.size() == 1);
    CHECK(communities[0].members == std::vector<std::string>{"a", "b", "c", "d"});
}

TEST_CASE("two disjoint triangles stay separate") {
    auto snap = graph({{"a", "b"}, {"a", "c"}, {"b", "c"}, {"x", "y"}, {"x", "z"}, {"y", "z"}});
    auto communities = detect(snap, 3, CpmMode::undirected);
    REQUIRE(communities.size() == 2);
}

TEST_CASE("a chain of three edge-sharing triangles forms one five-node community") {
    auto snap = graph({{"a", "b"}, {"a", "c"}, {"b", "c"},  // t1
                       {"b", "d"}, {"c", "d"},              // t2 = b,c,d
                       {"c", "e"}, {"d", "e"}});            // t3 = c,d,e
    auto communities = detect(snap, 3, CpmMode::undirected);
    REQUIRE(communities.size() == 1);
    CHECK(communities[0].members == std::vector<std::string>{"a", "b", "c", "d", "e"});
}

TEST_CASE("K5 with k=5 is a single community of all nodes") {
    auto snap = complete_graph(5);
    auto communities = detect(snap, 5, CpmMode::undirected);
    REQUIRE(communities.size() == 1);
    CHECK(communities[0].members.size() == 5);
    // Fully bidirectional graphs are directed cliques too.
    CHECK(detect(snap, 5, CpmMode::directed).size() == 1);
}

TEST_CASE("graph without a k-clique yields nothing") {
    auto snap = graph({{"a", "b"}, {"b", "c"}, {"c", "d"}});  // path
    CHECK(detect(snap, 3, CpmMode::undirected).empty());
}

TEST_CASE("overlapping communities share members") {
    // Two K4s sharing two nodes; with k=4 they share only k-2 nodes and stay
    // distinct communities overlapping in {c, d}.
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& quad :
         {std::vector<std::string>{"a", "b", "c", "d"}, std::vector<std::string>{"c", "d", "e", "f"}})
        for (std::size_t i = 0; i < quad.size(); ++i)
            for (std::size_t j = i + 1; j < quad.size(); ++j)
                edges.emplace_back(quad[i], quad[j]);
    auto snap = graph(edges);
    auto communities = detect(snap, 4, CpmMode::undirected);
    REQUIRE(communities.size() == 2);
    CHECK(intersection_size(communities[0].members, communities[1].members) == 2);
}

TEST_CASE("community ids are deterministic and ordered by member lists") {
    auto snap = complete_graph(6);
    auto communities = detect(snap, 3, CpmMode::undirected);
    for (std::size_t i = 0; i < communities.size(); ++i)
        CHECK(communities[i].id == "0:" + std::to_string(i));
}

TEST_CASE("detect matches the brute-force oracle on random digraphs") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 8 + static_cast<int>(rng() % 13);
        const double p = 0.15 + 0.3 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
        auto snap = oracle::random_digraph(n, p, rng);
        for (int k : {3, 4}) {
            for (auto mode : {CpmMode::directed, CpmMode::undirected}) {
                auto expected = oracle::communities(snap, k, mode);
                auto actual = member_sets(detect(snap, k, mode));
                INFO("trial=" << trial << " n=" << n << " p=" << p << " k=" << k);
                REQUIRE(actual == expected);
            }
        }
    }
}

TEST_CASE("enumerate matches the oracle's clique set") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        auto snap = oracle::random_digraph(12, 0.4, rng);
        for (auto mode : {CpmMode::directed, CpmMode::undirected}) {
            auto expected = oracle::all_k_cliques(snap, 3, mode);
            auto actual = enumerate_k_cliques(snap, 3, mode);
            REQUIRE(actual == expected);  // both lexicographically sorted
        }
    }
}

TEST_CASE("raising k never grows the largest community") {
    std::mt19937_64 rng(4321);
    for (int trial = 0; trial < 10; ++trial) {
        auto snap = oracle::random_digraph(18, 0.35, rng);
        std::size_t prev = SIZE_MAX;
        for (int k : {3, 4, 5, 6}) {
            std::size_t biggest = 0;
            for (const auto& c : detect(snap, k, CpmMode::undirected))
                biggest = std::max(biggest, c.members.size());
            CHECK(biggest <= prev);
            prev = biggest;
        }
    }
}

TEST_CASE("every community respects the minimum size k") {
    std::mt19937_64 rng(777);
    auto snap = oracle::random_digraph(20, 0.4, rng);
    for (int k : {3, 4, 5})
        for (const auto& c : detect(snap, k, CpmMode::undirected))
            CHECK(c.members.size() >= static_cast<std::size_t>(k));
}
