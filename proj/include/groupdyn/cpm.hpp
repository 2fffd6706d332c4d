#ifndef GROUPDYN_CPM_HPP
#define GROUPDYN_CPM_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "core.hpp"
#include "snapshot.hpp"

namespace groupdyn {

enum class CpmMode { directed, undirected };

inline CpmMode parse_cpm_mode(std::string_view s) {
    if (s == "directed") return CpmMode::directed;
    if (s == "undirected") return CpmMode::undirected;
    throw Error("unknown CPM mode: " + std::string(s));
}

struct Community {
    std::string id;                    // "<slot>:<ordinal>"
    std::vector<std::string> members;  // sorted user ids
    int k = 0;
};

namespace detail {

// Bron-Kerbosch with pivoting over sorted adjacency lists. Calls `emit` for
// every maximal clique (sorted node vector).
class MaximalCliqueFinder {
public:
    explicit MaximalCliqueFinder(const std::vector<std::vector<std::uint32_t>>& adj)
        : adj_(adj) {}

    template <typename Emit>
    void run(Emit&& emit) {
        std::vector<std::uint32_t> r, p, x;
        p.resize(adj_.size());
        for (std::uint32_t i = 0; i < adj_.size(); ++i) p[i] = i;
        expand(r, std::move(p), std::move(x), emit);
    }

private:
    template <typename Emit>
    void expand(std::vector<std::uint32_t>& r, std::vector<std::uint32_t> p,
                std::vector<std::uint32_t> x, Emit&& emit) {
        if (p.empty() && x.empty()) {
            if (!r.empty()) emit(r);
            return;
        }
        // Pivot: vertex of P∪X with most neighbors in P.
        std::uint32_t pivot = 0;
        std::size_t best = 0;
        bool have = false;
        for (const auto* side : {&p, &x})
            for (std::uint32_t u : *side) {
                const std::size_t k = intersection_size(p, adj_[u]);
                if (!have || k > best) {
                    have = true;
                    best = k;
                    pivot = u;
                }
            }
        std::vector<std::uint32_t> candidates;
        for (std::uint32_t v : p)
            if (!contains_sorted(adj_[pivot], v)) candidates.push_back(v);
        for (std::uint32_t v : candidates) {
            std::vector<std::uint32_t> np, nx;
            for (std::uint32_t w : p)
                if (contains_sorted(adj_[v], w)) np.push_back(w);
            for (std::uint32_t w : x)
                if (contains_sorted(adj_[v], w)) nx.push_back(w);
            r.push_back(v);
            expand(r, std::move(np), std::move(nx), emit);
            r.pop_back();
            p.erase(std::find(p.begin(), p.end(), v));
            x.insert(std::lower_bound(x.begin(), x.end(), v), v);
        }
    }

    const std::vector<std::vector<std::uint32_t>>& adj_;
};

// Directed clique predicate: arcs between single-direction pairs must admit a
// topological order; bidirectional pairs impose none. All pairs are already
// known to be connected (the set comes from a symmetrized clique).
inline bool directed_clique_ok(const Snapshot& snap, const std::vector<std::uint32_t>& nodes) {
    const std::size_t n = nodes.size();
    std::vector<std::uint32_t> indegree(n, 0);
    std::vector<std::vector<std::uint32_t>> out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool ij = snap.has_arc(nodes[i], nodes[j]);
            const bool ji = snap.has_arc(nodes[j], nodes[i]);
            if (ij && ji) continue;
            if (ij) {
                out[i].push_back(static_cast<std::uint32_t>(j));
                ++indegree[j];
            } else {
                out[j].push_back(static_cast<std::uint32_t>(i));
                ++indegree[i];
            }
        }
    // Kahn's algorithm on <= k nodes.
    std::vector<std::uint32_t> queue;
    for (std::uint32_t i = 0; i < n; ++i)
        if (indegree[i] == 0) queue.push_back(i);
    std::size_t seen = 0;
    while (!queue.empty()) {
        const std::uint32_t u = queue.back();
        queue.pop_back();
        ++seen;
        for (std::uint32_t v : out[u])
            if (--indegree[v] == 0) queue.push_back(v);
    }
    return seen == n;
}

template <typename Fn>
void for_each_k_subset(const std::vector<std::uint32_t>& items, int k, Fn&& fn) {
    const int n = static_cast<int>(items.size());
    if (k > n) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::vector<std::uint32_t> subset(k);
    while (true) {
        for (int i = 0; i < k; ++i) subset[i] = items[idx[i]];
        fn(subset);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace detail

// All k-node subsets satisfying the mode's clique predicate, in lexicographic
// order of sorted node ids. Enumeration expands maximal cliques of the
// symmetrized graph rather than scanning all C(n,k) subsets.
inline std::vector<std::vector<std::uint32_t>> enumerate_k_cliques(const Snapshot& snap, int k,
                                                                   CpmMode mode) {
    if (k < 3) throw Error("CPM requires k >= 3");
    std::set<std::vector<std::uint32_t>> found;
    detail::MaximalCliqueFinder finder(snap.sym_adjacency());
    finder.run([&](const std::vector<std::uint32_t>& clique) {
        if (static_cast<int>(clique.size()) < k) return;
        std::vector<std::uint32_t> sorted = clique;
        std::sort(sorted.begin(), sorted.end());
        detail::for_each_k_subset(sorted, k, [&](const std::vector<std::uint32_t>& subset) {
            if (mode == CpmMode::directed && !detail::directed_clique_ok(snap, subset)) return;
            found.insert(subset);
        });
    });
    return {found.begin(), found.end()};
}

// k-clique percolation: cliques sharing k-1 nodes are adjacent; communities
// are the node unions of connected components of that adjacency.
inline std::vector<std::vector<std::uint32_t>> percolate(
    const std::vector<std::vector<std::uint32_t>>& cliques, int k) {
    DisjointSets dsu(cliques.size());
    std::map<std::vector<std::uint32_t>, std::size_t> first_owner;
    std::vector<std::uint32_t> key;
    for (std::size_t c = 0; c < cliques.size(); ++c) {
        for (int drop = 0; drop < k; ++drop) {
            key.clear();
            for (int i = 0; i < k; ++i)
                if (i != drop) key.push_back(cliques[c][i]);
            auto [it, inserted] = first_owner.try_emplace(key, c);
            if (!inserted) dsu.unite(c, it->second);
        }
    }
    std::map<std::size_t, std::vector<std::uint32_t>> components;
    for (std::size_t c = 0; c < cliques.size(); ++c) {
        auto& members = components[dsu.find(c)];
        members.insert(members.end(), cliques[c].begin(), cliques[c].end());
    }
    std::set<std::vector<std::uint32_t>> result;
    for (auto& [root, members] : components) result.insert(sorted_unique(std::move(members)));
    return {result.begin(), result.end()};
}

inline std::vector<Community> detect(const Snapshot& snap, int k, CpmMode mode) {
    const auto cliques = enumerate_k_cliques(snap, k, mode);
    const auto member_sets = percolate(cliques, k);
    std::vector<Community> out;
    out.reserve(member_sets.size());
    for (std::size_t i = 0; i < member_sets.size(); ++i) {
        Community c;
        c.id = std::to_string(snap.slot_index) + ":" + std::to_string(i);
        c.k = k;
        for (std::uint32_t node : member_sets[i]) c.members.push_back(snap.names[node]);
        std::sort(c.members.begin(), c.members.end());
        out.push_back(std::move(c));
    }
    // member_sets iterate in lexicographic node order; re-sort by member names
    // so ordinals follow user ids, not internal indices.
    std::sort(out.begin(), out.end(),
              [](const Community& a, const Community& b) { return a.members < b.members; });
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i].id = std::to_string(snap.slot_index) + ":" + std::to_string(i);
    return out;
}

}  // namespace groupdyn

#endif
