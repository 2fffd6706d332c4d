#ifndef GROUPDYN_SNAPSHOT_HPP
#define GROUPDYN_SNAPSHOT_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "core.hpp"
#include "corpus.hpp"

namespace groupdyn {

// Directed weighted interaction graph for one time slot. Nodes are exactly the
// arc endpoints; self-interactions are dropped here, not at ingest.
struct Snapshot {
    struct Arc {
        std::uint32_t source = 0;
        std::uint32_t target = 0;
        std::uint32_t weight = 0;
        std::vector<std::string> message_ids;  // provenance, config-gated
    };

    int slot_index = 0;
    std::vector<std::string> names;  // sorted; index is the node id
    std::vector<Arc> arcs;           // sorted by (source, target)

    std::size_t node_count() const { return names.size(); }

    bool has_arc(std::uint32_t u, std::uint32_t v) const {
        return arc_set_.count((static_cast<std::uint64_t>(u) << 32) | v) != 0;
    }

    // Neighbors in the symmetrized graph, sorted.
    const std::vector<std::vector<std::uint32_t>>& sym_adjacency() const { return sym_adj_; }

    void finalize() {
        arc_set_.clear();
        sym_adj_.assign(names.size(), {});
        for (const auto& a : arcs) {
            arc_set_.insert((static_cast<std::uint64_t>(a.source) << 32) | a.target);
            sym_adj_[a.source].push_back(a.target);
            sym_adj_[a.target].push_back(a.source);
        }
        for (auto& nbrs : sym_adj_) nbrs = sorted_unique(std::move(nbrs));
    }

private:
    std::unordered_set<std::uint64_t> arc_set_;
    std::vector<std::vector<std::uint32_t>> sym_adj_;
};

struct SnapshotOptions {
    std::uint32_t min_weight = 1;  // arcs below this are discarded
    bool provenance = false;
};

// Deterministic in the set of interactions, insensitive to input order.
inline Snapshot build_snapshot(int slot_index, const std::vector<Interaction>& interactions,
                               const SnapshotOptions& opt = {}) {
    Snapshot snap;
    snap.slot_index = slot_index;
    std::map<std::pair<std::string, std::string>, std::vector<const Interaction*>> arcs;
    for (const auto& ia : interactions) {
        if (ia.source == ia.target) continue;  // self-reply policy lives here
        arcs[{ia.source, ia.target}].push_back(&ia);
    }
    std::vector<std::string> names;
    for (const auto& [key, group] : arcs) {
        if (group.size() < opt.min_weight) continue;
        names.push_back(key.first);
        names.push_back(key.second);
    }
    snap.names = sorted_unique(std::move(names));
    auto node_id = [&](const std::string& name) {
        return static_cast<std::uint32_t>(
            std::lower_bound(snap.names.begin(), snap.names.end(), name) - snap.names.begin());
    };
    for (const auto& [key, group] : arcs) {
        if (group.size() < opt.min_weight) continue;
        Snapshot::Arc arc;
        arc.source = node_id(key.first);
        arc.target = node_id(key.second);
        arc.weight = static_cast<std::uint32_t>(group.size());
        if (opt.provenance) {
            for (const Interaction* ia : group) arc.message_ids.push_back(ia->message_id);
            std::sort(arc.message_ids.begin(), arc.message_ids.end());
        }
        snap.arcs.push_back(std::move(arc));
    }
    std::sort(snap.arcs.begin(), snap.arcs.end(), [](const auto& a, const auto& b) {
        return std::tie(a.source, a.target) < std::tie(b.source, b.target);
    });
    snap.finalize();
    return snap;
}

// Undirected view: edge {u,v} iff any arc between u and v, weight summed.
struct UndirectedEdge {
    std::uint32_t u = 0;  // u < v
    std::uint32_t v = 0;
    std::uint32_t weight = 0;
};

inline std::vector<UndirectedEdge> symmetrize(const Snapshot& snap) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> acc;
    for (const auto& a : snap.arcs) {
        auto key = std::minmax(a.source, a.target);
        acc[{key.first, key.second}] += a.weight;
    }
    std::vector<UndirectedEdge> out;
    out.reserve(acc.size());
    for (const auto& [key, w] : acc) out.push_back({key.first, key.second, w});
    return out;
}

// Edge-list export, one file per slot: source,target,weight.
inline void write_snapshot_csv(const std::string& path, const Snapshot& snap) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << "source,target,weight\n";
    for (const auto& a : snap.arcs)
        out << snap.names[a.source] << ',' << snap.names[a.target] << ',' << a.weight << '\n';
}

inline Snapshot read_snapshot_csv(const std::string& path, int slot_index) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<Interaction> interactions;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto f = split(line, ',');
        if (f.size() != 3) throw Error("bad edge row: " + line);
        const int w = std::stoi(f[2]);
        for (int i = 0; i < w; ++i) interactions.push_back({f[0], f[1], 0, ""});
    }
    return build_snapshot(slot_index, interactions);
}

}  // namespace groupdyn

#endif
