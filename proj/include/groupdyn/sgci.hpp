#ifndef GROUPDYN_SGCI_HPP
#define GROUPDYN_SGCI_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "cpm.hpp"

namespace groupdyn {

enum class EventType {
    split,
    deletion,
    merge,
    addition,
    split_merge,
    decay,
    constancy,
    change_size
};

inline const char* to_string(EventType t) {
    switch (t) {
        case EventType::split: return "split";
        case EventType::deletion: return "deletion";
        case EventType::merge: return "merge";
        case EventType::addition: return "addition";
        case EventType::split_merge: return "split_merge";
        case EventType::decay: return "decay";
        case EventType::constancy: return "constancy";
        case EventType::change_size: return "change_size";
    }
    return "?";
}

inline EventType event_type_from_string(std::string_view s) {
    for (EventType t : {EventType::split, EventType::deletion, EventType::merge,
                        EventType::addition, EventType::split_merge, EventType::decay,
                        EventType::constancy, EventType::change_size})
        if (s == to_string(t)) return t;
    throw Error("unknown event type: " + std::string(s));
}

// Modified Jaccard: max of the two inclusion ratios. A small group fully
// absorbed by a big one scores 1, which the addition/deletion events need.
inline double modified_jaccard(const std::vector<std::string>& a,
                               const std::vector<std::string>& b) {
    if (a.empty() || b.empty()) return 0.0;
    const double inter = static_cast<double>(intersection_size(a, b));
    return std::max(inter / static_cast<double>(a.size()), inter / static_cast<double>(b.size()));
}

struct ContinuationLink {
    std::size_t from = 0;  // index into groups_n
    std::size_t to = 0;    // index into groups_n1
    double mj = 0.0;
    std::size_t intersection = 0;
};

inline std::vector<ContinuationLink> match_continuations(const std::vector<Community>& groups_n,
                                                         const std::vector<Community>& groups_n1,
                                                         double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) throw Error("continuation threshold outside (0,1]");
    std::vector<ContinuationLink> links;
    for (std::size_t i = 0; i < groups_n.size(); ++i)
        for (std::size_t j = 0; j < groups_n1.size(); ++j) {
            const std::size_t inter =
                intersection_size(groups_n[i].members, groups_n1[j].members);
            if (inter == 0) continue;
            const double mj = modified_jaccard(groups_n[i].members, groups_n1[j].members);
            if (mj >= threshold) links.push_back({i, j, mj, inter});
        }
    return links;
}

struct TransitionEvent {
    EventType type = EventType::decay;
    int slot = 0;  // predecessor slot n; the event spans n -> n+1
    std::vector<std::string> predecessors;
    std::vector<std::string> successors;
};

struct SgciParams {
    double threshold = 0.3;
    double size_ratio = 5.0;
    double size_epsilon = 0.1;
    int stability_min_slots = 3;
};

namespace detail {

// Main group of a star = largest intersection with the hub, ties to the
// lexicographically smaller id.
inline std::size_t main_index(const std::vector<std::size_t>& candidates,
                              const std::vector<std::size_t>& inters,
                              const std::vector<Community>& groups) {
    std::size_t best = candidates[0];
    std::size_t best_inter = inters[0];
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        if (inters[i] > best_inter ||
            (inters[i] == best_inter && groups[candidates[i]].id < groups[best].id)) {
            best = candidates[i];
            best_inter = inters[i];
        }
    }
    return best;
}

}  // namespace detail

// Classify the transition between two adjacent slots. Every group of slot n
// lands in exactly one event; classification runs per connected component of
// the continuation-link graph:
//   no links            -> decay
//   1 pred, 1 succ      -> constancy / change_size (relative size epsilon)
//   1 pred, many succs  -> split, or deletion when every detaching successor
//                          is smaller than the main one by >= size_ratio
//   many preds, 1 succ  -> merge, or addition under the mirrored size test
//   many preds + succs  -> split_merge
inline std::vector<TransitionEvent> classify_events(const std::vector<Community>& groups_n,
                                                    const std::vector<Community>& groups_n1,
                                                    const std::vector<ContinuationLink>& links,
                                                    int slot, const SgciParams& params) {
    std::vector<TransitionEvent> events;

    // Component discovery over the bipartite link graph.
    DisjointSets dsu(groups_n.size() + groups_n1.size());
    for (const auto& l : links) dsu.unite(l.from, groups_n.size() + l.to);
    std::map<std::size_t, std::vector<const ContinuationLink*>> comp_links;
    for (const auto& l : links) comp_links[dsu.find(l.from)].push_back(&l);

    std::vector<bool> linked_n(groups_n.size(), false);
    for (const auto& l : links) linked_n[l.from] = true;
    for (std::size_t i = 0; i < groups_n.size(); ++i)
        if (!linked_n[i]) events.push_back({EventType::decay, slot, {groups_n[i].id}, {}});

    for (auto& [root, ls] : comp_links) {
        std::vector<std::size_t> preds, succs;
        for (const auto* l : ls) {
            preds.push_back(l->from);
            succs.push_back(l->to);
        }
        preds = sorted_unique(std::move(preds));
        succs = sorted_unique(std::move(succs));

        TransitionEvent ev;
        ev.slot = slot;
        for (std::size_t p : preds) ev.predecessors.push_back(groups_n[p].id);
        for (std::size_t s : succs) ev.successors.push_back(groups_n1[s].id);

        if (preds.size() == 1 && succs.size() == 1) {
            const double before = static_cast<double>(groups_n[preds[0]].members.size());
            const double after = static_cast<double>(groups_n1[succs[0]].members.size());
            ev.type = std::abs(after - before) <= params.size_epsilon * before + 1e-12
                          ? EventType::constancy
                          : EventType::change_size;
        } else if (preds.size() == 1) {
            std::vector<std::size_t> inters;
            for (std::size_t s : succs)
                inters.push_back(
                    intersection_size(groups_n[preds[0]].members, groups_n1[s].members));
            const std::size_t main = detail::main_index(succs, inters, groups_n1);
            bool all_small = true;
            for (std::size_t s : succs)
                if (s != main &&
                    static_cast<double>(groups_n1[main].members.size()) <
                        params.size_ratio * static_cast<double>(groups_n1[s].members.size()))
                    all_small = false;
            ev.type = all_small ? EventType::deletion : EventType::split;
        } else if (succs.size() == 1) {
            std::vector<std::size_t> inters;
            for (std::size_t p : preds)
                inters.push_back(
                    intersection_size(groups_n[p].members, groups_n1[succs[0]].members));
            const std::size_t main = detail::main_index(preds, inters, groups_n);
            bool all_small = true;
            for (std::size_t p : preds)
                if (p != main &&
                    static_cast<double>(groups_n[main].members.size()) <
                        params.size_ratio * static_cast<double>(groups_n[p].members.size()))
                    all_small = false;
            ev.type = all_small ? EventType::addition : EventType::merge;
        } else {
            ev.type = EventType::split_merge;
        }
        events.push_back(std::move(ev));
    }

    std::sort(events.begin(), events.end(), [](const TransitionEvent& a, const TransitionEvent& b) {
        return std::tie(a.predecessors, a.successors) < std::tie(b.predecessors, b.successors);
    });
    return events;
}

struct GroupTimeline {
    std::vector<std::string> ids;  // one community id per consecutive slot
    bool stable = false;
};

// Chains follow the single strongest link per group; when several groups pick
// the same successor only the strongest predecessor keeps the chain.
// Tie-breaks: higher MJ, then larger intersection, then smaller id.
inline std::vector<GroupTimeline> build_timelines(
    const std::vector<std::vector<Community>>& groups_per_slot,
    const std::vector<std::vector<ContinuationLink>>& links_per_pair,
    const SgciParams& params) {
    const std::size_t slots = groups_per_slot.size();
    // next[slot][group] = chosen successor index, or npos.
    constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<std::vector<std::size_t>> next(slots);
    std::vector<std::vector<bool>> continued(slots);
    for (std::size_t s = 0; s < slots; ++s) {
        next[s].assign(groups_per_slot[s].size(), npos);
        continued[s].assign(groups_per_slot[s].size(), false);
    }
    for (std::size_t s = 0; s + 1 < slots; ++s) {
        const auto& groups_n = groups_per_slot[s];
        const auto& groups_n1 = groups_per_slot[s + 1];
        auto stronger = [&](const ContinuationLink& a, const ContinuationLink& b,
                            const std::vector<Community>& side, bool by_from) {
            if (a.mj != b.mj) return a.mj > b.mj;
            if (a.intersection != b.intersection) return a.intersection > b.intersection;
            return side[by_from ? a.to : a.from].id < side[by_from ? b.to : b.from].id;
        };
        std::vector<const ContinuationLink*> best_out(groups_n.size(), nullptr);
        for (const auto& l : links_per_pair[s])
            if (!best_out[l.from] || stronger(l, *best_out[l.from], groups_n1, true))
                best_out[l.from] = &l;
        std::vector<const ContinuationLink*> best_in(groups_n1.size(), nullptr);
        for (std::size_t g = 0; g < groups_n.size(); ++g) {
            const auto* l = best_out[g];
            if (l && (!best_in[l->to] || stronger(*l, *best_in[l->to], groups_n, false)))
                best_in[l->to] = l;
        }
        for (const auto* l : best_in)
            if (l) {
                next[s][l->from] = l->to;
                continued[s + 1][l->to] = true;
            }
    }
    std::vector<GroupTimeline> timelines;
    for (std::size_t s = 0; s < slots; ++s)
        for (std::size_t g = 0; g < groups_per_slot[s].size(); ++g) {
            if (continued[s][g]) continue;  // interior of some chain
            GroupTimeline tl;
            std::size_t cs = s, cg = g;
            while (true) {
                tl.ids.push_back(groups_per_slot[cs][cg].id);
                if (cs + 1 >= slots || next[cs][cg] == npos) break;
                cg = next[cs][cg];
                ++cs;
            }
            tl.stable = static_cast<int>(tl.ids.size()) >= params.stability_min_slots;
            timelines.push_back(std::move(tl));
        }
    std::sort(timelines.begin(), timelines.end(),
              [](const GroupTimeline& a, const GroupTimeline& b) { return a.ids < b.ids; });
    return timelines;
}

inline std::map<EventType, std::uint64_t> event_census(const std::vector<TransitionEvent>& events) {
    std::map<EventType, std::uint64_t> counts;
    for (EventType t : {EventType::split, EventType::deletion, EventType::merge,
                        EventType::addition, EventType::split_merge, EventType::decay,
                        EventType::constancy, EventType::change_size})
        counts[t] = 0;
    for (const auto& e : events) ++counts[e.type];
    return counts;
}

// ---------------------------------------------------------------------------
// File formats.

inline void write_events_csv(const std::string& path, const std::vector<TransitionEvent>& events) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << "slot,type,predecessor_ids,successor_ids\n";
    auto join = [](const std::vector<std::string>& ids) {
        std::string s;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (i) s += ';';
            s += ids[i];
        }
        return s;
    };
    for (const auto& e : events)
        out << e.slot << ',' << to_string(e.type) << ",\"" << join(e.predecessors) << "\",\""
            << join(e.successors) << "\"\n";
}

inline void write_timelines_json(const std::string& path,
                                 const std::vector<GroupTimeline>& timelines) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& tl : timelines) j.push_back({{"ids", tl.ids}, {"stable", tl.stable}});
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << '\n';
}

inline void write_groups_json(const std::string& path, const std::vector<Community>& groups) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& g : groups) j.push_back({{"id", g.id}, {"members", g.members}});
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << '\n';
}

inline std::vector<Community> read_groups_json(const std::string& path, int k = 0) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    std::vector<Community> out;
    for (const auto& item : j) {
        Community c;
        c.id = item.at("id").get<std::string>();
        c.members = item.at("members").get<std::vector<std::string>>();
        std::sort(c.members.begin(), c.members.end());
        c.k = k;
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace groupdyn

#endif
