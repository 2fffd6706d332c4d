#ifndef GROUPDYN_METRICS_HPP
#define GROUPDYN_METRICS_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "sgci.hpp"

namespace groupdyn {

// Normalized weight vector over T topics for a group or user in one slot.
// Undefined (and excluded from every metric) when built from zero messages.
struct TopicProfile {
    std::vector<double> weights;
    std::uint64_t message_count = 0;

    bool defined() const { return message_count > 0; }
};

// exploitation(k) = |T_k| / sum_i |T_i| from per-message dominant topics.
inline TopicProfile exploitation_from_counts(const std::vector<std::uint64_t>& topic_counts) {
    TopicProfile p;
    std::uint64_t total = 0;
    for (std::uint64_t c : topic_counts) total += c;
    p.message_count = total;
    if (total == 0) return p;
    p.weights.resize(topic_counts.size());
    for (std::size_t i = 0; i < topic_counts.size(); ++i)
        p.weights[i] = static_cast<double>(topic_counts[i]) / static_cast<double>(total);
    return p;
}

// Topics exploited strictly above the threshold ("more than 5%": a topic at
// exactly the threshold is excluded).
inline std::vector<std::uint32_t> significant_topics(const TopicProfile& profile,
                                                     double threshold = 0.05) {
    std::vector<std::uint32_t> out;
    if (!profile.defined()) return out;
    for (std::uint32_t i = 0; i < profile.weights.size(); ++i)
        if (profile.weights[i] > threshold) out.push_back(i);
    return out;
}

struct GroupTopicSet {
    std::string group_id;
    std::vector<std::uint32_t> topics;
};

// ---------------------------------------------------------------------------
// Topic change across one transition. All three are taken over the linked
// successors of a predecessor group:
//   c   = sum_k sum_i |pred_i - succ_{k,i}|
//   mpc = max_i sum_k max(succ_{k,i} - pred_i, 0)   (how much a topic gained)
//   mnc = max_i sum_k max(pred_i - succ_{k,i}, 0)   (how much a topic lost)

struct TransitionChange {
    double c = 0.0;
    double mpc = 0.0;
    double mnc = 0.0;
};

inline std::optional<TransitionChange> transition_change(
    const TopicProfile& pred, const std::vector<TopicProfile>& succs) {
    if (!pred.defined() || succs.empty()) return std::nullopt;
    for (const auto& s : succs)
        if (!s.defined() || s.weights.size() != pred.weights.size()) return std::nullopt;
    TransitionChange out;
    for (std::size_t i = 0; i < pred.weights.size(); ++i) {
        double gained = 0.0, lost = 0.0;
        for (const auto& s : succs) {
            const double diff = s.weights[i] - pred.weights[i];
            out.c += std::abs(diff);
            if (diff > 0)
                gained += diff;
            else
                lost -= diff;
        }
        out.mpc = std::max(out.mpc, gained);
        out.mnc = std::max(out.mnc, lost);
    }
    return out;
}

// One record per predecessor group per classified transition.
struct TransitionMetricRecord {
    EventType type = EventType::constancy;
    int period = 0;
    TransitionChange change;
};

struct EventTypeAverage {
    EventType type = EventType::constancy;
    int period = 0;
    double avg_c = 0.0;
    double avg_mpc = 0.0;
    double avg_mnc = 0.0;
    std::uint64_t n_events = 0;
};

// Averages per (event type, period); types with fewer than min_events
// occurrences in a period are omitted. Decay never reaches here: with no
// successor there is nothing to compare.
inline std::vector<EventTypeAverage> event_type_averages(
    const std::vector<TransitionMetricRecord>& records, std::uint64_t min_events = 10) {
    std::map<std::pair<int, EventType>, EventTypeAverage> acc;
    for (const auto& r : records) {
        auto& a = acc[{r.period, r.type}];
        a.type = r.type;
        a.period = r.period;
        a.avg_c += r.change.c;
        a.avg_mpc += r.change.mpc;
        a.avg_mnc += r.change.mnc;
        ++a.n_events;
    }
    std::vector<EventTypeAverage> out;
    for (auto& [key, a] : acc) {
        if (a.n_events < min_events) continue;
        a.avg_c /= static_cast<double>(a.n_events);
        a.avg_mpc /= static_cast<double>(a.n_events);
        a.avg_mnc /= static_cast<double>(a.n_events);
        out.push_back(a);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Topic divergence: L1 distance between user and group profiles, in [0,2].

inline std::optional<double> topic_divergence(const TopicProfile& user,
                                              const TopicProfile& group) {
    if (!user.defined() || !group.defined() || user.weights.size() != group.weights.size())
        return std::nullopt;
    double d = 0.0;
    for (std::size_t i = 0; i < user.weights.size(); ++i)
        d += std::abs(user.weights[i] - group.weights[i]);
    return d;
}

// ---------------------------------------------------------------------------
// Migration probabilities per divergence bin. Candidates for leaving are all
// current members; candidates for joining are users active in the previous
// slot who are not yet members. All continuations of a group count as the
// same group, so moving along a continuation is not a migration.

struct MigrationBins {
    double bin_width = 0.05;
    double range = 2.0;  // divergence domain [0, 2]

    struct Bin {
        std::uint64_t join_candidates = 0;
        std::uint64_t joiners = 0;
        std::uint64_t leave_candidates = 0;
        std::uint64_t leavers = 0;
    };
    std::vector<Bin> bins;
    std::uint64_t joiners_outside_candidates = 0;  // inactive in the previous slot

    explicit MigrationBins(double width = 0.05, double r = 2.0) : bin_width(width), range(r) {
        if (!(width > 0.0 && width <= r)) throw Error("bad divergence bin width");
        bins.assign(static_cast<std::size_t>(std::ceil(r / width)), {});
    }

    int bin_of(double divergence) const {
        const int n = static_cast<int>(bins.size());
        return std::min(static_cast<int>(divergence / bin_width), n - 1);
    }

    // Probability of a non-empty bin; empty bins stay undefined, never 0.
    std::optional<double> p_join(std::size_t b) const {
        if (bins[b].join_candidates == 0) return std::nullopt;
        return static_cast<double>(bins[b].joiners) /
               static_cast<double>(bins[b].join_candidates);
    }
    std::optional<double> p_leave(std::size_t b) const {
        if (bins[b].leave_candidates == 0) return std::nullopt;
        return static_cast<double>(bins[b].leavers) /
               static_cast<double>(bins[b].leave_candidates);
    }
};

// One group's slice of a slot pair, with continuations already collapsed:
// successor_members is the union over the group's linked successors.
struct MigrationGroupView {
    const std::vector<std::string>* members = nullptr;            // sorted
    const std::vector<std::string>* successor_members = nullptr;  // sorted; empty on decay
    const TopicProfile* profile = nullptr;
};

inline void accumulate_migration(
    MigrationBins& bins, const std::vector<MigrationGroupView>& groups,
    const std::vector<std::string>& active_users,  // sorted, slot n
    const std::map<std::string, TopicProfile>& user_profiles) {
    for (const auto& g : groups) {
        if (!g.profile || !g.profile->defined()) continue;
        for (const auto& member : *g.members) {
            auto it = user_profiles.find(member);
            if (it == user_profiles.end()) continue;
            const auto d = topic_divergence(it->second, *g.profile);
            if (!d) continue;
            auto& bin = bins.bins[bins.bin_of(*d)];
            ++bin.leave_candidates;
            if (!contains_sorted(*g.successor_members, member)) ++bin.leavers;
        }
        if (g.successor_members->empty()) continue;  // nothing left to join
        for (const auto& user : active_users) {
            if (contains_sorted(*g.members, user)) continue;
            auto it = user_profiles.find(user);
            if (it == user_profiles.end()) continue;
            const auto d = topic_divergence(it->second, *g.profile);
            if (!d) continue;
            auto& bin = bins.bins[bins.bin_of(*d)];
            ++bin.join_candidates;
            if (contains_sorted(*g.successor_members, user)) ++bin.joiners;
        }
        for (const auto& user : *g.successor_members)
            if (!contains_sorted(*g.members, user) && !contains_sorted(active_users, user))
                ++bins.joiners_outside_candidates;
    }
}

// ---------------------------------------------------------------------------
// Reporting aggregations.

inline std::vector<std::uint64_t> groups_per_topic(const std::vector<GroupTopicSet>& sets,
                                                   std::size_t topic_count) {
    std::vector<std::uint64_t> counts(topic_count, 0);
    for (const auto& s : sets)
        for (std::uint32_t t : s.topics)
            if (t < topic_count) ++counts[t];
    return counts;
}

struct Bucket {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;  // exclusive; 0 means unbounded
    std::string label;

    bool contains(std::uint64_t v) const { return v >= lo && (hi == 0 || v < hi); }
};

// Group-size buckets: right-exclusive except the terminal one.
inline const std::vector<Bucket>& size_buckets() {
    static const std::vector<Bucket> b = {
        {0, 5, "<5"},       {5, 6, "5-6"},     {6, 7, "6-7"},       {7, 8, "7-8"},
        {8, 9, "8-9"},      {9, 10, "9-10"},   {10, 50, "10-50"},   {50, 100, "50-100"},
        {100, 200, "100-200"}, {200, 0, ">200"},
    };
    return b;
}

inline const std::vector<Bucket>& duration_buckets() {
    static const std::vector<Bucket> b = {
        {1, 2, "1"},  {2, 3, "2"},   {3, 4, "3"},     {4, 5, "4"},
        {5, 6, "5"},  {6, 11, "6-10"}, {11, 21, "11-20"}, {21, 0, ">20"},
    };
    return b;
}

inline int bucket_index(const std::vector<Bucket>& buckets, std::uint64_t v) {
    for (std::size_t i = 0; i < buckets.size(); ++i)
        if (buckets[i].contains(v)) return static_cast<int>(i);
    return -1;
}

inline std::vector<std::uint64_t> size_census(const std::vector<std::uint64_t>& group_sizes) {
    std::vector<std::uint64_t> counts(size_buckets().size(), 0);
    for (std::uint64_t s : group_sizes) {
        const int b = bucket_index(size_buckets(), s);
        if (b >= 0) ++counts[b];
    }
    return counts;
}

// Cross-tab of bucketed quantity x number of significant topics.
using CrossTab = std::map<std::pair<int, std::uint32_t>, std::uint64_t>;

inline CrossTab topic_count_crosstab(const std::vector<Bucket>& buckets,
                                     const std::vector<std::pair<std::uint64_t, std::uint32_t>>&
                                         quantity_and_topic_count) {
    CrossTab tab;
    for (const auto& [q, topics] : quantity_and_topic_count) {
        const int b = bucket_index(buckets, q);
        if (b >= 0) ++tab[{b, topics}];
    }
    return tab;
}

// Mean exploitation per topic within each bucket (figure data).
inline std::map<int, std::vector<double>> mean_exploitation_by_bucket(
    const std::vector<Bucket>& buckets,
    const std::vector<std::pair<std::uint64_t, const TopicProfile*>>& quantity_and_profile,
    std::size_t topic_count) {
    std::map<int, std::vector<double>> sums;
    std::map<int, std::uint64_t> n;
    for (const auto& [q, profile] : quantity_and_profile) {
        if (!profile || !profile->defined()) continue;
        const int b = bucket_index(buckets, q);
        if (b < 0) continue;
        auto& row = sums[b];
        row.resize(topic_count, 0.0);
        for (std::size_t t = 0; t < topic_count && t < profile->weights.size(); ++t)
            row[t] += profile->weights[t];
        ++n[b];
    }
    for (auto& [b, row] : sums)
        for (double& v : row) v /= static_cast<double>(n[b]);
    return sums;
}

// ---------------------------------------------------------------------------
// CSV emitters for the metrics outputs.

inline void write_event_changes_csv(const std::string& path,
                                    const std::vector<EventTypeAverage>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << "event_type,period,avg_c,avg_mpc,avg_mnc,n_events\n";
    for (const auto& r : rows)
        out << to_string(r.type) << ',' << r.period << ',' << r.avg_c << ',' << r.avg_mpc << ','
            << r.avg_mnc << ',' << r.n_events << '\n';
}

inline void write_migration_csv(const std::string& path, const MigrationBins& bins) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << "bin_lo,bin_hi,p_join,n_join_candidates,n_joiners,p_leave,n_leave_candidates,"
           "n_leavers\n";
    for (std::size_t b = 0; b < bins.bins.size(); ++b) {
        const auto pj = bins.p_join(b);
        const auto pl = bins.p_leave(b);
        out << b * bins.bin_width << ',' << std::min((b + 1) * bins.bin_width, bins.range) << ',';
        if (pj) out << *pj;
        out << ',' << bins.bins[b].join_candidates << ',' << bins.bins[b].joiners << ',';
        if (pl) out << *pl;
        out << ',' << bins.bins[b].leave_candidates << ',' << bins.bins[b].leavers << '\n';
    }
}

inline void write_exploitation_csv(const std::string& path,
                                   const std::vector<std::pair<std::string, TopicProfile>>&
                                       group_profiles) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << "group_id,topic,exploitation\n";
    for (const auto& [id, profile] : group_profiles) {
        if (!profile.defined()) continue;
        for (std::size_t t = 0; t < profile.weights.size(); ++t)
            if (profile.weights[t] > 0.0) out << id << ',' << t << ',' << profile.weights[t] << '\n';
    }
}

}  // namespace groupdyn

#endif
