#ifndef GROUPDYN_CORE_HPP
#define GROUPDYN_CORE_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace groupdyn {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Civil date arithmetic. Dates are days since 1970-01-01, timestamps are
// UTC seconds since the epoch (no leap seconds).

constexpr std::int64_t kSecondsPerDay = 86400;

// Howard Hinnant's public-domain civil-date algorithms.
constexpr std::int32_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int>(doe) - 719468;
}

struct CivilDate {
    int year;
    unsigned month;
    unsigned day;
};

constexpr CivilDate civil_from_days(std::int32_t z) {
    z += 719468;
    const int era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int y = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {y + (m <= 2), m, d};
}

// "YYYY-MM-DD" -> days since epoch.
inline std::int32_t parse_date(std::string_view s) {
    int y = 0;
    unsigned m = 0, d = 0;
    if (s.size() != 10 ||
        std::sscanf(std::string(s).c_str(), "%d-%u-%u", &y, &m, &d) != 3 ||
        m < 1 || m > 12 || d < 1 || d > 31)
        throw Error("invalid date: " + std::string(s));
    return days_from_civil(y, m, d);
}

inline std::string format_date(std::int32_t days) {
    const CivilDate c = civil_from_days(days);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", c.year, c.month, c.day);
    return buf;
}

// "YYYY-MM-DDTHH:MM:SSZ" -> UTC seconds. A bare date parses as midnight.
inline std::int64_t parse_timestamp(std::string_view s) {
    if (s.size() == 10) return static_cast<std::int64_t>(parse_date(s)) * kSecondsPerDay;
    int y = 0;
    unsigned mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    char tail = 0;
    if (s.size() != 20 ||
        std::sscanf(std::string(s).c_str(), "%d-%u-%uT%u:%u:%u%c", &y, &mo, &d, &h, &mi,
                    &sec, &tail) != 7 ||
        tail != 'Z' || mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec > 59)
        throw Error("invalid timestamp: " + std::string(s));
    return static_cast<std::int64_t>(days_from_civil(y, mo, d)) * kSecondsPerDay +
           h * 3600 + mi * 60 + sec;
}

inline std::string format_timestamp(std::int64_t ts) {
    std::int64_t days = ts / kSecondsPerDay;
    std::int64_t rem = ts % kSecondsPerDay;
    if (rem < 0) {
        rem += kSecondsPerDay;
        --days;
    }
    const CivilDate c = civil_from_days(static_cast<std::int32_t>(days));
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", c.year, c.month,
                  c.day, static_cast<long long>(rem / 3600),
                  static_cast<long long>(rem % 3600 / 60), static_cast<long long>(rem % 60));
    return buf;
}

// ---------------------------------------------------------------------------
// Small string helpers (ASCII only; corpora are normalized upstream).

inline std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
    return out;
}

inline std::string_view trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n'))
        --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (true) {
        size_t next = s.find(sep, pos);
        if (next == std::string_view::npos) {
            out.emplace_back(s.substr(pos));
            return out;
        }
        out.emplace_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
}

// ---------------------------------------------------------------------------
// FNV-1a, used for content-derived RNG seeds and stage cache keys.

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = kFnvOffset) {
    for (unsigned char c : s) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

inline std::uint64_t fnv1a_u64(std::uint64_t v, std::uint64_t h = kFnvOffset) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (i * 8)) & 0xff;
        h *= kFnvPrime;
    }
    return h;
}

template <typename It>
std::uint64_t fnv1a_range(It first, It last, std::uint64_t h = kFnvOffset) {
    for (; first != last; ++first) h = fnv1a_u64(static_cast<std::uint64_t>(*first), h);
    return h;
}

// ---------------------------------------------------------------------------
// Sorted-vector set operations, the workhorse of clique and group matching.

template <typename T>
std::size_t intersection_size(const std::vector<T>& a, const std::vector<T>& b) {
    std::size_t n = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j)
            ++i;
        else if (*j < *i)
            ++j;
        else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

template <typename T>
bool contains_sorted(const std::vector<T>& v, const T& x) {
    return std::binary_search(v.begin(), v.end(), x);
}

// Union-find over dense indices.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace groupdyn

#endif
