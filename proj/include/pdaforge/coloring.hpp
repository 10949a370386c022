#pragma once
// Class-merging machinery: conflict graphs over the partition key spaces,
// first-fit greedy coloring, the antipodal pairing, and the merged
// partitions they induce. Merging same-colored keys shrinks the number of
// distinct signals S while the cross-distance rule keeps the PDA valid.

#include <pdaforge/construct.hpp>

#include <numeric>

namespace pdaforge {

// Vertices are partition keys; an edge joins two keys that cannot share a
// class (some occurrence pair would sit at cross distance omega).
//   q=2: vertex id = little-endian value of a (m-omega)-bit vector,
//        edge iff 1 <= d(t1,t2) <= omega.
//   q=3: vertex id = colex rank of an (m-omega)-subset of {0..m-1},
//        edge iff 2*|T1 n T2| >= 2m - 3*omega.
struct ConflictGraph {
    unsigned q = 2;
    std::size_t m = 0, omega = 0;
    std::vector<std::vector<std::uint32_t>> adj; // sorted neighbor lists
    std::size_t max_degree = 0;
    std::vector<std::vector<std::size_t>> subsets; // q=3 only: vertex id -> subset

    std::size_t vertex_count() const { return adj.size(); }
};

inline ConflictGraph build_conflict_graph_q2(std::size_t m, std::size_t omega) {
    if (omega < 1 || m < 2 * omega + 1)
        throw std::invalid_argument(
            "conflict graph (q=2): requires m >= 2*omega+1, got m=" + std::to_string(m) +
            " omega=" + std::to_string(omega));
    std::size_t bits = m - omega;
    std::size_t n = std::size_t(1) << bits;
    ConflictGraph g;
    g.q = 2;
    g.m = m;
    g.omega = omega;
    g.adj.resize(n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) {
            std::size_t d = static_cast<std::size_t>(__builtin_popcountll(u ^ v));
            if (d <= omega) {
                g.adj[u].push_back(static_cast<std::uint32_t>(v));
                g.adj[v].push_back(static_cast<std::uint32_t>(u));
            }
        }
    for (auto& list : g.adj) g.max_degree = std::max(g.max_degree, list.size());
    return g;
}

inline ConflictGraph build_conflict_graph_q3(std::size_t m, std::size_t omega) {
    if (omega < 1 || 2 * m <= 3 * omega)
        throw std::invalid_argument(
            "conflict graph (q=3): requires 2m > 3*omega, got m=" + std::to_string(m) +
            " omega=" + std::to_string(omega));
    std::size_t k = m - omega;
    // all k-subsets of {0..m-1} as bitmasks; for fixed popcount, numeric
    // order of the masks IS colex order, so vertex id = colex rank
    std::vector<std::uint32_t> masks;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask)
        if (static_cast<std::size_t>(__builtin_popcount(mask)) == k) masks.push_back(mask);

    ConflictGraph g;
    g.q = 3;
    g.m = m;
    g.omega = omega;
    g.adj.resize(masks.size());
    g.subsets.resize(masks.size());
    for (std::size_t i = 0; i < masks.size(); ++i)
        for (std::size_t bit = 0; bit < m; ++bit)
            if (masks[i] >> bit & 1) g.subsets[i].push_back(bit);
    for (std::size_t u = 0; u < masks.size(); ++u)
        for (std::size_t v = u + 1; v < masks.size(); ++v) {
            std::size_t common = static_cast<std::size_t>(__builtin_popcount(masks[u] & masks[v]));
            if (2 * common >= 2 * m - 3 * omega) {
                g.adj[u].push_back(static_cast<std::uint32_t>(v));
                g.adj[v].push_back(static_cast<std::uint32_t>(u));
            }
        }
    for (auto& list : g.adj) g.max_degree = std::max(g.max_degree, list.size());
    return g;
}

struct Coloring {
    std::vector<std::uint32_t> color; // indexed by vertex id
    std::uint32_t color_count = 0;
};

// First-fit in vertex id order; never needs more than max_degree+1 colors.
inline Coloring greedy_color(const ConflictGraph& g) {
    Coloring out;
    out.color.assign(g.vertex_count(), 0);
    std::vector<std::uint8_t> used(g.max_degree + 2, 0);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        std::fill(used.begin(), used.end(), 0);
        for (std::uint32_t u : g.adj[v])
            if (u < v) used[out.color[u]] = 1;
        std::uint32_t c = 0;
        while (used[c]) ++c;
        out.color[v] = c;
        out.color_count = std::max(out.color_count, c + 1);
    }
    return out;
}

// Pair every (m-omega)-bit key with its bitwise complement; the pair sits
// at distance m-omega = omega+1, clear of every conflict edge. Defined for
// the balanced case m = 2*omega+1, where it halves the class count.
inline Coloring antipodal_pairing(std::size_t m, std::size_t omega) {
    if (omega < 1 || m != 2 * omega + 1)
        throw std::invalid_argument(
            "antipodal pairing: requires m = 2*omega+1, got m=" + std::to_string(m) +
            " omega=" + std::to_string(omega));
    std::size_t bits = m - omega;
    std::size_t n = std::size_t(1) << bits;
    std::uint64_t all = n - 1;
    Coloring out;
    out.color.assign(n, 0);
    std::vector<std::uint8_t> assigned(n, 0);
    std::uint32_t next = 0;
    for (std::size_t t = 0; t < n; ++t) {
        if (assigned[t]) continue;
        std::size_t comp = static_cast<std::size_t>(all ^ t);
        out.color[t] = next;
        out.color[comp] = next;
        assigned[t] = assigned[comp] = 1;
        ++next;
    }
    out.color_count = next;
    return out;
}

// Re-key a primary partition through a coloring: occurrences whose keys
// share a color share a class. The coloring must cover the key space of
// the base array's alphabet (2^(m-omega) keys for q=2, C(m, m-omega) for
// q=3).
inline ClassMap partition_merged(const BaseArray& base, const Coloring& coloring) {
    std::size_t m = base.m(), omega = base.omega();
    if (base.q() == 2) {
        std::size_t keys = std::size_t(1) << (m - omega);
        if (coloring.color.size() != keys)
            throw std::invalid_argument("partition_merged: coloring covers " +
                                        std::to_string(coloring.color.size()) +
                                        " keys, expected " + std::to_string(keys));
        return detail::build_class_map(
            base, "merged-residue",
            [&coloring](const QVec& a, const QVec&, const QVec& e, const SymbolClasses&) {
                std::size_t key = 0, bit = 0;
                for (std::size_t i = 0; i < e.size(); ++i)
                    if (e[i] == 0) key |= static_cast<std::size_t>(a[i]) << bit++;
                return coloring.color[key];
            });
    }
    if (base.q() == 3) {
        std::size_t keys = binomial(static_cast<long long>(m), static_cast<long long>(m - omega))
                               .convert_to<std::size_t>();
        if (coloring.color.size() != keys)
            throw std::invalid_argument("partition_merged: coloring covers " +
                                        std::to_string(coloring.color.size()) +
                                        " keys, expected " + std::to_string(keys));
        return detail::build_class_map(
            base, "merged-agreement",
            [&coloring](const QVec& a, const QVec& b, const QVec&, const SymbolClasses&) {
                std::vector<std::size_t> T;
                for (std::size_t i = 0; i < a.size(); ++i)
                    if (a[i] == b[i]) T.push_back(i);
                return coloring.color[colex_rank(T)];
            });
    }
    throw std::invalid_argument("partition_merged: no merge rule for q=" +
                                std::to_string(base.q()));
}

// Full-space scheme with the merged partition; picks the pairing in the
// balanced binary case and greedy coloring otherwise.
inline GeneratedScheme merged_scheme(unsigned q, std::size_t m, std::size_t omega) {
    if (q == 2) {
        Coloring col = (m == 2 * omega + 1)
                           ? antipodal_pairing(m, omega)
                           : greedy_color(build_conflict_graph_q2(m, omega));
        BaseArray base = build_base_array(2, m, omega);
        PdaArray pda = label_pda(base, partition_merged(base, col));
        UselessStars useless = find_useless_stars(pda);
        SchemeParams params = scheme_params(pda, &useless);
        return GeneratedScheme{std::move(pda), std::move(useless), std::move(params)};
    }
    if (q == 3) {
        Coloring col = greedy_color(build_conflict_graph_q3(m, omega));
        BaseArray base = build_base_array(3, m, omega);
        PdaArray pda = label_pda(base, partition_merged(base, col));
        UselessStars useless = find_useless_stars(pda);
        SchemeParams params = scheme_params(pda, &useless);
        return GeneratedScheme{std::move(pda), std::move(useless), std::move(params)};
    }
    throw std::invalid_argument("merged_scheme: no merge rule for q=" + std::to_string(q));
}

// Guaranteed ceilings on the merged signal count S.
inline BigInt merged_binary_signal_bound(std::size_t m, std::size_t omega) {
    BigInt inner = 0;
    for (std::size_t i = 0; i <= omega; ++i)
        inner += binomial(static_cast<long long>(m - omega), static_cast<long long>(i));
    return binomial(static_cast<long long>(m), static_cast<long long>(omega)) * inner;
}

inline BigInt merged_ternary_signal_bound(std::size_t m, std::size_t omega) {
    // 3^m * (1 + sum over i of C(m-omega, i) * C(omega, m-omega-i)), with i
    // running from ceil((2m-3*omega)/2) to m-omega-1
    std::size_t lo = (2 * m - 3 * omega + 1) / 2;
    BigInt inner = 0;
    for (std::size_t i = lo; i + 1 <= m - omega; ++i)
        inner += binomial(static_cast<long long>(m - omega), static_cast<long long>(i)) *
                 binomial(static_cast<long long>(omega), static_cast<long long>(m - omega - i));
    return pow_int(3, static_cast<unsigned>(m)) * (1 + inner);
}

} // namespace pdaforge
