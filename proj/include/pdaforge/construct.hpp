#pragma once
// Distance-ω construction pipeline: the base array over Z_q^m (cell (a,b)
// holds a+b mod q exactly when d(a,b)=ω, else a star), occurrence
// partitions that turn it into a labeled PDA, and the closed-form
// parameter summaries for the two full-space families.

#include <pdaforge/pda.hpp>

#include <algorithm>
#include <cstdlib>
#include <unordered_map>

namespace pdaforge {

// Grid-size budget for construction entry points, overridable via the
// PDAFORGE_CELL_CAP environment variable (cells = rows x columns).
inline std::size_t cell_cap() {
    if (const char* env = std::getenv("PDAFORGE_CELL_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (env[0] == '\0' || *end != '\0' || v == 0 || v > (1ull << 32))
            throw std::invalid_argument(
                "PDAFORGE_CELL_CAP must be a positive integer no larger than 2^32");
        return static_cast<std::size_t>(v);
    }
    return 1ull << 24;
}

class BaseArray {
public:
    BaseArray(unsigned q, std::size_t m, std::size_t omega,
              std::vector<QVec> rows, std::vector<QVec> cols)
        : q_(q), m_(m), omega_(omega), rows_(std::move(rows)), cols_(std::move(cols)) {
        if (m_ == 0) throw std::invalid_argument("base array: m must be positive");
        if (omega_ < 1 || omega_ > m_)
            throw std::invalid_argument("base array: omega must satisfy 1 <= omega <= m, got " +
                                        std::to_string(omega_));
        if (rows_.empty() || cols_.empty())
            throw std::invalid_argument("base array: row and column sets must be non-empty");
        for (auto* side : {&rows_, &cols_})
            for (const QVec& v : *side)
                if (v.q() != q_ || v.size() != m_)
                    throw std::invalid_argument("base array: row/column vector has wrong q or length");
        std::size_t cap = cell_cap();
        if (rows_.size() > cap / cols_.size())
            throw std::invalid_argument(
                "base array: " + std::to_string(rows_.size()) + "x" +
                std::to_string(cols_.size()) +
                " cells exceed the cap (raise PDAFORGE_CELL_CAP to override)");
        auto check_distinct = [](const std::vector<QVec>& vs, const char* what) {
            std::unordered_map<std::uint64_t, bool> seen;
            for (const QVec& v : vs)
                if (!seen.emplace(v.to_index(), true).second)
                    throw std::invalid_argument(std::string("base array: duplicate ") + what +
                                                " vector " + v.to_digits());
        };
        check_distinct(rows_, "row");
        check_distinct(cols_, "column");

        grid_.assign(rows_.size() * cols_.size(), -1);
        std::unordered_map<std::uint64_t, std::int32_t> intern;
        for (std::size_t r = 0; r < rows_.size(); ++r)
            for (std::size_t c = 0; c < cols_.size(); ++c) {
                if (hamming_distance(rows_[r], cols_[c]) != omega_) continue;
                QVec e = add_mod(rows_[r], cols_[c]);
                auto [it, fresh] =
                    intern.try_emplace(e.to_index(), static_cast<std::int32_t>(vecs_.size()));
                if (fresh) vecs_.push_back(e);
                grid_[r * cols_.size() + c] = it->second;
            }
    }

    unsigned q() const { return q_; }
    std::size_t m() const { return m_; }
    std::size_t omega() const { return omega_; }
    std::size_t F() const { return rows_.size(); }
    std::size_t K() const { return cols_.size(); }
    const std::vector<QVec>& rows() const { return rows_; }
    const std::vector<QVec>& cols() const { return cols_; }

    bool is_star(std::size_t r, std::size_t c) const { return grid_[r * K() + c] < 0; }

    const QVec& vec_at(std::size_t r, std::size_t c) const {
        std::int32_t id = grid_[r * K() + c];
        if (id < 0) throw std::logic_error("BaseArray::vec_at: cell is a star");
        return vecs_[id];
    }

private:
    unsigned q_;
    std::size_t m_, omega_;
    std::vector<QVec> rows_, cols_;
    std::vector<std::int32_t> grid_;
    std::vector<QVec> vecs_;
};

inline BaseArray build_base_array(unsigned q, std::size_t m, std::size_t omega) {
    auto space = enumerate_space(q, m);
    return BaseArray(q, m, omega, space, space);
}

inline BaseArray build_base_array(unsigned q, std::size_t m, std::size_t omega,
                                  std::vector<QVec> rows, std::vector<QVec> cols) {
    return BaseArray(q, m, omega, std::move(rows), std::move(cols));
}

// ---------------------------------------------------------------- partitions

struct SymbolOccurrence {
    std::uint32_t row = 0, col = 0;
    std::uint32_t cls = 0;
};

struct SymbolClasses {
    QVec vec;
    std::vector<SymbolOccurrence> occurrences; // row-major order
    std::uint32_t class_count = 0;
};

// Assignment of a class id to every non-star cell, grouped by cell vector
// (symbols sorted canonically, occurrences row-major).
struct ClassMap {
    std::string partition; // human-readable name of the rule that built it
    std::vector<SymbolClasses> symbols;
};

namespace detail {

template <typename ClassOf>
ClassMap build_class_map(const BaseArray& base, std::string name, ClassOf&& class_of) {
    ClassMap out;
    out.partition = std::move(name);
    std::unordered_map<std::uint64_t, std::size_t> index_of;
    for (std::size_t r = 0; r < base.F(); ++r)
        for (std::size_t c = 0; c < base.K(); ++c) {
            if (base.is_star(r, c)) continue;
            const QVec& e = base.vec_at(r, c);
            auto [it, fresh] = index_of.try_emplace(e.to_index(), out.symbols.size());
            if (fresh) out.symbols.push_back(SymbolClasses{e, {}, 0});
            SymbolClasses& sym = out.symbols[it->second];
            std::uint32_t cls = class_of(base.rows()[r], base.cols()[c], e, sym);
            sym.occurrences.push_back(SymbolOccurrence{static_cast<std::uint32_t>(r),
                                                       static_cast<std::uint32_t>(c), cls});
        }
    std::sort(out.symbols.begin(), out.symbols.end(),
              [](const SymbolClasses& x, const SymbolClasses& y) {
                  return index_less(x.vec, y.vec);
              });
    for (SymbolClasses& sym : out.symbols) {
        std::vector<std::uint32_t> distinct;
        for (const SymbolOccurrence& o : sym.occurrences) distinct.push_back(o.cls);
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        sym.class_count = static_cast<std::uint32_t>(distinct.size());
    }
    return out;
}

} // namespace detail

// Every occurrence becomes its own class; ids follow the row-major scan.
// Valid for any q >= 2.
inline ClassMap partition_singletons(const BaseArray& base) {
    return detail::build_class_map(base, "singletons",
                                   [](const QVec&, const QVec&, const QVec&,
                                      const SymbolClasses& sym) {
                                       return static_cast<std::uint32_t>(sym.occurrences.size());
                                   });
}

// q=2 rule: the class of cell (a,b) with vector e is a restricted to the
// zero coordinates of e, read as a little-endian integer.
inline ClassMap partition_residue_q2(const BaseArray& base) {
    if (base.q() != 2)
        throw std::invalid_argument("partition_residue_q2: requires q=2, got q=" +
                                    std::to_string(base.q()));
    return detail::build_class_map(
        base, "residue", [](const QVec& a, const QVec&, const QVec& e, const SymbolClasses&) {
            std::uint32_t key = 0, bit = 0;
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] == 0) key |= static_cast<std::uint32_t>(a[i]) << bit++;
            return key;
        });
}

// q=3 rule: the class of cell (a,b) is the agreement set {i : a_i = b_i},
// ranked colexicographically among (m-omega)-subsets.
inline ClassMap partition_agreement_q3(const BaseArray& base) {
    if (base.q() != 3)
        throw std::invalid_argument("partition_agreement_q3: requires q=3, got q=" +
                                    std::to_string(base.q()));
    return detail::build_class_map(
        base, "agreement", [](const QVec& a, const QVec& b, const QVec&, const SymbolClasses&) {
            std::vector<std::size_t> T;
            for (std::size_t i = 0; i < a.size(); ++i)
                if (a[i] == b[i]) T.push_back(i);
            return static_cast<std::uint32_t>(colex_rank(T));
        });
}

// Turn a base array plus class assignment into a labeled PDA. By default
// the class map is validated first: two same-class occurrences of one
// vector must never sit at cross distance omega, or the result would break
// the cross-star condition. The error names the offending pair.
inline PdaArray label_pda(const BaseArray& base, const ClassMap& cm, bool validate = true) {
    if (validate) {
        for (const SymbolClasses& sym : cm.symbols) {
            std::unordered_map<std::uint32_t, std::vector<const SymbolOccurrence*>> by_cls;
            for (const SymbolOccurrence& o : sym.occurrences) by_cls[o.cls].push_back(&o);
            for (const auto& [cls, occ] : by_cls)
                for (std::size_t i = 0; i < occ.size(); ++i)
                    for (std::size_t j = i + 1; j < occ.size(); ++j) {
                        const QVec& a1 = base.rows()[occ[i]->row];
                        const QVec& b1 = base.cols()[occ[i]->col];
                        const QVec& a2 = base.rows()[occ[j]->row];
                        const QVec& b2 = base.cols()[occ[j]->col];
                        if (hamming_distance(a1, b2) == base.omega() ||
                            hamming_distance(a2, b1) == base.omega())
                            throw std::invalid_argument(
                                "invalid class map (" + cm.partition + "): vector " +
                                sym.vec.to_digits() + " class " + std::to_string(cls) +
                                " occurrences (row " + a1.to_digits() + ", col " +
                                b1.to_digits() + ") and (row " + a2.to_digits() + ", col " +
                                b2.to_digits() + ") sit at cross distance omega");
                    }
        }
    }
    PdaArray p(base.q(), base.m(), base.omega(), base.rows(), base.cols());
    for (const SymbolClasses& sym : cm.symbols)
        for (const SymbolOccurrence& o : sym.occurrences)
            p.set_label(o.row, o.col, sym.vec, o.cls);
    return p;
}

// ---------------------------------------------------------------- full-space schemes

struct GeneratedScheme {
    PdaArray pda;
    UselessStars useless;
    SchemeParams params;
};

// Full space, q=2, residue partition.
inline GeneratedScheme binary_scheme(std::size_t m, std::size_t omega) {
    BaseArray base = build_base_array(2, m, omega);
    PdaArray pda = label_pda(base, partition_residue_q2(base));
    UselessStars useless = find_useless_stars(pda);
    SchemeParams params = scheme_params(pda, &useless);
    return GeneratedScheme{std::move(pda), std::move(useless), std::move(params)};
}

// Full space, q=3, agreement partition.
inline GeneratedScheme ternary_scheme(std::size_t m, std::size_t omega) {
    BaseArray base = build_base_array(3, m, omega);
    PdaArray pda = label_pda(base, partition_agreement_q3(base));
    UselessStars useless = find_useless_stars(pda);
    SchemeParams params = scheme_params(pda, &useless);
    return GeneratedScheme{std::move(pda), std::move(useless), std::move(params)};
}

// Closed-form parameters of the two families, exact at any size (no array
// is materialized, so these carry the large reference-table rows).
struct SchemeSummary {
    unsigned q = 2;
    std::size_t m = 0, omega = 0;
    BigInt K, F, Z, S, z_prime, trimmed_F;
    Rational memory_fraction, rate;                 // untrimmed Z/F, S/F
    Rational trimmed_memory_fraction, trimmed_rate; // after dropping z' stars per column
};

namespace detail {
inline void check_scheme_domain(std::size_t m, std::size_t omega) {
    if (m == 0) throw std::invalid_argument("scheme summary: m must be positive");
    if (omega < 1 || omega > m)
        throw std::invalid_argument("scheme summary: omega must satisfy 1 <= omega <= m");
}
} // namespace detail

inline SchemeSummary binary_scheme_summary(std::size_t m, std::size_t omega) {
    detail::check_scheme_domain(m, omega);
    SchemeSummary s;
    s.q = 2;
    s.m = m;
    s.omega = omega;
    s.K = s.F = pow_int(2, static_cast<unsigned>(m));
    s.Z = s.F - binomial(m, omega);
    s.S = binomial(m, omega) * pow_int(2, static_cast<unsigned>(m - omega));
    s.z_prime = 0;
    for (std::size_t i = omega + 1; i <= m; ++i) s.z_prime += binomial(m, i);
    s.trimmed_F = s.F - s.z_prime;
    s.memory_fraction = Rational(s.Z, s.F);
    s.rate = Rational(s.S, s.F);
    s.trimmed_memory_fraction = Rational(s.Z - s.z_prime, s.trimmed_F);
    s.trimmed_rate = Rational(s.S, s.trimmed_F);
    return s;
}

inline SchemeSummary ternary_scheme_summary(std::size_t m, std::size_t omega) {
    detail::check_scheme_domain(m, omega);
    SchemeSummary s;
    s.q = 3;
    s.m = m;
    s.omega = omega;
    s.K = s.F = pow_int(3, static_cast<unsigned>(m));
    s.Z = s.F - binomial(m, omega) * pow_int(2, static_cast<unsigned>(omega));
    s.S = binomial(m, omega) * pow_int(3, static_cast<unsigned>(m));
    s.z_prime = 0;
    for (std::size_t i = omega + 1; i <= m; ++i)
        s.z_prime += binomial(m, i) * pow_int(2, static_cast<unsigned>(i));
    s.trimmed_F = s.F - s.z_prime;
    s.memory_fraction = Rational(s.Z, s.F);
    s.rate = Rational(s.S, s.F);
    s.trimmed_memory_fraction = Rational(s.Z - s.z_prime, s.trimmed_F);
    s.trimmed_rate = Rational(s.S, s.trimmed_F);
    return s;
}

} // namespace pdaforge
