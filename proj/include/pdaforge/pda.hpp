#pragma once
// Placement delivery arrays: an F×K grid whose cells are either stars
// (cached packets) or labels (e, class_id) identifying XOR multicast
// signals, plus the verifiers, the useless-star scan, scheme parameters,
// and a line-oriented text format with bit-exact serialization.

#include <pdaforge/combinatorics.hpp>
#include <pdaforge/qvec.hpp>

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace pdaforge {

struct SymbolLabel {
    QVec vec;
    std::uint32_t cls = 0;
};

class PdaArray {
public:
    PdaArray(unsigned q, std::size_t m, std::size_t omega,
             std::vector<QVec> rows, std::vector<QVec> cols)
        : q_(q), m_(m), omega_(omega), rows_(std::move(rows)), cols_(std::move(cols)) {
        if (rows_.empty() || cols_.empty())
            throw std::invalid_argument("PdaArray: row and column sets must be non-empty");
        for (auto* side : {&rows_, &cols_})
            for (const QVec& v : *side)
                if (v.q() != q_ || v.size() != m_)
                    throw std::invalid_argument("PdaArray: row/column vector has wrong q or length");
        auto check_distinct = [](const std::vector<QVec>& vs, const char* what) {
            std::unordered_map<std::uint64_t, bool> seen;
            for (const QVec& v : vs)
                if (!seen.emplace(v.to_index(), true).second)
                    throw std::invalid_argument(std::string("PdaArray: duplicate ") + what +
                                                " vector " + v.to_digits());
        };
        check_distinct(rows_, "row");
        check_distinct(cols_, "column");
        if (rows_.size() > (1ull << 26) / cols_.size())
            throw std::invalid_argument("PdaArray: grid exceeds the hard cell limit");
        grid_.assign(rows_.size() * cols_.size(), -1);
    }

    unsigned q() const { return q_; }
    std::size_t m() const { return m_; }
    std::size_t omega() const { return omega_; }
    std::size_t F() const { return rows_.size(); }
    std::size_t K() const { return cols_.size(); }
    std::size_t S() const { return labels_.size(); }
    const std::vector<QVec>& rows() const { return rows_; }
    const std::vector<QVec>& cols() const { return cols_; }

    bool is_star(std::size_t r, std::size_t c) const { return grid_[r * K() + c] < 0; }

    // Label id at a cell, or -1 for a star. Ids are dense, assigned in
    // first-appearance (row-major) order.
    std::int32_t label_id(std::size_t r, std::size_t c) const { return grid_[r * K() + c]; }

    const SymbolLabel& label(std::int32_t id) const { return labels_.at(id); }
    const std::vector<SymbolLabel>& labels() const { return labels_; }

    void set_star(std::size_t r, std::size_t c) { grid_[r * K() + c] = -1; }

    void set_label(std::size_t r, std::size_t c, const QVec& vec, std::uint32_t cls) {
        if (vec.q() != q_ || vec.size() != m_)
            throw std::invalid_argument("PdaArray::set_label: vector has wrong q or length");
        std::uint64_t key = vec.to_index() * 0x100000000ull ^ cls;
        auto [it, fresh] = intern_.try_emplace(key, static_cast<std::int32_t>(labels_.size()));
        if (fresh) labels_.push_back(SymbolLabel{vec, cls});
        grid_[r * K() + c] = it->second;
    }

    // Occurrence lists per label id, each in row-major order.
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> occurrences() const {
        std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> occ(labels_.size());
        for (std::size_t r = 0; r < F(); ++r)
            for (std::size_t c = 0; c < K(); ++c) {
                std::int32_t id = grid_[r * K() + c];
                if (id >= 0)
                    occ[id].emplace_back(static_cast<std::uint32_t>(r),
                                         static_cast<std::uint32_t>(c));
            }
        return occ;
    }

    std::size_t stars_in_column(std::size_t c) const {
        std::size_t z = 0;
        for (std::size_t r = 0; r < F(); ++r) z += is_star(r, c);
        return z;
    }

private:
    unsigned q_;
    std::size_t m_, omega_;
    std::vector<QVec> rows_, cols_;
    std::vector<std::int32_t> grid_;
    std::vector<SymbolLabel> labels_;
    std::unordered_map<std::uint64_t, std::int32_t> intern_;
};

struct VerifyResult {
    bool ok = true;
    std::string detail; // empty when ok; otherwise names the first counterexample
};

namespace detail {
inline std::string cell_name(const PdaArray& p, std::size_t r, std::size_t c) {
    return "(row " + p.rows()[r].to_digits() + ", col " + p.cols()[c].to_digits() + ")";
}
inline std::string label_name(const SymbolLabel& s) {
    return s.vec.to_digits() + ":" + std::to_string(s.cls);
}
} // namespace detail

// Labels must not repeat within a row or column (C1-a), and for any two
// cells carrying the same label the two cross cells must both be stars
// (C1-b). Scans labels in first-appearance order and reports the first
// counterexample found.
inline VerifyResult verify_c1(const PdaArray& p) {
    auto occ = p.occurrences();
    for (std::size_t id = 0; id < occ.size(); ++id) {
        const auto& cells = occ[id];
        const std::string name = detail::label_name(p.label(static_cast<std::int32_t>(id)));
        for (std::size_t i = 0; i < cells.size(); ++i)
            for (std::size_t j = i + 1; j < cells.size(); ++j) {
                auto [r1, c1] = cells[i];
                auto [r2, c2] = cells[j];
                if (r1 == r2)
                    return {false, "C1-a violated: label " + name + " appears twice in row " +
                                       p.rows()[r1].to_digits() + " (cols " +
                                       p.cols()[c1].to_digits() + ", " +
                                       p.cols()[c2].to_digits() + ")"};
                if (c1 == c2)
                    return {false, "C1-a violated: label " + name + " appears twice in col " +
                                       p.cols()[c1].to_digits() + " (rows " +
                                       p.rows()[r1].to_digits() + ", " +
                                       p.rows()[r2].to_digits() + ")"};
                if (!p.is_star(r1, c2))
                    return {false, "C1-b violated: label " + name + " at " +
                                       detail::cell_name(p, r1, c1) + " and " +
                                       detail::cell_name(p, r2, c2) + ": cell " +
                                       detail::cell_name(p, r1, c2) + " is not a star"};
                if (!p.is_star(r2, c1))
                    return {false, "C1-b violated: label " + name + " at " +
                                       detail::cell_name(p, r1, c1) + " and " +
                                       detail::cell_name(p, r2, c2) + ": cell " +
                                       detail::cell_name(p, r2, c1) + " is not a star"};
            }
    }
    return {true, ""};
}

// Every column must hold the same number of stars (the claimed Z when
// given); otherwise the result names two columns whose counts differ.
inline VerifyResult verify_c2(const PdaArray& p,
                              std::optional<std::size_t> expected_z = std::nullopt) {
    std::size_t z0 = expected_z ? *expected_z : p.stars_in_column(0);
    for (std::size_t c = 0; c < p.K(); ++c) {
        std::size_t z = p.stars_in_column(c);
        if (z != z0) {
            std::string ref = expected_z
                                  ? std::to_string(z0) + " (the claimed Z)"
                                  : std::to_string(z0) + " (col " + p.cols()[0].to_digits() + ")";
            return {false, "C2 violated: col " + p.cols()[c].to_digits() + " holds " +
                               std::to_string(z) + " stars, expected " + ref};
        }
    }
    return {true, ""};
}

struct UselessStars {
    std::vector<std::uint8_t> useless; // F*K mask, row-major; 1 = star completing no 2x2
    std::vector<std::size_t> per_column;
    std::size_t total = 0;
    bool uniform = false;              // same count in every column
    std::size_t z_prime = 0;           // the common per-column count when uniform
};

// A star is useful iff some label occurs both in its row and its column —
// the minimal condition for sitting inside a C1-b 2x2 subarray. Assumes
// verify_c1 already passed (cross cells of label pairs are then stars);
// cost is one mark per ordered occurrence pair per label.
inline UselessStars find_useless_stars(const PdaArray& p) {
    const std::size_t F = p.F(), K = p.K();
    std::vector<std::uint8_t> useful(F * K, 0);
    auto occ = p.occurrences();
    for (const auto& cells : occ)
        for (std::size_t i = 0; i < cells.size(); ++i)
            for (std::size_t j = 0; j < cells.size(); ++j)
                if (i != j) useful[cells[i].first * K + cells[j].second] = 1;

    UselessStars out;
    out.useless.assign(F * K, 0);
    out.per_column.assign(K, 0);
    for (std::size_t r = 0; r < F; ++r)
        for (std::size_t c = 0; c < K; ++c)
            if (p.is_star(r, c) && !useful[r * K + c]) {
                out.useless[r * K + c] = 1;
                ++out.per_column[c];
                ++out.total;
            }
    out.uniform = true;
    out.z_prime = out.per_column[0];
    for (std::size_t c = 1; c < K; ++c)
        if (out.per_column[c] != out.z_prime) { out.uniform = false; out.z_prime = 0; break; }
    return out;
}

struct SchemeParams {
    std::size_t K = 0, F = 0, Z = 0, S = 0;
    Rational memory_fraction; // Z/F
    Rational rate;            // S/F
    struct Trimmed {
        std::size_t z_prime = 0, F = 0;
        Rational memory_fraction; // (Z-Z')/(F-Z')
        Rational rate;            // S/(F-Z')
    };
    std::optional<Trimmed> trimmed;
    std::string trimmed_note; // why trimmed values are absent, when they are
};

// Caching-scheme parameters carried by a verified PDA, as exact rationals.
// When a useless-star scan is supplied and its per-column count is uniform,
// the trimmed parameters (discard Z' useless stars per column) are included.
inline SchemeParams scheme_params(const PdaArray& p,
                                  const UselessStars* useless = nullptr) {
    VerifyResult c2 = verify_c2(p);
    if (!c2.ok)
        throw std::invalid_argument("scheme_params: " + c2.detail);
    SchemeParams out;
    out.K = p.K();
    out.F = p.F();
    out.Z = p.stars_in_column(0);
    out.S = p.S();
    out.memory_fraction = Rational(out.Z, out.F);
    out.rate = Rational(out.S, out.F);
    if (useless) {
        if (useless->uniform && useless->z_prime > 0) {
            SchemeParams::Trimmed t;
            t.z_prime = useless->z_prime;
            t.F = out.F - t.z_prime;
            t.memory_fraction = Rational(out.Z - t.z_prime, t.F);
            t.rate = Rational(out.S, t.F);
            out.trimmed = t;
        } else if (!useless->uniform) {
            std::size_t lo = useless->per_column[0], hi = lo;
            for (std::size_t z : useless->per_column) { lo = std::min(lo, z); hi = std::max(hi, z); }
            out.trimmed_note = "useless-star count varies by column (min " + std::to_string(lo) +
                               ", max " + std::to_string(hi) + "); trimmed parameters not defined";
        } else {
            out.trimmed_note = "no useless stars; trimming would not change the scheme";
        }
    }
    return out;
}

// ------------------------------------------------------------------ text format

// Canonical serialization (single spaces, one row per line):
//   PDA v1
//   q=2 m=3 omega=2 F=8 K=8 S=6
//   cols: 000 100 010 110 001 101 011 111
//   000 | * * * 110:0 * 101:0 011:0 *
//   ...
inline std::string serialize(const PdaArray& p) {
    std::ostringstream os;
    os << "PDA v1\n";
    os << "q=" << p.q() << " m=" << p.m() << " omega=" << p.omega() << " F=" << p.F()
       << " K=" << p.K() << " S=" << p.S() << "\n";
    os << "cols:";
    for (const QVec& c : p.cols()) os << " " << c.to_digits();
    os << "\n";
    for (std::size_t r = 0; r < p.F(); ++r) {
        os << p.rows()[r].to_digits() << " |";
        for (std::size_t c = 0; c < p.K(); ++c) {
            if (p.is_star(r, c)) {
                os << " *";
            } else {
                const SymbolLabel& s = p.label(p.label_id(r, c));
                os << " " << s.vec.to_digits() << ":" << s.cls;
            }
        }
        os << "\n";
    }
    return os.str();
}

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + what),
          line_(line), column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_, column_;
};

namespace detail {

struct Token {
    std::string text;
    std::size_t column; // 1-based start position
};

inline std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == ' ' || line[i] == '\t') { ++i; continue; }
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

inline std::size_t parse_count(const Token& t, std::size_t line_no, const char* what) {
    if (t.text.empty() || t.text.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(line_no, t.column, std::string("expected a number for ") + what);
    return static_cast<std::size_t>(std::stoull(t.text));
}

inline std::size_t parse_keyed(const Token& t, std::size_t line_no, const char* key) {
    std::string prefix = std::string(key) + "=";
    if (t.text.rfind(prefix, 0) != 0)
        throw ParseError(line_no, t.column, "expected " + prefix + "<value>, got '" + t.text + "'");
    Token value{t.text.substr(prefix.size()), t.column + prefix.size()};
    return parse_count(value, line_no, key);
}

} // namespace detail

// Parse the text format back into an array. Tolerates arbitrary runs of
// spaces/tabs between tokens; every violation is reported with its
// 1-based line and column.
inline PdaArray parse(const std::string& text) {
    std::vector<std::string> lines;
    {
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line)) lines.push_back(line);
    }
    std::size_t ln = 0;
    auto next_line = [&]() -> std::vector<detail::Token> {
        while (ln < lines.size()) {
            auto toks = detail::tokenize(lines[ln]);
            ++ln;
            if (!toks.empty()) return toks;
        }
        throw ParseError(lines.size() + 1, 1, "unexpected end of input");
    };

    auto header = next_line();
    if (header.size() != 2 || header[0].text != "PDA" || header[1].text != "v1")
        throw ParseError(ln, header.empty() ? 1 : header[0].column,
                         "expected header 'PDA v1'");

    auto meta = next_line();
    if (meta.size() != 6)
        throw ParseError(ln, meta.empty() ? 1 : meta[0].column,
                         "expected 'q= m= omega= F= K= S=' metadata line");
    unsigned q = static_cast<unsigned>(detail::parse_keyed(meta[0], ln, "q"));
    std::size_t m = detail::parse_keyed(meta[1], ln, "m");
    std::size_t omega = detail::parse_keyed(meta[2], ln, "omega");
    std::size_t F = detail::parse_keyed(meta[3], ln, "F");
    std::size_t K = detail::parse_keyed(meta[4], ln, "K");
    std::size_t S = detail::parse_keyed(meta[5], ln, "S");
    if (q < 2)
        throw ParseError(ln, meta[0].column, "alphabet size q must be at least 2");

    auto parse_vec = [&](const detail::Token& t, std::size_t line_no) {
        if (t.text.size() != m)
            throw ParseError(line_no, t.column, "vector '" + t.text + "' must have " +
                                                    std::to_string(m) + " digits");
        for (std::size_t i = 0; i < t.text.size(); ++i) {
            char ch = t.text[i];
            if (ch < '0' || ch >= static_cast<char>('0' + q))
                throw ParseError(line_no, t.column + i,
                                 std::string("digit '") + ch + "' out of range for q=" +
                                     std::to_string(q));
        }
        return QVec::from_digits(t.text, q);
    };

    auto cols_line = next_line();
    std::size_t cols_ln = ln;
    if (cols_line[0].text != "cols:")
        throw ParseError(cols_ln, cols_line[0].column, "expected 'cols:' line");
    if (cols_line.size() != K + 1)
        throw ParseError(cols_ln, cols_line[0].column,
                         "expected " + std::to_string(K) + " column vectors, got " +
                             std::to_string(cols_line.size() - 1));
    std::vector<QVec> cols;
    std::unordered_map<std::uint64_t, bool> col_seen;
    for (std::size_t c = 0; c < K; ++c) {
        cols.push_back(parse_vec(cols_line[c + 1], cols_ln));
        if (!col_seen.emplace(cols.back().to_index(), true).second)
            throw ParseError(cols_ln, cols_line[c + 1].column,
                             "duplicate column vector " + cols.back().to_digits());
    }

    std::vector<QVec> rows;
    std::vector<std::vector<detail::Token>> row_entries;
    std::vector<std::size_t> row_lines;
    std::unordered_map<std::uint64_t, bool> row_seen;
    for (std::size_t r = 0; r < F; ++r) {
        auto toks = next_line();
        std::size_t row_ln = ln;
        if (toks.size() < 2 || toks[1].text != "|")
            throw ParseError(row_ln, toks.size() < 2 ? toks[0].column : toks[1].column,
                             "expected '<row vector> | <entries>'");
        rows.push_back(parse_vec(toks[0], row_ln));
        if (!row_seen.emplace(rows.back().to_index(), true).second)
            throw ParseError(row_ln, toks[0].column,
                             "duplicate row vector " + rows.back().to_digits());
        if (toks.size() != K + 2)
            throw ParseError(row_ln, toks[0].column,
                             "expected " + std::to_string(K) + " entries, got " +
                                 std::to_string(toks.size() - 2));
        row_entries.emplace_back(toks.begin() + 2, toks.end());
        row_lines.push_back(row_ln);
    }

    for (std::size_t extra = ln; extra < lines.size(); ++extra) {
        auto toks = detail::tokenize(lines[extra]);
        if (!toks.empty())
            throw ParseError(extra + 1, toks[0].column, "unexpected content after last row");
    }

    PdaArray p(q, m, omega, std::move(rows), std::move(cols));
    for (std::size_t r = 0; r < F; ++r) {
        std::size_t row_ln = row_lines[r];
        for (std::size_t c = 0; c < K; ++c) {
            const detail::Token& t = row_entries[r][c];
            if (t.text == "*") continue;
            std::size_t colon = t.text.find(':');
            if (colon == std::string::npos)
                throw ParseError(row_ln, t.column,
                                 "entry '" + t.text + "' must be '*' or '<digits>:<class>'");
            detail::Token vec_tok{t.text.substr(0, colon), t.column};
            detail::Token cls_tok{t.text.substr(colon + 1), t.column + colon + 1};
            QVec vec = parse_vec(vec_tok, row_ln);
            std::size_t cls = detail::parse_count(cls_tok, row_ln, "class id");
            p.set_label(r, c, vec, static_cast<std::uint32_t>(cls));
        }
    }
    if (p.S() != S)
        throw ParseError(2, meta[5].column,
                         "header S=" + std::to_string(S) + " but the grid carries " +
                             std::to_string(p.S()) + " distinct labels");
    return p;
}

} // namespace pdaforge
