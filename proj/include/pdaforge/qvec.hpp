#pragma once
// Fixed-length vectors over Z_q: digit arithmetic, Hamming metric, and
// space enumeration in the library's canonical order (coordinate 0 varies
// fastest; digit strings print coordinate 0 leftmost).

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdaforge {

class QVec {
public:
    QVec() : q_(2) {}

    QVec(unsigned q, std::vector<std::uint8_t> digits) : q_(q), d_(std::move(digits)) {
        check_alphabet(q_);
        for (std::uint8_t v : d_)
            if (v >= q_)
                throw std::invalid_argument("QVec: digit " + std::to_string(int(v)) +
                                            " out of range for q=" + std::to_string(q_));
    }

    static QVec zero(unsigned q, std::size_t m) {
        check_alphabet(q);
        return QVec(q, std::vector<std::uint8_t>(m, 0));
    }

    // Decode the canonical index: coordinate 0 is the least-significant digit.
    static QVec from_index(std::uint64_t index, unsigned q, std::size_t m) {
        check_alphabet(q);
        std::vector<std::uint8_t> d(m);
        for (std::size_t i = 0; i < m; ++i) {
            d[i] = static_cast<std::uint8_t>(index % q);
            index /= q;
        }
        if (index != 0)
            throw std::out_of_range("QVec::from_index: index exceeds q^m");
        return QVec(q, std::move(d));
    }

    // Digit string with coordinate 0 leftmost, e.g. "110" for (1,1,0).
    static QVec from_digits(const std::string& s, unsigned q) {
        check_alphabet(q);
        std::vector<std::uint8_t> d;
        d.reserve(s.size());
        for (char c : s) {
            if (c < '0' || c > '9')
                throw std::invalid_argument("QVec::from_digits: non-digit character");
            d.push_back(static_cast<std::uint8_t>(c - '0'));
        }
        return QVec(q, std::move(d));
    }

    unsigned q() const { return q_; }
    std::size_t size() const { return d_.size(); }
    std::uint8_t operator[](std::size_t i) const { return d_[i]; }
    const std::vector<std::uint8_t>& digits() const { return d_; }

    std::uint64_t to_index() const {
        std::uint64_t acc = 0;
        for (std::size_t i = d_.size(); i-- > 0;) {
            if (acc > (UINT64_MAX - d_[i]) / q_)
                throw std::overflow_error("QVec::to_index: q^m exceeds 64 bits");
            acc = acc * q_ + d_[i];
        }
        return acc;
    }

    std::string to_digits() const {
        std::string s;
        s.reserve(d_.size());
        for (std::uint8_t v : d_) s.push_back(static_cast<char>('0' + v));
        return s;
    }

    friend bool operator==(const QVec& a, const QVec& b) {
        return a.q_ == b.q_ && a.d_ == b.d_;
    }
    friend bool operator!=(const QVec& a, const QVec& b) { return !(a == b); }

private:
    static void check_alphabet(unsigned q) {
        if (q < 2) throw std::invalid_argument("QVec: alphabet size must be at least 2");
        if (q > 10) throw std::invalid_argument("QVec: alphabet size above 10 unsupported");
    }

    unsigned q_;
    std::vector<std::uint8_t> d_;
};

// Canonical ordering = ordering by index, computed digit-wise so it never
// overflows (most significant digit is the last coordinate).
inline bool index_less(const QVec& a, const QVec& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

namespace detail {
inline void require_compatible(const QVec& a, const QVec& b, const char* op) {
    if (a.q() != b.q())
        throw std::invalid_argument(std::string(op) + ": alphabet mismatch");
    if (a.size() != b.size())
        throw std::invalid_argument(std::string(op) + ": length mismatch");
}
} // namespace detail

inline std::size_t hamming_distance(const QVec& a, const QVec& b) {
    detail::require_compatible(a, b, "hamming_distance");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
    return d;
}

inline std::size_t hamming_weight(const QVec& a) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < a.size(); ++i) w += (a[i] != 0);
    return w;
}

inline QVec add_mod(const QVec& a, const QVec& b) {
    detail::require_compatible(a, b, "add_mod");
    std::vector<std::uint8_t> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        d[i] = static_cast<std::uint8_t>((a[i] + b[i]) % a.q());
    return QVec(a.q(), std::move(d));
}

inline QVec sub_mod(const QVec& a, const QVec& b) {
    detail::require_compatible(a, b, "sub_mod");
    std::vector<std::uint8_t> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        d[i] = static_cast<std::uint8_t>((a[i] + a.q() - b[i]) % a.q());
    return QVec(a.q(), std::move(d));
}

// Projection onto a strictly increasing list of coordinate positions.
inline QVec restrict_to(const QVec& a, const std::vector<std::size_t>& coords) {
    std::vector<std::uint8_t> d;
    d.reserve(coords.size());
    std::size_t prev = 0;
    bool first = true;
    for (std::size_t c : coords) {
        if (c >= a.size())
            throw std::out_of_range("restrict_to: coordinate index out of range");
        if (!first && c <= prev)
            throw std::invalid_argument("restrict_to: coordinates must be strictly increasing");
        prev = c;
        first = false;
        d.push_back(a[c]);
    }
    return QVec(a.q(), std::move(d));
}

// All q^m vectors in canonical order (index order: coordinate 0 fastest).
inline std::vector<QVec> enumerate_space(unsigned q, std::size_t m) {
    if (q < 2) throw std::invalid_argument("enumerate_space: alphabet size must be at least 2");
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < m; ++i) {
        if (count > (1ull << 28) / q)
            throw std::overflow_error("enumerate_space: q^m too large to materialize");
        count *= q;
    }
    std::vector<QVec> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<std::uint8_t> d(m, 0);
    for (std::uint64_t n = 0; n < count; ++n) {
        out.emplace_back(q, d);
        for (std::size_t i = 0; i < m; ++i) { // odometer increment, coordinate 0 first
            if (++d[i] < q) break;
            d[i] = 0;
        }
    }
    return out;
}

} // namespace pdaforge
