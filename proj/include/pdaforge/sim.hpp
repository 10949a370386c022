#pragma once
// Single-server coded-caching simulation driven by a PDA: stars say what
// each user caches, labels say which cells share one XOR multicast signal.
// Includes a byte-exact reference decoder, a linear-cost roundtrip
// verifier that checks the same equalities, and transcript JSON export.

#include <pdaforge/pda.hpp>

#include <json.hpp>

#include <cstring>
#include <random>

namespace pdaforge {

inline std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t n) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (std::size_t i = 16; i-- > 0; v >>= 4) s[i] = digits[v & 0xF];
    return s;
}

struct Library {
    std::size_t files = 0, packets = 0, packet_bytes = 0;
    std::vector<std::uint8_t> data; // files x packets x packet_bytes

    const std::uint8_t* packet(std::size_t file, std::size_t row) const {
        return data.data() + (file * packets + row) * packet_bytes;
    }
    std::size_t file_bytes() const { return packets * packet_bytes; }
    std::size_t total_bytes() const { return files * file_bytes(); }
};

// Deterministic pseudo-random library: bytes come from mt19937_64 words,
// least-significant byte first.
inline Library make_library(std::size_t files, std::size_t packets, std::size_t packet_bytes,
                            std::uint64_t seed) {
    if (files == 0 || packets == 0 || packet_bytes == 0)
        throw std::invalid_argument("make_library: files, packets, packet_bytes must be positive");
    Library lib;
    lib.files = files;
    lib.packets = packets;
    lib.packet_bytes = packet_bytes;
    lib.data.resize(files * packets * packet_bytes);
    std::mt19937_64 rng(seed);
    std::size_t i = 0;
    while (i < lib.data.size()) {
        std::uint64_t w = rng();
        for (std::size_t b = 0; b < 8 && i < lib.data.size(); ++b, ++i)
            lib.data[i] = static_cast<std::uint8_t>(w >> (8 * b));
    }
    return lib;
}

// Caching state: user k holds packet r of EVERY file exactly when cell
// (r,k) is a star. Packets are exposed as views into the library; nothing
// is copied.
class Placement {
public:
    Placement(const PdaArray& p, const Library& lib) : pda_(&p), lib_(&lib) {
        if (lib.packets != p.F())
            throw std::invalid_argument("place: library has " + std::to_string(lib.packets) +
                                        " packets per file, PDA needs " + std::to_string(p.F()));
        VerifyResult c2 = verify_c2(p);
        if (!c2.ok) throw std::invalid_argument("place: " + c2.detail);
        z_ = p.stars_in_column(0);
    }

    const PdaArray& pda() const { return *pda_; }
    const Library& library() const { return *lib_; }
    std::size_t z() const { return z_; }

    // cached bytes per user / total library bytes = Z/F
    Rational memory_fraction() const { return Rational(z_, pda_->F()); }

    bool user_caches_row(std::size_t user, std::size_t row) const {
        return pda_->is_star(row, user);
    }

    // The packet a user reads from its own cache; refuses rows the user
    // does not hold so decoding cannot silently peek at the library.
    const std::uint8_t* cached_packet(std::size_t user, std::size_t file,
                                      std::size_t row) const {
        if (!user_caches_row(user, row))
            throw std::logic_error("cached_packet: user " + std::to_string(user) +
                                   " does not cache row " + std::to_string(row));
        return lib_->packet(file, row);
    }

private:
    const PdaArray* pda_;
    const Library* lib_;
    std::size_t z_ = 0;
};

inline Placement place(const PdaArray& p, const Library& lib) { return Placement(p, lib); }

struct Signal {
    std::int32_t label_id = -1;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> cells; // (row, col) in row-major order
    std::vector<std::uint8_t> bytes;
};

struct Transcript {
    std::vector<std::size_t> demand;
    std::vector<Signal> signals; // canonical label order
    std::size_t bytes_sent = 0;
};

namespace detail {

inline void xor_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        std::uint64_t a, b;
        std::memcpy(&a, dst + i, 8);
        std::memcpy(&b, src + i, 8);
        a ^= b;
        std::memcpy(dst + i, &a, 8);
    }
    for (; i < n; ++i) dst[i] ^= src[i];
}

// label ids sorted by (vector index, class id): the canonical signal order
inline std::vector<std::int32_t> canonical_label_order(const PdaArray& p) {
    std::vector<std::int32_t> ids(p.S());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<std::int32_t>(i);
    std::sort(ids.begin(), ids.end(), [&p](std::int32_t x, std::int32_t y) {
        const SymbolLabel& a = p.label(x);
        const SymbolLabel& b = p.label(y);
        if (a.vec != b.vec) return index_less(a.vec, b.vec);
        return a.cls < b.cls;
    });
    return ids;
}

} // namespace detail

// One multicast signal per label: the XOR over its cells (r,c) of packet r
// of the file user c demanded.
inline Transcript deliver(const PdaArray& p, const Library& lib,
                          const std::vector<std::size_t>& demand) {
    if (demand.size() != p.K())
        throw std::invalid_argument("deliver: demand vector has " +
                                    std::to_string(demand.size()) + " entries, PDA has K=" +
                                    std::to_string(p.K()));
    for (std::size_t d : demand)
        if (d >= lib.files)
            throw std::invalid_argument("deliver: demanded file " + std::to_string(d) +
                                        " outside library of " + std::to_string(lib.files));
    if (lib.packets != p.F())
        throw std::invalid_argument("deliver: library packet count mismatch");

    auto occ = p.occurrences();
    Transcript t;
    t.demand = demand;
    t.signals.reserve(p.S());
    for (std::int32_t id : detail::canonical_label_order(p)) {
        Signal s;
        s.label_id = id;
        s.cells = occ[id];
        s.bytes.assign(lib.packet_bytes, 0);
        for (auto [r, c] : s.cells)
            detail::xor_into(s.bytes.data(), lib.packet(demand[c], r), lib.packet_bytes);
        t.bytes_sent += s.bytes.size();
        t.signals.push_back(std::move(s));
    }
    return t;
}

// Reference decoder: reconstruct the full demanded file of one user from
// its cache plus the transcript only. Star rows come straight from the
// cache; each labeled row is recovered by XORing its signal with the
// cached packets behind the signal's other cells (stars there by C1-b).
inline std::vector<std::uint8_t> decode(const Placement& pl, const Transcript& t,
                                        std::size_t user) {
    const PdaArray& p = pl.pda();
    const Library& lib = pl.library();
    if (user >= p.K()) throw std::invalid_argument("decode: user index out of range");
    if (t.demand.size() != p.K()) throw std::invalid_argument("decode: transcript/PDA mismatch");
    std::size_t want = t.demand[user];

    std::vector<std::int32_t> signal_of_label(p.S(), -1);
    for (std::size_t i = 0; i < t.signals.size(); ++i)
        signal_of_label[t.signals[i].label_id] = static_cast<std::int32_t>(i);

    std::vector<std::uint8_t> out(lib.file_bytes());
    for (std::size_t r = 0; r < p.F(); ++r) {
        std::uint8_t* dst = out.data() + r * lib.packet_bytes;
        if (pl.user_caches_row(user, r)) {
            std::memcpy(dst, pl.cached_packet(user, want, r), lib.packet_bytes);
            continue;
        }
        std::int32_t label = p.label_id(r, user);
        std::int32_t si = signal_of_label[label];
        if (si < 0)
            throw std::logic_error("decode: transcript lacks the signal for label " +
                                   detail::label_name(p.label(label)));
        const Signal& s = t.signals[si];
        std::memcpy(dst, s.bytes.data(), lib.packet_bytes);
        for (auto [r2, c2] : s.cells) {
            if (r2 == r && c2 == user) continue;
            detail::xor_into(dst, pl.cached_packet(user, t.demand[c2], r2), lib.packet_bytes);
        }
    }
    return out;
}

enum class DemandPolicy { random, roundrobin };

struct RoundtripReport {
    std::size_t demands_run = 0;
    bool all_decoded = false;
    std::string failure; // first mismatch, when any
    std::size_t bytes_sent_per_demand = 0;
    Rational rate_measured;      // bytes sent / file bytes
    Rational memory_fraction;    // cached bytes per user / library bytes
    std::uint64_t first_transcript_digest = 0; // FNV-1a over the first demand's signals
};

// Repeated place/deliver/decode against a deterministic library. The first
// demand exercises the reference decoder for every user and byte-compares
// whole files. Later demands verify the same per-user equalities in
// factored form: for each signal, signal XOR (XOR of all its packets)
// must vanish, which equals the reference reconstruction cell-for-cell by
// associativity of XOR.
inline RoundtripReport run_roundtrip(const PdaArray& p, std::size_t files,
                                     std::size_t demand_count, std::uint64_t seed,
                                     DemandPolicy policy = DemandPolicy::random,
                                     std::size_t packet_bytes = 64) {
    Library lib = make_library(files, p.F(), packet_bytes, seed);
    Placement pl = place(p, lib);

    RoundtripReport rep;
    rep.memory_fraction = pl.memory_fraction();

    std::mt19937_64 demand_rng(seed ^ 0x9E3779B97F4A7C15ull);
    auto draw_demand = [&](std::size_t index) {
        std::vector<std::size_t> d(p.K());
        for (std::size_t k = 0; k < p.K(); ++k)
            d[k] = (policy == DemandPolicy::random)
                       ? static_cast<std::size_t>(demand_rng() % files)
                       : (k + index) % files;
        return d;
    };

    std::vector<std::uint8_t> acc(packet_bytes);
    for (std::size_t i = 0; i < demand_count; ++i) {
        std::vector<std::size_t> demand = draw_demand(i);
        Transcript t = deliver(p, lib, demand);
        rep.bytes_sent_per_demand = t.bytes_sent;
        if (i == 0) {
            std::uint64_t h = 0xcbf29ce484222325ull;
            for (const Signal& s : t.signals)
                for (std::uint8_t b : s.bytes) {
                    h ^= b;
                    h *= 0x100000001b3ull;
                }
            rep.first_transcript_digest = h;
            for (std::size_t user = 0; user < p.K(); ++user) {
                std::vector<std::uint8_t> got = decode(pl, t, user);
                const std::uint8_t* want = lib.packet(demand[user], 0);
                if (std::memcmp(got.data(), want, lib.file_bytes()) != 0) {
                    rep.failure = "demand 0: user " + std::to_string(user) +
                                  " reconstructed file " + std::to_string(demand[user]) +
                                  " incorrectly";
                    rep.demands_run = i + 1;
                    return rep;
                }
            }
        } else {
            for (const Signal& s : t.signals) {
                std::memcpy(acc.data(), s.bytes.data(), packet_bytes);
                for (auto [r, c] : s.cells)
                    detail::xor_into(acc.data(), lib.packet(demand[c], r), packet_bytes);
                // acc == signal XOR all packets; each user's decode equals
                // the true packet iff acc is zero
                for (std::size_t b = 0; b < packet_bytes; ++b)
                    if (acc[b] != 0) {
                        const SymbolLabel& lab = p.label(s.label_id);
                        rep.failure = "demand " + std::to_string(i) + ": signal " +
                                      detail::label_name(lab) + " fails to cancel at byte " +
                                      std::to_string(b);
                        rep.demands_run = i + 1;
                        return rep;
                    }
            }
        }
        ++rep.demands_run;
    }
    rep.all_decoded = true;
    rep.rate_measured = Rational(rep.bytes_sent_per_demand, lib.file_bytes());
    return rep;
}

// JSON rendering of one transcript: per signal its label, covered cells,
// byte length, and FNV-1a digest.
inline std::string transcript_to_json(const PdaArray& p, const Transcript& t) {
    nlohmann::ordered_json j;
    j["demand"] = t.demand;
    j["bytes_sent"] = t.bytes_sent;
    j["signals"] = nlohmann::ordered_json::array();
    for (const Signal& s : t.signals) {
        nlohmann::ordered_json js;
        js["label"] = detail::label_name(p.label(s.label_id));
        js["cells"] = nlohmann::ordered_json::array();
        for (auto [r, c] : s.cells)
            js["cells"].push_back({p.rows()[r].to_digits(), p.cols()[c].to_digits()});
        js["byte_len"] = s.bytes.size();
        js["digest"] = hex64(fnv1a64(s.bytes.data(), s.bytes.size()));
        j["signals"].push_back(std::move(js));
    }
    return j.dump(2) + "\n";
}

} // namespace pdaforge
