#include <catch2/catch_amalgamated.hpp>

#include <pdaforge/coloring.hpp>

#include <sstream>

using namespace pdaforge;

namespace {

std::vector<std::vector<std::string>> token_grid(const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        out.emplace_back();
        std::istringstream toks(line);
        std::string t;
        while (toks >> t) out.back().push_back(t);
    }
    return out;
}

bool coloring_is_proper(const ConflictGraph& g, const Coloring& col) {
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        for (std::uint32_t u : g.adj[v])
            if (col.color[u] == col.color[v]) return false;
    return true;
}

// The hand-built key pairing used by the published 16x16 example at
// (m, omega) = (4, 1): key t (3 bits, little-endian id) and its complement
// share a class.
Coloring example_pairing_4_1() {
    Coloring d;
    d.color = {0, 1, 2, 3, 3, 2, 1, 0};
    d.color_count = 4;
    return d;
}

// The 16x16 merged PDA as printed in the reference write-up ("vector,class"),
// rows/cols both in enumeration order.
const char* kMerged16 = R"(
* 1000,0 0100,0 * 0010,0 * * * 0001,0 * * * * * * *
1000,0 * * 0100,1 * 0010,1 * * * 0001,1 * * * * * *
0100,0 * * 1000,1 * * 0010,2 * * * 0001,2 * * * * *
* 0100,1 1000,1 * * * * 0010,3 * * * 0001,3 * * * *
0010,0 * * * * 1000,2 0100,2 * * * * * 0001,3 * * *
* 0010,1 * * 1000,2 * * 0100,3 * * * * * 0001,2 * *
* * 0010,2 * 0100,2 * * 1000,3 * * * * * * 0001,1 *
* * * 0010,3 * 0100,3 1000,3 * * * * * * * * 0001,0
0001,0 * * * * * * * * 1000,3 0100,3 * 0010,3 * * *
* 0001,1 * * * * * * 1000,3 * * 0100,2 * 0010,2 * *
* * 0001,2 * * * * * 0100,3 * * 1000,2 * * 0010,1 *
* * * 0001,3 * * * * * 0100,2 1000,2 * * * * 0010,0
* * * * 0001,3 * * * 0010,3 * * * * 1000,1 0100,1 *
* * * * * 0001,2 * * * 0010,2 * * 1000,1 * * 0100,0
* * * * * * 0001,1 * * * 0010,1 * 0100,1 * * 1000,0
* * * * * * * 0001,0 * * * 0010,0 * 0100,0 1000,0 *
)";

} // namespace

TEST_CASE("binary conflict graph has the distance-ball degree everywhere") {
    ConflictGraph g = build_conflict_graph_q2(4, 1);
    REQUIRE(g.vertex_count() == 8);
    REQUIRE(g.max_degree == 3);
    REQUIRE(g.adj[0] == std::vector<std::uint32_t>{1, 2, 4});

    for (auto [m, w] : {std::pair<std::size_t, std::size_t>{5, 1}, {5, 2}, {7, 2}, {9, 4}}) {
        ConflictGraph h = build_conflict_graph_q2(m, w);
        BigInt delta = 0;
        for (std::size_t i = 1; i <= w; ++i)
            delta += binomial(static_cast<long long>(m - w), static_cast<long long>(i));
        for (std::size_t v = 0; v < h.vertex_count(); ++v)
            REQUIRE(BigInt(h.adj[v].size()) == delta);
    }

    REQUIRE_THROWS_AS(build_conflict_graph_q2(4, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(build_conflict_graph_q2(2, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(build_conflict_graph_q2(5, 0), std::invalid_argument);
}

TEST_CASE("greedy coloring is proper, within the degree bound, and deterministic") {
    struct Row { std::size_t m, w; std::uint32_t colors; };
    for (Row row : {Row{4, 1, 2}, Row{6, 2, 8}, Row{8, 3, 16}}) {
        ConflictGraph g = build_conflict_graph_q2(row.m, row.w);
        Coloring col = greedy_color(g);
        INFO("m=" << row.m << " omega=" << row.w);
        REQUIRE(col.color_count == row.colors);
        REQUIRE(col.color_count <= g.max_degree + 1);
        REQUIRE(coloring_is_proper(g, col));
        Coloring again = greedy_color(g);
        REQUIRE(again.color == col.color);
    }
}

TEST_CASE("antipodal pairing pairs complements and respects the conflict graph") {
    Coloring col = antipodal_pairing(3, 1);
    REQUIRE(col.color_count == 2);
    REQUIRE(col.color == std::vector<std::uint32_t>{0, 1, 1, 0});
    ConflictGraph g = build_conflict_graph_q2(3, 1);
    REQUIRE(coloring_is_proper(g, col));

    Coloring big = antipodal_pairing(9, 4);
    REQUIRE(big.color_count == 16); // 2^(m-omega-1)
    for (std::size_t t = 0; t < big.color.size(); ++t)
        REQUIRE(big.color[t] == big.color[(big.color.size() - 1) ^ t]);

    REQUIRE_THROWS_AS(antipodal_pairing(4, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(antipodal_pairing(5, 1), std::invalid_argument);
}

TEST_CASE("ternary conflict graph vertices are colex-ranked subsets") {
    ConflictGraph g = build_conflict_graph_q3(4, 2);
    REQUIRE(g.vertex_count() == 6);
    REQUIRE(g.subsets[0] == std::vector<std::size_t>{0, 1});
    REQUIRE(g.subsets[1] == std::vector<std::size_t>{0, 2});
    REQUIRE(g.subsets[2] == std::vector<std::size_t>{1, 2});
    REQUIRE(g.subsets[3] == std::vector<std::size_t>{0, 3});
    REQUIRE(g.subsets[5] == std::vector<std::size_t>{2, 3});
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        REQUIRE(colex_rank(g.subsets[v]) == v);

    // at (4,2) the edge rule reduces to "subsets intersect"
    for (std::size_t u = 0; u < 6; ++u)
        for (std::size_t v = u + 1; v < 6; ++v) {
            bool intersect = false;
            for (std::size_t x : g.subsets[u])
                for (std::size_t y : g.subsets[v]) intersect |= (x == y);
            bool edge = std::find(g.adj[u].begin(), g.adj[u].end(), v) != g.adj[u].end();
            REQUIRE(edge == intersect);
        }

    REQUIRE(greedy_color(g).color_count == 3);
    REQUIRE(greedy_color(build_conflict_graph_q3(5, 2)).color_count == 7);
    REQUIRE(greedy_color(build_conflict_graph_q3(6, 3)).color_count == 8);
    REQUIRE_THROWS_AS(build_conflict_graph_q3(3, 2), std::invalid_argument);
}

TEST_CASE("merged binary schemes hit the frozen signal counts and the bound") {
    struct Row { std::size_t m, w, S; };
    for (Row row : {Row{3, 1, 6}, Row{4, 1, 8}, Row{5, 2, 40}, Row{6, 2, 120}, Row{7, 3, 280}}) {
        GeneratedScheme g = merged_scheme(2, row.m, row.w);
        INFO("m=" << row.m << " omega=" << row.w);
        REQUIRE(verify_c1(g.pda).ok);
        REQUIRE(verify_c2(g.pda).ok);
        REQUIRE(g.params.S == row.S);
        REQUIRE(BigInt(g.params.S) <= merged_binary_signal_bound(row.m, row.w));
    }
    // the balanced cases collapse to exactly C(m,omega)*2^(m-omega-1)
    REQUIRE(merged_scheme(2, 3, 1).params.S == 6);
    REQUIRE(merged_scheme(2, 5, 2).params.S == 40);
    REQUIRE(merged_scheme(2, 7, 3).params.S == 280);
}

TEST_CASE("merged ternary schemes verify and stay under their bound") {
    REQUIRE(merged_ternary_signal_bound(4, 2) == 405);
    REQUIRE(merged_ternary_signal_bound(5, 2) == 1701);
    REQUIRE(merged_ternary_signal_bound(5, 3) == 1701);
    REQUIRE(merged_ternary_signal_bound(6, 3) == 7290);

    GeneratedScheme g = merged_scheme(3, 4, 2);
    REQUIRE(verify_c1(g.pda).ok);
    REQUIRE(verify_c2(g.pda).ok);
    REQUIRE(g.params.K == 81);
    REQUIRE(g.params.Z == 57);
    REQUIRE(g.params.S == 243);
    REQUIRE(BigInt(g.params.S) <= merged_ternary_signal_bound(4, 2));
}

TEST_CASE("the published 16x16 merged example is reproduced from its pairing") {
    BaseArray base = build_base_array(2, 4, 1);
    ClassMap cm = partition_merged(base, example_pairing_4_1());
    PdaArray p = label_pda(base, cm);
    REQUIRE(verify_c1(p).ok);
    REQUIRE(verify_c2(p).ok);
    REQUIRE(p.F() == 16);
    REQUIRE(p.K() == 16);
    REQUIRE(p.S() == 16);
    REQUIRE(p.stars_in_column(0) == 12);

    UselessStars u = find_useless_stars(p);
    REQUIRE(u.uniform);
    REQUIRE(u.z_prime == 6);
    SchemeParams sp = scheme_params(p, &u);
    REQUIRE(sp.trimmed.has_value());
    REQUIRE(sp.trimmed->F == 10);
    REQUIRE(sp.trimmed->memory_fraction == Rational(3, 5));
    REQUIRE(sp.trimmed->rate == Rational(8, 5));

    auto want = token_grid(kMerged16);
    REQUIRE(want.size() == 16);
    for (std::size_t r = 0; r < 16; ++r)
        for (std::size_t c = 0; c < 16; ++c) {
            INFO("cell (" << r << "," << c << ")");
            if (want[r][c] == "*") {
                REQUIRE(p.is_star(r, c));
            } else {
                REQUIRE_FALSE(p.is_star(r, c));
                const SymbolLabel& s = p.label(p.label_id(r, c));
                REQUIRE(s.vec.to_digits() + "," + std::to_string(s.cls) == want[r][c]);
            }
        }
}

TEST_CASE("merged partitions validate their inputs") {
    BaseArray base = build_base_array(2, 4, 1);
    Coloring short_coloring;
    short_coloring.color = {0, 1, 2};
    short_coloring.color_count = 3;
    REQUIRE_THROWS_AS(partition_merged(base, short_coloring), std::invalid_argument);

    // a lazy all-one-color map conflicts with the cross-distance rule
    Coloring lazy;
    lazy.color.assign(8, 0);
    lazy.color_count = 1;
    REQUIRE_THROWS_AS(label_pda(base, partition_merged(base, lazy)), std::invalid_argument);

    BaseArray b5 = build_base_array(5, 2, 1);
    REQUIRE_THROWS_AS(partition_merged(b5, lazy), std::invalid_argument);
    REQUIRE_THROWS_AS(merged_scheme(5, 4, 1), std::invalid_argument);
}

TEST_CASE("merged scheme dispatch matches its building blocks") {
    GeneratedScheme pairing_path = merged_scheme(2, 3, 1);
    BaseArray base = build_base_array(2, 3, 1);
    PdaArray by_hand = label_pda(base, partition_merged(base, antipodal_pairing(3, 1)));
    REQUIRE(serialize(pairing_path.pda) == serialize(by_hand));

    GeneratedScheme greedy_path = merged_scheme(2, 4, 1);
    BaseArray base4 = build_base_array(2, 4, 1);
    PdaArray by_hand4 =
        label_pda(base4, partition_merged(base4, greedy_color(build_conflict_graph_q2(4, 1))));
    REQUIRE(serialize(greedy_path.pda) == serialize(by_hand4));
    REQUIRE(greedy_path.params.S == 8); // greedy beats the published pairing here
}
