#include <pdaforge/compare.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

using namespace pdaforge;

namespace {

const RatioRoute& route(const std::vector<RatioRoute>& v, const std::string& name) {
    for (const RatioRoute& r : v)
        if (r.name == name) return r;
    FAIL("missing route " + name);
    return v.front();
}

const ComparisonRow& row_for(const ReferenceTable& t, const std::string& scheme,
                             const std::string& params) {
    for (const ComparisonRow& r : t.rows)
        if (r.scheme == scheme && r.params == params) return r;
    FAIL("missing row " + scheme + " " + params);
    return t.rows.front();
}

} // namespace

TEST_CASE("baseline scheme parameters at an integral cache ratio") {
    MnParams p = mn_scheme(4, Rational(1, 2));
    CHECK(p.t == Rational(2));
    CHECK(p.t_integral);
    REQUIRE(p.F.has_value());
    CHECK(*p.F == 6);
    CHECK(p.rate == Rational(2, 3));
    CHECK(p.integer_t.t == 2.0);
    CHECK(p.real_t.t == 2.0);
    CHECK(p.integer_t.log10_F == Catch::Approx(std::log10(6.0)).epsilon(1e-12));
    CHECK(p.integer_t.rate == Catch::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("baseline scheme with a fractional cache ratio reports both bases") {
    // K=16 at M/N=5/11: t=80/11 is not an integer
    MnParams p = mn_scheme(16, Rational(5, 11));
    CHECK_FALSE(p.t_integral);
    CHECK_FALSE(p.F.has_value());
    CHECK(p.t == Rational(80, 11));
    CHECK(p.rate == Rational(16) * Rational(6, 11) / (Rational(1) + Rational(80, 11)));
    CHECK(p.integer_t.t == 7.0);   // nearest integer to 7.27
    CHECK(p.real_t.t == Catch::Approx(80.0 / 11.0).epsilon(1e-12));
    // real-t baseline subpacketization interpolates between C(16,7) and C(16,8)
    CHECK(p.real_t.log10_F > std::log10(11440.0));
    CHECK(p.real_t.log10_F < std::log10(12870.0));

    CHECK_THROWS_AS(mn_scheme(0, Rational(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(mn_scheme(4, Rational(3, 2)), std::invalid_argument);
    CHECK_THROWS_AS(mn_scheme(4, Rational(-1, 2)), std::invalid_argument);
}

TEST_CASE("ratio routes along the half-weight family match frozen values") {
    struct Expect {
        std::size_t m;
        double exact_f_log10;  // exact-route subpacketization ratio
        double best_r;         // frozen best rate-ratio route value
        const char* best_r_name;
    };
    // frozen from the independent recomputation
    const Expect table[] = {
        {4, std::log10(9.096e-4), 1.9686, "approx"},
        {6, std::log10(2.462e-17), 4.3750, "integer-t"},
        {8, std::log10(3.608e-73), 9.1875, "integer-t"},
        {10, std::log10(1.062e-294), 19.4062, "integer-t"},
    };
    for (const Expect& e : table) {
        MnComparison c = compare_to_mn(e.m, e.m / 2);
        INFO("m=" << e.m);
        CHECK(route(c.f_routes, "exact").log10_value ==
              Catch::Approx(e.exact_f_log10).margin(5e-4));
        CHECK(route(c.r_routes, e.best_r_name).value ==
              Catch::Approx(e.best_r).margin(5e-4));
    }

    // exact rate-ratio route at m=4: (1 + 16 - 16*6/11)/4 = 8.25/... as rational
    MnComparison c4 = compare_to_mn(4, 2);
    CHECK(route(c4.r_routes, "exact").value == Catch::Approx(2.0682).margin(5e-4));
    CHECK(c4.K == 16);
    CHECK(c4.F == 11);
    CHECK(c4.memory_fraction == Rational(5, 11));

    CHECK_THROWS_AS(compare_to_mn(4, 2, 3), std::invalid_argument);
    CHECK_THROWS_AS(compare_to_mn(4, 0), std::invalid_argument);
}

TEST_CASE("subpacketization ratio shrinks and rate ratio grows along the family") {
    double prev_f = 0.0, prev_r = 0.0;
    bool first = true;
    for (std::size_t m : {4, 6, 8, 10}) {
        MnComparison c = compare_to_mn(m, m / 2);
        double f = route(c.f_routes, "exact").log10_value;
        double r = route(c.r_routes, "exact").value;
        if (!first) {
            CHECK(f < prev_f);
            CHECK(r > prev_r);
        }
        prev_f = f;
        prev_r = r;
        first = false;
    }
}

TEST_CASE("asymptotic memory fraction approaches lambda/(1-lambda) from below") {
    AsymptoticSeries s = asymptotic_memory_fraction(Rational(1, 4), {20, 40, 60});
    CHECK(s.limit == Rational(1, 3));
    REQUIRE(s.points.size() == 3);
    CHECK(s.points[0].omega == 5);
    CHECK(s.points[1].omega == 10);
    CHECK(s.points[2].omega == 15);
    // frozen six-decimal values
    CHECK(static_cast<double>(s.points[0].memory_fraction) ==
          Catch::Approx(0.285530).margin(5e-7));
    CHECK(static_cast<double>(s.points[1].memory_fraction) ==
          Catch::Approx(0.305905).margin(5e-7));
    CHECK(static_cast<double>(s.points[2].memory_fraction) ==
          Catch::Approx(0.313997).margin(5e-7));
    // monotone toward the limit, still below it
    double lim = 1.0 / 3.0;
    double a = static_cast<double>(s.points[0].memory_fraction);
    double b = static_cast<double>(s.points[1].memory_fraction);
    double c = static_cast<double>(s.points[2].memory_fraction);
    CHECK(a < b);
    CHECK(b < c);
    CHECK(c < lim);
    CHECK(std::fabs(c - lim) < 0.03);

    CHECK_THROWS_AS(asymptotic_memory_fraction(Rational(1, 2), {20}), std::invalid_argument);
    CHECK_THROWS_AS(asymptotic_memory_fraction(Rational(0), {20}), std::invalid_argument);
    CHECK_THROWS_AS(asymptotic_memory_fraction(Rational(3, 4), {20}), std::invalid_argument);
}

TEST_CASE("comparison table of binary and ternary rows against the CK literals") {
    ReferenceTable t = reference_table(TableName::IV);
    CHECK(t.name == "IV");
    REQUIRE(t.rows.size() == 18);

    // blocks interleave: cited, binary, ternary
    for (std::size_t b = 0; b < 6; ++b) {
        CHECK(t.rows[3 * b].scheme == "CK");
        CHECK(t.rows[3 * b + 1].scheme == "binary");
        CHECK(t.rows[3 * b + 2].scheme == "ternary");
        CHECK(t.rows[3 * b].flags == std::vector<std::string>{"cited"});
    }

    const ComparisonRow& r16 = row_for(t, "binary", "(16,6,2)");
    CHECK(r16.K == BigInt(65536));
    CHECK(r16.F == BigInt(14893));
    CHECK(r16.memory_fraction == "0.4623");
    CHECK(r16.rate == "550.6071");
    CHECK(r16.flags.empty());

    const ComparisonRow& r10 = row_for(t, "ternary", "(10,6,3)");
    CHECK(r10.K == BigInt(59049));
    CHECK(r10.F == BigInt(26025));
    CHECK(r10.memory_fraction == "0.4836");
    CHECK(r10.rate == "476.4761");
    CHECK(r10.flags.empty());

    // largest rows recompute exactly
    const ComparisonRow& r41 = row_for(t, "binary", "(41,6,2)");
    CHECK(r41.K == BigInt("2199023255552"));
    CHECK(r41.F == BigInt(5358578));
    CHECK(r41.rate == "28831289808.7916");
    const ComparisonRow& r26 = row_for(t, "ternary", "(26,6,3)");
    CHECK(r26.K == BigInt("2541865828329"));
    CHECK(r26.F == BigInt(17101033));
    CHECK(r26.rate == "34220960199.0819");

    // the two defective printed rows carry flags and corrected values
    const ComparisonRow& r19 = row_for(t, "binary", "(19,7,2)");
    CHECK(r19.K == BigInt("536870912")); // 2^29: the parameters the values come from
    CHECK(r19.F == BigInt(2182396));
    CHECK(r19.memory_fraction == "0.2848");
    CHECK(r19.rate == "2999632.4210");
    REQUIRE_FALSE(r19.flags.empty());
    CHECK_THAT(r19.flags.front(), Catch::Matchers::ContainsSubstring("(29,7)"));

    const ComparisonRow& r21 = row_for(t, "ternary", "(21,7,3)");
    CHECK(r21.K == BigInt("10460353203"));
    CHECK(r21.F == BigInt(19115187)); // corrected, not the printed copy of K
    CHECK(r21.memory_fraction == "0.2214");
    CHECK(r21.rate == "63631596.7218");
    REQUIRE_FALSE(r21.flags.empty());
    CHECK_THAT(r21.flags.front(), Catch::Matchers::ContainsSubstring("19115187"));

    // exactly the two flagged rows surface as discrepancies
    CHECK(t.discrepancies.size() == 2);

    // every scheme row matches the printed 4-decimal cells (flags aside)
    for (const ComparisonRow& r : t.rows) {
        if (r.scheme == "CK") continue;
        for (const std::string& f : r.flags) {
            CHECK_THAT(f, !Catch::Matchers::ContainsSubstring("printed M/N"));
            CHECK_THAT(f, !Catch::Matchers::ContainsSubstring("printed R"));
        }
    }
}

TEST_CASE("comparison table against the YTCC literals flags its two anomalies") {
    ReferenceTable t = reference_table(TableName::V);
    CHECK(t.name == "V");
    REQUIRE(t.rows.size() == 16);
    for (std::size_t b = 0; b < 8; ++b) {
        CHECK(t.rows[2 * b].scheme == "YTCC");
        CHECK(t.rows[2 * b].flags == std::vector<std::string>{"cited"});
    }

    const ComparisonRow& r73 = row_for(t, "binary", "(7,3,2)");
    CHECK(r73.K == BigInt(128));
    CHECK(r73.F == BigInt(120)); // the values of (7,5), as printed
    CHECK(r73.memory_fraction == "0.8250");
    CHECK(r73.rate == "0.7000");
    REQUIRE_FALSE(r73.flags.empty());
    CHECK_THAT(r73.flags.front(), Catch::Matchers::ContainsSubstring("(7,5)"));

    const ComparisonRow& r14 = row_for(t, "binary", "(14,7,2)");
    CHECK(r14.K == BigInt(16384));
    CHECK(r14.F == BigInt(9908));
    CHECK(r14.memory_fraction == "0.6536"); // recomputed, not the printed 0.6236
    CHECK(r14.rate == "44.3375");
    REQUIRE_FALSE(r14.flags.empty());
    bool mn_flagged = false;
    for (const std::string& f : r14.flags)
        if (f.find("0.6236") != std::string::npos) mn_flagged = true;
    CHECK(mn_flagged);

    const ComparisonRow& r11 = row_for(t, "binary", "(11,6,2)");
    CHECK(r11.F == BigInt(1486));
    CHECK(r11.rate == "9.9489");
    CHECK(r11.flags.empty());

    const ComparisonRow& r75 = row_for(t, "ternary", "(7,5,3)");
    CHECK(r75.F == BigInt(1611));
    CHECK(r75.memory_fraction == "0.5829");
    CHECK(r75.rate == "28.5084");
    CHECK(r75.flags.empty());
    const ComparisonRow& r98 = row_for(t, "ternary", "(9,8,3)");
    CHECK(r98.F == BigInt(19171));
    CHECK(r98.rate == "9.2404");
    CHECK(r98.flags.empty());

    CHECK(t.discrepancies.size() == 2);
}

TEST_CASE("half-weight ratio table flags the loose printed cells") {
    ReferenceTable t = reference_table(TableName::III);
    CHECK(t.name == "III");
    REQUIRE(t.rows.size() == 4);

    const ComparisonRow& m4 = row_for(t, "binary-vs-mn", "(4,2)");
    CHECK(m4.K == BigInt(16));
    CHECK(m4.F == BigInt(11));
    CHECK(m4.memory_fraction == "0.4545");
    bool mn4_flagged = false;
    for (const std::string& f : m4.flags)
        if (f.find("0.545") != std::string::npos) mn4_flagged = true;
    CHECK(mn4_flagged);

    const ComparisonRow& m6 = row_for(t, "binary-vs-mn", "(6,3)");
    CHECK(m6.memory_fraction == "0.5238");
    bool mn6_flagged = false;
    for (const std::string& f : m6.flags)
        if (f.find("0.531") != std::string::npos) mn6_flagged = true;
    CHECK(mn6_flagged);

    // m=8 and m=10 memory fractions agree with print within 1e-3: no M/N flag
    const ComparisonRow& m8 = row_for(t, "binary-vs-mn", "(8,4)");
    const ComparisonRow& m10 = row_for(t, "binary-vs-mn", "(10,5)");
    CHECK(m8.memory_fraction == "0.5706");
    CHECK(m10.memory_fraction == "0.6050");
    for (const std::string& f : m8.flags)
        CHECK_THAT(f, !Catch::Matchers::ContainsSubstring("printed M/N"));
    for (const std::string& f : m10.flags)
        CHECK_THAT(f, !Catch::Matchers::ContainsSubstring("printed M/N"));

    // the printed subpacketization-ratio cells sit orders away for m>4
    auto has_f_flag = [](const ComparisonRow& r) {
        for (const std::string& f : r.flags)
            if (f.find("subpacketization ratio") != std::string::npos) return true;
        return false;
    };
    CHECK_FALSE(has_f_flag(m4));
    CHECK(has_f_flag(m6));
    CHECK(has_f_flag(m8));
    CHECK(has_f_flag(m10));

    // rate-ratio cells all land within 2% of a route: never flagged
    for (const ComparisonRow& r : t.rows)
        for (const std::string& f : r.flags)
            CHECK_THAT(f, !Catch::Matchers::ContainsSubstring("rate ratio printed"));
}

TEST_CASE("CSV rendering is deterministic with quoted flag cells") {
    ReferenceTable t = reference_table(TableName::IV);
    std::string csv = to_csv(t);
    CHECK(to_csv(reference_table(TableName::IV)) == csv);

    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "scheme,params,K,F,memory_fraction,rate,flags");
    std::size_t data_rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++data_rows;
    CHECK(data_rows == 18);

    // first data row: the cited block leader
    std::istringstream again(csv);
    std::getline(again, line);
    std::getline(again, line);
    CHECK(line == "CK,\"(6,2,2,1,2)\",39060,39060,0.6330,716.8000,cited");

    // flag cells are quoted exactly when they contain commas
    CHECK(csv.find("printed F=10460353203 merely repeats K; recomputation gives "
                   "F=19115187") != std::string::npos);
    CHECK(csv.find("\"printed label (19,7,2) but every printed value matches "
                   "(m,omega)=(29,7); recomputing at (19,7) gives K=524288 F=94184 "
                   "M/N=0.4650 R=2191.3409\"") != std::string::npos);

    std::string csv5 = to_csv(reference_table(TableName::V));
    std::istringstream in5(csv5);
    std::getline(in5, line);
    std::size_t rows5 = 0;
    while (std::getline(in5, line))
        if (!line.empty()) ++rows5;
    CHECK(rows5 == 16);

    std::string csv3 = to_csv(reference_table(TableName::III));
    std::istringstream in3(csv3);
    std::getline(in3, line);
    CHECK(line == "scheme,params,K,F,memory_fraction,rate,flags");
    std::size_t rows3 = 0;
    while (std::getline(in3, line))
        if (!line.empty()) ++rows3;
    CHECK(rows3 == 4);
}
