// pdaforge: construct, verify, analyze, and simulate coded-caching
// placement delivery arrays, plus baseline comparisons and the reference
// comparison tables.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.

#include <pdaforge/coloring.hpp>
#include <pdaforge/compare.hpp>
#include <pdaforge/construct.hpp>
#include <pdaforge/pda.hpp>
#include <pdaforge/sim.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace pdaforge;

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CLI::ValidationError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CLI::ValidationError("cannot write " + path);
    out << content;
}

int cmd_construct(unsigned q, std::size_t m, std::size_t omega, const std::string& partition,
                  const std::string& out_path) {
    BaseArray base = build_base_array(q, m, omega);
    ClassMap cm = [&] {
        if (partition == "trivial") return partition_singletons(base);
        if (partition == "primary") {
            if (q == 2) return partition_residue_q2(base);
            if (q == 3) return partition_agreement_q3(base);
            throw std::invalid_argument("the primary partition is defined for q=2 and q=3; "
                                        "use --partition trivial for other alphabets");
        }
        if (partition == "improved") {
            if (q == 2) {
                Coloring c = (m == 2 * omega + 1)
                                 ? antipodal_pairing(m, omega)
                                 : greedy_color(build_conflict_graph_q2(m, omega));
                return partition_merged(base, c);
            }
            if (q == 3) return partition_merged(base, greedy_color(build_conflict_graph_q3(m, omega)));
            throw std::invalid_argument("the improved partition is defined for q=2 and q=3");
        }
        throw std::invalid_argument("unknown partition " + partition);
    }();
    PdaArray p = label_pda(base, cm);
    write_file(out_path, serialize(p));
    std::cout << "wrote (" << p.K() << "," << p.F() << "," << p.stars_in_column(0) << ","
              << p.S() << ") array to " << out_path << " using the " << cm.partition
              << " partition\n";
    return kExitOk;
}

int cmd_verify(const std::string& path, bool useless) {
    std::string text = read_file(path);
    PdaArray p = [&] {
        try {
            return parse(text);
        } catch (const ParseError& e) {
            std::cout << path << ": malformed: " << e.what() << "\n";
            std::exit(kExitVerification);
        }
    }();
    VerifyResult c1 = verify_c1(p);
    if (!c1.ok) {
        std::cout << path << ": FAIL: " << c1.detail << "\n";
        return kExitVerification;
    }
    VerifyResult c2 = verify_c2(p);
    if (!c2.ok) {
        std::cout << path << ": FAIL: " << c2.detail << "\n";
        return kExitVerification;
    }
    std::cout << path << ": OK (" << p.K() << "," << p.F() << "," << p.stars_in_column(0)
              << "," << p.S() << ")\n";
    if (useless) {
        UselessStars u = find_useless_stars(p);
        std::cout << "useless stars: " << u.total << " total";
        if (u.uniform)
            std::cout << ", " << u.z_prime << " per column (uniform)\n";
        else
            std::cout << ", per-column counts vary\n";
        SchemeParams sp = scheme_params(p, &u);
        std::cout << "memory fraction " << format_decimal(sp.memory_fraction, 4) << ", rate "
                  << format_decimal(sp.rate, 4) << "\n";
        if (sp.trimmed)
            std::cout << "trimmed: F=" << sp.trimmed->F << ", memory fraction "
                      << format_decimal(sp.trimmed->memory_fraction, 4) << ", rate "
                      << format_decimal(sp.trimmed->rate, 4) << "\n";
        else
            std::cout << "trimmed: " << sp.trimmed_note << "\n";
    }
    return kExitOk;
}

int cmd_analyze(const std::string& path, bool as_json) {
    PdaArray p = [&] {
        try {
            return parse(read_file(path));
        } catch (const ParseError& e) {
            std::cout << path << ": malformed: " << e.what() << "\n";
            std::exit(kExitVerification);
        }
    }();
    VerifyResult c1 = verify_c1(p);
    VerifyResult c2 = verify_c2(p);
    if (!c1.ok || !c2.ok) {
        std::cout << path << ": FAIL: " << (c1.ok ? c2.detail : c1.detail) << "\n";
        return kExitVerification;
    }
    UselessStars u = find_useless_stars(p);
    SchemeParams sp = scheme_params(p, &u);

    nlohmann::ordered_json j;
    j["K"] = sp.K;
    j["F"] = sp.F;
    j["Z"] = sp.Z;
    j["S"] = sp.S;
    if (u.uniform)
        j["Zprime"] = u.z_prime;
    else
        j["Zprime"] = nullptr;
    j["memory_fraction"] = format_decimal(sp.memory_fraction, 4);
    j["rate"] = format_decimal(sp.rate, 4);
    if (sp.trimmed) {
        nlohmann::ordered_json t;
        t["F"] = sp.trimmed->F;
        t["memory_fraction"] = format_decimal(sp.trimmed->memory_fraction, 4);
        t["rate"] = format_decimal(sp.trimmed->rate, 4);
        j["trimmed"] = std::move(t);
    } else {
        j["trimmed"] = nullptr;
    }

    if (as_json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << path << ": K=" << sp.K << " F=" << sp.F << " Z=" << sp.Z
                  << " S=" << sp.S << "\n";
        std::cout << "memory fraction " << format_decimal(sp.memory_fraction, 4) << ", rate "
                  << format_decimal(sp.rate, 4) << "\n";
        if (u.uniform) std::cout << "useless stars per column: " << u.z_prime << "\n";
        if (sp.trimmed)
            std::cout << "trimmed: F=" << sp.trimmed->F << ", memory fraction "
                      << format_decimal(sp.trimmed->memory_fraction, 4) << ", rate "
                      << format_decimal(sp.trimmed->rate, 4) << "\n";
        else
            std::cout << "trimmed: " << sp.trimmed_note << "\n";
    }
    return kExitOk;
}

int cmd_simulate(const std::string& path, std::size_t files, std::uint64_t seed,
                 const std::string& demands, std::size_t count, std::size_t packet_bytes,
                 const std::string& transcript_path) {
    PdaArray p = [&] {
        try {
            return parse(read_file(path));
        } catch (const ParseError& e) {
            std::cout << path << ": malformed: " << e.what() << "\n";
            std::exit(kExitVerification);
        }
    }();
    DemandPolicy policy = (demands == "roundrobin") ? DemandPolicy::roundrobin
                                                    : DemandPolicy::random;
    RoundtripReport rep = run_roundtrip(p, files, count, seed, policy, packet_bytes);
    std::cout << "demands run: " << rep.demands_run << " (" << demands << ", seed " << seed
              << ")\n";
    std::cout << "bytes sent per demand: " << rep.bytes_sent_per_demand << "\n";
    std::cout << "memory fraction: " << rep.memory_fraction << " = "
              << format_decimal(rep.memory_fraction, 4) << "\n";
    if (!rep.all_decoded) {
        std::cout << "FAIL: " << rep.failure << "\n";
        return kExitVerification;
    }
    std::cout << "rate: " << rep.rate_measured << " = " << format_decimal(rep.rate_measured, 4)
              << "\n";
    std::cout << "all users decoded every demand byte-exactly (transcript digest "
              << hex64(rep.first_transcript_digest) << ")\n";

    if (!transcript_path.empty()) {
        Library lib = make_library(files, p.F(), packet_bytes, seed);
        std::mt19937_64 demand_rng(seed ^ 0x9E3779B97F4A7C15ull);
        std::vector<std::size_t> demand(p.K());
        for (std::size_t k = 0; k < p.K(); ++k)
            demand[k] = (policy == DemandPolicy::random)
                            ? static_cast<std::size_t>(demand_rng() % files)
                            : k % files;
        Transcript t = deliver(p, lib, demand);
        write_file(transcript_path, transcript_to_json(p, t));
        std::cout << "first-demand transcript written to " << transcript_path << "\n";
    }
    return kExitOk;
}

int cmd_compare(std::size_t m, std::size_t omega) {
    MnComparison c = compare_to_mn(m, omega);
    std::cout << "scheme (m=" << m << ", omega=" << omega << "): K=" << c.K << " F=" << c.F
              << " M/N=" << format_decimal(c.memory_fraction, 4)
              << " R=" << format_decimal(c.rate, 4) << "\n";
    std::cout << "baseline at equal K and M/N:\n";
    char buf[128];
    for (const RatioRoute& r : c.f_routes) {
        std::snprintf(buf, sizeof(buf), "  subpacketization ratio [%-9s] %.3e  (log10 %.2f)",
                      r.name.c_str(), r.value, r.log10_value);
        std::cout << buf << "\n";
    }
    for (const RatioRoute& r : c.r_routes) {
        std::snprintf(buf, sizeof(buf), "  rate ratio            [%-9s] %.4f", r.name.c_str(),
                      r.value);
        std::cout << buf << "\n";
    }
    return kExitOk;
}

int cmd_table(const std::string& name, bool csv) {
    TableName tn;
    if (name == "III")
        tn = TableName::III;
    else if (name == "IV")
        tn = TableName::IV;
    else if (name == "V")
        tn = TableName::V;
    else
        throw CLI::ValidationError("table name must be III, IV, or V");
    ReferenceTable t = reference_table(tn);
    if (csv) {
        std::cout << to_csv(t);
        return kExitOk;
    }
    std::cout << "table " << t.name << "\n";
    for (const ComparisonRow& r : t.rows) {
        std::cout << "  " << r.scheme << " " << r.params << ": K=" << r.K << " F=" << r.F
                  << " M/N=" << r.memory_fraction << " R=" << r.rate;
        for (const std::string& f : r.flags)
            if (f != "cited") std::cout << "\n      [" << f << "]";
        std::cout << "\n";
    }
    if (!t.discrepancies.empty()) {
        std::cout << "discrepancies:\n";
        for (const std::string& d : t.discrepancies) std::cout << "  - " << d << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"placement delivery array toolkit"};
    app.require_subcommand(1);

    // construct
    unsigned q = 2;
    std::size_t m = 3, omega = 2;
    std::string partition = "primary", out_path;
    CLI::App* construct = app.add_subcommand("construct", "build an array and write it to a file");
    construct->add_option("--q", q, "alphabet size")->required();
    construct->add_option("--m", m, "vector length")->required();
    construct->add_option("--omega", omega, "target distance")->required();
    construct->add_option("--partition", partition, "trivial, primary, or improved")
        ->check(CLI::IsMember({"trivial", "primary", "improved"}));
    construct->add_option("--out", out_path, "output file")->required();

    // verify
    std::string verify_path;
    bool useless = false;
    CLI::App* verify = app.add_subcommand("verify", "check the two defining conditions");
    verify->add_option("file", verify_path, "array file")->required();
    verify->add_flag("--useless", useless, "also report useless stars and trimmed parameters");

    // analyze
    std::string analyze_path;
    bool as_json = false;
    CLI::App* analyze = app.add_subcommand("analyze", "derive caching-scheme parameters");
    analyze->add_option("file", analyze_path, "array file")->required();
    analyze->add_flag("--json", as_json, "emit JSON");

    // simulate
    std::string sim_path, demands = "random", transcript_path;
    std::size_t files = 0, count = 10, packet_bytes = 64;
    std::uint64_t seed = 0;
    CLI::App* simulate = app.add_subcommand("simulate", "run place/deliver/decode round-trips");
    simulate->add_option("file", sim_path, "array file")->required();
    simulate->add_option("--files", files, "number of library files")->required();
    simulate->add_option("--seed", seed, "library and demand seed")->required();
    simulate->add_option("--demands", demands, "demand policy")
        ->check(CLI::IsMember({"random", "roundrobin"}));
    simulate->add_option("--count", count, "number of demand vectors (default 10)");
    simulate->add_option("--packet-bytes", packet_bytes, "packet size in bytes (default 64)");
    simulate->add_option("--transcript", transcript_path, "write the first demand's transcript JSON");

    // compare
    std::size_t cmp_m = 4, cmp_omega = 2;
    CLI::App* compare = app.add_subcommand("compare", "ratios against the baseline scheme");
    compare->add_option("--m", cmp_m, "vector length")->required();
    compare->add_option("--omega", cmp_omega, "target distance")->required();

    // table
    std::string table_name;
    bool csv = false;
    CLI::App* table = app.add_subcommand("table", "print a reference comparison table");
    table->add_option("name", table_name, "III, IV, or V")->required();
    table->add_flag("--csv", csv, "emit CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*construct) return cmd_construct(q, m, omega, partition, out_path);
        if (*verify) return cmd_verify(verify_path, useless);
        if (*analyze) return cmd_analyze(analyze_path, as_json);
        if (*simulate)
            return cmd_simulate(sim_path, files, seed, demands, count, packet_bytes,
                                transcript_path);
        if (*compare) return cmd_compare(cmp_m, cmp_omega);
        if (*table) return cmd_table(table_name, csv);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
