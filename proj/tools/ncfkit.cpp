#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncfkit/counting.hpp"
#include "ncfkit/ncf.hpp"

namespace {

using namespace ncfkit;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_parse = 2;
constexpr int exit_capacity = 3;
constexpr int exit_verification = 4;

uint64_t brute_force_bound() {
    if (const char* env = std::getenv("NCFKIT_MAX_TABLES")) {
        try {
            const unsigned long long v = std::stoull(env);
            if (v > 0) return v;
        } catch (const std::exception&) {
            throw domain_error("NCFKIT_MAX_TABLES must be a positive integer");
        }
    }
    return k_max_brute_force_tables;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw domain_error("cannot open '" + path + "' for writing");
    return file;
}

// analyze ---------------------------------------------------------------

void print_recognition(std::ostream& out, const truth_table& table, subset_variant variant) {
    const auto structure = recognize(table, variant);
    out << "NCF (" << to_string(variant) << "): " << (structure ? "yes" : "no") << "\n";
    if (!structure) return;
    out << format_structure(*structure);
    out << "layer number: " << structure->layer_count() << "\n";
    out << "composition:";
    for (uint32_t k : structure->composition()) out << " " << k;
    out << "\n";
    out << "class key: " << make_class_key(*structure).to_string() << "\n";
}

void analyze_table(std::ostream& out, const truth_table& table) {
    out << "p: " << static_cast<int>(table.p()) << "  n: " << table.arity() << "\n";
    const auto essential = essential_variables(table);
    out << "essential variables:";
    if (essential.empty()) out << " none";
    for (uint32_t var : essential) out << " x" << var + 1;
    out << "\n";

    if (table.is_constant()) {
        out << "constant function; not NCF\n";
        return;
    }

    const auto profile = canalizing_profile(table);
    out << "canalizing:";
    if (profile.entries.empty()) out << " none";
    for (const auto& entry : profile.entries) {
        out << " (x" << entry.var + 1 << ", " << entry.set.to_string() << ") -> ";
        if (entry.output) out << static_cast<int>(*entry.output);
        else out << "mixed";
    }
    out << "\n";

    print_recognition(out, table, subset_variant::interval);
    print_recognition(out, table, subset_variant::general);
}

int run_analyze(const std::string& path) {
    const std::string text = read_file(path);

    // Structure blocks start with "p:"; table files start with "p n".
    std::istringstream sniff(text);
    std::string first_line;
    while (std::getline(sniff, first_line)) {
        if (!first_line.empty() && first_line[0] != '#') break;
    }
    if (first_line.rfind("p: ", 0) == 0) {
        const layer_structure structure = parse_structure(text);
        const truth_table table = build_layered(structure);
        std::cout << format_structure(structure);
        const auto again = recognize(table, structure.variant);
        std::cout << "round trip: " << (again && *again == structure ? "ok" : "MISMATCH") << "\n";
        analyze_table(std::cout, table);
        return exit_ok;
    }

    analyze_table(std::cout, parse_table(text));
    return exit_ok;
}

// count -----------------------------------------------------------------

struct count_config {
    uint32_t p = 0;
    uint64_t q = 0;
    uint32_t n = 0;
    uint32_t n_max = 0;
    std::string variant;
    std::vector<std::string> methods{"closed"};
    std::string out_path;
    std::string format = "tsv";
};

count_report dispatch_count(const count_config& cfg, const std::string& method,
                            subset_variant variant, uint32_t n) {
    const bool have_p = cfg.p != 0;
    const auto need_prime = [&](const char* name) {
        if (!have_p)
            throw domain_error(std::string(name) + " works on truth tables and needs --p");
        return cfg.p;
    };
    if (method == "closed") {
        if (variant == subset_variant::interval)
            return count_ncf_closed(need_prime("closed interval counting"), n);
        return count_ncf_general(have_p ? cfg.p : cfg.q, n);
    }
    if (method == "recursive") {
        if (variant != subset_variant::interval)
            throw domain_error("the recursive count is interval-only");
        return count_ncf_recursive(need_prime("recursive counting"), n);
    }
    if (method == "brute")
        return brute_force_count(need_prime("brute force"), n, variant, brute_force_bound());
    if (method == "enum")
        return count_structures(need_prime("structure enumeration"), n, variant);
    if (method == "orbit")
        return orbit_count(need_prime("orbit counting"), n, variant);
    if (method == "class-formula") {
        if (variant != subset_variant::general)
            throw domain_error("the class formula counts general-variant classes; use --variant general");
        return count_classes_formula(have_p ? cfg.p : cfg.q, n);
    }
    throw domain_error("unknown method '" + method +
                       "' (closed, recursive, brute, enum, class-formula, orbit)");
}

int run_count(const count_config& cfg) {
    if ((cfg.p == 0) == (cfg.q == 0))
        throw domain_error("pass exactly one of --p or --q");
    if (cfg.format != "tsv") throw domain_error("only --format tsv is supported");
    const uint32_t n_max = cfg.n_max == 0 ? cfg.n : cfg.n_max;
    if (n_max < cfg.n) throw domain_error("--n-max must be at least --n");

    std::ofstream file;
    std::ostream& out = open_output(file, cfg.out_path);

    out << tsv_header() << "\n";
    for (uint32_t n = cfg.n; n <= n_max; ++n) {
        for (const std::string& method : cfg.methods) {
            subset_variant variant;
            if (!cfg.variant.empty()) variant = parse_variant(cfg.variant);
            else if (method == "class-formula") variant = subset_variant::general;
            else variant = cfg.p != 0 ? subset_variant::interval : subset_variant::general;
            out << to_tsv_row(dispatch_count(cfg, method, variant, n)) << "\n";
        }
    }
    return exit_ok;
}

// enumerate / sample ------------------------------------------------------

struct stream_config {
    uint32_t p = 0;
    uint32_t n = 0;
    std::string variant = "interval";
    std::string emit = "structures";
    std::string out_path;
    uint64_t seed = 0;
    uint64_t count = 1;
};

void emit_record(std::ostream& out, const layer_structure& structure, bool as_table,
                 bool first) {
    if (!first) out << "\n";
    if (as_table) out << format_table(build_layered(structure));
    else out << format_structure(structure);
}

int run_enumerate(const stream_config& cfg) {
    const bool as_table = cfg.emit == "tables";
    if (!as_table && cfg.emit != "structures")
        throw domain_error("--emit must be structures or tables");
    std::ofstream file;
    std::ostream& out = open_output(file, cfg.out_path);
    bool first = true;
    enumerate_structures(field_spec::prime(cfg.p), cfg.n, parse_variant(cfg.variant),
                         [&](const layer_structure& structure) {
                             emit_record(out, structure, as_table, first);
                             first = false;
                         });
    return exit_ok;
}

int run_sample(const stream_config& cfg) {
    const bool as_table = cfg.emit == "tables";
    if (!as_table && cfg.emit != "structures")
        throw domain_error("--emit must be structures or tables");
    std::ofstream file;
    std::ostream& out = open_output(file, cfg.out_path);
    structure_sampler sampler(field_spec::prime(cfg.p), cfg.n, parse_variant(cfg.variant),
                              cfg.seed);
    for (uint64_t i = 0; i < cfg.count; ++i) emit_record(out, sampler.next(), as_table, i == 0);
    return exit_ok;
}

// equiv -------------------------------------------------------------------

int run_equiv(const std::string& left_path, const std::string& right_path) {
    const truth_table left = parse_table(read_file(left_path));
    const truth_table right = parse_table(read_file(right_path));
    std::cout << "equivalent: " << (permutation_equivalent(left, right) ? "yes" : "no") << "\n";
    return exit_ok;
}

// verify --------------------------------------------------------------------

struct verify_context {
    int failures = 0;

    void check(const std::string& name, bool ok, const std::string& detail = "") {
        std::cout << (ok ? "ok   " : "FAIL ") << name;
        if (!detail.empty()) std::cout << ": " << detail;
        std::cout << "\n";
        if (!ok) ++failures;
    }

    void info(const std::string& name, const std::string& detail) {
        std::cout << "info " << name << ": " << detail << "\n";
    }
};

uint64_t orbit_by_table_grouping(uint32_t p, uint32_t n, subset_variant variant) {
    std::set<std::vector<uint8_t>> representatives;
    std::vector<uint32_t> sigma(n);
    enumerate_structures(field_spec::prime(p), n, variant, [&](const layer_structure& l) {
        const truth_table table = build_layered(l);
        std::vector<uint8_t> best = table.values();
        std::iota(sigma.begin(), sigma.end(), 0u);
        do {
            std::vector<uint8_t> candidate = permute_variables(table, sigma).values();
            if (candidate < best) best = std::move(candidate);
        } while (std::next_permutation(sigma.begin(), sigma.end()));
        representatives.insert(std::move(best));
    });
    return representatives.size();
}

struct enumeration_audit {
    bigint structures = 0;
    bool tables_distinct = true;
    bool round_trip = true;
    uint32_t min_last_layer = UINT32_MAX;
};

enumeration_audit audit_enumeration(uint32_t p, uint32_t n, subset_variant variant) {
    enumeration_audit audit;
    std::set<std::vector<uint8_t>> seen;
    enumerate_structures(field_spec::prime(p), n, variant, [&](const layer_structure& l) {
        ++audit.structures;
        const truth_table table = build_layered(l);
        if (!seen.insert(table.values()).second) audit.tables_distinct = false;
        const auto back = recognize(table, variant);
        if (!back || !(*back == l)) audit.round_trip = false;
        audit.min_last_layer =
            std::min<uint32_t>(audit.min_last_layer, l.layers.back().entries.size());
    });
    return audit;
}

int run_verify(const std::string& level) {
    if (level != "default" && level != "full")
        throw domain_error("--level must be default or full");
    verify_context v;

    for (uint32_t p : {2u, 3u, 5u, 7u}) {
        bool ok = true;
        for (uint32_t n = 2; n <= 8; ++n)
            ok = ok && count_ncf_closed(p, n).result == count_ncf_recursive(p, n).result;
        v.check("closed = recursive (p=" + std::to_string(p) + ", n=2..8)", ok);
    }
    {
        bool ok = true;
        for (uint32_t n = 2; n <= 8; ++n)
            ok = ok && count_ncf_general(2, n).result == count_ncf_closed(2, n).result;
        v.check("general(q=2) = interval(p=2), n=2..8", ok);
    }

    const std::vector<std::pair<uint32_t, uint32_t>> small = {{2, 2}, {2, 3}, {3, 2}};
    for (const auto& [p, n] : small) {
        const bigint closed = count_ncf_closed(p, n).result;
        const bigint brute = brute_force_count(p, n, subset_variant::interval).result;
        const bigint enumerated = count_structures(p, n, subset_variant::interval).result;
        v.check("interval concordance (p=" + std::to_string(p) + ", n=" + std::to_string(n) + ")",
                closed == brute && brute == enumerated,
                "closed=" + closed.str() + " brute=" + brute.str() + " enum=" + enumerated.str());
    }
    {
        const bigint formula = count_ncf_general(3, 2).result;
        const bigint brute = brute_force_count(3, 2, subset_variant::general).result;
        const bigint enumerated = count_structures(3, 2, subset_variant::general).result;
        v.check("general concordance (q=3, n=2)", formula == brute && brute == enumerated,
                "formula=" + formula.str() + " brute=" + brute.str() +
                    " enum=" + enumerated.str());
    }

    for (const auto& [p, n] : small) {
        for (subset_variant variant : {subset_variant::interval, subset_variant::general}) {
            const auto audit = audit_enumeration(p, n, variant);
            v.check("uniqueness + round trip (p=" + std::to_string(p) +
                        ", n=" + std::to_string(n) + ", " + to_string(variant) + ")",
                    audit.tables_distinct && audit.round_trip,
                    audit.structures.str() + " structures");
            if (p == 2)
                v.check("Boolean last layer >= 2 (n=" + std::to_string(n) + ", " +
                            to_string(variant) + ")",
                        audit.min_last_layer >= 2);
        }
    }
    v.check("no single-variable tails over F_2", count_last_layer_single(2) == 0);

    {
        const bigint orbit_22 = orbit_count(2, 2, subset_variant::interval).result;
        const uint64_t grouped_22 = orbit_by_table_grouping(2, 2, subset_variant::interval);
        v.check("orbit keys = permutation grouping (p=2, n=2)", orbit_22 == grouped_22,
                "keys=" + orbit_22.str() + " grouped=" + std::to_string(grouped_22));
        const bigint orbit_23 = orbit_count(2, 3, subset_variant::interval).result;
        const uint64_t grouped_23 = orbit_by_table_grouping(2, 3, subset_variant::interval);
        v.check("orbit keys = permutation grouping (p=2, n=3)", orbit_23 == grouped_23,
                "keys=" + orbit_23.str() + " grouped=" + std::to_string(grouped_23));
        const bigint orbit_32 = orbit_count(3, 2, subset_variant::general).result;
        const uint64_t grouped_32 = orbit_by_table_grouping(3, 2, subset_variant::general);
        v.check("orbit keys = permutation grouping (q=3, n=2, general)", orbit_32 == grouped_32,
                "keys=" + orbit_32.str() + " grouped=" + std::to_string(grouped_32));

        v.info("class formula vs orbit enumeration (q=2, n=2)",
               "formula=" + count_classes_formula(2, 2).result.str() + " orbits=" +
                   orbit_22.str() + " (informational; not a gate)");
        v.info("class formula vs orbit enumeration (q=3, n=2)",
               "formula=" + count_classes_formula(3, 2).result.str() + " orbits=" +
                   orbit_32.str() + " (informational; not a gate)");
    }

    {
        structure_sampler sampler(field_spec::prime(3), 3, subset_variant::interval, 1);
        bool ok = true;
        for (int i = 0; i < 200 && ok; ++i) {
            const layer_structure sample = sampler.next();
            const auto back = recognize(build_layered(sample), subset_variant::interval);
            ok = back && *back == sample;
        }
        v.check("sampled structures rebuild themselves (p=3, n=3, 200 draws)", ok);
    }

    if (level == "full") {
        const bigint closed = count_ncf_closed(2, 4).result;
        const bigint brute = brute_force_count(2, 4, subset_variant::interval).result;
        const bigint enumerated = count_structures(2, 4, subset_variant::interval).result;
        v.check("interval concordance (p=2, n=4)", closed == brute && brute == enumerated,
                "closed=" + closed.str() + " brute=" + brute.str() + " enum=" + enumerated.str());
        for (subset_variant variant : {subset_variant::interval, subset_variant::general}) {
            const auto audit = audit_enumeration(2, 4, variant);
            v.check("uniqueness + round trip (p=2, n=4, " + to_string(variant) + ")",
                    audit.tables_distinct && audit.round_trip,
                    audit.structures.str() + " structures");
            v.check("Boolean last layer >= 2 (n=4, " + to_string(variant) + ")",
                    audit.min_last_layer >= 2);
        }
        const bigint orbit_24 = orbit_count(2, 4, subset_variant::interval).result;
        const uint64_t grouped_24 = orbit_by_table_grouping(2, 4, subset_variant::interval);
        v.check("orbit keys = permutation grouping (p=2, n=4)", orbit_24 == grouped_24,
                "keys=" + orbit_24.str() + " grouped=" + std::to_string(grouped_24));

        const auto audit_34 = audit_enumeration(3, 4, subset_variant::interval);
        v.check("uniqueness + round trip (p=3, n=4, interval)",
                audit_34.tables_distinct && audit_34.round_trip,
                audit_34.structures.str() + " structures");
        v.check("closed = enumeration (p=3, n=4)",
                count_ncf_closed(3, 4).result == audit_34.structures,
                "closed=" + count_ncf_closed(3, 4).result.str() + " enum=" +
                    audit_34.structures.str());
    }

    std::cout << (v.failures == 0 ? "all checks passed" : std::to_string(v.failures) + " check(s) failed")
              << "\n";
    return v.failures == 0 ? exit_ok : exit_verification;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ncfkit: exact construction, recognition, enumeration, counting and "
                 "sampling of nested canalizing functions over prime fields"};
    app.require_subcommand(1);

    std::string analyze_path;
    CLI::App* analyze = app.add_subcommand("analyze", "analyze a truth-table or structure file");
    analyze->add_option("file", analyze_path, "input file")->required();

    count_config count_cfg;
    CLI::App* count = app.add_subcommand("count", "evaluate counting methods as a TSV table");
    count->add_option("--p", count_cfg.p, "prime modulus (2..13)");
    count->add_option("--q", count_cfg.q, "prime-power cardinality (formula-only methods)");
    count->add_option("--n", count_cfg.n, "number of variables")->required();
    count->add_option("--n-max", count_cfg.n_max, "upper end of the n range");
    count->add_option("--variant", count_cfg.variant, "interval or general");
    count->add_option("--method", count_cfg.methods,
                      "closed, recursive, brute, enum, class-formula, orbit")
        ->delimiter(',');
    count->add_option("--out", count_cfg.out_path, "output file (default stdout)");
    count->add_option("--format", count_cfg.format, "output format (tsv)");

    stream_config enum_cfg;
    CLI::App* enumerate = app.add_subcommand("enumerate", "stream every canonical structure");
    enumerate->add_option("--p", enum_cfg.p, "prime modulus")->required();
    enumerate->add_option("--n", enum_cfg.n, "number of variables")->required();
    enumerate->add_option("--variant", enum_cfg.variant, "interval or general");
    enumerate->add_option("--emit", enum_cfg.emit, "structures or tables");
    enumerate->add_option("--out", enum_cfg.out_path, "output file (default stdout)");

    stream_config sample_cfg;
    CLI::App* sample = app.add_subcommand("sample", "draw uniform random structures");
    sample->add_option("--p", sample_cfg.p, "prime modulus")->required();
    sample->add_option("--n", sample_cfg.n, "number of variables")->required();
    sample->add_option("--variant", sample_cfg.variant, "interval or general");
    sample->add_option("--emit", sample_cfg.emit, "structures or tables");
    sample->add_option("--seed", sample_cfg.seed, "random seed");
    sample->add_option("--count", sample_cfg.count, "number of samples");
    sample->add_option("--out", sample_cfg.out_path, "output file (default stdout)");

    std::string equiv_left, equiv_right;
    CLI::App* equiv = app.add_subcommand("equiv", "decide permutation equivalence of two tables");
    equiv->add_option("left", equiv_left, "first truth-table file")->required();
    equiv->add_option("right", equiv_right, "second truth-table file")->required();

    std::string verify_level = "default";
    CLI::App* verify = app.add_subcommand("verify", "run the cross-check suite");
    verify->add_option("--level", verify_level, "default or full");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (analyze->parsed()) return run_analyze(analyze_path);
        if (count->parsed()) return run_count(count_cfg);
        if (enumerate->parsed()) return run_enumerate(enum_cfg);
        if (sample->parsed()) return run_sample(sample_cfg);
        if (equiv->parsed()) return run_equiv(equiv_left, equiv_right);
        if (verify->parsed()) return run_verify(verify_level);
    } catch (const parse_error& e) {
        std::cerr << "parse error at line " << e.line << ", column " << e.column << ": "
                  << e.what() << "\n";
        return exit_parse;
    } catch (const capacity_error& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return exit_capacity;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
