#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "ncfkit/counting.hpp"

using namespace ncfkit;

namespace {

const field_spec f2 = field_spec::prime(2);
const field_spec f3 = field_spec::prime(3);

// Direct enumeration oracle for constrained compositions.
uint64_t compositions_by_enumeration(uint32_t n, std::span<const uint32_t> minimums) {
    if (minimums.empty()) return n == 0 ? 1 : 0;
    uint64_t total = 0;
    for (uint32_t k = minimums[0]; k <= n; ++k)
        total += compositions_by_enumeration(n - k, minimums.subspan(1));
    return total;
}

std::set<std::vector<uint8_t>> interval_indicator_multiples(uint32_t p) {
    std::set<std::vector<uint8_t>> tables;
    for (const value_subset& s : enumerate_subsets(p, subset_variant::interval)) {
        for (uint8_t c = 1; c < p; ++c) {
            std::vector<uint8_t> values(p);
            for (uint8_t x = 0; x < p; ++x) values[x] = static_cast<uint8_t>(c * indicator(s, x) % p);
            tables.insert(std::move(values));
        }
    }
    return tables;
}

// Lemma-style oracle: distinct tables b*Q_S(x) + a that are not c*Q_{S'}(x).
uint64_t last_layer_single_oracle(uint32_t p) {
    const auto excluded = interval_indicator_multiples(p);
    std::set<std::vector<uint8_t>> tables;
    for (const value_subset& s : enumerate_subsets(p, subset_variant::interval)) {
        for (uint8_t b = 1; b < p; ++b) {
            for (uint8_t a = 1; a < p; ++a) {
                std::vector<uint8_t> values(p);
                for (uint8_t x = 0; x < p; ++x)
                    values[x] = static_cast<uint8_t>((b * indicator(s, x) + a) % p);
                if (!excluded.count(values)) tables.insert(std::move(values));
            }
        }
    }
    return tables.size();
}

// Distinct tables b * prod_j Q_{S_j}(x_j) + a over interval factors.
uint64_t offset_products_oracle(uint32_t p, uint32_t k) {
    const auto pool = enumerate_subsets(p, subset_variant::interval);
    uint64_t entries = 1;
    for (uint32_t i = 0; i < k; ++i) entries *= p;

    std::set<std::vector<uint8_t>> tables;
    std::vector<size_t> pick(k, 0);
    for (;;) {
        for (uint8_t b = 1; b < p; ++b) {
            for (uint8_t a = 1; a < p; ++a) {
                std::vector<uint8_t> values(entries);
                for (uint64_t index = 0; index < entries; ++index) {
                    uint64_t rest = index;
                    uint32_t product = 1;
                    for (uint32_t var = k; var-- > 0;) {
                        const uint8_t x = static_cast<uint8_t>(rest % p);
                        rest /= p;
                        product &= indicator(pool[pick[var]], x);
                    }
                    values[index] = static_cast<uint8_t>((b * product + a) % p);
                }
                tables.insert(std::move(values));
            }
        }
        size_t i = 0;
        while (i < k && ++pick[i] == pool.size()) pick[i++] = 0;
        if (i == k) break;
    }
    return tables.size();
}

} // namespace

TEST_CASE("composition counting") {
    const std::vector<uint32_t> m12{1, 2};
    CHECK(composition_count(4, 2, m12) == 2);
    const std::vector<uint32_t> m111{1, 1, 1};
    CHECK(composition_count(3, 3, m111) == 1);
    const std::vector<uint32_t> m1{1};
    CHECK(composition_count(5, 1, m1) == 1);
    const std::vector<uint32_t> m33{3, 3};
    CHECK(composition_count(4, 2, m33) == 0);

    // formula equals direct enumeration
    for (uint32_t n = 1; n <= 9; ++n) {
        for (const auto& minimums :
             std::vector<std::vector<uint32_t>>{{1}, {1, 1}, {2, 1}, {1, 2}, {1, 1, 2}, {2, 2, 1}}) {
            CHECK(composition_count(n, static_cast<uint32_t>(minimums.size()), minimums) ==
                  compositions_by_enumeration(n, minimums));
        }
    }
}

TEST_CASE("for_each_composition emits exactly the constrained compositions") {
    std::vector<std::vector<uint32_t>> seen;
    for_each_composition(4, 2, 2, [&](std::span<const uint32_t> comp) {
        seen.emplace_back(comp.begin(), comp.end());
    });
    CHECK(seen == std::vector<std::vector<uint32_t>>{{1, 3}, {2, 2}});

    uint64_t count = 0;
    for_each_composition(8, 3, 1, [&](std::span<const uint32_t> comp) {
        CHECK(comp.size() == 3);
        CHECK(std::accumulate(comp.begin(), comp.end(), 0u) == 8);
        ++count;
    });
    const std::vector<uint32_t> ones{1, 1, 1};
    CHECK(count == composition_count(8, 3, ones));
}

TEST_CASE("single-variable tail count matches its oracle") {
    CHECK(count_last_layer_single(2) == 0);
    CHECK(count_last_layer_single(3) == 4);
    CHECK(count_last_layer_single(5) == 48);
    for (uint32_t p : {2u, 3u, 5u, 7u}) CHECK(count_last_layer_single(p) == last_layer_single_oracle(p));
    CHECK_THROWS_AS(count_last_layer_single(4), domain_error);
}

TEST_CASE("offset product count matches its oracle") {
    CHECK(count_offset_products(3, 2) == 64);
    CHECK(count_offset_products(2, 2) == 4);
    CHECK(count_offset_products(2, 2) == offset_products_oracle(2, 2));
    CHECK(count_offset_products(3, 2) == offset_products_oracle(3, 2));
    CHECK(count_offset_products(2, 3) == offset_products_oracle(2, 3));
    CHECK(count_offset_products(3, 3) == offset_products_oracle(3, 3));
    CHECK_THROWS_AS(count_offset_products(3, 1), domain_error);
    CHECK_THROWS_AS(count_offset_products(4, 2), domain_error);
}

TEST_CASE("closed interval counts") {
    CHECK(count_ncf_closed(3, 2).result == 192);
    CHECK(count_ncf_closed(3, 3).result == 5568);
    CHECK(count_ncf_closed(3, 4).result == 219648);
    CHECK(count_ncf_closed(5, 2).result == 5120);
    CHECK(count_ncf_closed(5, 3).result == 547840);
    CHECK(count_ncf_closed(5, 4).result == 78561280);
    CHECK(count_ncf_closed(2, 2).result == 8);
    CHECK(count_ncf_closed(2, 3).result == 64);
    CHECK(count_ncf_closed(2, 4).result == 736);
    CHECK_THROWS_AS(count_ncf_closed(3, 1), domain_error);
    CHECK_THROWS_AS(count_ncf_closed(4, 2), domain_error);

    const count_report report = count_ncf_closed(3, 3);
    bigint sum = 0;
    for (const auto& [r, value] : report.per_layer) sum += value;
    CHECK(sum == report.result);
}

TEST_CASE("recursive counts agree with the closed form") {
    CHECK(count_ncf_recursive(3, 2).result == 192);
    CHECK(count_ncf_recursive(3, 3).result == 5568);
    CHECK(count_ncf_recursive(5, 4).result == 78561280);
    for (uint32_t p : {2u, 3u, 5u, 7u})
        for (uint32_t n = 2; n <= 8; ++n)
            CHECK(count_ncf_recursive(p, n).result == count_ncf_closed(p, n).result);
}

TEST_CASE("general counts") {
    CHECK(count_ncf_general(2, 2).result == 8);
    CHECK(count_ncf_general(3, 2).result == 432);
    CHECK(count_ncf_general(4, 2).result == 7056); // 2352 one-layer + 4704 two-layer forms
    for (uint32_t n = 2; n <= 8; ++n)
        CHECK(count_ncf_general(2, n).result == count_ncf_closed(2, n).result);
    for (uint32_t p : {3u, 5u})
        for (uint32_t n = 2; n <= 6; ++n)
            CHECK(count_ncf_general(p, n).result >= count_ncf_closed(p, n).result);
    CHECK_THROWS_AS(count_ncf_general(6, 2), domain_error);
}

TEST_CASE("class count formula") {
    CHECK(count_classes_formula(2, 2).result == 8);
    CHECK(count_classes_formula(3, 2).result == 324);
    CHECK(count_classes_formula(2, 3).result == 32);
    CHECK_THROWS_AS(count_classes_formula(6, 2), domain_error);
}

TEST_CASE("structure enumeration matches the formulas") {
    CHECK(count_structures(2, 2, subset_variant::interval).result == 8);
    CHECK(count_structures(3, 2, subset_variant::interval).result == 192);
    CHECK(count_structures(3, 2, subset_variant::general).result == 432);
    CHECK(count_structures(3, 3, subset_variant::interval).result == 5568);

    // the per-layer-count breakdown agrees with the closed form's
    const auto closed = count_ncf_closed(3, 2);
    const auto enumerated = count_structures(3, 2, subset_variant::interval);
    CHECK(closed.per_layer == enumerated.per_layer);

    CHECK_THROWS_AS(count_structures(7, 8, subset_variant::interval), capacity_error);
    CHECK_THROWS_AS(count_structures(3, 1, subset_variant::interval), domain_error);
}

TEST_CASE("enumerated structures are canonical and pairwise distinct") {
    std::set<std::vector<uint8_t>> tables;
    bigint count = 0;
    enumerate_structures(f3, 2, subset_variant::general, [&](const layer_structure& l) {
        ++count;
        CHECK(is_canonical(l));
        tables.insert(build_layered(l).values());
    });
    CHECK(count == 432);
    CHECK(tables.size() == 432);
}

TEST_CASE("brute force recognition counts") {
    CHECK(brute_force_count(2, 2, subset_variant::interval).result == 8);
    CHECK(brute_force_count(2, 3, subset_variant::interval).result == 64);
    CHECK(brute_force_count(3, 2, subset_variant::interval).result == 192);
    CHECK(brute_force_count(3, 2, subset_variant::general).result == 432);

    // per-layer breakdown agrees with the enumeration's
    CHECK(brute_force_count(3, 2, subset_variant::interval).per_layer ==
          count_structures(3, 2, subset_variant::interval).per_layer);

    CHECK_THROWS_AS(brute_force_count(2, 5, subset_variant::interval), capacity_error);
    CHECK_THROWS_AS(brute_force_count(2, 2, subset_variant::interval, 10), capacity_error);
}

TEST_CASE("orbit counting") {
    CHECK(orbit_count(2, 2, subset_variant::interval).result == 6);
    CHECK(orbit_count(2, 3, subset_variant::interval).result == 20);
    CHECK(orbit_count(3, 2, subset_variant::general).result == 234);
    CHECK(orbit_count(3, 2, subset_variant::interval).result == 108);

    // independent grouping oracle: lexicographically smallest permuted table
    for (const auto& [p, n, variant] :
         std::vector<std::tuple<uint32_t, uint32_t, subset_variant>>{
             {2, 2, subset_variant::interval},
             {2, 3, subset_variant::interval},
             {3, 2, subset_variant::general}}) {
        std::set<std::vector<uint8_t>> representatives;
        std::vector<uint32_t> sigma(n);
        enumerate_structures(field_spec::prime(p), n, variant, [&](const layer_structure& l) {
            const truth_table t = build_layered(l);
            std::vector<uint8_t> best = t.values();
            std::iota(sigma.begin(), sigma.end(), 0u);
            do {
                std::vector<uint8_t> candidate = permute_variables(t, sigma).values();
                if (candidate < best) best = std::move(candidate);
            } while (std::next_permutation(sigma.begin(), sigma.end()));
            representatives.insert(std::move(best));
        });
        CHECK(orbit_count(p, n, variant).result == representatives.size());
    }

    // the formula intentionally counts fixed-order representations, so it can
    // exceed the enumerated orbit count; report both, gate neither
    CHECK(count_classes_formula(2, 2).result == 8);
    CHECK(orbit_count(2, 2, subset_variant::general).result == 6);
}

TEST_CASE("sampling determinism and round trips") {
    structure_sampler a(f3, 4, subset_variant::interval, 42);
    structure_sampler b(f3, 4, subset_variant::interval, 42);
    for (int i = 0; i < 50; ++i) CHECK(a.next() == b.next());

    CHECK(sample_uniform(f3, 4, subset_variant::interval, 7) ==
          sample_uniform(f3, 4, subset_variant::interval, 7));

    structure_sampler sampler(f3, 3, subset_variant::general, 5);
    for (int i = 0; i < 200; ++i) {
        const layer_structure sample = sampler.next();
        CHECK(is_canonical(sample));
        const auto back = recognize(build_layered(sample), subset_variant::general);
        REQUIRE(back.has_value());
        CHECK(*back == sample);
    }

    // all 8 structures at (p=2, n=2) show up quickly
    structure_sampler small(f2, 2, subset_variant::interval, 9);
    std::set<std::string> seen;
    for (int i = 0; i < 500; ++i) seen.insert(format_structure(small.next()));
    CHECK(seen.size() == 8);

    CHECK_THROWS_AS(structure_sampler(f3, 1, subset_variant::interval, 0), domain_error);
}

TEST_CASE("tsv rows") {
    CHECK(tsv_header() == "q\tn\tvariant\tmethod\tcount\tseconds");
    const count_report report = count_ncf_closed(3, 2);
    const std::string row = to_tsv_row(report);
    CHECK(row.rfind("3\t2\tinterval\tclosed\t192\t", 0) == 0);
    CHECK(to_string(count_method::brute_force) == "brute-force");
    CHECK(to_string(count_method::class_formula) == "class-formula");
}
