#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ncfkit/ncf.hpp"
#include "ncfkit/rng.hpp"

namespace ncfkit {

using bigint = boost::multiprecision::cpp_int;

// Brute force iterates every function table; p^(p^n) must stay below this.
inline constexpr uint64_t k_max_brute_force_tables = uint64_t{1} << 26;

// Structure enumeration refuses streams longer than this.
inline constexpr uint64_t k_max_structure_stream = 10'000'000;

enum class count_method {
    closed,
    recursive,
    structure_enum,
    brute_force,
    class_formula,
    orbit_enum,
};

std::string to_string(count_method m);

/// Exact result of one counting method, with an optional per-layer-count
/// breakdown (pairs of layer count r and subtotal).
struct count_report {
    uint64_t q = 0;
    uint32_t n = 0;
    subset_variant variant = subset_variant::interval;
    count_method method = count_method::closed;
    bigint result;
    std::vector<std::pair<uint32_t, bigint>> per_layer;
    double seconds = 0.0;
};

std::string tsv_header();
std::string to_tsv_row(const count_report& report);

// Combinatorics ------------------------------------------------------------

bigint factorial(uint32_t n);
bigint binomial(uint64_t n, uint64_t k);
bigint multinomial(uint32_t n, std::span<const uint32_t> parts);

/// Number of compositions k_1 + .. + k_r = n with k_i >= minimums[i];
/// equals binomial(r + n - s - 1, r - 1) where s sums the minimums, 0 if s > n.
bigint composition_count(uint32_t n, uint32_t r, std::span<const uint32_t> minimums);

/// Every composition of `total` into `parts` parts, each >= 1 and the last
/// >= last_min, in lexicographic order.
void for_each_composition(uint32_t total, uint32_t parts, uint32_t last_min,
                          const std::function<void(std::span<const uint32_t>)>& fn);

// Tail-layer counts ----------------------------------------------------------

/// (p-1)^2 (p-2): distinct functions b*Q_S(x) + a over intervals with
/// a, b != 0 that are not pure indicator multiples. Zero at p = 2.
bigint count_last_layer_single(uint32_t p);

/// 2^k (p-1)^(k+2): distinct functions b * prod Q_{S_j}(x_j) + a with
/// a, b != 0 over k >= 2 interval factors.
bigint count_offset_products(uint32_t p, uint32_t k);

// Counting methods -----------------------------------------------------------

count_report count_ncf_closed(uint32_t p, uint32_t n);
count_report count_ncf_recursive(uint32_t p, uint32_t n);
count_report count_ncf_general(uint64_t q, uint32_t n);
count_report count_classes_formula(uint64_t q, uint32_t n);

/// Exact number of canonical structures, from the closed forms.
bigint expected_structure_count(uint64_t q, uint32_t n, subset_variant variant);

/// Every canonical layer structure exactly once; stream length equals
/// expected_structure_count. Throws capacity_error beyond max_structures.
void enumerate_structures(const field_spec& field, uint32_t n, subset_variant variant,
                          const std::function<void(const layer_structure&)>& fn,
                          uint64_t max_structures = k_max_structure_stream);

count_report count_structures(uint32_t p, uint32_t n, subset_variant variant,
                              uint64_t max_structures = k_max_structure_stream);

/// Recognizes every function table. Guarded by p^(p^n) <= max_tables.
count_report brute_force_count(uint32_t p, uint32_t n, subset_variant variant,
                               uint64_t max_tables = k_max_brute_force_tables);

/// Number of distinct class keys over the full structure enumeration: the
/// exact count of permutation-equivalence classes by construction.
count_report orbit_count(uint32_t p, uint32_t n, subset_variant variant,
                         uint64_t max_structures = k_max_structure_stream);

// Sampling -------------------------------------------------------------------

/// Draws canonical structures uniformly: the (r, composition) stratum is
/// picked with probability proportional to its exact count, then partition,
/// sets and constants uniformly within it. Deterministic for a fixed seed.
class structure_sampler {
public:
    structure_sampler(field_spec field, uint32_t n, subset_variant variant, uint64_t seed);

    layer_structure next();

private:
    struct stratum {
        std::vector<uint32_t> composition;
        bigint cumulative; // inclusive upper bound of this stratum's range
    };

    field_spec field_;
    uint32_t n_;
    subset_variant variant_;
    std::vector<value_subset> pool_;
    std::vector<value_subset> canonical_pool_; // subsets containing 0
    std::vector<stratum> strata_;
    bigint total_;
    splitmix64 rng_;
};

layer_structure sample_uniform(const field_spec& field, uint32_t n, subset_variant variant,
                               uint64_t seed);

} // namespace ncfkit
