#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncfkit/truth_table.hpp"

namespace ncfkit {

/// Cascade description: the first j with x_order(j) in sets[j] yields
/// outputs[j]; no match yields outputs[n]. Requires outputs[n-1] != outputs[n].
struct piecewise_spec {
    field_spec field;
    uint32_t arity;
    std::vector<uint32_t> order;    // 0-based variable indices, a permutation
    std::vector<value_subset> sets; // one proper subset per cascade position
    std::vector<uint8_t> outputs;   // b_1..b_{n+1}
};

truth_table build_piecewise(const piecewise_spec& spec);

/// Complement the last set and swap the last two outputs; the built table is
/// unchanged. Involution.
piecewise_spec normalize_flip(const piecewise_spec& spec);

struct layer {
    // (variable, canalizing set) pairs, ascending by variable.
    std::vector<std::pair<uint32_t, value_subset>> entries;

    friend bool operator==(const layer&, const layer&) = default;
};

/// The layered form M_1(M_2(...(B_{r+1} M_r + B_r)...) + B_2) + B_1 where
/// M_i multiplies the indicator values of its layer. Validity: within-layer
/// entries ascend by variable, B_2..B_{r+1} are nonzero, and a singleton
/// last layer with r >= 2 has B_r + B_{r+1} != 0. A singleton last layer
/// admits one complement flip that builds the same table; the canonical
/// representative (the one recognize and enumeration produce) has 0 in its
/// last set. Arity 1 is accepted as a single singleton layer.
struct layer_structure {
    field_spec field;
    uint32_t arity;
    subset_variant variant;
    std::vector<layer> layers;
    std::vector<uint8_t> constants; // B_1..B_{r+1}

    uint32_t layer_count() const { return static_cast<uint32_t>(layers.size()); }
    std::vector<uint32_t> composition() const; // k_1..k_r

    friend bool operator==(const layer_structure&, const layer_structure&) = default;
};

/// Throws domain_error unless the structure satisfies every validity
/// constraint listed on layer_structure.
void validate_structure(const layer_structure& l);

/// Valid and in canonical form: a singleton last layer contains 0.
bool is_canonical(const layer_structure& l);

truth_table build_layered(const layer_structure& l);

/// The cascade with order = concatenated layers and b_i = B_1 + ... + B_i at
/// layer boundaries; builds the same table as build_layered.
piecewise_spec expand_to_piecewise(const layer_structure& l);

/// The unique canonical layer structure of t, or nullopt when t is not
/// nested canalizing in the chosen variant. Constants and tables with
/// inessential variables are rejected.
std::optional<layer_structure> recognize(const truth_table& t, subset_variant variant);

/// Layer count and composition recoverable from the canalized outputs
/// b_1..b_{n+1} alone; nullopt when b_n = b_{n+1} or fewer than two outputs.
std::optional<std::pair<uint32_t, std::vector<uint32_t>>>
layers_from_beta(std::span<const uint8_t> beta);

/// Invariant of a structure under renaming of variables: per-layer multisets
/// of canalizing sets plus the constants.
struct class_key {
    subset_variant variant;
    uint64_t q;
    uint32_t arity;
    std::vector<std::vector<uint64_t>> layer_sets; // per layer, sorted masks
    std::vector<uint8_t> constants;

    std::string to_string() const;

    friend bool operator==(const class_key&, const class_key&) = default;
    friend auto operator<=>(const class_key&, const class_key&) = default;
};

class_key make_class_key(const layer_structure& l);

/// True when some permutation of variables maps b onto a. Both tables
/// nested canalizing: compared by class key. Otherwise exhaustive search,
/// guarded to arity <= 8.
bool permutation_equivalent(const truth_table& a, const truth_table& b);

// Structure text block, bit-exact round trip:
//     p: 3
//     layer 1: (x1, {0,1}) (x2, {2})
//     B: 1,2,2
//     variant: interval
std::string format_structure(const layer_structure& l);
layer_structure parse_structure(const std::string& text);

} // namespace ncfkit
