#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "ncfkit/errors.hpp"

namespace ncfkit {

enum class subset_variant { interval, general };

std::string to_string(subset_variant v);
subset_variant parse_variant(const std::string& text);

// Largest modulus for which truth tables and element arithmetic are supported.
inline constexpr uint32_t k_max_evaluation_order = 13;

// Subsets are stored as bit masks, so the alphabet is capped at 64 symbols.
inline constexpr uint32_t k_max_subset_order = 64;

bool is_prime(uint64_t v);
bool is_prime_power(uint64_t v);

/// The ambient alphabet. Prime mode (order 2..13) carries element arithmetic
/// and truth tables; cardinality mode accepts any prime power >= 2 but only
/// feeds the counting formulas.
class field_spec {
public:
    static field_spec prime(uint32_t p);
    static field_spec cardinality(uint64_t q);

    uint64_t order() const { return order_; }
    bool prime_mode() const { return prime_mode_; }

    // Element arithmetic, prime mode only; operands must be reduced already.
    uint8_t add(uint8_t a, uint8_t b) const;
    uint8_t sub(uint8_t a, uint8_t b) const;
    uint8_t mul(uint8_t a, uint8_t b) const;
    uint8_t neg(uint8_t a) const;

    friend bool operator==(const field_spec&, const field_spec&) = default;

private:
    field_spec(uint64_t order, bool prime_mode)
        : order_(order), prime_mode_(prime_mode) {}

    uint64_t order_;
    bool prime_mode_;
};

/// Nonempty proper subset of {0..p-1}, stored as a bit mask over the natural
/// order. Textual form is "{0,1}".
class value_subset {
public:
    value_subset(uint32_t modulus, uint64_t mask);

    static value_subset prefix(uint32_t modulus, uint32_t last); // {0..last}
    static value_subset parse(uint32_t modulus, const std::string& text);

    uint32_t modulus() const { return modulus_; }
    uint64_t mask() const { return mask_; }
    uint32_t size() const;
    bool contains(uint8_t x) const;
    value_subset complement() const;

    // True when the subset or its complement is a prefix {0..j}, j < p-1.
    bool is_interval() const;

    std::string to_string() const;

    friend bool operator==(const value_subset&, const value_subset&) = default;
    friend std::strong_ordering operator<=>(const value_subset&, const value_subset&) = default;

private:
    uint32_t modulus_;
    uint64_t mask_;
};

/// 0 if x lies in s, 1 if x lies in the complement of s.
uint8_t indicator(const value_subset& s, uint8_t x);

/// Every interval (2(p-1) subsets) or every nonempty proper subset (2^p - 2),
/// in ascending mask order.
std::vector<value_subset> enumerate_subsets(uint32_t p, subset_variant variant);

} // namespace ncfkit
