#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ncfkit/field.hpp"

namespace ncfkit {

// Dense tables only; p^n beyond this bound is rejected.
inline constexpr uint64_t k_max_table_entries = uint64_t{1} << 22;

/// Dense map F_p^n -> F_p. The entry for (x_1,..,x_n) sits at index
/// sum x_i * p^(n-i), i.e. x_1 is the most significant digit. Arity 0 is a
/// single constant entry. Immutable after construction.
class truth_table {
public:
    truth_table(field_spec field, uint32_t arity, std::vector<uint8_t> values);

    static truth_table constant(field_spec field, uint32_t arity, uint8_t value);

    const field_spec& field() const { return field_; }
    uint32_t arity() const { return arity_; }
    uint8_t p() const { return static_cast<uint8_t>(field_.order()); }
    uint64_t size() const { return values_.size(); }
    const std::vector<uint8_t>& values() const { return values_; }

    uint8_t at(uint64_t index) const { return values_[index]; }
    uint8_t evaluate(std::span<const uint8_t> point) const;
    bool is_constant() const;

    uint64_t index_of(std::span<const uint8_t> point) const;
    void decode_index(uint64_t index, std::span<uint8_t> point) const;
    uint64_t stride_of(uint32_t var) const; // p^(n-1-var)

    friend bool operator==(const truth_table&, const truth_table&) = default;

private:
    field_spec field_;
    uint32_t arity_;
    std::vector<uint8_t> values_;
};

/// Polynomial with exponents at most p-1 per variable; evaluating it
/// reproduces the interpolated table exactly.
class anf_polynomial {
public:
    using exponent_vector = std::vector<uint8_t>;

    anf_polynomial(field_spec field, uint32_t arity,
                   std::map<exponent_vector, uint8_t> terms);

    const field_spec& field() const { return field_; }
    uint32_t arity() const { return arity_; }
    const std::map<exponent_vector, uint8_t>& terms() const { return terms_; }

    uint32_t degree() const; // max total degree; 0 for constants
    uint8_t evaluate(std::span<const uint8_t> point) const;
    std::string to_string() const;

private:
    field_spec field_;
    uint32_t arity_;
    std::map<exponent_vector, uint8_t> terms_; // nonzero coefficients only
};

anf_polynomial to_anf(const truth_table& t);
uint32_t algebraic_degree(const truth_table& t);

/// Variables the table genuinely depends on, ascending, 0-based.
std::vector<uint32_t> essential_variables(const truth_table& t);

struct canalizing_entry {
    uint32_t var;                  // 0-based
    value_subset set;              // maximal, always proper
    std::optional<uint8_t> output; // unset when values in `set` force different constants
};

struct canalizing_profile_result {
    bool constant = false; // distinguished marker; no entries in that case
    std::vector<canalizing_entry> entries;
    std::optional<uint8_t> common_output; // set when every entry has the same output
};

canalizing_profile_result canalizing_profile(const truth_table& t);

/// Table over the unassigned variables, in ascending original index order.
/// Assigning every variable yields an arity-0 constant table.
truth_table restrict_table(const truth_table& t,
                           const std::map<uint32_t, uint8_t>& assignment);

/// The common restriction when every choice of constrained values within its
/// set yields the same subfunction; nullopt otherwise.
std::optional<truth_table> collapse_region(const truth_table& t,
                                           const std::map<uint32_t, value_subset>& constraints);

/// result(x_1,..,x_n) = t(x_sigma(1),..,x_sigma(n)), sigma 0-based.
truth_table permute_variables(const truth_table& t, std::span<const uint32_t> sigma);

// Text format: optional '#' comment lines, then "p n", then p^n values.
truth_table read_table(std::istream& in);
truth_table parse_table(const std::string& text);
std::string format_table(const truth_table& t);

} // namespace ncfkit
