#include "ncfkit/truth_table.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <numeric>
#include <sstream>

namespace ncfkit {

namespace {

uint64_t checked_table_size(const field_spec& field, uint32_t arity) {
    const uint64_t p = field.order();
    uint64_t size = 1;
    for (uint32_t i = 0; i < arity; ++i) {
        size *= p;
        if (size > k_max_table_entries)
            throw capacity_error("table with p=" + std::to_string(p) + ", n=" +
                                 std::to_string(arity) + " exceeds the entry bound");
    }
    return size;
}

} // namespace

truth_table::truth_table(field_spec field, uint32_t arity, std::vector<uint8_t> values)
    : field_(field), arity_(arity), values_(std::move(values)) {
    if (!field_.prime_mode())
        throw mode_error("truth tables require a prime-mode field");
    const uint64_t expected = checked_table_size(field_, arity_);
    if (values_.size() != expected)
        throw domain_error("table needs " + std::to_string(expected) + " entries, got " +
                           std::to_string(values_.size()));
    for (uint8_t v : values_)
        if (v >= field_.order())
            throw domain_error("table entry " + std::to_string(v) + " out of range");
}

truth_table truth_table::constant(field_spec field, uint32_t arity, uint8_t value) {
    const uint64_t size = checked_table_size(field, arity);
    return truth_table(field, arity, std::vector<uint8_t>(size, value));
}

uint8_t truth_table::evaluate(std::span<const uint8_t> point) const {
    return values_[index_of(point)];
}

bool truth_table::is_constant() const {
    return std::all_of(values_.begin(), values_.end(),
                       [&](uint8_t v) { return v == values_[0]; });
}

uint64_t truth_table::index_of(std::span<const uint8_t> point) const {
    if (point.size() != arity_)
        throw domain_error("point has " + std::to_string(point.size()) +
                           " coordinates, table arity is " + std::to_string(arity_));
    const uint64_t p = field_.order();
    uint64_t index = 0;
    for (uint8_t x : point) {
        if (x >= p) throw domain_error("coordinate " + std::to_string(x) + " out of range");
        index = index * p + x;
    }
    return index;
}

void truth_table::decode_index(uint64_t index, std::span<uint8_t> point) const {
    const uint64_t p = field_.order();
    for (uint32_t i = arity_; i-- > 0;) {
        point[i] = static_cast<uint8_t>(index % p);
        index /= p;
    }
}

uint64_t truth_table::stride_of(uint32_t var) const {
    if (var >= arity_) throw domain_error("variable index out of range");
    uint64_t stride = 1;
    for (uint32_t i = var + 1; i < arity_; ++i) stride *= field_.order();
    return stride;
}

// ANF ------------------------------------------------------------------

anf_polynomial::anf_polynomial(field_spec field, uint32_t arity,
                               std::map<exponent_vector, uint8_t> terms)
    : field_(field), arity_(arity), terms_(std::move(terms)) {
    for (const auto& [exps, coeff] : terms_) {
        if (exps.size() != arity_) throw domain_error("exponent vector arity mismatch");
        if (coeff == 0 || coeff >= field_.order())
            throw domain_error("coefficient out of range");
        for (uint8_t e : exps)
            if (e >= field_.order()) throw domain_error("exponent exceeds p-1");
    }
}

uint32_t anf_polynomial::degree() const {
    uint32_t deg = 0;
    for (const auto& [exps, coeff] : terms_) {
        (void)coeff;
        deg = std::max<uint32_t>(deg, std::accumulate(exps.begin(), exps.end(), 0u));
    }
    return deg;
}

uint8_t anf_polynomial::evaluate(std::span<const uint8_t> point) const {
    if (point.size() != arity_) throw domain_error("point arity mismatch");
    const uint32_t p = static_cast<uint32_t>(field_.order());
    uint32_t total = 0;
    for (const auto& [exps, coeff] : terms_) {
        uint32_t term = coeff;
        for (uint32_t i = 0; i < arity_; ++i) {
            uint32_t power = 1;
            for (uint8_t e = 0; e < exps[i]; ++e) power = power * point[i] % p;
            term = term * power % p;
        }
        total = (total + term) % p;
    }
    return static_cast<uint8_t>(total);
}

std::string anf_polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [exps, coeff] : terms_) {
        if (!out.empty()) out += " + ";
        std::string monomial;
        for (uint32_t i = 0; i < arity_; ++i) {
            if (exps[i] == 0) continue;
            if (!monomial.empty()) monomial += '*';
            monomial += "x" + std::to_string(i + 1);
            if (exps[i] > 1) monomial += "^" + std::to_string(exps[i]);
        }
        if (monomial.empty()) {
            out += std::to_string(coeff);
        } else if (coeff == 1) {
            out += monomial;
        } else {
            out += std::to_string(coeff) + "*" + monomial;
        }
    }
    return out;
}

namespace {

uint32_t pow_mod(uint32_t base, uint32_t exp, uint32_t p) {
    uint32_t out = 1;
    base %= p;
    while (exp > 0) {
        if (exp & 1) out = out * base % p;
        base = base * base % p;
        exp >>= 1;
    }
    return out;
}

// Inverse of the Vandermonde matrix V[a][k] = a^k over F_p, so that the
// coefficient vector of a univariate polynomial is inv * values.
std::vector<std::vector<uint8_t>> inverse_vandermonde(uint32_t p) {
    std::vector<std::vector<uint32_t>> m(p, std::vector<uint32_t>(2 * p, 0));
    for (uint32_t a = 0; a < p; ++a) {
        for (uint32_t k = 0; k < p; ++k) m[a][k] = pow_mod(a, k, p);
        m[a][p + a] = 1;
    }
    for (uint32_t col = 0; col < p; ++col) {
        uint32_t pivot = col;
        while (m[pivot][col] == 0) ++pivot;
        std::swap(m[pivot], m[col]);
        const uint32_t inv = pow_mod(m[col][col], p - 2, p);
        for (uint32_t j = 0; j < 2 * p; ++j) m[col][j] = m[col][j] * inv % p;
        for (uint32_t row = 0; row < p; ++row) {
            if (row == col || m[row][col] == 0) continue;
            const uint32_t factor = m[row][col];
            for (uint32_t j = 0; j < 2 * p; ++j)
                m[row][j] = (m[row][j] + (p - factor) * m[col][j]) % p;
        }
    }
    std::vector<std::vector<uint8_t>> inv(p, std::vector<uint8_t>(p));
    for (uint32_t i = 0; i < p; ++i)
        for (uint32_t j = 0; j < p; ++j) inv[i][j] = static_cast<uint8_t>(m[i][p + j]);
    return inv;
}

} // namespace

anf_polynomial to_anf(const truth_table& t) {
    const uint32_t p = t.p();
    const uint32_t n = t.arity();
    const auto inv = inverse_vandermonde(p);

    // Apply the univariate inverse transform along every axis in turn.
    std::vector<uint8_t> coeff(t.values());
    std::vector<uint8_t> slice(p), transformed(p);
    for (uint32_t var = 0; var < n; ++var) {
        const uint64_t stride = t.stride_of(var);
        const uint64_t block = stride * p;
        for (uint64_t base = 0; base < coeff.size(); base += block) {
            for (uint64_t off = 0; off < stride; ++off) {
                for (uint32_t a = 0; a < p; ++a) slice[a] = coeff[base + off + a * stride];
                for (uint32_t k = 0; k < p; ++k) {
                    uint32_t sum = 0;
                    for (uint32_t a = 0; a < p; ++a) sum += inv[k][a] * slice[a];
                    transformed[k] = static_cast<uint8_t>(sum % p);
                }
                for (uint32_t k = 0; k < p; ++k) coeff[base + off + k * stride] = transformed[k];
            }
        }
    }

    std::map<anf_polynomial::exponent_vector, uint8_t> terms;
    std::vector<uint8_t> exps(n);
    for (uint64_t index = 0; index < coeff.size(); ++index) {
        if (coeff[index] == 0) continue;
        t.decode_index(index, exps);
        terms.emplace(exps, coeff[index]);
    }
    return anf_polynomial(t.field(), n, std::move(terms));
}

uint32_t algebraic_degree(const truth_table& t) {
    return to_anf(t).degree();
}

// Structure probes -------------------------------------------------------

std::vector<uint32_t> essential_variables(const truth_table& t) {
    std::vector<uint32_t> out;
    const uint32_t p = t.p();
    for (uint32_t var = 0; var < t.arity(); ++var) {
        const uint64_t stride = t.stride_of(var);
        const uint64_t block = stride * p;
        bool essential = false;
        for (uint64_t base = 0; base < t.size() && !essential; base += block) {
            for (uint64_t off = 0; off < stride && !essential; ++off) {
                const uint8_t first = t.at(base + off);
                for (uint32_t a = 1; a < p; ++a) {
                    if (t.at(base + off + a * stride) != first) {
                        essential = true;
                        break;
                    }
                }
            }
        }
        if (essential) out.push_back(var);
    }
    return out;
}

namespace {

// Constant value of the restriction x_var = a, if it is constant.
std::optional<uint8_t> restriction_constant(const truth_table& t, uint32_t var, uint8_t a) {
    const uint64_t stride = t.stride_of(var);
    const uint64_t block = stride * t.p();
    std::optional<uint8_t> value;
    for (uint64_t base = 0; base < t.size(); base += block) {
        for (uint64_t off = 0; off < stride; ++off) {
            const uint8_t v = t.at(base + a * stride + off);
            if (!value) value = v;
            else if (*value != v) return std::nullopt;
        }
    }
    return value;
}

} // namespace

canalizing_profile_result canalizing_profile(const truth_table& t) {
    canalizing_profile_result result;
    if (t.is_constant()) {
        result.constant = true;
        return result;
    }
    const uint32_t p = t.p();
    for (uint32_t var = 0; var < t.arity(); ++var) {
        std::vector<std::optional<uint8_t>> constants(p);
        uint64_t mask = 0;
        for (uint8_t a = 0; a < p; ++a) {
            constants[a] = restriction_constant(t, var, a);
            if (constants[a]) mask |= uint64_t{1} << a;
        }
        if (mask == 0) continue;
        const uint64_t full = (uint64_t{1} << p) - 1;
        if (mask == full) {
            // The table is a function of this variable alone. Report the
            // two-valued split at the part containing 0; omit otherwise.
            std::vector<uint8_t> distinct;
            for (uint8_t a = 0; a < p; ++a)
                if (std::find(distinct.begin(), distinct.end(), *constants[a]) == distinct.end())
                    distinct.push_back(*constants[a]);
            if (distinct.size() != 2) continue;
            uint64_t part = 0;
            for (uint8_t a = 0; a < p; ++a)
                if (*constants[a] == *constants[0]) part |= uint64_t{1} << a;
            result.entries.push_back({var, value_subset(p, part), *constants[0]});
            continue;
        }
        value_subset set(p, mask);
        std::optional<uint8_t> output;
        bool consistent = true;
        for (uint8_t a = 0; a < p; ++a) {
            if (!constants[a]) continue;
            if (!output) output = constants[a];
            else if (*output != *constants[a]) consistent = false;
        }
        result.entries.push_back({var, set, consistent ? output : std::nullopt});
    }
    bool all_same = !result.entries.empty();
    std::optional<uint8_t> common;
    for (const auto& entry : result.entries) {
        if (!entry.output) {
            all_same = false;
            break;
        }
        if (!common) common = entry.output;
        else if (*common != *entry.output) all_same = false;
    }
    if (all_same) result.common_output = common;
    return result;
}

truth_table restrict_table(const truth_table& t,
                           const std::map<uint32_t, uint8_t>& assignment) {
    const uint32_t p = t.p();
    for (const auto& [var, value] : assignment) {
        if (var >= t.arity()) throw domain_error("assigned variable out of range");
        if (value >= p) throw domain_error("assigned value out of range");
    }
    std::vector<uint32_t> remaining;
    for (uint32_t var = 0; var < t.arity(); ++var)
        if (!assignment.count(var)) remaining.push_back(var);

    const uint32_t m = static_cast<uint32_t>(remaining.size());
    uint64_t size = 1;
    for (uint32_t i = 0; i < m; ++i) size *= p;

    std::vector<uint8_t> out(size);
    std::vector<uint8_t> point(t.arity());
    for (const auto& [var, value] : assignment) point[var] = value;
    std::vector<uint8_t> sub(m);
    for (uint64_t index = 0; index < size; ++index) {
        uint64_t rest = index;
        for (uint32_t i = m; i-- > 0;) {
            sub[i] = static_cast<uint8_t>(rest % p);
            rest /= p;
        }
        for (uint32_t i = 0; i < m; ++i) point[remaining[i]] = sub[i];
        out[index] = t.evaluate(point);
    }
    return truth_table(t.field(), m, std::move(out));
}

std::optional<truth_table> collapse_region(const truth_table& t,
                                           const std::map<uint32_t, value_subset>& constraints) {
    std::vector<uint32_t> vars;
    std::vector<std::vector<uint8_t>> choices;
    for (const auto& [var, set] : constraints) {
        if (var >= t.arity()) throw domain_error("constrained variable out of range");
        if (set.modulus() != t.p()) throw domain_error("constraint modulus mismatch");
        vars.push_back(var);
        std::vector<uint8_t> elements;
        for (uint8_t a = 0; a < t.p(); ++a)
            if (set.contains(a)) elements.push_back(a);
        choices.push_back(std::move(elements));
    }

    std::vector<size_t> odometer(vars.size(), 0);
    std::optional<truth_table> reference;
    for (;;) {
        std::map<uint32_t, uint8_t> assignment;
        for (size_t i = 0; i < vars.size(); ++i) assignment[vars[i]] = choices[i][odometer[i]];
        truth_table restricted = restrict_table(t, assignment);
        if (!reference) reference = std::move(restricted);
        else if (*reference != restricted) return std::nullopt;

        size_t i = 0;
        while (i < odometer.size() && ++odometer[i] == choices[i].size()) odometer[i++] = 0;
        if (i == odometer.size()) break;
    }
    return reference;
}

truth_table permute_variables(const truth_table& t, std::span<const uint32_t> sigma) {
    const uint32_t n = t.arity();
    if (sigma.size() != n) throw domain_error("permutation arity mismatch");
    std::vector<bool> seen(n, false);
    for (uint32_t v : sigma) {
        if (v >= n || seen[v]) throw domain_error("not a permutation");
        seen[v] = true;
    }
    std::vector<uint8_t> out(t.size());
    std::vector<uint8_t> point(n), source(n);
    for (uint64_t index = 0; index < t.size(); ++index) {
        t.decode_index(index, point);
        for (uint32_t i = 0; i < n; ++i) source[i] = point[sigma[i]];
        out[index] = t.evaluate(source);
    }
    return truth_table(t.field(), n, std::move(out));
}

// Text format --------------------------------------------------------------

namespace {

struct token {
    std::string text;
    int line;
    int column;
};

// Tokenize ignoring '#' comment lines; positions are 1-based.
std::vector<token> tokenize(std::istream& in) {
    std::vector<token> tokens;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '#') continue;
        size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            if (pos >= line.size()) break;
            const size_t start = pos;
            while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            tokens.push_back({line.substr(start, pos - start), line_no, static_cast<int>(start) + 1});
        }
    }
    return tokens;
}

uint64_t parse_unsigned(const token& tok, const char* what) {
    if (tok.text.empty() ||
        !std::all_of(tok.text.begin(), tok.text.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw parse_error(std::string("expected ") + what + ", got '" + tok.text + "'",
                          tok.line, tok.column);
    if (tok.text.size() > 18)
        throw parse_error(std::string(what) + " too large", tok.line, tok.column);
    return std::stoull(tok.text);
}

} // namespace

truth_table read_table(std::istream& in) {
    const std::vector<token> tokens = tokenize(in);
    if (tokens.size() < 2) throw parse_error("missing 'p n' header", 1, 1);

    const uint64_t p = parse_unsigned(tokens[0], "modulus");
    const uint64_t n = parse_unsigned(tokens[1], "arity");
    field_spec field = [&] {
        try {
            return field_spec::prime(static_cast<uint32_t>(p));
        } catch (const domain_error& e) {
            throw parse_error(e.what(), tokens[0].line, tokens[0].column);
        }
    }();
    uint64_t expected = 1;
    for (uint64_t i = 0; i < n; ++i) {
        expected *= p;
        if (expected > k_max_table_entries)
            throw parse_error("table too large", tokens[1].line, tokens[1].column);
    }

    if (tokens.size() < 2 + expected) {
        const token& last = tokens.back();
        throw parse_error("expected " + std::to_string(expected) + " values, found " +
                              std::to_string(tokens.size() - 2),
                          last.line, last.column);
    }
    if (tokens.size() > 2 + expected) {
        const token& extra = tokens[2 + expected];
        throw parse_error("unexpected extra value '" + extra.text + "'", extra.line, extra.column);
    }

    std::vector<uint8_t> values(expected);
    for (uint64_t i = 0; i < expected; ++i) {
        const token& tok = tokens[2 + i];
        const uint64_t v = parse_unsigned(tok, "table value");
        if (v >= p)
            throw parse_error("value " + std::to_string(v) + " out of range for p=" +
                                  std::to_string(p),
                              tok.line, tok.column);
        values[i] = static_cast<uint8_t>(v);
    }
    return truth_table(field, static_cast<uint32_t>(n), std::move(values));
}

truth_table parse_table(const std::string& text) {
    std::istringstream in(text);
    return read_table(in);
}

std::string format_table(const truth_table& t) {
    std::string out = std::to_string(t.p()) + " " + std::to_string(t.arity()) + "\n";
    for (uint64_t i = 0; i < t.size(); ++i) {
        if (i > 0) out += ' ';
        out += std::to_string(t.at(i));
    }
    out += '\n';
    return out;
}

} // namespace ncfkit
