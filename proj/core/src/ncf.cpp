#include "ncfkit/ncf.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace ncfkit {

namespace {

void validate_piecewise(const piecewise_spec& spec) {
    if (!spec.field.prime_mode()) throw mode_error("piecewise build requires a prime-mode field");
    const uint32_t n = spec.arity;
    const uint32_t p = static_cast<uint32_t>(spec.field.order());
    if (n < 1) throw domain_error("piecewise spec needs at least one variable");
    if (spec.order.size() != n) throw domain_error("order length must equal arity");
    std::vector<bool> seen(n, false);
    for (uint32_t v : spec.order) {
        if (v >= n || seen[v]) throw domain_error("order is not a permutation");
        seen[v] = true;
    }
    if (spec.sets.size() != n) throw domain_error("need one canalizing set per variable");
    for (const value_subset& s : spec.sets)
        if (s.modulus() != p) throw domain_error("canalizing set modulus mismatch");
    if (spec.outputs.size() != n + 1) throw domain_error("need n+1 output values");
    for (uint8_t b : spec.outputs)
        if (b >= p) throw domain_error("output value out of range");
    if (spec.outputs[n - 1] == spec.outputs[n])
        throw domain_error("invalid spec: the last two outputs must differ");
}

} // namespace

truth_table build_piecewise(const piecewise_spec& spec) {
    validate_piecewise(spec);
    const uint32_t n = spec.arity;
    truth_table shape = truth_table::constant(spec.field, n, 0);
    std::vector<uint8_t> values(shape.size());
    std::vector<uint8_t> point(n);
    for (uint64_t index = 0; index < values.size(); ++index) {
        shape.decode_index(index, point);
        uint8_t out = spec.outputs[n];
        for (uint32_t j = 0; j < n; ++j) {
            if (spec.sets[j].contains(point[spec.order[j]])) {
                out = spec.outputs[j];
                break;
            }
        }
        values[index] = out;
    }
    return truth_table(spec.field, n, std::move(values));
}

piecewise_spec normalize_flip(const piecewise_spec& spec) {
    validate_piecewise(spec);
    piecewise_spec flipped = spec;
    flipped.sets.back() = flipped.sets.back().complement();
    std::swap(flipped.outputs[spec.arity - 1], flipped.outputs[spec.arity]);
    return flipped;
}

std::vector<uint32_t> layer_structure::composition() const {
    std::vector<uint32_t> out;
    out.reserve(layers.size());
    for (const layer& l : layers) out.push_back(static_cast<uint32_t>(l.entries.size()));
    return out;
}

void validate_structure(const layer_structure& l) {
    if (!l.field.prime_mode()) throw mode_error("layer structures require a prime-mode field");
    const uint32_t p = static_cast<uint32_t>(l.field.order());
    const uint32_t r = l.layer_count();
    if (r == 0) throw domain_error("structure needs at least one layer");
    if (l.constants.size() != r + 1) throw domain_error("need r+1 constants");
    for (uint8_t b : l.constants)
        if (b >= p) throw domain_error("constant out of range");
    for (uint32_t i = 1; i <= r; ++i)
        if (l.constants[i] == 0) throw domain_error("constants after the first must be nonzero");

    std::vector<bool> seen(l.arity, false);
    uint32_t total = 0;
    for (const layer& lay : l.layers) {
        if (lay.entries.empty()) throw domain_error("empty layer");
        uint32_t previous = 0;
        bool first = true;
        for (const auto& [var, set] : lay.entries) {
            if (var >= l.arity) throw domain_error("layer variable out of range");
            if (seen[var]) throw domain_error("variable appears in two layers");
            if (!first && var <= previous) throw domain_error("layer entries must ascend by variable");
            seen[var] = true;
            previous = var;
            first = false;
            if (set.modulus() != p) throw domain_error("canalizing set modulus mismatch");
            if (l.variant == subset_variant::interval && !set.is_interval())
                throw domain_error("interval variant requires interval sets");
            ++total;
        }
    }
    if (total != l.arity) throw domain_error("layers must partition the variables");

    const layer& last = l.layers.back();
    if (last.entries.size() == 1 && r >= 2 &&
        (l.constants[r - 1] + l.constants[r]) % p == 0)
        throw domain_error("singleton last layer requires B_r + B_{r+1} != 0");
    if (l.arity == 1 && r != 1)
        throw domain_error("unary structures have exactly one layer");
}

bool is_canonical(const layer_structure& l) {
    validate_structure(l);
    const layer& last = l.layers.back();
    return last.entries.size() != 1 || last.entries.front().second.contains(0);
}

truth_table build_layered(const layer_structure& l) {
    validate_structure(l);
    const uint32_t p = static_cast<uint32_t>(l.field.order());
    const uint32_t r = l.layer_count();
    truth_table shape = truth_table::constant(l.field, l.arity, 0);
    std::vector<uint8_t> values(shape.size());
    std::vector<uint8_t> point(l.arity);
    for (uint64_t index = 0; index < values.size(); ++index) {
        shape.decode_index(index, point);
        uint32_t acc = l.constants[r]; // B_{r+1}
        for (uint32_t i = r; i-- > 0;) {
            uint32_t m = 1;
            for (const auto& [var, set] : l.layers[i].entries)
                m &= indicator(set, point[var]);
            acc = (m * acc + l.constants[i]) % p;
        }
        values[index] = static_cast<uint8_t>(acc);
    }
    return truth_table(l.field, l.arity, std::move(values));
}

piecewise_spec expand_to_piecewise(const layer_structure& l) {
    validate_structure(l);
    const uint32_t p = static_cast<uint32_t>(l.field.order());
    piecewise_spec spec{l.field, l.arity, {}, {}, {}};
    uint32_t prefix = 0;
    for (uint32_t i = 0; i < l.layer_count(); ++i) {
        prefix = (prefix + l.constants[i]) % p;
        for (const auto& [var, set] : l.layers[i].entries) {
            spec.order.push_back(var);
            spec.sets.push_back(set);
            spec.outputs.push_back(static_cast<uint8_t>(prefix));
        }
    }
    prefix = (prefix + l.constants[l.layer_count()]) % p;
    spec.outputs.push_back(static_cast<uint8_t>(prefix));
    return spec;
}

std::optional<layer_structure> recognize(const truth_table& t, subset_variant variant) {
    if (t.arity() == 0 || t.is_constant()) return std::nullopt;
    if (essential_variables(t).size() != t.arity()) return std::nullopt;

    const uint32_t p = t.p();
    std::vector<uint32_t> varmap(t.arity());
    std::iota(varmap.begin(), varmap.end(), 0u);

    truth_table cur = t;
    std::vector<layer> layers;
    std::vector<uint8_t> canalized; // C_1..C_r
    uint8_t final_value = 0;

    for (;;) {
        if (cur.arity() == 1) {
            // Unary tail: exactly two values, canonically split at the part
            // containing 0.
            uint64_t part = 0;
            const uint8_t on_part = cur.at(0);
            std::optional<uint8_t> off_part;
            for (uint8_t a = 0; a < p; ++a) {
                const uint8_t v = cur.at(a);
                if (v == on_part) {
                    part |= uint64_t{1} << a;
                } else if (!off_part) {
                    off_part = v;
                } else if (*off_part != v) {
                    return std::nullopt; // three values, no cascade shape
                }
            }
            value_subset set(p, part);
            if (variant == subset_variant::interval && !set.is_interval()) return std::nullopt;
            if (!canalized.empty() &&
                (on_part == canalized.back() || *off_part == canalized.back()))
                return std::nullopt;
            layers.push_back(layer{{{varmap[0], set}}});
            canalized.push_back(on_part);
            final_value = *off_part;
            break;
        }

        const canalizing_profile_result profile = canalizing_profile(cur);
        if (profile.entries.empty() || !profile.common_output) return std::nullopt;
        const uint8_t c = *profile.common_output;
        if (!canalized.empty() && c == canalized.back()) return std::nullopt;

        layer lay;
        std::map<uint32_t, value_subset> constraints;
        for (const canalizing_entry& entry : profile.entries) {
            if (variant == subset_variant::interval && !entry.set.is_interval())
                return std::nullopt;
            lay.entries.emplace_back(varmap[entry.var], entry.set);
            constraints.emplace(entry.var, entry.set.complement());
        }
        std::optional<truth_table> collapsed = collapse_region(cur, constraints);
        if (!collapsed) return std::nullopt;

        layers.push_back(std::move(lay));
        canalized.push_back(c);

        std::vector<uint32_t> next_map;
        size_t entry_pos = 0;
        for (uint32_t var = 0; var < cur.arity(); ++var) {
            if (entry_pos < profile.entries.size() && profile.entries[entry_pos].var == var)
                ++entry_pos;
            else
                next_map.push_back(varmap[var]);
        }
        varmap = std::move(next_map);
        cur = std::move(*collapsed);

        if (cur.arity() == 0) {
            final_value = cur.at(0);
            if (final_value == canalized.back()) return std::nullopt;
            break;
        }
        if (cur.is_constant()) return std::nullopt; // leftover variables inessential
        if (essential_variables(cur).size() != cur.arity()) return std::nullopt;
    }

    const uint32_t r = static_cast<uint32_t>(layers.size());
    std::vector<uint8_t> constants(r + 1);
    constants[0] = canalized[0];
    for (uint32_t i = 1; i < r; ++i)
        constants[i] = static_cast<uint8_t>((canalized[i] + p - canalized[i - 1]) % p);
    constants[r] = static_cast<uint8_t>((final_value + p - canalized[r - 1]) % p);

    layer_structure result{t.field(), t.arity(), variant, std::move(layers), std::move(constants)};
    validate_structure(result);
    return result;
}

std::optional<std::pair<uint32_t, std::vector<uint32_t>>>
layers_from_beta(std::span<const uint8_t> beta) {
    if (beta.size() < 2) return std::nullopt;
    const size_t n = beta.size() - 1;
    if (beta[n - 1] == beta[n]) return std::nullopt;
    std::vector<uint32_t> composition;
    for (size_t i = 0; i < n; ++i) {
        if (i > 0 && beta[i] == beta[i - 1]) ++composition.back();
        else composition.push_back(1);
    }
    return std::make_pair(static_cast<uint32_t>(composition.size()), std::move(composition));
}

class_key make_class_key(const layer_structure& l) {
    class_key key{l.variant, l.field.order(), l.arity, {}, l.constants};
    for (const layer& lay : l.layers) {
        std::vector<uint64_t> masks;
        masks.reserve(lay.entries.size());
        for (const auto& [var, set] : lay.entries) masks.push_back(set.mask());
        std::sort(masks.begin(), masks.end());
        key.layer_sets.push_back(std::move(masks));
    }
    return key;
}

std::string class_key::to_string() const {
    std::ostringstream out;
    out << ncfkit::to_string(variant) << "|q=" << q << "|n=" << arity
        << "|r=" << layer_sets.size();
    for (size_t i = 0; i < layer_sets.size(); ++i) {
        out << "|L" << i + 1 << ":";
        for (size_t j = 0; j < layer_sets[i].size(); ++j) {
            if (j > 0) out << ',';
            out << value_subset(static_cast<uint32_t>(q), layer_sets[i][j]).to_string();
        }
    }
    out << "|B:";
    for (size_t i = 0; i < constants.size(); ++i) {
        if (i > 0) out << ',';
        out << static_cast<int>(constants[i]);
    }
    return out.str();
}

bool permutation_equivalent(const truth_table& a, const truth_table& b) {
    if (a.field() != b.field() || a.arity() != b.arity())
        throw domain_error("tables must share field and arity");
    if (a == b) return true;

    const auto sa = recognize(a, subset_variant::general);
    const auto sb = recognize(b, subset_variant::general);
    if (sa && sb) return make_class_key(*sa) == make_class_key(*sb);
    if (sa || sb) return false;

    if (a.arity() > 8)
        throw capacity_error("exhaustive permutation search limited to arity <= 8");
    std::vector<uint32_t> sigma(a.arity());
    std::iota(sigma.begin(), sigma.end(), 0u);
    do {
        if (permute_variables(b, sigma) == a) return true;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return false;
}

// Text format --------------------------------------------------------------

std::string format_structure(const layer_structure& l) {
    std::ostringstream out;
    out << "p: " << l.field.order() << "\n";
    for (uint32_t i = 0; i < l.layer_count(); ++i) {
        out << "layer " << i + 1 << ":";
        for (const auto& [var, set] : l.layers[i].entries)
            out << " (x" << var + 1 << ", " << set.to_string() << ")";
        out << "\n";
    }
    out << "B: ";
    for (size_t i = 0; i < l.constants.size(); ++i) {
        if (i > 0) out << ',';
        out << static_cast<int>(l.constants[i]);
    }
    out << "\nvariant: " << to_string(l.variant) << "\n";
    return out.str();
}

namespace {

struct cursor {
    const std::string& text;
    size_t pos = 0;
    int line;

    [[noreturn]] void fail(const std::string& what) const {
        throw parse_error(what, line, static_cast<int>(pos) + 1);
    }
    bool done() const { return pos >= text.size(); }
    char peek() const { return pos < text.size() ? text[pos] : '\0'; }
    void expect(const std::string& literal) {
        if (text.compare(pos, literal.size(), literal) != 0)
            fail("expected '" + literal + "'");
        pos += literal.size();
    }
    uint64_t number(const char* what) {
        if (done() || !std::isdigit(static_cast<unsigned char>(peek())))
            fail(std::string("expected ") + what);
        uint64_t v = 0;
        while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (text[pos] - '0');
            if (v > 1'000'000) fail(std::string(what) + " too large");
            ++pos;
        }
        return v;
    }
};

} // namespace

layer_structure parse_structure(const std::string& text) {
    std::vector<std::string> lines;
    {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) lines.push_back(line);
        }
    }
    if (lines.size() < 4) throw parse_error("structure block needs p, layers, B, variant", 1, 1);

    cursor head{lines[0], 0, 1};
    head.expect("p: ");
    const uint64_t p = head.number("modulus");
    if (!head.done()) head.fail("trailing characters");
    const field_spec field = field_spec::prime(static_cast<uint32_t>(p));

    const size_t layer_lines = lines.size() - 3;
    std::vector<layer> layers;
    uint32_t max_var = 0;
    for (size_t i = 0; i < layer_lines; ++i) {
        cursor cur{lines[1 + i], 0, static_cast<int>(i) + 2};
        cur.expect("layer ");
        const uint64_t index = cur.number("layer index");
        if (index != i + 1) cur.fail("layer index out of order");
        cur.expect(":");
        layer lay;
        while (!cur.done()) {
            cur.expect(" (x");
            const uint64_t var = cur.number("variable index");
            if (var == 0) cur.fail("variable indices are 1-based");
            cur.expect(", ");
            const size_t set_start = cur.pos;
            while (!cur.done() && cur.peek() != '}') ++cur.pos;
            if (cur.done()) cur.fail("unterminated set");
            ++cur.pos; // consume '}'
            const std::string set_text = lines[1 + i].substr(set_start, cur.pos - set_start);
            value_subset set = [&] {
                try {
                    return value_subset::parse(static_cast<uint32_t>(p), set_text);
                } catch (const parse_error& e) {
                    throw parse_error(e.what(), cur.line, static_cast<int>(set_start) + 1);
                }
            }();
            cur.expect(")");
            lay.entries.emplace_back(static_cast<uint32_t>(var - 1), set);
            max_var = std::max<uint32_t>(max_var, static_cast<uint32_t>(var));
        }
        if (lay.entries.empty()) cur.fail("layer has no entries");
        layers.push_back(std::move(lay));
    }

    cursor btail{lines[lines.size() - 2], 0, static_cast<int>(lines.size()) - 1};
    btail.expect("B: ");
    std::vector<uint8_t> constants;
    for (;;) {
        const uint64_t b = btail.number("constant");
        if (b >= p) btail.fail("constant out of range");
        constants.push_back(static_cast<uint8_t>(b));
        if (btail.done()) break;
        btail.expect(",");
    }

    cursor vtail{lines.back(), 0, static_cast<int>(lines.size())};
    vtail.expect("variant: ");
    const std::string variant_text = lines.back().substr(vtail.pos);
    subset_variant variant;
    try {
        variant = parse_variant(variant_text);
    } catch (const domain_error& e) {
        vtail.fail(e.what());
    }

    layer_structure result{field, max_var, variant, std::move(layers), std::move(constants)};
    try {
        validate_structure(result);
    } catch (const domain_error& e) {
        throw parse_error(std::string("invalid structure: ") + e.what(), 1, 1);
    }
    return result;
}

} // namespace ncfkit
