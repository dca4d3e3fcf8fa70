#include "ncfkit/counting.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace ncfkit {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

bigint bipow(const bigint& base, uint64_t exp) {
    bigint out = 1;
    bigint b = base;
    while (exp > 0) {
        if (exp & 1) out *= b;
        b *= b;
        exp >>= 1;
    }
    return out;
}

std::vector<std::pair<uint32_t, bigint>> to_breakdown(const std::map<uint32_t, bigint>& per_r) {
    std::vector<std::pair<uint32_t, bigint>> out;
    for (const auto& [r, value] : per_r)
        if (value != 0) out.emplace_back(r, value);
    return out;
}

} // namespace

std::string to_string(count_method m) {
    switch (m) {
        case count_method::closed: return "closed";
        case count_method::recursive: return "recursive";
        case count_method::structure_enum: return "structure-enum";
        case count_method::brute_force: return "brute-force";
        case count_method::class_formula: return "class-formula";
        case count_method::orbit_enum: return "orbit-enum";
    }
    return "unknown";
}

std::string tsv_header() {
    return "q\tn\tvariant\tmethod\tcount\tseconds";
}

std::string to_tsv_row(const count_report& report) {
    std::ostringstream out;
    out << report.q << '\t' << report.n << '\t' << to_string(report.variant) << '\t'
        << to_string(report.method) << '\t' << report.result << '\t';
    out.setf(std::ios::fixed);
    out.precision(6);
    out << report.seconds;
    return out.str();
}

// Combinatorics --------------------------------------------------------------

bigint factorial(uint32_t n) {
    bigint out = 1;
    for (uint32_t i = 2; i <= n; ++i) out *= i;
    return out;
}

bigint binomial(uint64_t n, uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    bigint out = 1;
    for (uint64_t i = 1; i <= k; ++i) {
        out *= n - k + i;
        out /= i;
    }
    return out;
}

bigint multinomial(uint32_t n, std::span<const uint32_t> parts) {
    bigint out = factorial(n);
    for (uint32_t k : parts) out /= factorial(k);
    return out;
}

bigint composition_count(uint32_t n, uint32_t r, std::span<const uint32_t> minimums) {
    if (minimums.size() != r) throw domain_error("need one minimum per part");
    uint64_t s = 0;
    for (uint32_t m : minimums) s += m;
    if (s > n) return 0;
    return binomial(static_cast<uint64_t>(r) + n - s - 1, r - 1);
}

namespace {

void compositions_rec(uint32_t remaining, uint32_t parts, uint32_t last_min,
                      std::vector<uint32_t>& prefix,
                      const std::function<void(std::span<const uint32_t>)>& fn) {
    if (parts == 1) {
        if (remaining < last_min) return;
        prefix.push_back(remaining);
        fn(prefix);
        prefix.pop_back();
        return;
    }
    for (uint32_t k = 1; k + (parts - 2) + last_min <= remaining; ++k) {
        prefix.push_back(k);
        compositions_rec(remaining - k, parts - 1, last_min, prefix, fn);
        prefix.pop_back();
    }
}

} // namespace

void for_each_composition(uint32_t total, uint32_t parts, uint32_t last_min,
                          const std::function<void(std::span<const uint32_t>)>& fn) {
    if (parts == 0) {
        if (total == 0) fn({});
        return;
    }
    std::vector<uint32_t> prefix;
    prefix.reserve(parts);
    compositions_rec(total, parts, last_min, prefix, fn);
}

// Tail-layer counts ------------------------------------------------------------

bigint count_last_layer_single(uint32_t p) {
    if (!is_prime(p)) throw domain_error("requires a prime modulus");
    return bigint(p - 1) * (p - 1) * (p - 2);
}

bigint count_offset_products(uint32_t p, uint32_t k) {
    if (!is_prime(p)) throw domain_error("requires a prime modulus");
    if (k < 2) throw domain_error("offset products need at least two factors");
    return bipow(2, k) * bipow(p - 1, k + 2);
}

// Counting formulas --------------------------------------------------------------

count_report count_ncf_closed(uint32_t p, uint32_t n) {
    if (!is_prime(p)) throw domain_error("closed interval count requires a prime modulus");
    if (n < 2) throw domain_error("counts are defined for n >= 2");
    const auto start = clock_type::now();

    std::map<uint32_t, bigint> per_r;
    // Singleton last layer.
    for (uint32_t r = 2; r <= n; ++r) {
        bigint inner = 0;
        for_each_composition(n - 1, r - 1, 1,
                             [&](std::span<const uint32_t> comp) { inner += multinomial(n, comp); });
        per_r[r] += bipow(2, n - 1) * p * (p - 2) * bipow(p - 1, n + r - 1) * inner;
    }
    // Last layer of size at least two.
    for (uint32_t r = 1; r + 1 <= n; ++r) {
        bigint inner = 0;
        for_each_composition(n, r, 2,
                             [&](std::span<const uint32_t> comp) { inner += multinomial(n, comp); });
        per_r[r] += bipow(2, n) * p * bipow(p - 1, n + r) * inner;
    }

    count_report report{p, n, subset_variant::interval, count_method::closed, 0, {}, 0.0};
    for (const auto& [r, value] : per_r) report.result += value;
    report.per_layer = to_breakdown(per_r);
    report.seconds = seconds_since(start);
    return report;
}

count_report count_ncf_recursive(uint32_t p, uint32_t n) {
    if (!is_prime(p)) throw domain_error("recursive count requires a prime modulus");
    if (n < 2) throw domain_error("counts are defined for n >= 2");
    const auto start = clock_type::now();

    std::vector<bigint> a(n + 1);
    a[2] = 4 * bipow(p - 1, 4);
    for (uint32_t m = 3; m <= n; ++m) {
        bigint s = bipow(2, m - 1) * bipow(p - 1, m + 1) * (2 + bigint(m) * (p - 2));
        for (uint32_t r = 2; r + 1 <= m; ++r)
            s += binomial(m, r - 1) * bipow(2, r - 1) * bipow(p - 1, r) * a[m - r + 1];
        a[m] = s;
    }

    count_report report{p, n, subset_variant::interval, count_method::recursive, p * a[n], {}, 0.0};
    report.seconds = seconds_since(start);
    return report;
}

count_report count_ncf_general(uint64_t q, uint32_t n) {
    if (!is_prime_power(q)) throw domain_error("general count requires a prime-power cardinality");
    if (n < 2) throw domain_error("counts are defined for n >= 2");
    if (q > 65536) throw capacity_error("general count limited to cardinality <= 65536");
    const auto start = clock_type::now();

    const bigint half = bipow(2, q - 1) - 1; // flip-identified proper subsets
    std::map<uint32_t, bigint> per_r;
    for (uint32_t r = 2; r <= n; ++r) {
        bigint inner = 0;
        for_each_composition(n - 1, r - 1, 1,
                             [&](std::span<const uint32_t> comp) { inner += multinomial(n, comp); });
        per_r[r] += bipow(2, n - 1) * q * (q - 2) * bipow(half, n) * bipow(q - 1, r - 1) * inner;
    }
    for (uint32_t r = 1; r + 1 <= n; ++r) {
        bigint inner = 0;
        for_each_composition(n, r, 2,
                             [&](std::span<const uint32_t> comp) { inner += multinomial(n, comp); });
        per_r[r] += bipow(2, n) * q * bipow(half, n) * bipow(q - 1, r) * inner;
    }

    count_report report{q, n, subset_variant::general, count_method::closed, 0, {}, 0.0};
    for (const auto& [r, value] : per_r) report.result += value;
    report.per_layer = to_breakdown(per_r);
    report.seconds = seconds_since(start);
    return report;
}

count_report count_classes_formula(uint64_t q, uint32_t n) {
    if (!is_prime_power(q)) throw domain_error("class formula requires a prime-power cardinality");
    if (n < 2) throw domain_error("counts are defined for n >= 2");
    if (q > 65536) throw capacity_error("class formula limited to cardinality <= 65536");
    const auto start = clock_type::now();

    const bigint result =
        bipow(2, n - 1) * (q - 1) * bipow(q, n) * bipow(bipow(2, q - 1) - 1, n);

    count_report report{q, n, subset_variant::general, count_method::class_formula, result, {}, 0.0};
    report.seconds = seconds_since(start);
    return report;
}

bigint expected_structure_count(uint64_t q, uint32_t n, subset_variant variant) {
    if (variant == subset_variant::interval)
        return count_ncf_closed(static_cast<uint32_t>(q), n).result;
    return count_ncf_general(q, n).result;
}

// Structure enumeration -----------------------------------------------------------

namespace {

struct structure_emitter {
    const field_spec& field;
    uint32_t n;
    uint32_t p;
    subset_variant variant;
    const std::vector<value_subset>& pool;
    const std::vector<value_subset>& canonical_pool;
    const std::function<void(const layer_structure&)>& fn;

    std::vector<uint32_t> composition;
    std::vector<std::vector<uint32_t>> layer_vars;
    std::vector<std::vector<value_subset>> layer_sets;
    std::vector<uint8_t> constants;

    void run() {
        for (uint32_t r = 1; r <= n; ++r) {
            for_each_composition(n, r, 1, [&](std::span<const uint32_t> comp) {
                composition.assign(comp.begin(), comp.end());
                layer_vars.assign(r, {});
                std::vector<uint32_t> remaining(n);
                std::iota(remaining.begin(), remaining.end(), 0u);
                pick_layer_vars(0, remaining);
            });
        }
    }

    void pick_layer_vars(uint32_t layer_index, const std::vector<uint32_t>& remaining) {
        if (layer_index == composition.size()) {
            layer_sets.assign(composition.size(), {});
            pick_sets(0, 0);
            return;
        }
        const uint32_t k = composition[layer_index];
        std::vector<uint32_t> chosen;
        pick_combination(layer_index, remaining, 0, k, chosen);
    }

    void pick_combination(uint32_t layer_index, const std::vector<uint32_t>& remaining,
                          size_t from, uint32_t still_needed, std::vector<uint32_t>& chosen) {
        if (still_needed == 0) {
            layer_vars[layer_index] = chosen;
            std::vector<uint32_t> rest;
            size_t ci = 0;
            for (uint32_t v : remaining) {
                if (ci < chosen.size() && chosen[ci] == v) ++ci;
                else rest.push_back(v);
            }
            pick_layer_vars(layer_index + 1, rest);
            return;
        }
        for (size_t i = from; i + still_needed <= remaining.size(); ++i) {
            chosen.push_back(remaining[i]);
            pick_combination(layer_index, remaining, i + 1, still_needed - 1, chosen);
            chosen.pop_back();
        }
    }

    void pick_sets(uint32_t layer_index, uint32_t position) {
        const uint32_t r = static_cast<uint32_t>(composition.size());
        if (layer_index == r) {
            constants.assign(r + 1, 0);
            pick_constants(0);
            return;
        }
        if (position == composition[layer_index]) {
            pick_sets(layer_index + 1, 0);
            return;
        }
        const bool canonical_slot = layer_index + 1 == r && composition[layer_index] == 1;
        const std::vector<value_subset>& options = canonical_slot ? canonical_pool : pool;
        for (const value_subset& set : options) {
            layer_sets[layer_index].push_back(set);
            pick_sets(layer_index, position + 1);
            layer_sets[layer_index].pop_back();
        }
    }

    void pick_constants(uint32_t index) {
        const uint32_t r = static_cast<uint32_t>(composition.size());
        if (index == r) {
            const bool singleton_tail = composition.back() == 1;
            for (uint32_t b = 1; b < p; ++b) {
                if (singleton_tail && (b + constants[r - 1]) % p == 0) continue;
                constants[r] = static_cast<uint8_t>(b);
                emit();
            }
            return;
        }
        const uint32_t low = index == 0 ? 0 : 1;
        for (uint32_t b = low; b < p; ++b) {
            constants[index] = static_cast<uint8_t>(b);
            pick_constants(index + 1);
        }
    }

    void emit() {
        layer_structure structure{field, n, variant, {}, constants};
        structure.layers.reserve(composition.size());
        for (size_t i = 0; i < composition.size(); ++i) {
            layer lay;
            lay.entries.reserve(layer_vars[i].size());
            for (size_t j = 0; j < layer_vars[i].size(); ++j)
                lay.entries.emplace_back(layer_vars[i][j], layer_sets[i][j]);
            structure.layers.push_back(std::move(lay));
        }
        fn(structure);
    }
};

} // namespace

void enumerate_structures(const field_spec& field, uint32_t n, subset_variant variant,
                          const std::function<void(const layer_structure&)>& fn,
                          uint64_t max_structures) {
    if (!field.prime_mode()) throw mode_error("structure enumeration requires a prime-mode field");
    if (n < 2) throw domain_error("structure enumeration is defined for n >= 2");
    const uint32_t p = static_cast<uint32_t>(field.order());

    const bigint expected = expected_structure_count(p, n, variant);
    if (expected > max_structures)
        throw capacity_error("structure stream of length " + expected.str() +
                             " exceeds the bound " + std::to_string(max_structures));

    const std::vector<value_subset> pool = enumerate_subsets(p, variant);
    std::vector<value_subset> canonical_pool;
    for (const value_subset& s : pool)
        if (s.contains(0)) canonical_pool.push_back(s);

    structure_emitter emitter{field, n, p, variant, pool, canonical_pool, fn, {}, {}, {}, {}};
    emitter.run();
}

count_report count_structures(uint32_t p, uint32_t n, subset_variant variant,
                              uint64_t max_structures) {
    const auto start = clock_type::now();
    std::map<uint32_t, bigint> per_r;
    bigint total = 0;
    enumerate_structures(field_spec::prime(p), n, variant,
                         [&](const layer_structure& l) {
                             ++total;
                             ++per_r[l.layer_count()];
                         },
                         max_structures);
    count_report report{p, n, variant, count_method::structure_enum, total, to_breakdown(per_r), 0.0};
    report.seconds = seconds_since(start);
    return report;
}

count_report brute_force_count(uint32_t p, uint32_t n, subset_variant variant,
                               uint64_t max_tables) {
    const field_spec field = field_spec::prime(p);
    if (n < 1) throw domain_error("brute force needs at least one variable");

    uint64_t entries = 1;
    for (uint32_t i = 0; i < n; ++i) {
        entries *= p;
        if (entries > k_max_table_entries) throw capacity_error("table too large");
    }
    const bigint total_tables = bipow(p, entries);
    if (total_tables > max_tables)
        throw capacity_error("brute force over " + total_tables.str() +
                             " tables exceeds the bound " + std::to_string(max_tables));

    const auto start = clock_type::now();
    std::map<uint32_t, bigint> per_r;
    bigint accepted = 0;
    std::vector<uint8_t> values(entries, 0);
    for (;;) {
        truth_table t(field, n, values);
        if (const auto structure = recognize(t, variant)) {
            ++accepted;
            ++per_r[structure->layer_count()];
        }
        uint64_t i = 0;
        while (i < entries && ++values[i] == p) values[i++] = 0;
        if (i == entries) break;
    }

    count_report report{p, n, variant, count_method::brute_force, accepted, to_breakdown(per_r), 0.0};
    report.seconds = seconds_since(start);
    return report;
}

count_report orbit_count(uint32_t p, uint32_t n, subset_variant variant,
                         uint64_t max_structures) {
    const auto start = clock_type::now();
    std::set<class_key> keys;
    enumerate_structures(field_spec::prime(p), n, variant,
                         [&](const layer_structure& l) { keys.insert(make_class_key(l)); },
                         max_structures);
    std::map<uint32_t, bigint> per_r;
    for (const class_key& key : keys) ++per_r[static_cast<uint32_t>(key.layer_sets.size())];

    count_report report{p, n, variant, count_method::orbit_enum,
                        bigint(keys.size()), to_breakdown(per_r), 0.0};
    report.seconds = seconds_since(start);
    return report;
}

// Sampling -------------------------------------------------------------------------

namespace {

bigint uniform_below_big(splitmix64& rng, const bigint& bound) {
    if (bound <= 1) return 0;
    const unsigned bits = boost::multiprecision::msb(bigint(bound - 1)) + 1;
    const unsigned words = (bits + 63) / 64;
    const bigint mask = (bigint(1) << bits) - 1;
    for (;;) {
        bigint value = 0;
        for (unsigned i = 0; i < words; ++i) value |= bigint(rng.next()) << (64 * i);
        value &= mask;
        if (value < bound) return value;
    }
}

} // namespace

structure_sampler::structure_sampler(field_spec field, uint32_t n, subset_variant variant,
                                     uint64_t seed)
    : field_(field), n_(n), variant_(variant),
      pool_(enumerate_subsets(static_cast<uint32_t>(field.order()), variant)),
      total_(0), rng_(seed) {
    if (!field_.prime_mode()) throw mode_error("sampling requires a prime-mode field");
    if (n < 2) throw domain_error("sampling is defined for n >= 2");
    const uint32_t p = static_cast<uint32_t>(field_.order());
    for (const value_subset& s : pool_)
        if (s.contains(0)) canonical_pool_.push_back(s);

    bigint cumulative = 0;
    for (uint32_t r = 1; r <= n; ++r) {
        for_each_composition(n, r, 1, [&](std::span<const uint32_t> comp) {
            const bool singleton_tail = comp.back() == 1;
            bigint weight = multinomial(n, comp);
            weight *= bipow(pool_.size(), singleton_tail ? n - 1 : n);
            if (singleton_tail) weight *= canonical_pool_.size();
            weight *= p;                      // B_1
            weight *= bipow(p - 1, r - 1);    // B_2..B_r
            weight *= singleton_tail ? p - 2 : p - 1; // B_{r+1}
            if (weight == 0) return;
            cumulative += weight;
            strata_.push_back({std::vector<uint32_t>(comp.begin(), comp.end()), cumulative});
        });
    }
    total_ = cumulative;
}

layer_structure structure_sampler::next() {
    const uint32_t p = static_cast<uint32_t>(field_.order());
    const bigint x = uniform_below_big(rng_, total_);
    const auto it = std::upper_bound(
        strata_.begin(), strata_.end(), x,
        [](const bigint& v, const stratum& s) { return v < s.cumulative; });
    const std::vector<uint32_t>& comp = it->composition;
    const uint32_t r = static_cast<uint32_t>(comp.size());

    std::vector<uint32_t> vars(n_);
    std::iota(vars.begin(), vars.end(), 0u);
    for (uint32_t i = n_ - 1; i > 0; --i)
        std::swap(vars[i], vars[rng_.below(i + 1)]);

    layer_structure structure{field_, n_, variant_, {}, {}};
    size_t offset = 0;
    for (uint32_t i = 0; i < r; ++i) {
        std::vector<uint32_t> block(vars.begin() + offset, vars.begin() + offset + comp[i]);
        std::sort(block.begin(), block.end());
        offset += comp[i];
        const bool canonical_slot = i + 1 == r && comp[i] == 1;
        const std::vector<value_subset>& options = canonical_slot ? canonical_pool_ : pool_;
        layer lay;
        for (uint32_t var : block)
            lay.entries.emplace_back(var, options[rng_.below(options.size())]);
        structure.layers.push_back(std::move(lay));
    }

    structure.constants.resize(r + 1);
    structure.constants[0] = static_cast<uint8_t>(rng_.below(p));
    for (uint32_t i = 1; i < r; ++i)
        structure.constants[i] = static_cast<uint8_t>(1 + rng_.below(p - 1));
    if (comp.back() == 1) {
        std::vector<uint8_t> allowed;
        for (uint32_t b = 1; b < p; ++b)
            if ((b + structure.constants[r - 1]) % p != 0) allowed.push_back(static_cast<uint8_t>(b));
        structure.constants[r] = allowed[rng_.below(allowed.size())];
    } else {
        structure.constants[r] = static_cast<uint8_t>(1 + rng_.below(p - 1));
    }
    return structure;
}

layer_structure sample_uniform(const field_spec& field, uint32_t n, subset_variant variant,
                               uint64_t seed) {
    structure_sampler sampler(field, n, variant, seed);
    return sampler.next();
}

} // namespace ncfkit
