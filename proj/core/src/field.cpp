#include "ncfkit/field.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace ncfkit {

std::string to_string(subset_variant v) {
    return v == subset_variant::interval ? "interval" : "general";
}

subset_variant parse_variant(const std::string& text) {
    if (text == "interval") return subset_variant::interval;
    if (text == "general") return subset_variant::general;
    throw domain_error("unknown variant '" + text + "' (expected interval or general)");
}

bool is_prime(uint64_t v) {
    if (v < 2) return false;
    for (uint64_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

bool is_prime_power(uint64_t v) {
    if (v < 2) return false;
    for (uint64_t d = 2; d * d <= v; ++d) {
        if (v % d == 0) {
            while (v % d == 0) v /= d;
            return v == 1;
        }
    }
    return true; // prime
}

field_spec field_spec::prime(uint32_t p) {
    if (p < 2 || p > k_max_evaluation_order || !is_prime(p)) {
        std::ostringstream msg;
        msg << "prime-mode field requires a prime order in [2, " << k_max_evaluation_order
            << "], got " << p;
        throw domain_error(msg.str());
    }
    return field_spec(p, true);
}

field_spec field_spec::cardinality(uint64_t q) {
    if (!is_prime_power(q)) {
        throw domain_error("cardinality-mode field requires a prime power >= 2, got " +
                           std::to_string(q));
    }
    return field_spec(q, false);
}

namespace {

void check_element(const field_spec& f, uint8_t a) {
    if (a >= f.order())
        throw domain_error("element " + std::to_string(a) + " out of range for order " +
                           std::to_string(f.order()));
}

void check_prime_mode(const field_spec& f) {
    if (!f.prime_mode())
        throw mode_error("element arithmetic requires a prime-mode field (order " +
                         std::to_string(f.order()) + " is counting-only)");
}

} // namespace

uint8_t field_spec::add(uint8_t a, uint8_t b) const {
    check_prime_mode(*this);
    check_element(*this, a);
    check_element(*this, b);
    return static_cast<uint8_t>((a + b) % order_);
}

uint8_t field_spec::sub(uint8_t a, uint8_t b) const {
    check_prime_mode(*this);
    check_element(*this, a);
    check_element(*this, b);
    return static_cast<uint8_t>((a + order_ - b) % order_);
}

uint8_t field_spec::mul(uint8_t a, uint8_t b) const {
    check_prime_mode(*this);
    check_element(*this, a);
    check_element(*this, b);
    return static_cast<uint8_t>((a * b) % order_);
}

uint8_t field_spec::neg(uint8_t a) const {
    check_prime_mode(*this);
    check_element(*this, a);
    return static_cast<uint8_t>((order_ - a) % order_);
}

value_subset::value_subset(uint32_t modulus, uint64_t mask)
    : modulus_(modulus), mask_(mask) {
    if (modulus < 2 || modulus > k_max_subset_order)
        throw domain_error("subset modulus must be in [2, 64], got " + std::to_string(modulus));
    const uint64_t full = modulus == 64 ? ~uint64_t{0} : (uint64_t{1} << modulus) - 1;
    if (mask == 0 || (mask & ~full) != 0 || mask == full)
        throw domain_error("subset mask must be a nonempty proper subset of {0.." +
                           std::to_string(modulus - 1) + "}");
}

value_subset value_subset::prefix(uint32_t modulus, uint32_t last) {
    return value_subset(modulus, (uint64_t{1} << (last + 1)) - 1);
}

uint32_t value_subset::size() const {
    return static_cast<uint32_t>(std::popcount(mask_));
}

bool value_subset::contains(uint8_t x) const {
    if (x >= modulus_)
        throw domain_error("element " + std::to_string(x) + " out of range for modulus " +
                           std::to_string(modulus_));
    return (mask_ >> x) & 1;
}

value_subset value_subset::complement() const {
    const uint64_t full = modulus_ == 64 ? ~uint64_t{0} : (uint64_t{1} << modulus_) - 1;
    return value_subset(modulus_, full & ~mask_);
}

bool value_subset::is_interval() const {
    const auto is_prefix = [](uint64_t m) { return (m & (m + 1)) == 0; };
    return is_prefix(mask_) || is_prefix(complement().mask());
}

std::string value_subset::to_string() const {
    std::string out = "{";
    bool first = true;
    for (uint32_t x = 0; x < modulus_; ++x) {
        if ((mask_ >> x) & 1) {
            if (!first) out += ',';
            out += std::to_string(x);
            first = false;
        }
    }
    out += '}';
    return out;
}

value_subset value_subset::parse(uint32_t modulus, const std::string& text) {
    size_t pos = 0;
    const auto fail = [&](const std::string& what) -> void {
        throw parse_error("bad subset '" + text + "': " + what, 1, static_cast<int>(pos) + 1);
    };
    if (text.empty() || text[pos] != '{') fail("expected '{'");
    ++pos;
    uint64_t mask = 0;
    int64_t previous = -1;
    while (pos < text.size() && text[pos] != '}') {
        if (previous >= 0) {
            if (text[pos] != ',') fail("expected ','");
            ++pos;
        }
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            fail("expected element");
        uint64_t v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            v = v * 10 + (text[pos] - '0');
            if (v > k_max_subset_order) fail("element too large");
            ++pos;
        }
        if (v >= modulus) fail("element out of range");
        if (static_cast<int64_t>(v) <= previous) fail("elements must be strictly ascending");
        mask |= uint64_t{1} << v;
        previous = static_cast<int64_t>(v);
    }
    if (pos >= text.size() || text[pos] != '}') fail("expected '}'");
    ++pos;
    if (pos != text.size()) fail("trailing characters");
    try {
        return value_subset(modulus, mask);
    } catch (const domain_error& e) {
        throw parse_error("bad subset '" + text + "': " + e.what(), 1, 1);
    }
}

uint8_t indicator(const value_subset& s, uint8_t x) {
    return s.contains(x) ? 0 : 1;
}

std::vector<value_subset> enumerate_subsets(uint32_t p, subset_variant variant) {
    if (p < 2 || p > k_max_subset_order)
        throw domain_error("subset enumeration requires modulus in [2, 64], got " +
                           std::to_string(p));
    std::vector<value_subset> out;
    if (variant == subset_variant::interval) {
        out.reserve(2 * (p - 1));
        for (uint32_t j = 0; j + 1 < p; ++j) {
            out.push_back(value_subset::prefix(p, j));
            out.push_back(value_subset::prefix(p, j).complement());
        }
    } else {
        if (p > 20)
            throw capacity_error("general subset enumeration limited to modulus <= 20, got " +
                                 std::to_string(p));
        const uint64_t full = (uint64_t{1} << p) - 1;
        out.reserve(full - 1);
        for (uint64_t mask = 1; mask < full; ++mask)
            out.emplace_back(p, mask);
    }
    std::sort(out.begin(), out.end(),
              [](const value_subset& a, const value_subset& b) { return a.mask() < b.mask(); });
    return out;
}

} // namespace ncfkit
