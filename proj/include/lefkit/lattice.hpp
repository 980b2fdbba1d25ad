#pragma once

// Multidegrees in Z^k, the S_k action by coordinate permutation, orbits,
// boxes, and the lexicographic order that linearizes collections.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <compare>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lefkit/arith.hpp"
#include "lefkit/partition.hpp"

namespace lefkit {

class ArityMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The line bundle O(a_1, ..., a_k) on (P^n)^k, identified with its exponents.
class Multidegree {
public:
    Multidegree() = default;
    Multidegree(std::initializer_list<Coord> c) : coords_(c) {}
    explicit Multidegree(std::vector<Coord> c) : coords_(std::move(c)) {}

    std::size_t arity() const { return coords_.size(); }
    Coord operator[](std::size_t i) const { return coords_[i]; }
    std::span<const Coord> coords() const { return coords_; }

    auto operator<=>(const Multidegree&) const = default;
    bool operator==(const Multidegree&) const = default;

private:
    std::vector<Coord> coords_;
};

inline void require_same_arity(const Multidegree& a, const Multidegree& b) {
    if (a.arity() != b.arity())
        throw ArityMismatch("multidegree arity mismatch: " + std::to_string(a.arity()) +
                            " vs " + std::to_string(b.arity()));
}

inline std::string to_string(const Multidegree& a) {
    std::string s = "(";
    for (std::size_t i = 0; i < a.arity(); ++i) {
        if (i) s += ",";
        s += std::to_string(a[i]);
    }
    return s + ")";
}

/// Parses "(2,1,0)"; whitespace around tokens is tolerated.
inline Multidegree parse_multidegree(std::string_view text) {
    auto fail = [&](const std::string& why) {
        throw ParseError("cannot parse multidegree \"" + std::string(text) + "\": " + why);
    };
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    if (i >= text.size() || text[i] != '(') fail("expected '('");
    ++i;
    std::vector<Coord> coords;
    while (true) {
        skip_ws();
        std::size_t start = i;
        if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        std::string_view tok = text.substr(start, i - start);
        if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
        Coord v{};
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
            fail("bad integer");
        coords.push_back(v);
        skip_ws();
        if (i < text.size() && text[i] == ',') {
            ++i;
            continue;
        }
        if (i < text.size() && text[i] == ')') {
            ++i;
            break;
        }
        fail("expected ',' or ')'");
    }
    skip_ws();
    if (i != text.size()) fail("trailing characters");
    return Multidegree(std::move(coords));
}

/// Coordinates sorted weakly decreasing: the lex-largest point of the orbit.
inline Multidegree canonical_rep(const Multidegree& a) {
    std::vector<Coord> c(a.coords().begin(), a.coords().end());
    std::sort(c.begin(), c.end(), std::greater<>());
    return Multidegree(std::move(c));
}

inline bool is_canonical(const Multidegree& a) {
    return std::is_sorted(a.coords().begin(), a.coords().end(), std::greater<>());
}

/// c(i) = (c_1 + i, ..., c_k + i).
inline Multidegree twist(const Multidegree& a, Coord i) {
    std::vector<Coord> c(a.coords().begin(), a.coords().end());
    for (auto& x : c) x = checked_add(x, i);
    return Multidegree(std::move(c));
}

inline std::strong_ordering lex_compare(const Multidegree& a, const Multidegree& b) {
    require_same_arity(a, b);
    return a <=> b;
}

/// Multiplicities of the distinct coordinate values, sorted decreasing.
inline Partition stabilizer_shape(const Multidegree& a) {
    Multidegree r = canonical_rep(a);
    std::vector<int> mult;
    for (std::size_t i = 0; i < r.arity();) {
        std::size_t j = i;
        while (j < r.arity() && r[j] == r[i]) ++j;
        mult.push_back(static_cast<int>(j - i));
        i = j;
    }
    std::sort(mult.begin(), mult.end(), std::greater<>());
    return Partition(std::move(mult));
}

/// Size of the orbit whose stabilizer is the Young subgroup of the given shape.
inline std::uint64_t orbit_size_for_shape(const Partition& shape) {
    ExactQuotient q;
    for (int i = 2; i <= shape.size(); ++i) q.multiply(static_cast<Count>(i));
    for (int part : shape.parts())
        for (int i = 2; i <= part; ++i) q.divide(static_cast<Count>(i));
    return narrow_u64(q.value());
}

struct Orbit {
    Multidegree rep;
    std::vector<Multidegree> elements;  // lex ascending
    Partition stabilizer_shape;
};

inline Orbit orbit_of(const Multidegree& a) {
    Orbit o;
    o.rep = canonical_rep(a);
    std::vector<Coord> c(a.coords().begin(), a.coords().end());
    std::sort(c.begin(), c.end());
    do {
        o.elements.emplace_back(c);
    } while (std::next_permutation(c.begin(), c.end()));
    o.stabilizer_shape = lefkit::stabilizer_shape(a);
    return o;
}

/// The cube [lo, hi]^k.
struct Box {
    Coord lo = 0;
    Coord hi = 0;
    std::size_t k = 1;

    Box() = default;
    Box(Coord lo_, Coord hi_, std::size_t k_) : lo(lo_), hi(hi_), k(k_) {
        if (lo > hi) throw std::invalid_argument("box requires lo <= hi");
        if (k == 0) throw std::invalid_argument("box requires k >= 1");
    }

    Coord side() const { return hi - lo + 1; }
    bool contains(const Multidegree& a) const {
        if (a.arity() != k) return false;
        for (Coord x : a.coords())
            if (x < lo || x > hi) return false;
        return true;
    }
    bool contains(const Box& other) const {
        return other.k == k && other.lo >= lo && other.hi <= hi;
    }

    /// Every point of the box in lex order.
    std::vector<Multidegree> points() const {
        std::vector<Multidegree> out;
        std::vector<Coord> c(k, lo);
        while (true) {
            out.emplace_back(c);
            std::size_t i = k;
            while (i > 0) {
                --i;
                if (c[i] < hi) {
                    ++c[i];
                    break;
                }
                c[i] = lo;
                if (i == 0) return out;
            }
        }
    }

    bool operator==(const Box&) const = default;
};

/// An S_k-stable finite set of multidegrees, stored by canonical reps.
class OrbitSet {
public:
    explicit OrbitSet(std::size_t k = 1) : k_(k) {}

    /// Accepts any points; each is replaced by its canonical rep and
    /// duplicates collapse.
    static OrbitSet from_points(std::size_t k, const std::vector<Multidegree>& pts) {
        OrbitSet s(k);
        for (const auto& p : pts) {
            if (p.arity() != k)
                throw ArityMismatch("point " + to_string(p) + " does not have arity " +
                                    std::to_string(k));
            s.reps_.push_back(canonical_rep(p));
        }
        s.normalize();
        return s;
    }

    std::size_t k() const { return k_; }
    const std::vector<Multidegree>& reps() const { return reps_; }
    std::size_t orbit_count() const { return reps_.size(); }
    bool empty() const { return reps_.empty(); }

    bool contains_orbit(const Multidegree& a) const {
        return std::binary_search(reps_.begin(), reps_.end(), canonical_rep(a));
    }

    std::vector<Orbit> orbits() const {
        std::vector<Orbit> out;
        out.reserve(reps_.size());
        for (const auto& r : reps_) out.push_back(orbit_of(r));
        return out;
    }

    std::uint64_t bundle_count() const {
        std::uint64_t n = 0;
        for (const auto& r : reps_) n += orbit_size_for_shape(stabilizer_shape(r));
        return n;
    }

    /// Flattened in the collection order: orbits by rep, then elements, both lex.
    std::vector<Multidegree> bundles() const {
        std::vector<Multidegree> out;
        for (const auto& r : reps_) {
            auto o = orbit_of(r);
            out.insert(out.end(), o.elements.begin(), o.elements.end());
        }
        return out;
    }

    bool is_subset_of(const OrbitSet& other) const {
        return k_ == other.k_ &&
               std::includes(other.reps_.begin(), other.reps_.end(), reps_.begin(), reps_.end());
    }

    OrbitSet twisted(Coord i) const {
        OrbitSet s(k_);
        for (const auto& r : reps_) s.reps_.push_back(twist(r, i));
        return s;
    }

    OrbitSet with(const Multidegree& rep) const {
        OrbitSet s = *this;
        s.reps_.push_back(canonical_rep(rep));
        s.normalize();
        return s;
    }

    OrbitSet without(const Multidegree& rep) const {
        OrbitSet s = *this;
        auto c = canonical_rep(rep);
        s.reps_.erase(std::remove(s.reps_.begin(), s.reps_.end(), c), s.reps_.end());
        return s;
    }

    bool operator==(const OrbitSet&) const = default;

private:
    void normalize() {
        std::sort(reps_.begin(), reps_.end());
        reps_.erase(std::unique(reps_.begin(), reps_.end()), reps_.end());
    }

    std::size_t k_;
    std::vector<Multidegree> reps_;
};

}  // namespace lefkit
