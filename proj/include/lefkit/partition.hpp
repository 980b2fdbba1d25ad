#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace lefkit {

/// A Young diagram: weakly decreasing, strictly positive parts.
class Partition {
public:
    Partition() = default;
    Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}
    explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (parts_[i] <= 0)
                throw std::invalid_argument("partition parts must be positive");
            if (i > 0 && parts_[i] > parts_[i - 1])
                throw std::invalid_argument("partition parts must be weakly decreasing");
        }
    }

    const std::vector<int>& parts() const { return parts_; }
    int size() const {
        int s = 0;
        for (int p : parts_) s += p;
        return s;
    }
    int rows() const { return static_cast<int>(parts_.size()); }
    int operator[](std::size_t i) const { return i < parts_.size() ? parts_[i] : 0; }

    Partition transpose() const {
        std::vector<int> t;
        if (parts_.empty()) return {};
        for (int c = 1; c <= parts_.front(); ++c) {
            int height = 0;
            for (int p : parts_)
                if (p >= c) ++height;
            t.push_back(height);
        }
        return Partition(std::move(t));
    }

    /// Dominance order: this >= other iff every prefix sum is >= (equal sizes).
    bool dominates(const Partition& other) const {
        int a = 0, b = 0;
        std::size_t len = std::max(parts_.size(), other.parts_.size());
        for (std::size_t i = 0; i < len; ++i) {
            a += (*this)[i];
            b += other[i];
            if (a < b) return false;
        }
        return true;
    }

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(parts_[i]);
        }
        return s + ")";
    }

    auto operator<=>(const Partition&) const = default;
    bool operator==(const Partition&) const = default;

private:
    std::vector<int> parts_;
};

/// All partitions of k in decreasing lexicographic order: (k), (k-1,1), ...
inline std::vector<Partition> partitions_of(int k) {
    std::vector<Partition> out;
    if (k < 0) return out;
    if (k == 0) {
        out.emplace_back();
        return out;
    }
    std::vector<int> cur;
    auto rec = [&](auto&& self, int remaining, int max_part) -> void {
        if (remaining == 0) {
            out.emplace_back(cur);
            return;
        }
        for (int p = std::min(remaining, max_part); p >= 1; --p) {
            cur.push_back(p);
            self(self, remaining - p, p);
            cur.pop_back();
        }
    };
    rec(rec, k, k);
    return out;
}

/// Number of integer partitions p(m).
inline std::uint64_t partition_count(int m) {
    if (m < 0) return 0;
    std::vector<std::uint64_t> p(static_cast<std::size_t>(m) + 1, 0);
    p[0] = 1;
    for (int part = 1; part <= m; ++part)
        for (int s = part; s <= m; ++s) p[s] += p[s - part];
    return p[m];
}

}  // namespace lefkit
