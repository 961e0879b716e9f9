#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>

namespace mdagkit {

// A set of vertex indices backed by a 64-bit mask.  Graphs in this library
// are capped at 64 vertices, which is far beyond the combinatorial sizes the
// algorithms are designed for.
class VSet {
public:
    constexpr VSet() = default;
    constexpr explicit VSet(std::uint64_t bits) : bits_(bits) {}
    constexpr VSet(std::initializer_list<int> ids) {
        for (int i : ids) bits_ |= bit(i);
    }

    static constexpr VSet single(int i) { return VSet(bit(i)); }
    static constexpr VSet first_n(int n) {
        return VSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
    }

    constexpr bool contains(int i) const { return (bits_ & bit(i)) != 0; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr int count() const { return std::popcount(bits_); }
    constexpr std::uint64_t bits() const { return bits_; }

    constexpr void add(int i) { bits_ |= bit(i); }
    constexpr void remove(int i) { bits_ &= ~bit(i); }

    constexpr VSet operator|(VSet o) const { return VSet(bits_ | o.bits_); }
    constexpr VSet operator&(VSet o) const { return VSet(bits_ & o.bits_); }
    constexpr VSet operator-(VSet o) const { return VSet(bits_ & ~o.bits_); }
    constexpr VSet& operator|=(VSet o) { bits_ |= o.bits_; return *this; }
    constexpr VSet& operator&=(VSet o) { bits_ &= o.bits_; return *this; }
    constexpr VSet& operator-=(VSet o) { bits_ &= ~o.bits_; return *this; }

    constexpr bool operator==(const VSet&) const = default;
    constexpr bool subset_of(VSet o) const { return (bits_ & ~o.bits_) == 0; }
    constexpr bool intersects(VSet o) const { return (bits_ & o.bits_) != 0; }
    constexpr bool disjoint(VSet o) const { return (bits_ & o.bits_) == 0; }

    constexpr int lowest() const { return std::countr_zero(bits_); }

    // Iterates set members in increasing index order.
    class iterator {
    public:
        constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
        constexpr int operator*() const { return std::countr_zero(rest_); }
        constexpr iterator& operator++() { rest_ &= rest_ - 1; return *this; }
        constexpr bool operator!=(const iterator& o) const { return rest_ != o.rest_; }
    private:
        std::uint64_t rest_;
    };
    constexpr iterator begin() const { return iterator(bits_); }
    constexpr iterator end() const { return iterator(0); }

private:
    static constexpr std::uint64_t bit(int i) { return std::uint64_t{1} << i; }
    std::uint64_t bits_ = 0;
};

// Calls f(VSet) for every subset of base, including the empty set and base
// itself.  Enumeration order is the standard descending submask walk, so it
// is deterministic but not sorted by size.
template <typename F>
void for_each_subset(VSet base, F&& f) {
    std::uint64_t b = base.bits();
    std::uint64_t s = b;
    while (true) {
        f(VSet(s));
        if (s == 0) break;
        s = (s - 1) & b;
    }
}

}  // namespace mdagkit
