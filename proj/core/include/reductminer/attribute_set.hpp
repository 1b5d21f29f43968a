#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>

namespace reductminer {

/// Set of conditional-attribute indices as a 64-bit mask.
/// Closed under union/intersection/difference; capacity is 64 attributes,
/// which bounds the width of any table the engine accepts.
class AttributeSet {
public:
    static constexpr int kCapacity = 64;

    constexpr AttributeSet() = default;

    AttributeSet(std::initializer_list<int> indices) {
        for (int i : indices) add(i);
    }

    static AttributeSet full(int attribute_count) {
        check_index(attribute_count == 0 ? 0 : attribute_count - 1);
        AttributeSet s;
        s.bits_ = attribute_count == 0
                      ? 0
                      : (attribute_count == kCapacity
                             ? ~std::uint64_t{0}
                             : (std::uint64_t{1} << attribute_count) - 1);
        return s;
    }

    static AttributeSet singleton(int index) {
        AttributeSet s;
        s.add(index);
        return s;
    }

    static AttributeSet from_bits(std::uint64_t bits) {
        AttributeSet s;
        s.bits_ = bits;
        return s;
    }

    void add(int index) {
        check_index(index);
        bits_ |= std::uint64_t{1} << index;
    }

    void remove(int index) {
        check_index(index);
        bits_ &= ~(std::uint64_t{1} << index);
    }

    bool contains(int index) const {
        return index >= 0 && index < kCapacity &&
               (bits_ >> index & 1) != 0;
    }

    bool empty() const { return bits_ == 0; }
    int count() const { return std::popcount(bits_); }
    std::uint64_t bits() const { return bits_; }

    bool subset_of(AttributeSet other) const {
        return (bits_ & ~other.bits_) == 0;
    }

    AttributeSet operator|(AttributeSet o) const { return from_bits(bits_ | o.bits_); }
    AttributeSet operator&(AttributeSet o) const { return from_bits(bits_ & o.bits_); }
    AttributeSet operator-(AttributeSet o) const { return from_bits(bits_ & ~o.bits_); }
    AttributeSet& operator|=(AttributeSet o) { bits_ |= o.bits_; return *this; }
    AttributeSet& operator&=(AttributeSet o) { bits_ &= o.bits_; return *this; }
    AttributeSet& operator-=(AttributeSet o) { bits_ &= ~o.bits_; return *this; }

    bool operator==(const AttributeSet&) const = default;

    /// Calls fn(index) for every member, ascending.
    template <typename Fn>
    void for_each(Fn&& fn) const {
        std::uint64_t b = bits_;
        while (b != 0) {
            fn(std::countr_zero(b));
            b &= b - 1;
        }
    }

    int lowest() const {
        return bits_ == 0 ? -1 : std::countr_zero(bits_);
    }

private:
    static void check_index(int index) {
        if (index < 0 || index >= kCapacity)
            throw std::out_of_range("attribute index out of range: " +
                                    std::to_string(index));
    }

    std::uint64_t bits_ = 0;
};

}  // namespace reductminer

template <>
struct std::hash<reductminer::AttributeSet> {
    std::size_t operator()(const reductminer::AttributeSet& s) const noexcept {
        return std::hash<std::uint64_t>{}(s.bits());
    }
};
