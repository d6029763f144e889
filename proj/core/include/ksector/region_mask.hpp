#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace ksector {

/// A subset of a discrete space with `size()` points, stored as a packed bitset.
///
/// Points are addressed by their linear index; for grids this is `y * width + x`.
/// All binary operations require equal sizes and throw DimensionMismatch otherwise.
class RegionMask {
 public:
  RegionMask() = default;
  explicit RegionMask(std::size_t size, bool value = false);

  static RegionMask from_indices(std::size_t size, const std::vector<std::size_t>& indices);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept;  // no member set
  std::size_t count() const noexcept;

  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool value = true) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value)
      words_[i >> 6] |= bit;
    else
      words_[i >> 6] &= ~bit;
  }

  RegionMask& operator&=(const RegionMask& other);
  RegionMask& operator|=(const RegionMask& other);
  RegionMask& operator^=(const RegionMask& other);
  /// Removes every member of `other`.
  RegionMask& subtract(const RegionMask& other);

  friend RegionMask operator&(RegionMask a, const RegionMask& b) { return a &= b; }
  friend RegionMask operator|(RegionMask a, const RegionMask& b) { return a |= b; }
  friend RegionMask operator^(RegionMask a, const RegionMask& b) { return a ^= b; }
  RegionMask operator~() const;

  bool subset_of(const RegionMask& other) const;
  bool intersects(const RegionMask& other) const;
  bool operator==(const RegionMask& other) const = default;

  std::vector<std::size_t> indices() const;

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int b = std::countr_zero(bits);
        fn(w * 64 + static_cast<std::size_t>(b));
        bits &= bits - 1;
      }
    }
  }

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

 private:
  void require_same_size(const RegionMask& other) const;
  void clear_padding() noexcept;

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace ksector
