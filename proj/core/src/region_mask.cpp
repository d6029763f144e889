#include "ksector/region_mask.hpp"

#include <string>

#include "ksector/error.hpp"

namespace ksector {

RegionMask::RegionMask(std::size_t size, bool value)
    : size_(size), words_((size + 63) / 64, value ? ~std::uint64_t{0} : std::uint64_t{0}) {
  clear_padding();
}

RegionMask RegionMask::from_indices(std::size_t size, const std::vector<std::size_t>& indices) {
  RegionMask mask(size);
  for (std::size_t i : indices) {
    if (i >= size)
      throw Error(ErrorCode::DimensionMismatch,
                  "index " + std::to_string(i) + " outside space of size " + std::to_string(size));
    mask.set(i);
  }
  return mask;
}

bool RegionMask::empty() const noexcept {
  for (std::uint64_t w : words_)
    if (w != 0) return false;
  return true;
}

std::size_t RegionMask::count() const noexcept {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

void RegionMask::require_same_size(const RegionMask& other) const {
  if (size_ != other.size_)
    throw Error(ErrorCode::DimensionMismatch,
                "mask sizes " + std::to_string(size_) + " and " + std::to_string(other.size_));
}

void RegionMask::clear_padding() noexcept {
  if (const std::size_t tail = size_ & 63; tail != 0 && !words_.empty())
    words_.back() &= (std::uint64_t{1} << tail) - 1;
}

RegionMask& RegionMask::operator&=(const RegionMask& other) {
  require_same_size(other);
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
  return *this;
}

RegionMask& RegionMask::operator|=(const RegionMask& other) {
  require_same_size(other);
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
  return *this;
}

RegionMask& RegionMask::operator^=(const RegionMask& other) {
  require_same_size(other);
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

RegionMask& RegionMask::subtract(const RegionMask& other) {
  require_same_size(other);
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~other.words_[w];
  return *this;
}

RegionMask RegionMask::operator~() const {
  RegionMask out = *this;
  for (std::uint64_t& w : out.words_) w = ~w;
  out.clear_padding();
  return out;
}

bool RegionMask::subset_of(const RegionMask& other) const {
  require_same_size(other);
  for (std::size_t w = 0; w < words_.size(); ++w)
    if ((words_[w] & ~other.words_[w]) != 0) return false;
  return true;
}

bool RegionMask::intersects(const RegionMask& other) const {
  require_same_size(other);
  for (std::size_t w = 0; w < words_.size(); ++w)
    if ((words_[w] & other.words_[w]) != 0) return true;
  return false;
}

std::vector<std::size_t> RegionMask::indices() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for_each([&](std::size_t i) { out.push_back(i); });
  return out;
}

}  // namespace ksector
