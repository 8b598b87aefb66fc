#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace balis {

/// Fixed-width bitset sized at runtime. Bits past size() are kept zero.
class Bitset {
 public:
  using word_type = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  Bitset() = default;
  explicit Bitset(std::size_t size) : size_(size), words_((size + kWordBits - 1) / kWordBits, 0) {}

  std::size_t size() const { return size_; }

  bool test(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set(std::size_t i) { words_[i / kWordBits] |= word_type{1} << (i % kWordBits); }
  void reset(std::size_t i) { words_[i / kWordBits] &= ~(word_type{1} << (i % kWordBits)); }
  void assign(std::size_t i, bool value) {
    if (value)
      set(i);
    else
      reset(i);
  }

  void set_all() {
    for (auto& w : words_) w = ~word_type{0};
    trim();
  }
  void reset_all() {
    for (auto& w : words_) w = 0;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool none() const {
    for (auto w : words_)
      if (w != 0) return false;
    return true;
  }
  bool any() const { return !none(); }

  Bitset& operator&=(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  Bitset& operator|=(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  /// this &= ~o
  Bitset& and_not(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
    return *this;
  }

  std::size_t intersection_count(const Bitset& o) const {
    std::size_t c = 0;
    for (std::size_t k = 0; k < words_.size(); ++k)
      c += static_cast<std::size_t>(std::popcount(words_[k] & o.words_[k]));
    return c;
  }

  /// Index of the first set bit at or after `from`, or size() if none.
  std::size_t find_next(std::size_t from) const {
    if (from >= size_) return size_;
    std::size_t k = from / kWordBits;
    word_type w = words_[k] & (~word_type{0} << (from % kWordBits));
    while (true) {
      if (w != 0) return k * kWordBits + static_cast<std::size_t>(std::countr_zero(w));
      if (++k == words_.size()) return size_;
      w = words_[k];
    }
  }
  std::size_t find_first() const { return find_next(0); }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      word_type w = words_[k];
      while (w != 0) {
        f(k * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> to_indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  std::span<const word_type> words() const { return words_; }

  friend bool operator==(const Bitset&, const Bitset&) = default;

 private:
  void trim() {
    if (size_ % kWordBits != 0) words_.back() &= (word_type{1} << (size_ % kWordBits)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<word_type> words_;
};

}  // namespace balis
