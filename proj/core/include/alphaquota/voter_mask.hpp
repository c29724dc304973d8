#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace alphaquota {

/// Fixed-size bitset over voters 0..n-1.
class VoterMask {
 public:
  VoterMask() = default;
  explicit VoterMask(int n) : n_(n), words_(static_cast<std::size_t>((n + 63) / 64), 0) {}

  int universe() const { return n_; }
  bool contains(int v) const { return (words_[static_cast<std::size_t>(v >> 6)] >> (v & 63)) & 1U; }
  void insert(int v) { words_[static_cast<std::size_t>(v >> 6)] |= std::uint64_t{1} << (v & 63); }
  void erase(int v) { words_[static_cast<std::size_t>(v >> 6)] &= ~(std::uint64_t{1} << (v & 63)); }

  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  bool none() const {
    for (auto w : words_)
      if (w != 0) return false;
    return true;
  }

  VoterMask& operator&=(const VoterMask& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  VoterMask& operator|=(const VoterMask& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  /// this &= ~o
  VoterMask& subtract(const VoterMask& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  /// |this & o|
  int and_count(const VoterMask& o) const {
    int c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) c += std::popcount(words_[i] & o.words_[i]);
    return c;
  }
  /// |this & o & ~minus|
  int and_not_count(const VoterMask& o, const VoterMask& minus) const {
    int c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) c += std::popcount(words_[i] & o.words_[i] & ~minus.words_[i]);
    return c;
  }
  /// out = a & b (out must have the same universe).
  static void intersect(const VoterMask& a, const VoterMask& b, VoterMask& out) {
    for (std::size_t i = 0; i < a.words_.size(); ++i) out.words_[i] = a.words_[i] & b.words_[i];
  }

  friend bool operator==(const VoterMask& a, const VoterMask& b) = default;

  std::vector<int> to_vector() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < words_.size(); ++i)
      for (auto w = words_[i]; w != 0; w &= w - 1) out.push_back(static_cast<int>(i * 64) + std::countr_zero(w));
    return out;
  }

 private:
  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace alphaquota
