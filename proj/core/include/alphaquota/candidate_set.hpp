#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace alphaquota {

inline constexpr int kMaxCandidates = 64;

/// Subset of {0, ..., 63} stored as a single machine word.
class CandidateSet {
 public:
  constexpr CandidateSet() = default;
  constexpr explicit CandidateSet(std::uint64_t bits) : bits_(bits) {}
  CandidateSet(std::initializer_list<int> members) {
    for (int c : members) insert(c);
  }
  static CandidateSet from(std::span<const int> members) {
    CandidateSet s;
    for (int c : members) s.insert(c);
    return s;
  }
  /// {0, ..., m-1}
  static constexpr CandidateSet full(int m) {
    return CandidateSet(m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1);
  }

  constexpr bool contains(int c) const { return (bits_ >> c) & 1U; }
  constexpr void insert(int c) { bits_ |= std::uint64_t{1} << c; }
  constexpr void erase(int c) { bits_ &= ~(std::uint64_t{1} << c); }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint64_t bits() const { return bits_; }

  constexpr bool subset_of(CandidateSet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr int intersection_size(CandidateSet o) const { return std::popcount(bits_ & o.bits_); }
  constexpr bool intersects(CandidateSet o) const { return (bits_ & o.bits_) != 0; }

  friend constexpr CandidateSet operator&(CandidateSet a, CandidateSet b) { return CandidateSet(a.bits_ & b.bits_); }
  friend constexpr CandidateSet operator|(CandidateSet a, CandidateSet b) { return CandidateSet(a.bits_ | b.bits_); }
  /// Set difference.
  friend constexpr CandidateSet operator-(CandidateSet a, CandidateSet b) { return CandidateSet(a.bits_ & ~b.bits_); }
  friend constexpr bool operator==(CandidateSet a, CandidateSet b) = default;

  /// Smallest member, or -1 when empty.
  constexpr int first() const { return bits_ == 0 ? -1 : std::countr_zero(bits_); }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (auto b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  /// Calls f(c) for every member in ascending order.
  template <class F>
  constexpr void for_each(F&& f) const {
    for (auto b = bits_; b != 0; b &= b - 1) f(std::countr_zero(b));
  }

  /// Comma-separated indices, e.g. "0,2,5"; `offset` shifts every index.
  std::string to_string(int offset = 0) const;

 private:
  std::uint64_t bits_ = 0;
};

/// Lexicographic order of the ascending member lists ("0,1" < "0,2" < "1,2").
bool lex_less(CandidateSet a, CandidateSet b);

/// Parses the committee argument format "0,2,5". Rejects duplicates and
/// indices outside [0, m).
CandidateSet parse_candidate_list(const std::string& text, int m);

}  // namespace alphaquota
