#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alphaquota/candidate_set.hpp"
#include "alphaquota/rational.hpp"
#include "alphaquota/voter_mask.hpp"

namespace alphaquota {

/// An approval election: n ballots over m candidates, electing k.
///
/// Voters and candidates are 0-indexed. Ballots may be empty. Immutable after
/// construction; every accessor is safe to call from concurrent readers.
class Instance {
 public:
  /// Validates k <= m, m <= 64, every index in [0, m). Throws ValidationError.
  Instance(int num_candidates, int committee_size, std::vector<CandidateSet> ballots);

  int num_voters() const { return static_cast<int>(ballots_.size()); }
  int num_candidates() const { return m_; }
  int committee_size() const { return k_; }

  CandidateSet ballot(int voter) const { return ballots_[static_cast<std::size_t>(voter)]; }
  std::span<const CandidateSet> ballots() const { return ballots_; }
  /// N_c as a voter bitset.
  const VoterMask& supporters(int candidate) const { return supporters_[static_cast<std::size_t>(candidate)]; }
  int support_size(int candidate) const { return support_size_[static_cast<std::size_t>(candidate)]; }
  CandidateSet all_candidates() const { return CandidateSet::full(m_); }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.m_ == b.m_ && a.k_ == b.k_ && a.ballots_ == b.ballots_;
  }

 private:
  int m_;
  int k_;
  std::vector<CandidateSet> ballots_;
  std::vector<VoterMask> supporters_;
  std::vector<int> support_size_;
};

/// A committee is a candidate subset; rule outputs have exactly k members.
using Committee = CandidateSet;

/// Throws ValidationError unless `w` has exactly k members within [0, m).
void require_committee(const Instance& inst, Committee w);

enum class Axiom { JR, EJR, EJRPlus };

std::string to_string(Axiom a);
/// Accepts "jr", "ejr", "ejrplus" / "ejr+" (case-insensitive).
Axiom parse_axiom(std::string_view text);

/// Witness (S, T, level) of an alpha-axiom violation.
///
/// For JR and EJR every voter in `voters` approves all of `candidates` and
/// approves fewer than `level` committee members. For EJR+ `candidates` is the
/// single uncovered common candidate. `alpha` = |S| * k / (level * n), the
/// largest alpha at which the triple still violates.
struct Violation {
  std::vector<int> voters;
  CandidateSet candidates;
  int level = 1;
  Rational alpha;
};

enum class Format { Json, Plain };

Format parse_format(std::string_view text);

/// JSON: {"n":..,"m":..,"k":..,"approvals":[[..],..]}.
/// Plain: first line "n m k", then one line per voter of space-separated
/// candidate indices (blank line = empty ballot).
/// Throws ParseError (with line number for plain) or ValidationError.
Instance parse_instance(std::string_view text, Format format);
Instance load_instance(const std::string& path);  // format from extension: .json, else plain
std::string serialize_instance(const Instance& inst, Format format);

/// alpha * level * n / k: the minimum size of an (alpha, level)-cohesive group.
Rational quota(const Instance& inst, const Rational& alpha, int level);

/// Uncovered-supporter bound for alpha-JR feasibility: ceil(alpha * n / k) - 1.
std::int64_t jr_uncovered_bound(const Instance& inst, const Rational& alpha);

}  // namespace alphaquota
