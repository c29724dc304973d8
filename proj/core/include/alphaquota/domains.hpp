#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alphaquota/instance.hpp"
#include "alphaquota/optimize.hpp"
#include "alphaquota/verify.hpp"

namespace alphaquota {

// Party lists ----------------------------------------------------------------

struct Party {
  std::vector<int> voters;
  CandidateSet candidates;
};

/// Voters with non-empty ballots grouped by identical ballots, in order of
/// first appearance.
struct PartyStructure {
  std::vector<Party> parties;
  std::vector<int> sizes() const;
};

struct PartyListCheck {
  std::optional<PartyStructure> structure;
  /// Two voters whose ballots overlap without being equal, or the same voter
  /// twice when its ballot has fewer than k candidates.
  std::optional<std::pair<int, int>> counterexample;
  std::string reason;
};

PartyListCheck detect_party_list(const Instance& inst);

/// Seats go one by one to the party maximising s_p / (w_p + 1), ties to the
/// lower party index; alpha* = max over unsaturated parties of s_p*k/((w_p+1)*n).
OptimizationOutcome party_list_optimal_ejr(const Instance& inst, const PartyStructure& parties);

// Interval domains -------------------------------------------------------------

enum class OrderKind { VoterInterval, CandidateInterval };

/// VI: permutation of voters making every supporter set contiguous.
/// CI: permutation of candidates making every ballot contiguous.
std::optional<std::vector<int>> recognize_vi(const Instance& inst);
std::optional<std::vector<int>> recognize_ci(const Instance& inst);

/// An order of {0..ground-1} in which every listed set is contiguous, if
/// one exists (consecutive-ones property).
std::optional<std::vector<int>> consecutive_ones_order(int ground, const std::vector<std::vector<int>>& sets);

bool verify_order(const Instance& inst, const std::vector<int>& order, OrderKind kind);

/// Smallest candidate set without an alpha-JR violation, built by a sweep
/// over the voter order (may exceed k). Requires a verified VI order, alpha > 0.
CandidateSet vi_greedy_jr(const Instance& inst, const std::vector<int>& order, const Rational& alpha);

/// Smallest candidate set without an alpha-JR violation, obtained by
/// dropping candidates in order from the full set. Requires a verified CI order.
CandidateSet ci_greedy_jr(const Instance& inst, const std::vector<int>& order, const Rational& alpha);

OptimizationOutcome vi_optimal_alpha_jr(const Instance& inst, const std::vector<int>& order);
OptimizationOutcome ci_optimal_alpha_jr(const Instance& inst, const std::vector<int>& order);

/// alpha_EJR(W) by scanning contiguous voter intervals (VI) or candidate intervals (CI).
AxiomResult vi_alpha_ejr(const Instance& inst, const std::vector<int>& order, Committee w);
AxiomResult ci_alpha_ejr(const Instance& inst, const std::vector<int>& order, Committee w);

/// alpha*_EJR by committee enumeration using the interval verifier.
OptimizationOutcome interval_optimal_alpha_ejr(const Instance& inst, const std::vector<int>& order, OrderKind kind,
                                               std::int64_t committee_budget = kDefaultCommitteeBudget);

// Routing ----------------------------------------------------------------------

enum class DomainChoice { Auto, General, PartyList, VoterInterval, CandidateInterval };
DomainChoice parse_domain_choice(std::string_view text);

struct DomainReport {
  PartyListCheck party_list;
  std::optional<std::vector<int>> voter_order;
  std::optional<std::vector<int>> candidate_order;
};

DomainReport analyze_domains(const Instance& inst);

/// Optimal alpha for JR or EJR through the requested domain algorithm.
/// Auto uses the party-list algorithm (EJR), then VI, then CI, then the
/// general search. An explicit domain that does not apply throws
/// PreconditionError.
OptimizationOutcome optimal_alpha(const Instance& inst, Axiom axiom, DomainChoice domain = DomainChoice::Auto);

}  // namespace alphaquota
