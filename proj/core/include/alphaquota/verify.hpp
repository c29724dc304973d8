#pragma once

#include <cstdint>
#include <optional>

#include "alphaquota/instance.hpp"

namespace alphaquota {

inline constexpr std::int64_t kDefaultEjrEnumerationBudget = 10'000'000;

/// alpha_axiom(W): the largest alpha at which W still has a violation
/// (0 when no group can complain). `witness` is present iff the value is > 0.
struct AxiomResult {
  Axiom axiom = Axiom::JR;
  Rational alpha_value;
  std::optional<Violation> witness;
};

struct JrSmax {
  int size = 0;
  std::optional<int> candidate;  // lowest-index candidate attaining `size`
};

/// max over c outside W of |{v : A_v and W disjoint, c in A_v}|. Requires |W| = k.
JrSmax s_max_jr(const Instance& inst, Committee w);

/// Same count for an arbitrary candidate set (greedy constructions use it on
/// sets of any size).
JrSmax largest_uncovered_group(const Instance& inst, CandidateSet w);

AxiomResult alpha_jr(const Instance& inst, Committee w);

struct EjrSmax {
  int size = 0;
  CandidateSet candidates;  // lexicographically smallest attaining T; empty if size == 0
};

/// Largest number of voters with fewer than `level` committee members who
/// all approve some common `level`-subset T. Exact; throws BudgetExceeded
/// when C(m, level) exceeds `budget`.
EjrSmax s_max_ejr(const Instance& inst, Committee w, int level,
                  std::int64_t budget = kDefaultEjrEnumerationBudget);

AxiomResult alpha_ejr(const Instance& inst, Committee w, std::int64_t budget = kDefaultEjrEnumerationBudget);

/// Polynomial: scans every (c outside W, level) pair.
AxiomResult alpha_ejr_plus(const Instance& inst, Committee w);

AxiomResult alpha_value(const Instance& inst, Committee w, Axiom axiom,
                        std::int64_t budget = kDefaultEjrEnumerationBudget);

/// True iff alpha > alpha_axiom(W). Always false at alpha = 0.
bool satisfies(const Instance& inst, Committee w, const Rational& alpha, Axiom axiom,
               std::int64_t budget = kDefaultEjrEnumerationBudget);

/// alpha_EJR(W) when it is strictly below `cutoff`, otherwise nullopt.
/// Stops as soon as a violation at or above `cutoff` is found, so committee
/// minimisation can discard a candidate early.
std::optional<Rational> alpha_ejr_if_below(const Instance& inst, Committee w, const Rational& cutoff,
                                           std::int64_t budget = kDefaultEjrEnumerationBudget);

/// k / (level * n) scaled group size: the alpha attained by a group of `size` voters.
Rational group_alpha(const Instance& inst, int size, int level);

}  // namespace alphaquota
