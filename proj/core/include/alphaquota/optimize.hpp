#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "alphaquota/detail/combinatorics.hpp"
#include "alphaquota/instance.hpp"
#include "alphaquota/verify.hpp"

namespace alphaquota {

inline constexpr std::int64_t kDefaultNodeBudget = 50'000'000;
inline constexpr std::int64_t kDefaultCommitteeBudget = 1'000'000;

/// Candidate alpha-values that can be optimal. Ascending, distinct.
///
/// JR:  {0, k/n, 2k/n, ..., r*k/n} with r = ceil(n/k) - 1.
/// EJR: union over level in [1, k] of {j*k/(level*n) : 0 <= j <= ceil(n*level/k) - 1}.
struct AlphaGrid {
  Axiom axiom = Axiom::JR;
  std::vector<Rational> values;
};

AlphaGrid alpha_grid(const Instance& inst, Axiom axiom);

enum class Method { IlpBranchAndBound, BruteForce, DomainSpecial };
std::string to_string(Method m);

struct OptimizationOutcome {
  Rational alpha_star;
  Committee committee;
  Method method = Method::IlpBranchAndBound;
  std::int64_t explored = 0;  // search nodes or enumerated committees
};

struct JrSearchStats {
  std::int64_t nodes = 0;
};

/// Size-k committee leaving at most ceil(alpha*n/k) - 1 uncovered supporters
/// on every candidate (i.e. satisfying alpha-JR), or nullopt if none exists.
/// Depth-first branch and bound over candidate inclusion; the first feasible
/// committee in lexicographic order is returned. Requires alpha > 0.
std::optional<Committee> exists_committee_jr(const Instance& inst, const Rational& alpha,
                                             std::int64_t node_budget = kDefaultNodeBudget,
                                             JrSearchStats* stats = nullptr);

/// Same feasibility question decided by enumerating all size-k committees.
std::optional<Committee> exists_committee_jr_brute(const Instance& inst, const Rational& alpha,
                                                   std::int64_t committee_budget = kDefaultCommitteeBudget);

/// alpha*_JR via binary search over the JR grid with the branch-and-bound
/// feasibility search. Ties resolve to the lexicographically smallest committee.
OptimizationOutcome optimal_alpha_jr(const Instance& inst, std::int64_t node_budget = kDefaultNodeBudget);

/// Binary search over the JR grid with an arbitrary monotone feasibility
/// oracle: `feasible(alpha)` returns a committee with at most
/// ceil(alpha*n/k) - 1 uncovered supporters per candidate, or nullopt.
OptimizationOutcome search_jr_grid(const Instance& inst,
                                   const std::function<std::optional<Committee>(const Rational&)>& feasible,
                                   Method method);

/// alpha*_JR by evaluating alpha_jr on every committee.
OptimizationOutcome optimal_alpha_jr_brute(const Instance& inst,
                                           std::int64_t committee_budget = kDefaultCommitteeBudget);

/// alpha*_EJR by committee enumeration. A committee is discarded as soon as
/// its alpha_JR lower bound, or any EJR violation found so far, reaches the
/// incumbent. Ties resolve to the lexicographically smallest committee.
OptimizationOutcome optimal_alpha_ejr(const Instance& inst, std::int64_t committee_budget = kDefaultCommitteeBudget,
                                      std::int64_t verify_budget = kDefaultEjrEnumerationBudget);

/// min over committees of alpha_EJR+(W), by enumeration.
OptimizationOutcome optimal_alpha_ejr_plus(const Instance& inst,
                                           std::int64_t committee_budget = kDefaultCommitteeBudget);

/// Writes the alpha-JR feasibility ILP in LP text format (Minimize /
/// Subject To / Binary / End). Variables x<c> (committee) and y<v> (covered).
void export_lp(const Instance& inst, const Rational& alpha, std::ostream& out);

/// Calls f(W) on every size-k subset of {0..m-1} in lexicographic order.
/// Stops early when f returns false. Throws BudgetExceeded if C(m, k) > budget.
template <class F>
void for_each_committee(int m, int k, std::int64_t budget, F&& f);

}  // namespace alphaquota

#include "alphaquota/detail/committee_enum.hpp"
