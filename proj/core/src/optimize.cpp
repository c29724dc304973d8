#include "alphaquota/optimize.hpp"

#include <algorithm>

#include "alphaquota/errors.hpp"

namespace alphaquota {

std::string to_string(Method m) {
  switch (m) {
    case Method::IlpBranchAndBound:
      return "ilp_bnb";
    case Method::BruteForce:
      return "brute_force";
    case Method::DomainSpecial:
      return "domain_special";
  }
  return "?";
}

AlphaGrid alpha_grid(const Instance& inst, Axiom axiom) {
  const std::int64_t n = inst.num_voters();
  const std::int64_t k = inst.committee_size();
  AlphaGrid grid;
  grid.axiom = axiom;
  if (axiom == Axiom::JR) {
    const std::int64_t r = (n + k - 1) / k - 1;
    for (std::int64_t j = 0; j <= r; ++j) grid.values.emplace_back(j * k, n);
    return grid;
  }
  if (axiom != Axiom::EJR) throw PreconditionError("alpha grids exist for JR and EJR only");
  for (std::int64_t level = 1; level <= k; ++level) {
    const std::int64_t r = (n * level + k - 1) / k - 1;
    for (std::int64_t j = 0; j <= r; ++j) grid.values.emplace_back(j * k, level * n);
  }
  std::sort(grid.values.begin(), grid.values.end());
  grid.values.erase(std::unique(grid.values.begin(), grid.values.end()), grid.values.end());
  return grid;
}

namespace {

// Complete search for a size-k committee leaving at most `bound` uncovered
// supporters on every candidate. Covered-voter variables of the ILP are
// implicit: a voter counts as covered iff it approves a selected candidate.
class JrFeasibilitySearch {
 public:
  JrFeasibilitySearch(const Instance& inst, std::int64_t bound, std::int64_t budget)
      : inst_(inst), bound_(bound), budget_(budget), m_(inst.num_candidates()), k_(inst.committee_size()) {
    const int n = inst.num_voters();
    // unreachable_[p]: voters whose ballot has no candidate with index >= p.
    unreachable_.assign(static_cast<std::size_t>(m_) + 1, VoterMask(n));
    for (int v = 0; v < n; ++v) {
      const CandidateSet b = inst.ballot(v);
      const int last = b.empty() ? -1 : 63 - std::countl_zero(b.bits());
      for (int p = last + 1; p <= m_; ++p) unreachable_[static_cast<std::size_t>(p)].insert(v);
    }
    covered_.assign(static_cast<std::size_t>(k_) + 1, VoterMask(n));
  }

  std::optional<Committee> run() {
    if (dfs(0, 0, CandidateSet())) return found_;
    return std::nullopt;
  }

  std::int64_t nodes() const { return nodes_; }

 private:
  bool dfs(int pos, int depth, CandidateSet selected) {
    if (++nodes_ > budget_)
      throw BudgetExceeded("alpha-JR feasibility search exceeded node budget " + std::to_string(budget_));
    const VoterMask& covered = covered_[static_cast<std::size_t>(depth)];
    const int slots = k_ - depth;
    if (slots == 0) {
      for (int c = 0; c < m_; ++c) {
        if (selected.contains(c)) continue;
        if (inst_.supporters(c).and_not_count(inst_.supporters(c), covered) > bound_) return false;
      }
      found_ = selected;
      return true;
    }
    if (m_ - pos < slots) return false;
    if (!promising(pos, slots, selected, covered)) return false;

    // Include `pos` first: the first feasible leaf is the lexicographically smallest.
    VoterMask& next = covered_[static_cast<std::size_t>(depth) + 1];
    next = covered;
    next |= inst_.supporters(pos);
    CandidateSet with = selected;
    with.insert(pos);
    if (dfs(pos + 1, depth + 1, with)) return true;
    return dfs(pos + 1, depth, selected);
  }

  // Excluded candidates (index < pos, not selected) must end with at most
  // `bound_` uncovered supporters; only candidates >= pos can still help.
  bool promising(int pos, int slots, CandidateSet selected, const VoterMask& covered) const {
    const VoterMask& dead = unreachable_[static_cast<std::size_t>(pos)];
    for (int c = 0; c < pos; ++c) {
      if (selected.contains(c)) continue;
      const VoterMask& supp = inst_.supporters(c);
      const int uncovered = supp.and_not_count(supp, covered);
      if (uncovered <= bound_) continue;
      VoterMask open = supp;
      open.subtract(covered);
      if (open.and_count(dead) > bound_) return false;
      // At least `excess` of these voters must be covered by the remaining picks.
      const std::int64_t excess = uncovered - bound_;
      int best_single = 0;
      for (int d = pos; d < m_; ++d) best_single = std::max(best_single, open.and_count(inst_.supporters(d)));
      if (best_single == 0) return false;
      if ((excess + best_single - 1) / best_single > slots) return false;
    }
    return true;
  }

  const Instance& inst_;
  std::int64_t bound_;
  std::int64_t budget_;
  int m_;
  int k_;
  std::int64_t nodes_ = 0;
  std::vector<VoterMask> unreachable_;
  std::vector<VoterMask> covered_;
  Committee found_;
};

Rational jr_alpha_for_bound(const Instance& inst, std::int64_t bound) {
  return Rational((bound + 1) * inst.committee_size(), inst.num_voters());
}

}  // namespace

std::optional<Committee> exists_committee_jr(const Instance& inst, const Rational& alpha, std::int64_t node_budget,
                                             JrSearchStats* stats) {
  if (alpha.sign() <= 0) throw PreconditionError("exists_committee_jr requires alpha > 0");
  JrFeasibilitySearch search(inst, jr_uncovered_bound(inst, alpha), node_budget);
  auto result = search.run();
  if (stats) stats->nodes += search.nodes();
  return result;
}

std::optional<Committee> exists_committee_jr_brute(const Instance& inst, const Rational& alpha,
                                                   std::int64_t committee_budget) {
  if (alpha.sign() <= 0) throw PreconditionError("exists_committee_jr requires alpha > 0");
  const std::int64_t bound = jr_uncovered_bound(inst, alpha);
  std::optional<Committee> out;
  for_each_committee(inst.num_candidates(), inst.committee_size(), committee_budget, [&](Committee w) {
    if (largest_uncovered_group(inst, w).size <= bound) {
      out = w;
      return false;
    }
    return true;
  });
  return out;
}

OptimizationOutcome search_jr_grid(const Instance& inst,
                                   const std::function<std::optional<Committee>(const Rational&)>& feasible,
                                   Method method) {
  const std::int64_t n = inst.num_voters();
  const std::int64_t k = inst.committee_size();
  auto at_bound = [&](std::int64_t bound) { return feasible(jr_alpha_for_bound(inst, bound)); };
  // Feasibility is monotone in the bound, so binary search for the smallest
  // feasible bound; alpha* is then bound * k / n.
  std::int64_t lo = 0;
  std::int64_t hi = (n + k - 1) / k - 1;
  std::optional<Committee> at_hi = at_bound(hi);
  if (!at_hi) {
    lo = hi + 1;
    hi = n;
    at_hi = at_bound(hi);
    if (!at_hi) throw PreconditionError("feasibility oracle rejected the trivial bound n");
  }
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (auto w = at_bound(mid)) {
      hi = mid;
      at_hi = w;
    } else {
      lo = mid + 1;
    }
  }
  return OptimizationOutcome{Rational(hi * k, n), *at_hi, method, 0};
}

OptimizationOutcome optimal_alpha_jr(const Instance& inst, std::int64_t node_budget) {
  JrSearchStats stats;
  OptimizationOutcome out = search_jr_grid(
      inst, [&](const Rational& alpha) { return exists_committee_jr(inst, alpha, node_budget, &stats); },
      Method::IlpBranchAndBound);
  out.explored = stats.nodes;
  return out;
}

OptimizationOutcome optimal_alpha_jr_brute(const Instance& inst, std::int64_t committee_budget) {
  int best = -1;
  Committee best_w;
  std::int64_t explored = 0;
  for_each_committee(inst.num_candidates(), inst.committee_size(), committee_budget, [&](Committee w) {
    ++explored;
    const int s = largest_uncovered_group(inst, w).size;
    if (best < 0 || s < best) {
      best = s;
      best_w = w;
    }
    return best != 0;
  });
  return OptimizationOutcome{group_alpha(inst, best, 1), best_w, Method::BruteForce, explored};
}

OptimizationOutcome optimal_alpha_ejr(const Instance& inst, std::int64_t committee_budget,
                                      std::int64_t verify_budget) {
  std::optional<Rational> best;
  Committee best_w;
  std::int64_t explored = 0;
  for_each_committee(inst.num_candidates(), inst.committee_size(), committee_budget, [&](Committee w) {
    ++explored;
    if (best) {
      // alpha_JR(W) <= alpha_EJR(W); an equal value cannot beat an earlier committee.
      const int jr = largest_uncovered_group(inst, w).size;
      if (group_alpha(inst, jr, 1) >= *best) return true;
      if (auto value = alpha_ejr_if_below(inst, w, *best, verify_budget)) {
        best = *value;
        best_w = w;
      }
    } else {
      best = alpha_ejr(inst, w, verify_budget).alpha_value;
      best_w = w;
    }
    return !best->is_zero();
  });
  return OptimizationOutcome{*best, best_w, Method::BruteForce, explored};
}

OptimizationOutcome optimal_alpha_ejr_plus(const Instance& inst, std::int64_t committee_budget) {
  std::optional<Rational> best;
  Committee best_w;
  std::int64_t explored = 0;
  for_each_committee(inst.num_candidates(), inst.committee_size(), committee_budget, [&](Committee w) {
    ++explored;
    Rational value = alpha_ejr_plus(inst, w).alpha_value;
    if (!best || value < *best) {
      best = value;
      best_w = w;
    }
    return !best->is_zero();
  });
  return OptimizationOutcome{*best, best_w, Method::BruteForce, explored};
}

void export_lp(const Instance& inst, const Rational& alpha, std::ostream& out) {
  if (alpha.sign() <= 0) throw PreconditionError("export_lp requires alpha > 0");
  const int n = inst.num_voters();
  const int m = inst.num_candidates();
  const std::int64_t bound = jr_uncovered_bound(inst, alpha);
  out << "\\ alpha-JR feasibility model\n";
  out << "\\ alpha = " << alpha << ", n = " << n << ", m = " << m << ", k = " << inst.committee_size()
      << ", uncovered bound = " << bound << "\n";
  out << "Minimize\n obj: 0 x0\n";
  out << "Subject To\n";
  out << " size:";
  for (int c = 0; c < m; ++c) out << (c == 0 ? " " : " + ") << 'x' << c;
  out << " = " << inst.committee_size() << '\n';
  for (int v = 0; v < n; ++v) {
    out << " cover_v" << v << ": y" << v;
    inst.ballot(v).for_each([&](int c) { out << " - x" << c; });
    out << " <= 0\n";
  }
  // sum_{v in N_c} (1 - y_v) <= bound   <=>   - sum y_v <= bound - |N_c|
  for (int c = 0; c < m; ++c) {
    out << " uncovered_c" << c << ':';
    auto voters = inst.supporters(c).to_vector();
    if (voters.empty()) out << " 0 x" << c;
    for (int v : voters) out << " - y" << v;
    out << " <= " << bound - inst.support_size(c) << '\n';
  }
  out << "Binary\n";
  for (int c = 0; c < m; ++c) out << " x" << c << '\n';
  for (int v = 0; v < n; ++v) out << " y" << v << '\n';
  out << "End\n";
  if (!out) throw std::ios_base::failure("failed to write LP model");
}

}  // namespace alphaquota
