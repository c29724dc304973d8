#include "alphaquota/verify.hpp"

#include <vector>

#include "alphaquota/detail/combinatorics.hpp"
#include "alphaquota/errors.hpp"

namespace alphaquota {

namespace {

// Exhaustive search for common approval sets T among voters that are
// deficient at a given level. Candidates are tried in index order, so the
// first T reaching a new maximum is the lexicographically smallest one.
class EjrSearch {
 public:
  EjrSearch(const Instance& inst, Committee w, std::int64_t budget)
      : inst_(inst), budget_(budget), satisfaction_(static_cast<std::size_t>(inst.num_voters())) {
    for (int v = 0; v < inst.num_voters(); ++v)
      satisfaction_[static_cast<std::size_t>(v)] = inst.ballot(v).intersection_size(w);
  }

  struct Best {
    int count = 0;
    int level = 0;
    CandidateSet candidates;
    VoterMask voters;
  };

  // Searches `level` for T with deficient support >= need, maximising the
  // support. Returns true and fills `best` if such a T exists. When
  // `stop_at` > 0, returns as soon as support >= stop_at is reached.
  bool search_level(int level, int need, int stop_at, Best& best) {
    const int m = inst_.num_candidates();
    const int n = inst_.num_voters();
    if (binomial(m, level, budget_) > budget_)
      throw BudgetExceeded("EJR verification at level " + std::to_string(level) + " needs C(" + std::to_string(m) +
                           ", " + std::to_string(level) + ") subsets, above budget " + std::to_string(budget_));
    VoterMask deficient(n);
    for (int v = 0; v < n; ++v) {
      if (satisfaction_[static_cast<std::size_t>(v)] < level && inst_.ballot(v).size() >= level) deficient.insert(v);
    }
    if (deficient.count() < need) return false;
    filtered_.assign(static_cast<std::size_t>(m), VoterMask());
    usable_.clear();
    for (int c = 0; c < m; ++c) {
      VoterMask s = inst_.supporters(c);
      s &= deficient;
      if (s.count() >= need) usable_.push_back(c);
      filtered_[static_cast<std::size_t>(c)] = std::move(s);
    }
    if (static_cast<int>(usable_.size()) < level) return false;
    stack_.assign(static_cast<std::size_t>(level) + 1, VoterMask(n));
    stack_[0] = deficient;
    level_ = level;
    need_ = need;
    stop_at_ = stop_at;
    found_ = false;
    stopped_ = false;
    best_ = &best;
    chosen_ = CandidateSet();
    dfs(0, 0);
    return found_;
  }

  bool stopped() const { return stopped_; }

  int satisfaction(int v) const { return satisfaction_[static_cast<std::size_t>(v)]; }

 private:
  void dfs(std::size_t start, int depth) {
    const std::size_t remaining_needed = static_cast<std::size_t>(level_ - depth);
    for (std::size_t i = start; i + remaining_needed <= usable_.size(); ++i) {
      if (stopped_) return;
      if (++nodes_ > budget_)
        throw BudgetExceeded("EJR verification exceeded node budget " + std::to_string(budget_));
      const int c = usable_[i];
      VoterMask& next = stack_[static_cast<std::size_t>(depth) + 1];
      VoterMask::intersect(stack_[static_cast<std::size_t>(depth)], filtered_[static_cast<std::size_t>(c)], next);
      const int count = next.count();
      if (count < need_) continue;
      chosen_.insert(c);
      if (depth + 1 == level_) {
        best_->count = count;
        best_->level = level_;
        best_->candidates = chosen_;
        best_->voters = next;
        found_ = true;
        need_ = count + 1;
        if (stop_at_ > 0 && count >= stop_at_) stopped_ = true;
      } else {
        dfs(i + 1, depth + 1);
      }
      chosen_.erase(c);
    }
  }

  const Instance& inst_;
  std::int64_t budget_;
  std::int64_t nodes_ = 0;
  std::vector<int> satisfaction_;
  std::vector<VoterMask> filtered_;
  std::vector<int> usable_;
  std::vector<VoterMask> stack_;
  int level_ = 0;
  int need_ = 0;
  int stop_at_ = 0;
  bool found_ = false;
  bool stopped_ = false;
  Best* best_ = nullptr;
  CandidateSet chosen_;
};

AxiomResult make_result(const Instance& inst, Axiom axiom, int count, int level, CandidateSet t,
                        std::vector<int> voters) {
  AxiomResult r;
  r.axiom = axiom;
  if (count == 0) return r;
  r.alpha_value = group_alpha(inst, count, level);
  r.witness = Violation{std::move(voters), t, level, r.alpha_value};
  return r;
}

struct EjrOutcome {
  bool aborted = false;  // a violation at or above the cutoff exists
  EjrSearch::Best best;
};

// Maximises count/level over levels 1..k. With a cutoff, aborts once some
// (T, level) reaches count >= cutoff * level * n / k.
EjrOutcome run_alpha_ejr(const Instance& inst, Committee w, const std::optional<Rational>& cutoff,
                         std::int64_t budget) {
  EjrSearch search(inst, w, budget);
  EjrOutcome out;
  const int k = inst.committee_size();
  for (int level = 1; level <= k; ++level) {
    int need = 1;
    if (out.best.count > 0) {
      // Strictly better ratio: count * best.level > best.count * level.
      need = static_cast<int>((static_cast<std::int64_t>(out.best.count) * level) / out.best.level) + 1;
    }
    int stop_at = 0;
    if (cutoff) {
      std::int64_t q = quota(inst, *cutoff, level).ceil();
      if (q <= 0) q = 1;
      if (q <= inst.num_voters()) stop_at = static_cast<int>(q);
      else stop_at = inst.num_voters() + 1;
    }
    EjrSearch::Best candidate;
    if (search.search_level(level, need, stop_at, candidate)) {
      out.best = candidate;
      if (search.stopped()) {
        out.aborted = true;
        return out;
      }
    }
  }
  return out;
}

}  // namespace

Rational group_alpha(const Instance& inst, int size, int level) {
  return Rational(static_cast<std::int64_t>(size) * inst.committee_size(),
                  static_cast<std::int64_t>(level) * inst.num_voters());
}

JrSmax largest_uncovered_group(const Instance& inst, CandidateSet w) {
  const int n = inst.num_voters();
  VoterMask uncovered(n);
  for (int v = 0; v < n; ++v)
    if (!inst.ballot(v).intersects(w)) uncovered.insert(v);
  JrSmax out;
  for (int c = 0; c < inst.num_candidates(); ++c) {
    if (w.contains(c)) continue;
    const int count = uncovered.and_count(inst.supporters(c));
    if (count > out.size) {
      out.size = count;
      out.candidate = c;
    }
  }
  return out;
}

JrSmax s_max_jr(const Instance& inst, Committee w) {
  require_committee(inst, w);
  return largest_uncovered_group(inst, w);
}

AxiomResult alpha_jr(const Instance& inst, Committee w) {
  const JrSmax s = s_max_jr(inst, w);
  if (s.size == 0) return AxiomResult{Axiom::JR, Rational(0), std::nullopt};
  std::vector<int> voters;
  for (int v : inst.supporters(*s.candidate).to_vector())
    if (!inst.ballot(v).intersects(w)) voters.push_back(v);
  return make_result(inst, Axiom::JR, s.size, 1, CandidateSet{*s.candidate}, std::move(voters));
}

EjrSmax s_max_ejr(const Instance& inst, Committee w, int level, std::int64_t budget) {
  require_committee(inst, w);
  if (level < 1 || level > inst.committee_size())
    throw PreconditionError("level must lie in [1, k], got " + std::to_string(level));
  EjrSearch search(inst, w, budget);
  EjrSearch::Best best;
  if (!search.search_level(level, 1, 0, best)) return {};
  return EjrSmax{best.count, best.candidates};
}

AxiomResult alpha_ejr(const Instance& inst, Committee w, std::int64_t budget) {
  require_committee(inst, w);
  EjrOutcome out = run_alpha_ejr(inst, w, std::nullopt, budget);
  if (out.best.count == 0) return AxiomResult{Axiom::EJR, Rational(0), std::nullopt};
  return make_result(inst, Axiom::EJR, out.best.count, out.best.level, out.best.candidates, out.best.voters.to_vector());
}

std::optional<Rational> alpha_ejr_if_below(const Instance& inst, Committee w, const Rational& cutoff,
                                           std::int64_t budget) {
  require_committee(inst, w);
  EjrOutcome out = run_alpha_ejr(inst, w, cutoff, budget);
  if (out.aborted) return std::nullopt;
  Rational value = out.best.count == 0 ? Rational(0) : group_alpha(inst, out.best.count, out.best.level);
  if (value >= cutoff) return std::nullopt;
  return value;
}

AxiomResult alpha_ejr_plus(const Instance& inst, Committee w) {
  require_committee(inst, w);
  const int n = inst.num_voters();
  const int k = inst.committee_size();
  std::vector<int> satisfaction(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) satisfaction[static_cast<std::size_t>(v)] = inst.ballot(v).intersection_size(w);

  int best_count = 0;
  int best_level = 1;
  int best_candidate = -1;
  std::vector<int> histogram(static_cast<std::size_t>(k) + 1);
  for (int c = 0; c < inst.num_candidates(); ++c) {
    if (w.contains(c)) continue;
    std::fill(histogram.begin(), histogram.end(), 0);
    for (int v : inst.supporters(c).to_vector()) ++histogram[static_cast<std::size_t>(std::min(satisfaction[static_cast<std::size_t>(v)], k))];
    int deficient = 0;
    for (int level = 1; level <= k; ++level) {
      deficient += histogram[static_cast<std::size_t>(level) - 1];  // supporters with satisfaction < level
      if (static_cast<std::int64_t>(deficient) * best_level > static_cast<std::int64_t>(best_count) * level) {
        best_count = deficient;
        best_level = level;
        best_candidate = c;
      }
    }
  }
  if (best_count == 0) return AxiomResult{Axiom::EJRPlus, Rational(0), std::nullopt};
  std::vector<int> voters;
  for (int v : inst.supporters(best_candidate).to_vector())
    if (satisfaction[static_cast<std::size_t>(v)] < best_level) voters.push_back(v);
  return make_result(inst, Axiom::EJRPlus, best_count, best_level, CandidateSet{best_candidate}, std::move(voters));
}

AxiomResult alpha_value(const Instance& inst, Committee w, Axiom axiom, std::int64_t budget) {
  switch (axiom) {
    case Axiom::JR:
      return alpha_jr(inst, w);
    case Axiom::EJR:
      return alpha_ejr(inst, w, budget);
    case Axiom::EJRPlus:
      return alpha_ejr_plus(inst, w);
  }
  throw PreconditionError("unknown axiom");
}

bool satisfies(const Instance& inst, Committee w, const Rational& alpha, Axiom axiom, std::int64_t budget) {
  if (alpha.sign() < 0) throw PreconditionError("alpha must be non-negative");
  return alpha > alpha_value(inst, w, axiom, budget).alpha_value;
}

}  // namespace alphaquota
