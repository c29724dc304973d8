#include "alphaquota/rules.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "alphaquota/errors.hpp"
#include "alphaquota/optimize.hpp"
#include "alphaquota/verify.hpp"

namespace alphaquota {

std::string to_string(Rule rule) {
  switch (rule) {
    case Rule::CC:
      return "cc";
    case Rule::SeqCC:
      return "seqcc";
    case Rule::PAV:
      return "pav";
    case Rule::SeqPhragmen:
      return "seqphragmen";
    case Rule::MES:
      return "mes";
    case Rule::MESCompleted:
      return "mes_completed";
    case Rule::AlphaMES:
      return "alphames";
    case Rule::GJCR:
      return "gjcr";
    case Rule::AlphaGJCR:
      return "alphagjcr";
  }
  return "?";
}

Rule parse_rule(std::string_view text) {
  std::string key;
  for (char ch : text)
    if (ch != '-' && ch != '_') key += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  static const std::pair<const char*, Rule> kNames[] = {
      {"cc", Rule::CC},          {"seqcc", Rule::SeqCC},     {"pav", Rule::PAV},
      {"seqphragmen", Rule::SeqPhragmen}, {"mes", Rule::MES}, {"mescompleted", Rule::MESCompleted},
      {"alphames", Rule::AlphaMES}, {"gjcr", Rule::GJCR},   {"alphagjcr", Rule::AlphaGJCR}};
  for (const auto& [name, rule] : kNames)
    if (key == name) return rule;
  throw PreconditionError("unknown rule '" + std::string(text) + "'");
}

Rational harmonic(int t) {
  Rational h(0);
  for (int j = 1; j <= t; ++j) h += Rational(1, j);
  return h;
}

std::int64_t cc_score(const Instance& inst, CandidateSet w) {
  std::int64_t covered = 0;
  for (CandidateSet b : inst.ballots())
    if (b.intersects(w)) ++covered;
  return covered;
}

Rational pav_score(const Instance& inst, CandidateSet w) {
  Rational score(0);
  for (CandidateSet b : inst.ballots()) score += harmonic(b.intersection_size(w));
  return score;
}

std::optional<Rational> mes_price(std::span<const Rational> budgets) {
  std::vector<Rational> sorted(budgets.begin(), budgets.end());
  std::sort(sorted.begin(), sorted.end());
  // With the j cheapest voters paying their whole budget, the rest split the remainder.
  Rational paid(0);
  const auto s = static_cast<std::int64_t>(sorted.size());
  for (std::int64_t j = 0; j < s; ++j) {
    Rational q = (Rational(1) - paid) / Rational(s - j);
    if (q <= sorted[static_cast<std::size_t>(j)]) return q;
    paid += sorted[static_cast<std::size_t>(j)];
  }
  return std::nullopt;
}

namespace {

struct Choice {
  int candidate = -1;
  Rational value;
  int tag = 0;  // rule-specific: GJCR level, MES/Phragmen phase
};

template <class State>
struct Dynamics {
  // Tied best choices in ascending candidate order; empty when the rule stops.
  std::function<std::vector<Choice>(const State&)> choices;
  std::function<State(const State&, const Choice&)> next;
  std::function<std::string(const State&)> key;
  std::function<CandidateSet(const State&)> selected;
};

Committee fill_by_index(const Instance& inst, CandidateSet selected, int* filled) {
  int added = 0;
  for (int c = 0; c < inst.num_candidates() && selected.size() < inst.committee_size(); ++c) {
    if (selected.contains(c)) continue;
    selected.insert(c);
    ++added;
  }
  if (filled) *filled = added;
  return selected;
}

void append_key(std::string& key, const std::vector<Rational>& values) {
  for (const Rational& v : values) {
    key += v.to_string();
    key += ';';
  }
}

// Explores tie branches depth first, lowest candidate first. Exact state
// keys collapse branches that reach the same state through different orders.
template <class State>
class TieExplorer {
 public:
  TieExplorer(const Instance& inst, const RuleOptions& opts, Dynamics<State> dyn)
      : inst_(inst), opts_(opts), dyn_(std::move(dyn)) {}

  RuleOutcome run(Rule rule, const State& initial) {
    RuleOutcome out;
    out.rule = rule;
    if (opts_.adversarial) {
      const Best& best = adversarial(initial);
      out.committees.push_back(best.committee);
      out.trace = best.trace;
      out.filled = best.filled;
    } else {
      out_ = &out;
      std::vector<TraceStep> path;
      explore(initial, path);
      out_ = nullptr;
    }
    if (out.filled > 0)
      out.notes.push_back("filled " + std::to_string(out.filled) + " seat(s) with the lowest-index unelected candidates");
    return out;
  }

 private:
  struct Best {
    Committee committee;
    int uncovered = -1;
    int filled = 0;
    std::vector<TraceStep> trace;
  };

  void count_node() {
    if (++nodes_ > opts_.budget)
      throw BudgetExceeded("tie exploration exceeded budget of " + std::to_string(opts_.budget) + " states");
  }

  std::vector<Choice> options(const State& s) const {
    if (dyn_.selected(s).size() >= inst_.committee_size()) return {};
    return dyn_.choices(s);
  }

  bool done() const { return static_cast<int>(out_->committees.size()) >= opts_.max_committees; }

  void explore(const State& s, std::vector<TraceStep>& path) {
    count_node();
    if (!visited_.insert(dyn_.key(s)).second) return;
    const std::vector<Choice> opts = options(s);
    if (opts.empty()) {
      int filled = 0;
      const Committee w = fill_by_index(inst_, dyn_.selected(s), &filled);
      if (std::find(out_->committees.begin(), out_->committees.end(), w) != out_->committees.end()) return;
      if (out_->committees.empty()) {
        out_->trace = path;
        out_->filled = filled;
      }
      out_->committees.push_back(w);
      return;
    }
    for (const Choice& c : opts) {
      path.push_back(TraceStep{c.candidate, c.value});
      explore(dyn_.next(s, c), path);
      path.pop_back();
      if (done()) return;
    }
  }

  const Best& adversarial(const State& s) {
    count_node();
    std::string key = dyn_.key(s);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Best best;
    const std::vector<Choice> opts = options(s);
    if (opts.empty()) {
      best.committee = fill_by_index(inst_, dyn_.selected(s), &best.filled);
      best.uncovered = largest_uncovered_group(inst_, best.committee).size;
    }
    for (const Choice& c : opts) {
      const Best& sub = adversarial(dyn_.next(s, c));
      if (sub.uncovered > best.uncovered) {
        best = sub;
        best.trace.insert(best.trace.begin(), TraceStep{c.candidate, c.value});
      }
    }
    return memo_.emplace(std::move(key), std::move(best)).first->second;
  }

  const Instance& inst_;
  const RuleOptions& opts_;
  Dynamics<State> dyn_;
  std::int64_t nodes_ = 0;
  RuleOutcome* out_ = nullptr;
  std::unordered_set<std::string> visited_;
  std::unordered_map<std::string, Best> memo_;
};

template <class State>
State first_branch_run(const Dynamics<State>& dyn, State s, int cap) {
  while (cap < 0 || dyn.selected(s).size() < cap) {
    const std::vector<Choice> opts = dyn.choices(s);
    if (opts.empty()) break;
    s = dyn.next(s, opts.front());
  }
  return s;
}

// Keeps the minimisers (or maximisers) of `value`, in candidate order.
void keep_best(std::vector<Choice>& best, Choice c, bool minimise) {
  if (!best.empty()) {
    const auto cmp = c.value <=> best.front().value;
    if (cmp == 0) {
      best.push_back(std::move(c));
      return;
    }
    if ((cmp < 0) != minimise) return;
    best.clear();
  }
  best.push_back(std::move(c));
}

// seq-CC -------------------------------------------------------------------

struct CcState {
  CandidateSet selected;
  VoterMask covered;
};

Dynamics<CcState> seq_cc_dynamics(const Instance& inst) {
  Dynamics<CcState> d;
  d.choices = [&inst](const CcState& s) {
    std::vector<Choice> best;
    for (int c = 0; c < inst.num_candidates(); ++c) {
      if (s.selected.contains(c)) continue;
      const int gain = inst.supporters(c).and_not_count(inst.supporters(c), s.covered);
      if (gain > 0) keep_best(best, Choice{c, Rational(gain)}, false);
    }
    return best;
  };
  d.next = [&inst](const CcState& s, const Choice& c) {
    CcState t = s;
    t.selected.insert(c.candidate);
    t.covered |= inst.supporters(c.candidate);
    return t;
  };
  d.key = [](const CcState& s) { return std::to_string(s.selected.bits()); };
  d.selected = [](const CcState& s) { return s.selected; };
  return d;
}

// seq-Phragmen -------------------------------------------------------------

std::vector<Choice> phragmen_choices(const Instance& inst, CandidateSet selected, const std::vector<Rational>& loads,
                                     int tag) {
  std::vector<Choice> best;
  for (int c = 0; c < inst.num_candidates(); ++c) {
    if (selected.contains(c) || inst.support_size(c) == 0) continue;
    Rational total(1);
    for (int v : inst.supporters(c).to_vector()) total += loads[static_cast<std::size_t>(v)];
    keep_best(best, Choice{c, total / Rational(inst.support_size(c)), tag}, true);
  }
  return best;
}

void phragmen_apply(const Instance& inst, std::vector<Rational>& loads, const Choice& c) {
  for (int v : inst.supporters(c.candidate).to_vector()) loads[static_cast<std::size_t>(v)] = c.value;
}

Dynamics<PhragmenState> phragmen_dynamics(const Instance& inst) {
  Dynamics<PhragmenState> d;
  d.choices = [&inst](const PhragmenState& s) { return phragmen_choices(inst, s.selected, s.loads, 0); };
  d.next = [&inst](const PhragmenState& s, const Choice& c) {
    PhragmenState t = s;
    t.selected.insert(c.candidate);
    t.order.push_back(c.candidate);
    phragmen_apply(inst, t.loads, c);
    return t;
  };
  d.key = [](const PhragmenState& s) {
    std::string key = std::to_string(s.selected.bits()) + "|";
    append_key(key, s.loads);
    return key;
  };
  d.selected = [](const PhragmenState& s) { return s.selected; };
  return d;
}

PhragmenState phragmen_initial(const Instance& inst) {
  return PhragmenState{CandidateSet(), {}, std::vector<Rational>(static_cast<std::size_t>(inst.num_voters()))};
}

// MES ------------------------------------------------------------------------

std::vector<Choice> mes_choices(const Instance& inst, CandidateSet selected, const std::vector<Rational>& budgets,
                                int tag) {
  std::vector<Choice> best;
  std::vector<Rational> held;
  for (int c = 0; c < inst.num_candidates(); ++c) {
    if (selected.contains(c)) continue;
    held.clear();
    for (int v : inst.supporters(c).to_vector()) held.push_back(budgets[static_cast<std::size_t>(v)]);
    if (auto q = mes_price(held)) keep_best(best, Choice{c, *q, tag}, true);
  }
  return best;
}

void mes_apply(const Instance& inst, std::vector<Rational>& budgets, const Choice& c) {
  for (int v : inst.supporters(c.candidate).to_vector()) {
    Rational& b = budgets[static_cast<std::size_t>(v)];
    b -= min(b, c.value);
  }
}

Dynamics<MesState> mes_dynamics(const Instance& inst) {
  Dynamics<MesState> d;
  d.choices = [&inst](const MesState& s) { return mes_choices(inst, s.selected, s.budgets, 0); };
  d.next = [&inst](const MesState& s, const Choice& c) {
    MesState t = s;
    t.selected.insert(c.candidate);
    t.order.push_back(c.candidate);
    mes_apply(inst, t.budgets, c);
    return t;
  };
  d.key = [](const MesState& s) {
    std::string key = std::to_string(s.selected.bits()) + "|";
    append_key(key, s.budgets);
    return key;
  };
  d.selected = [](const MesState& s) { return s.selected; };
  return d;
}

MesState mes_initial(const Instance& inst, const Rational& b) {
  if (b.sign() < 0) throw PreconditionError("MES budget must be non-negative");
  return MesState{CandidateSet(), {}, std::vector<Rational>(static_cast<std::size_t>(inst.num_voters()), b)};
}

// MES followed by seq-Phragmen once nothing is affordable. The Phragmen
// phase starts from loads equal to the budget each voter spent.
struct MesCompletedState {
  MesState mes;
  Rational initial_budget;
  bool phragmen = false;
  std::vector<Rational> loads;
};

std::vector<Rational> spent_budget(const MesCompletedState& s) {
  std::vector<Rational> loads;
  loads.reserve(s.mes.budgets.size());
  for (const Rational& b : s.mes.budgets) loads.push_back(s.initial_budget - b);
  return loads;
}

Dynamics<MesCompletedState> mes_completed_dynamics(const Instance& inst) {
  Dynamics<MesCompletedState> d;
  d.choices = [&inst](const MesCompletedState& s) {
    if (!s.phragmen) {
      auto opts = mes_choices(inst, s.mes.selected, s.mes.budgets, 0);
      if (!opts.empty()) return opts;
      return phragmen_choices(inst, s.mes.selected, spent_budget(s), 1);
    }
    return phragmen_choices(inst, s.mes.selected, s.loads, 1);
  };
  d.next = [&inst](const MesCompletedState& s, const Choice& c) {
    MesCompletedState t = s;
    t.mes.selected.insert(c.candidate);
    t.mes.order.push_back(c.candidate);
    if (c.tag == 0) {
      mes_apply(inst, t.mes.budgets, c);
    } else {
      if (!t.phragmen) {
        t.loads = spent_budget(t);
        t.phragmen = true;
      }
      phragmen_apply(inst, t.loads, c);
    }
    return t;
  };
  d.key = [](const MesCompletedState& s) {
    std::string key = std::to_string(s.mes.selected.bits()) + (s.phragmen ? "|p|" : "|m|");
    append_key(key, s.phragmen ? s.loads : s.mes.budgets);
    return key;
  };
  d.selected = [](const MesCompletedState& s) { return s.mes.selected; };
  return d;
}

// GJCR -----------------------------------------------------------------------

Dynamics<GjcrState> gjcr_dynamics(const Instance& inst, const Rational& alpha) {
  Dynamics<GjcrState> d;
  const int k = inst.committee_size();
  const std::int64_t n = inst.num_voters();
  d.choices = [&inst, alpha, k, n](const GjcrState& s) {
    std::vector<Choice> best;
    for (int level = s.level; level >= 1 && best.empty(); --level) {
      // |N(c)| >= alpha * level * n / k, and N(c) must be non-empty.
      const Rational threshold = alpha * Rational(level * n, k);
      for (int c = 0; c < inst.num_candidates(); ++c) {
        if (s.selected.contains(c)) continue;
        int count = 0;
        for (int v : inst.supporters(c).to_vector())
          if (inst.ballot(v).intersection_size(s.selected) < level) ++count;
        if (count == 0 || Rational(count) < threshold) continue;
        keep_best(best, Choice{c, Rational(count), level}, false);
      }
    }
    return best;
  };
  d.next = [&inst](const GjcrState& s, const Choice& c) {
    GjcrState t = s;
    t.level = c.tag;
    const Rational share = Rational(1) / c.value;
    for (int v : inst.supporters(c.candidate).to_vector())
      if (inst.ballot(v).intersection_size(s.selected) < c.tag) t.prices[static_cast<std::size_t>(v)] += share;
    t.selected.insert(c.candidate);
    t.order.push_back(c.candidate);
    return t;
  };
  d.key = [](const GjcrState& s) {
    std::string key = std::to_string(s.selected.bits()) + "|" + std::to_string(s.level) + "|";
    append_key(key, s.prices);
    return key;
  };
  d.selected = [](const GjcrState& s) { return s.selected; };
  return d;
}

GjcrState gjcr_initial(const Instance& inst) {
  return GjcrState{CandidateSet(), {}, std::vector<Rational>(static_cast<std::size_t>(inst.num_voters())),
                   inst.committee_size()};
}

// Score rules ---------------------------------------------------------------

template <class Score, class F>
RuleOutcome best_by_enumeration(const Instance& inst, const RuleOptions& opts, Rule rule, F score) {
  RuleOutcome out;
  out.rule = rule;
  std::optional<Score> best;
  int best_uncovered = -1;
  for_each_committee(inst.num_candidates(), inst.committee_size(), opts.budget, [&](Committee w) {
    Score s = score(w);
    if (!best || s > *best) {
      best = std::move(s);
      out.committees.assign(1, w);
      if (opts.adversarial) best_uncovered = largest_uncovered_group(inst, w).size;
    } else if (s == *best) {
      if (opts.adversarial) {
        const int u = largest_uncovered_group(inst, w).size;
        if (u > best_uncovered) {
          best_uncovered = u;
          out.committees.assign(1, w);
        }
      } else if (static_cast<int>(out.committees.size()) < opts.max_committees) {
        out.committees.push_back(w);
      }
    }
    return true;
  });
  std::ostringstream note;
  note << "score " << *best;
  out.notes.push_back(note.str());
  return out;
}

void check_options(const RuleOptions& opts) {
  if (opts.max_committees < 1) throw PreconditionError("max_committees must be at least 1");
}

}  // namespace

PhragmenState seq_phragmen_run(const Instance& inst) {
  return first_branch_run(phragmen_dynamics(inst), phragmen_initial(inst), inst.committee_size());
}

MesState mes_run(const Instance& inst, const Rational& budget_per_voter, int cap) {
  return first_branch_run(mes_dynamics(inst), mes_initial(inst, budget_per_voter), cap);
}

std::vector<int> mes(const Instance& inst, const Rational& budget_per_voter) {
  return mes_run(inst, budget_per_voter).order;
}

GjcrState gjcr_run(const Instance& inst, const Rational& alpha, int cap) {
  return first_branch_run(gjcr_dynamics(inst, alpha), gjcr_initial(inst), cap);
}

RuleOutcome cc(const Instance& inst, const RuleOptions& opts) {
  check_options(opts);
  return best_by_enumeration<std::int64_t>(inst, opts, Rule::CC, [&](Committee w) { return cc_score(inst, w); });
}

RuleOutcome pav(const Instance& inst, const RuleOptions& opts) {
  check_options(opts);
  const int k = inst.committee_size();
  std::vector<Rational> h(static_cast<std::size_t>(k) + 1);
  for (int t = 1; t <= k; ++t) h[static_cast<std::size_t>(t)] = h[static_cast<std::size_t>(t) - 1] + Rational(1, t);
  std::vector<std::int64_t> histogram(static_cast<std::size_t>(k) + 1);
  return best_by_enumeration<Rational>(inst, opts, Rule::PAV, [&](Committee w) {
    std::fill(histogram.begin(), histogram.end(), 0);
    for (CandidateSet b : inst.ballots()) ++histogram[static_cast<std::size_t>(b.intersection_size(w))];
    Rational score(0);
    for (int t = 1; t <= k; ++t)
      if (histogram[static_cast<std::size_t>(t)] != 0)
        score += Rational(histogram[static_cast<std::size_t>(t)]) * h[static_cast<std::size_t>(t)];
    return score;
  });
}

RuleOutcome seq_cc(const Instance& inst, const RuleOptions& opts) {
  check_options(opts);
  return TieExplorer<CcState>(inst, opts, seq_cc_dynamics(inst))
      .run(Rule::SeqCC, CcState{CandidateSet(), VoterMask(inst.num_voters())});
}

RuleOutcome seq_phragmen(const Instance& inst, const RuleOptions& opts) {
  check_options(opts);
  return TieExplorer<PhragmenState>(inst, opts, phragmen_dynamics(inst)).run(Rule::SeqPhragmen, phragmen_initial(inst));
}

RuleOutcome mes_rule(const Instance& inst, const RuleOptions& opts) {
  check_options(opts);
  const Rational b(inst.committee_size(), inst.num_voters());
  RuleOutcome out = TieExplorer<MesState>(inst, opts, mes_dynamics(inst)).run(Rule::MES, mes_initial(inst, b));
  out.parameter = b;
  return out;
}

RuleOutcome mes_completed(const Instance& inst, const RuleOptions& opts) {
  check_options(opts);
  const Rational b(inst.committee_size(), inst.num_voters());
  MesCompletedState init{mes_initial(inst, b), b, false, {}};
  RuleOutcome out =
      TieExplorer<MesCompletedState>(inst, opts, mes_completed_dynamics(inst)).run(Rule::MESCompleted, init);
  out.parameter = b;
  return out;
}

Rational alpha_mes_budget(const Instance& inst, std::vector<std::string>* notes) {
  int supported = 0;
  for (int c = 0; c < inst.num_candidates(); ++c)
    if (inst.support_size(c) > 0) ++supported;
  if (supported == 0) throw PreconditionError("alpha-MES needs at least one approval");
  const int target = std::min(inst.committee_size(), supported);
  if (notes && target < inst.committee_size())
    notes->push_back("only " + std::to_string(supported) + " candidate(s) have supporters; budget targets " +
                     std::to_string(target) + " purchases");
  auto feasible = [&](const Rational& b) {
    return static_cast<int>(mes_run(inst, b, target).order.size()) >= target;
  };
  // With budget m every supported candidate stays affordable, so doubling ends.
  Rational hi(inst.committee_size(), inst.num_voters());
  while (!feasible(hi)) hi = hi * Rational(2);
  Rational lo(0);
  for (int i = 0; i < 96; ++i) {
    const Rational mid = (lo + hi) / Rational(2);
    if (feasible(mid)) hi = mid;
    else lo = mid;
  }
  // The breakpoint is the simplest rational left in (lo, hi] when it is feasible.
  Rational b = hi;
  if (Rational s = Rational::simplest_between(lo, hi); feasible(s)) b = s;
  if (notes) {
    for (int j = 1; j < 8; ++j) {
      const Rational probe = b * Rational(j, 8);
      if (feasible(probe)) notes->push_back("MES buys enough at smaller budget " + probe.to_string());
    }
  }
  return b;
}

RuleOutcome alpha_mes(const Instance& inst, const RuleOptions& opts) {
  check_options(opts);
  std::vector<std::string> notes;
  const Rational b = alpha_mes_budget(inst, &notes);
  RuleOutcome out = TieExplorer<MesState>(inst, opts, mes_dynamics(inst)).run(Rule::AlphaMES, mes_initial(inst, b));
  out.parameter = b;
  out.notes.insert(out.notes.begin(), notes.begin(), notes.end());
  return out;
}

RuleOutcome gjcr(const Instance& inst, const RuleOptions& opts) {
  check_options(opts);
  RuleOutcome out =
      TieExplorer<GjcrState>(inst, opts, gjcr_dynamics(inst, Rational(1))).run(Rule::GJCR, gjcr_initial(inst));
  out.parameter = Rational(1);
  return out;
}

RuleOutcome alpha_gjcr(const Instance& inst, const RuleOptions& opts) {
  check_options(opts);
  const int k = inst.committee_size();
  const AlphaGrid grid = alpha_grid(inst, Axiom::EJR);
  Rational alpha = grid.values.front();
  bool reached = false;
  for (auto it = grid.values.rbegin(); it != grid.values.rend(); ++it) {
    if (gjcr_run(inst, *it, k).order.size() >= static_cast<std::size_t>(k)) {
      alpha = *it;
      reached = true;
      break;
    }
  }
  RuleOutcome out =
      TieExplorer<GjcrState>(inst, opts, gjcr_dynamics(inst, alpha)).run(Rule::AlphaGJCR, gjcr_initial(inst));
  out.parameter = alpha;
  if (!reached) out.notes.insert(out.notes.begin(), "no grid alpha selects k candidates; using alpha = 0");
  return out;
}

RuleOutcome run_rule(const Instance& inst, Rule rule, const RuleOptions& opts) {
  switch (rule) {
    case Rule::CC:
      return cc(inst, opts);
    case Rule::SeqCC:
      return seq_cc(inst, opts);
    case Rule::PAV:
      return pav(inst, opts);
    case Rule::SeqPhragmen:
      return seq_phragmen(inst, opts);
    case Rule::MES:
      return mes_rule(inst, opts);
    case Rule::MESCompleted:
      return mes_completed(inst, opts);
    case Rule::AlphaMES:
      return alpha_mes(inst, opts);
    case Rule::GJCR:
      return gjcr(inst, opts);
    case Rule::AlphaGJCR:
      return alpha_gjcr(inst, opts);
  }
  throw PreconditionError("unknown rule");
}

}  // namespace alphaquota
