#include "alphaquota/domains.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <queue>
#include <stdexcept>

#include "alphaquota/errors.hpp"

namespace alphaquota {

// Party lists ----------------------------------------------------------------

std::vector<int> PartyStructure::sizes() const {
  std::vector<int> out;
  out.reserve(parties.size());
  for (const Party& p : parties) out.push_back(static_cast<int>(p.voters.size()));
  return out;
}

PartyListCheck detect_party_list(const Instance& inst) {
  PartyListCheck out;
  PartyStructure structure;
  for (int v = 0; v < inst.num_voters(); ++v) {
    const CandidateSet b = inst.ballot(v);
    if (b.empty()) continue;
    bool placed = false;
    for (Party& p : structure.parties) {
      if (p.candidates == b) {
        p.voters.push_back(v);
        placed = true;
        break;
      }
      if (p.candidates.intersects(b)) {
        out.counterexample = std::make_pair(p.voters.front(), v);
        out.reason = "ballots of voters " + std::to_string(p.voters.front()) + " and " + std::to_string(v) +
                     " overlap but differ";
        return out;
      }
    }
    if (!placed) structure.parties.push_back(Party{{v}, b});
  }
  for (const Party& p : structure.parties) {
    if (p.candidates.size() < inst.committee_size()) {
      const int v = p.voters.front();
      out.counterexample = std::make_pair(v, v);
      out.reason = "ballot of voter " + std::to_string(v) + " has fewer than k candidates";
      return out;
    }
  }
  out.structure = std::move(structure);
  return out;
}

OptimizationOutcome party_list_optimal_ejr(const Instance& inst, const PartyStructure& parties) {
  const int k = inst.committee_size();
  int available = 0;
  for (const Party& p : parties.parties) available += p.candidates.size();
  if (available < k)
    throw PreconditionError("parties offer " + std::to_string(available) + " candidates, fewer than k=" +
                            std::to_string(k));
  const std::size_t count = parties.parties.size();
  std::vector<int> seats(count, 0);
  for (int round = 0; round < k; ++round) {
    std::optional<std::size_t> best;
    for (std::size_t p = 0; p < count; ++p) {
      const Party& party = parties.parties[p];
      if (seats[p] >= party.candidates.size()) continue;
      if (!best) {
        best = p;
        continue;
      }
      // s_p / (w_p + 1) > s_best / (w_best + 1), cross-multiplied.
      const auto lhs = static_cast<std::int64_t>(party.voters.size()) * (seats[*best] + 1);
      const auto rhs = static_cast<std::int64_t>(parties.parties[*best].voters.size()) * (seats[p] + 1);
      if (lhs > rhs) best = p;
    }
    ++seats[*best];
  }
  Committee w;
  Rational alpha(0);
  for (std::size_t p = 0; p < count; ++p) {
    const Party& party = parties.parties[p];
    int taken = 0;
    party.candidates.for_each([&](int c) {
      if (taken < seats[p]) {
        w.insert(c);
        ++taken;
      }
    });
    if (seats[p] < k && seats[p] < party.candidates.size())
      alpha = max(alpha, group_alpha(inst, static_cast<int>(party.voters.size()), seats[p] + 1));
  }
  return OptimizationOutcome{alpha, w, Method::DomainSpecial, k};
}

// Consecutive ones -------------------------------------------------------------

namespace {

using Bits = VoterMask;  // a bitset over an arbitrary ground set

bool subset(const Bits& a, const Bits& b) { return a.and_count(b) == a.count(); }

bool overlap(const Bits& a, const Bits& b) {
  const int common = a.and_count(b);
  return common > 0 && common < a.count() && common < b.count();
}

Bits minus(Bits a, const Bits& b) {
  a.subtract(b);
  return a;
}

Bits intersection(Bits a, const Bits& b) {
  a &= b;
  return a;
}

// Sets of one overlap component, arranged as an ordered partition of their
// union. The arrangement is unique up to reversal when it exists.
struct Component {
  std::vector<Bits> blocks;
  Bits all;
};

// Adds a set that overlaps at least one set already placed.
bool place(Component& comp, const Bits& s) {
  std::vector<std::size_t> touched;
  for (std::size_t i = 0; i < comp.blocks.size(); ++i)
    if (comp.blocks[i].and_count(s) > 0) touched.push_back(i);
  if (touched.empty()) throw std::logic_error("consecutive-ones: set does not meet the component");
  const std::size_t a = touched.front();
  const std::size_t b = touched.back();
  if (touched.size() != b - a + 1) return false;
  auto full = [&](std::size_t i) { return subset(comp.blocks[i], s); };
  for (std::size_t i = a + 1; i < b; ++i)
    if (!full(i)) return false;
  // Partial end blocks split so that the part inside s faces the interior.
  auto split_low = [&](std::size_t i) {  // [B \ s, B & s]
    if (full(i)) return;
    Bits inside = intersection(comp.blocks[i], s);
    comp.blocks[i] = minus(comp.blocks[i], s);
    comp.blocks.insert(comp.blocks.begin() + static_cast<std::ptrdiff_t>(i) + 1, std::move(inside));
  };
  auto split_high = [&](std::size_t i) {  // [B & s, B \ s]
    if (full(i)) return;
    Bits outside = minus(comp.blocks[i], s);
    comp.blocks[i] = intersection(comp.blocks[i], s);
    comp.blocks.insert(comp.blocks.begin() + static_cast<std::ptrdiff_t>(i) + 1, std::move(outside));
  };
  const Bits fresh = minus(s, comp.all);
  const std::size_t last = comp.blocks.size() - 1;
  if (!fresh.none()) {
    const bool right = b == last && (a == b || full(b));
    const bool left = a == 0 && (a == b || full(a));
    if (right) {
      split_low(a);
      comp.blocks.push_back(fresh);
    } else if (left) {
      split_high(b);
      comp.blocks.insert(comp.blocks.begin(), fresh);
    } else {
      return false;
    }
    comp.all |= fresh;
    return true;
  }
  if (a == b) throw std::logic_error("consecutive-ones: set nested in a single block");
  split_high(b);
  split_low(a);
  return true;
}

bool contiguous(const std::vector<int>& position, const std::vector<int>& members) {
  if (members.empty()) return true;
  int lo = position[static_cast<std::size_t>(members.front())];
  int hi = lo;
  for (int e : members) {
    lo = std::min(lo, position[static_cast<std::size_t>(e)]);
    hi = std::max(hi, position[static_cast<std::size_t>(e)]);
  }
  return hi - lo + 1 == static_cast<int>(members.size());
}

std::optional<std::vector<int>> inverse_permutation(const std::vector<int>& order, int ground) {
  if (static_cast<int>(order.size()) != ground) return std::nullopt;
  std::vector<int> position(static_cast<std::size_t>(ground), -1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const int e = order[i];
    if (e < 0 || e >= ground || position[static_cast<std::size_t>(e)] != -1) return std::nullopt;
    position[static_cast<std::size_t>(e)] = static_cast<int>(i);
  }
  return position;
}

}  // namespace

std::optional<std::vector<int>> consecutive_ones_order(int ground, const std::vector<std::vector<int>>& sets) {
  std::vector<Bits> distinct;
  for (const auto& members : sets) {
    if (members.size() <= 1) continue;
    Bits s(ground);
    for (int e : members) s.insert(e);
    if (std::find(distinct.begin(), distinct.end(), s) == distinct.end()) distinct.push_back(std::move(s));
  }

  // Overlap components, each set placed after a set it overlaps (BFS order).
  std::vector<Component> comps;
  std::vector<int> comp_of(distinct.size(), -1);
  for (std::size_t root = 0; root < distinct.size(); ++root) {
    if (comp_of[root] != -1) continue;
    const int id = static_cast<int>(comps.size());
    Component comp{{distinct[root]}, distinct[root]};
    comp_of[root] = id;
    std::queue<std::size_t> frontier;
    frontier.push(root);
    while (!frontier.empty()) {
      const std::size_t cur = frontier.front();
      frontier.pop();
      for (std::size_t other = 0; other < distinct.size(); ++other) {
        if (comp_of[other] != -1 || !overlap(distinct[cur], distinct[other])) continue;
        comp_of[other] = id;
        if (!place(comp, distinct[other])) return std::nullopt;
        frontier.push(other);
      }
    }
    comps.push_back(std::move(comp));
  }

  // Unions of different components are disjoint or nested inside one block
  // of the other; the parent is the component with the tightest such block.
  const std::size_t count = comps.size();
  std::vector<int> parent(count, -1);
  std::vector<int> parent_block(count, -1);
  for (std::size_t c = 0; c < count; ++c) {
    std::pair<int, int> best_key{ground + 1, ground + 1};
    for (std::size_t d = 0; d < count; ++d) {
      if (d == c) continue;
      for (std::size_t i = 0; i < comps[d].blocks.size(); ++i) {
        if (!subset(comps[c].all, comps[d].blocks[i])) continue;
        const std::pair<int, int> key{comps[d].blocks[i].count(), comps[d].all.count()};
        if (key < best_key) {
          best_key = key;
          parent[c] = static_cast<int>(d);
          parent_block[c] = static_cast<int>(i);
        }
      }
    }
  }

  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(ground));
  Bits emitted(ground);
  auto push = [&](int e) {
    if (emitted.contains(e)) return;
    emitted.insert(e);
    order.push_back(e);
  };
  std::vector<int> depth(count, 0);
  std::function<void(std::size_t)> emit = [&](std::size_t c) {
    if (++depth[c] > 1) throw std::logic_error("consecutive-ones: cyclic component nesting");
    for (std::size_t i = 0; i < comps[c].blocks.size(); ++i) {
      for (std::size_t d = 0; d < count; ++d)
        if (parent[d] == static_cast<int>(c) && parent_block[d] == static_cast<int>(i)) emit(d);
      for (int e : comps[c].blocks[i].to_vector()) push(e);
    }
  };
  for (std::size_t c = 0; c < count; ++c)
    if (parent[c] == -1) emit(c);
  for (int e = 0; e < ground; ++e) push(e);

  const auto position = inverse_permutation(order, ground);
  for (const auto& members : sets)
    if (!contiguous(*position, members)) return std::nullopt;
  return order;
}

std::optional<std::vector<int>> recognize_vi(const Instance& inst) {
  std::vector<std::vector<int>> sets;
  for (int c = 0; c < inst.num_candidates(); ++c) sets.push_back(inst.supporters(c).to_vector());
  return consecutive_ones_order(inst.num_voters(), sets);
}

std::optional<std::vector<int>> recognize_ci(const Instance& inst) {
  std::vector<std::vector<int>> sets;
  for (CandidateSet b : inst.ballots()) sets.push_back(b.to_vector());
  return consecutive_ones_order(inst.num_candidates(), sets);
}

bool verify_order(const Instance& inst, const std::vector<int>& order, OrderKind kind) {
  if (kind == OrderKind::VoterInterval) {
    const auto position = inverse_permutation(order, inst.num_voters());
    if (!position) return false;
    for (int c = 0; c < inst.num_candidates(); ++c)
      if (!contiguous(*position, inst.supporters(c).to_vector())) return false;
    return true;
  }
  const auto position = inverse_permutation(order, inst.num_candidates());
  if (!position) return false;
  for (CandidateSet b : inst.ballots())
    if (!contiguous(*position, b.to_vector())) return false;
  return true;
}

// Interval algorithms ----------------------------------------------------------

namespace {

void require_order(const Instance& inst, const std::vector<int>& order, OrderKind kind) {
  if (!verify_order(inst, order, kind))
    throw PreconditionError(kind == OrderKind::VoterInterval ? "order is not a voter-interval order"
                                                             : "order is not a candidate-interval order");
}

Committee pad(const Instance& inst, CandidateSet w, const std::vector<int>& preference) {
  for (int c : preference) {
    if (w.size() >= inst.committee_size()) break;
    w.insert(c);
  }
  return w;
}

std::vector<int> index_order(int m) {
  std::vector<int> out(static_cast<std::size_t>(m));
  for (int c = 0; c < m; ++c) out[static_cast<std::size_t>(c)] = c;
  return out;
}

// Tracks the best (count, level) pair by ratio count / level.
struct BestRatio {
  int count = 0;
  int level = 1;
  bool improves(int c, int l) const {
    return static_cast<std::int64_t>(c) * level > static_cast<std::int64_t>(count) * l;
  }
};

CandidateSet lowest(CandidateSet s, int size) {
  CandidateSet out;
  s.for_each([&](int c) {
    if (out.size() < size) out.insert(c);
  });
  return out;
}

}  // namespace

CandidateSet vi_greedy_jr(const Instance& inst, const std::vector<int>& order, const Rational& alpha) {
  require_order(inst, order, OrderKind::VoterInterval);
  if (alpha.sign() <= 0) throw PreconditionError("vi_greedy_jr requires alpha > 0");
  const Rational threshold = quota(inst, alpha, 1);
  const int n = inst.num_voters();
  std::vector<int> right(static_cast<std::size_t>(inst.num_candidates()), -1);
  for (int i = 0; i < n; ++i)
    inst.ballot(order[static_cast<std::size_t>(i)]).for_each([&](int c) { right[static_cast<std::size_t>(c)] = i; });
  CandidateSet w;
  for (int i = 0; i < n; ++i) {
    const CandidateSet a = inst.ballot(order[static_cast<std::size_t>(i)]);
    if (a.empty() || a.intersects(w)) continue;
    // Earlier prefixes were violation free, so a new violation involves voter i.
    bool violation = false;
    a.for_each([&](int c) {
      int uncovered = 0;
      for (int j = 0; j <= i; ++j) {
        const CandidateSet b = inst.ballot(order[static_cast<std::size_t>(j)]);
        if (b.contains(c) && !b.intersects(w)) ++uncovered;
      }
      if (Rational(uncovered) >= threshold) violation = true;
    });
    if (!violation) continue;
    int pick = -1;
    a.for_each([&](int c) {
      if (pick == -1 || right[static_cast<std::size_t>(c)] > right[static_cast<std::size_t>(pick)]) pick = c;
    });
    w.insert(pick);
  }
  return w;
}

CandidateSet ci_greedy_jr(const Instance& inst, const std::vector<int>& order, const Rational& alpha) {
  require_order(inst, order, OrderKind::CandidateInterval);
  if (alpha.sign() <= 0) throw PreconditionError("ci_greedy_jr requires alpha > 0");
  const Rational threshold = quota(inst, alpha, 1);
  CandidateSet w = inst.all_candidates();
  for (int c : order) {
    CandidateSet without = w;
    without.erase(c);
    if (Rational(largest_uncovered_group(inst, without).size) < threshold) w = without;
  }
  return w;
}

OptimizationOutcome vi_optimal_alpha_jr(const Instance& inst, const std::vector<int>& order) {
  require_order(inst, order, OrderKind::VoterInterval);
  const std::vector<int> fill = index_order(inst.num_candidates());
  return search_jr_grid(
      inst,
      [&](const Rational& alpha) -> std::optional<Committee> {
        const CandidateSet w = vi_greedy_jr(inst, order, alpha);
        if (w.size() > inst.committee_size()) return std::nullopt;
        return pad(inst, w, fill);
      },
      Method::DomainSpecial);
}

OptimizationOutcome ci_optimal_alpha_jr(const Instance& inst, const std::vector<int>& order) {
  require_order(inst, order, OrderKind::CandidateInterval);
  return search_jr_grid(
      inst,
      [&](const Rational& alpha) -> std::optional<Committee> {
        const CandidateSet w = ci_greedy_jr(inst, order, alpha);
        if (w.size() > inst.committee_size()) return std::nullopt;
        return pad(inst, w, order);
      },
      Method::DomainSpecial);
}

AxiomResult vi_alpha_ejr(const Instance& inst, const std::vector<int>& order, Committee w) {
  require_order(inst, order, OrderKind::VoterInterval);
  require_committee(inst, w);
  const int n = inst.num_voters();
  const int k = inst.committee_size();
  std::vector<int> sat(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) sat[static_cast<std::size_t>(v)] = std::min(inst.ballot(v).intersection_size(w), k);
  BestRatio best;
  int best_i = 0, best_j = 0;
  CandidateSet best_t;
  std::vector<int> hist(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i < n; ++i) {
    CandidateSet t = inst.all_candidates();
    std::fill(hist.begin(), hist.end(), 0);
    for (int j = i; j < n; ++j) {
      const int v = order[static_cast<std::size_t>(j)];
      t = t & inst.ballot(v);
      if (t.empty()) break;
      ++hist[static_cast<std::size_t>(sat[static_cast<std::size_t>(v)])];
      int deficient = 0;
      for (int level = 1; level <= std::min(k, t.size()); ++level) {
        deficient += hist[static_cast<std::size_t>(level) - 1];
        if (best.improves(deficient, level)) {
          best = BestRatio{deficient, level};
          best_i = i;
          best_j = j;
          best_t = t;
        }
      }
    }
  }
  AxiomResult out{Axiom::EJR, Rational(0), std::nullopt};
  if (best.count == 0) return out;
  out.alpha_value = group_alpha(inst, best.count, best.level);
  std::vector<int> voters;
  for (int j = best_i; j <= best_j; ++j) {
    const int v = order[static_cast<std::size_t>(j)];
    if (sat[static_cast<std::size_t>(v)] < best.level) voters.push_back(v);
  }
  std::sort(voters.begin(), voters.end());
  out.witness = Violation{std::move(voters), lowest(best_t, best.level), best.level, out.alpha_value};
  return out;
}

AxiomResult ci_alpha_ejr(const Instance& inst, const std::vector<int>& order, Committee w) {
  require_order(inst, order, OrderKind::CandidateInterval);
  require_committee(inst, w);
  const int n = inst.num_voters();
  const int m = inst.num_candidates();
  const int k = inst.committee_size();
  std::vector<int> sat(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) sat[static_cast<std::size_t>(v)] = std::min(inst.ballot(v).intersection_size(w), k);
  BestRatio best;
  VoterMask best_voters(n);
  CandidateSet best_t;
  std::vector<int> hist(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i < m; ++i) {
    VoterMask approving = inst.supporters(order[static_cast<std::size_t>(i)]);
    CandidateSet t;
    for (int j = i; j < m; ++j) {
      const int c = order[static_cast<std::size_t>(j)];
      approving &= inst.supporters(c);
      t.insert(c);
      if (approving.none()) break;
      std::fill(hist.begin(), hist.end(), 0);
      for (int v : approving.to_vector()) ++hist[static_cast<std::size_t>(sat[static_cast<std::size_t>(v)])];
      int deficient = 0;
      for (int level = 1; level <= std::min(k, j - i + 1); ++level) {
        deficient += hist[static_cast<std::size_t>(level) - 1];
        if (best.improves(deficient, level)) {
          best = BestRatio{deficient, level};
          best_voters = approving;
          best_t = t;
        }
      }
    }
  }
  AxiomResult out{Axiom::EJR, Rational(0), std::nullopt};
  if (best.count == 0) return out;
  out.alpha_value = group_alpha(inst, best.count, best.level);
  std::vector<int> voters;
  for (int v : best_voters.to_vector())
    if (sat[static_cast<std::size_t>(v)] < best.level) voters.push_back(v);
  out.witness = Violation{std::move(voters), best_t, best.level, out.alpha_value};
  return out;
}

OptimizationOutcome interval_optimal_alpha_ejr(const Instance& inst, const std::vector<int>& order, OrderKind kind,
                                               std::int64_t committee_budget) {
  require_order(inst, order, kind);
  std::optional<Rational> best;
  Committee best_w;
  std::int64_t explored = 0;
  for_each_committee(inst.num_candidates(), inst.committee_size(), committee_budget, [&](Committee w) {
    ++explored;
    if (best && group_alpha(inst, largest_uncovered_group(inst, w).size, 1) >= *best) return true;
    const Rational value = (kind == OrderKind::VoterInterval ? vi_alpha_ejr(inst, order, w)
                                                             : ci_alpha_ejr(inst, order, w))
                               .alpha_value;
    if (!best || value < *best) {
      best = value;
      best_w = w;
    }
    return !best->is_zero();
  });
  return OptimizationOutcome{*best, best_w, Method::DomainSpecial, explored};
}

// Routing ----------------------------------------------------------------------

DomainChoice parse_domain_choice(std::string_view text) {
  std::string key;
  for (char ch : text)
    if (ch != '-' && ch != '_') key += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (key == "auto") return DomainChoice::Auto;
  if (key == "general" || key == "none") return DomainChoice::General;
  if (key == "partylist") return DomainChoice::PartyList;
  if (key == "vi") return DomainChoice::VoterInterval;
  if (key == "ci") return DomainChoice::CandidateInterval;
  throw PreconditionError("unknown domain '" + std::string(text) + "' (expected auto, general, partylist, vi or ci)");
}

DomainReport analyze_domains(const Instance& inst) {
  return DomainReport{detect_party_list(inst), recognize_vi(inst), recognize_ci(inst)};
}

namespace {

OptimizationOutcome general_optimum(const Instance& inst, Axiom axiom) {
  switch (axiom) {
    case Axiom::JR:
      return optimal_alpha_jr(inst);
    case Axiom::EJR:
      return optimal_alpha_ejr(inst);
    case Axiom::EJRPlus:
      return optimal_alpha_ejr_plus(inst);
  }
  throw PreconditionError("unknown axiom");
}

OptimizationOutcome interval_optimum(const Instance& inst, Axiom axiom, const std::vector<int>& order,
                                     OrderKind kind) {
  if (axiom == Axiom::JR)
    return kind == OrderKind::VoterInterval ? vi_optimal_alpha_jr(inst, order) : ci_optimal_alpha_jr(inst, order);
  if (axiom == Axiom::EJR) return interval_optimal_alpha_ejr(inst, order, kind);
  throw PreconditionError("interval domains provide JR and EJR optima only");
}

}  // namespace

OptimizationOutcome optimal_alpha(const Instance& inst, Axiom axiom, DomainChoice domain) {
  switch (domain) {
    case DomainChoice::General:
      return general_optimum(inst, axiom);
    case DomainChoice::PartyList: {
      if (axiom != Axiom::EJR) throw PreconditionError("the party-list algorithm computes the EJR optimum only");
      const PartyListCheck check = detect_party_list(inst);
      if (!check.structure) throw PreconditionError("not a party-list instance: " + check.reason);
      return party_list_optimal_ejr(inst, *check.structure);
    }
    case DomainChoice::VoterInterval: {
      const auto order = recognize_vi(inst);
      if (!order) throw PreconditionError("instance is not voter-interval");
      return interval_optimum(inst, axiom, *order, OrderKind::VoterInterval);
    }
    case DomainChoice::CandidateInterval: {
      const auto order = recognize_ci(inst);
      if (!order) throw PreconditionError("instance is not candidate-interval");
      return interval_optimum(inst, axiom, *order, OrderKind::CandidateInterval);
    }
    case DomainChoice::Auto:
      break;
  }
  if (axiom == Axiom::EJRPlus) return general_optimum(inst, axiom);
  if (axiom == Axiom::EJR) {
    const PartyListCheck check = detect_party_list(inst);
    if (check.structure && !check.structure->parties.empty()) return party_list_optimal_ejr(inst, *check.structure);
  }
  if (const auto order = recognize_vi(inst)) return interval_optimum(inst, axiom, *order, OrderKind::VoterInterval);
  if (const auto order = recognize_ci(inst))
    return interval_optimum(inst, axiom, *order, OrderKind::CandidateInterval);
  return general_optimum(inst, axiom);
}

}  // namespace alphaquota
