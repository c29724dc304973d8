#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <random>

#include "alphaquota/errors.hpp"
#include "alphaquota/optimize.hpp"
#include "alphaquota/rules.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace alphaquota {
namespace {

// Reference sequential rules, lowest index on ties -------------------------------

std::vector<int> phragmen_oracle(const Instance& inst) {
  std::vector<Rational> load(static_cast<std::size_t>(inst.num_voters()));
  std::vector<int> order;
  CandidateSet w;
  while (static_cast<int>(order.size()) < inst.committee_size()) {
    int pick = -1;
    Rational best;
    for (int c = 0; c < inst.num_candidates(); ++c) {
      if (w.contains(c) || inst.support_size(c) == 0) continue;
      Rational t(1);
      for (int v : inst.supporters(c).to_vector()) t += load[static_cast<std::size_t>(v)];
      t /= Rational(inst.support_size(c));
      if (pick < 0 || t < best) {
        pick = c;
        best = t;
      }
    }
    if (pick < 0) break;
    for (int v : inst.supporters(pick).to_vector()) load[static_cast<std::size_t>(v)] = best;
    w.insert(pick);
    order.push_back(pick);
  }
  return order;
}

std::vector<int> mes_oracle(const Instance& inst, const Rational& b) {
  std::vector<Rational> budget(static_cast<std::size_t>(inst.num_voters()), b);
  std::vector<int> order;
  CandidateSet w;
  while (true) {
    int pick = -1;
    Rational best;
    for (int c = 0; c < inst.num_candidates(); ++c) {
      if (w.contains(c)) continue;
      std::vector<Rational> bs;
      Rational total;
      for (int v : inst.supporters(c).to_vector()) {
        bs.push_back(budget[static_cast<std::size_t>(v)]);
        total += bs.back();
      }
      if (bs.empty() || total < Rational(1)) continue;
      // Try each supporter budget level as the cap breakpoint.
      std::sort(bs.begin(), bs.end());
      Rational spent;
      std::optional<Rational> q;
      for (std::size_t i = 0; i < bs.size(); ++i) {
        const Rational cand = (Rational(1) - spent) / Rational(static_cast<std::int64_t>(bs.size() - i));
        if (cand <= bs[i]) {
          q = cand;
          break;
        }
        spent += bs[i];
      }
      if (q && (pick < 0 || *q < best)) {
        pick = c;
        best = *q;
      }
    }
    if (pick < 0) break;
    for (int v : inst.supporters(pick).to_vector()) {
      auto& x = budget[static_cast<std::size_t>(v)];
      x -= min(x, best);
    }
    w.insert(pick);
    order.push_back(pick);
  }
  return order;
}

std::vector<int> gjcr_oracle(const Instance& inst, const Rational& alpha) {
  const int n = inst.num_voters();
  const int k = inst.committee_size();
  CandidateSet w;
  std::vector<int> order;
  for (int level = k; level >= 1; --level) {
    const Rational threshold = alpha * Rational(level * n, k);
    while (true) {
      int pick = -1;
      int best = 0;
      for (int c = 0; c < inst.num_candidates(); ++c) {
        if (w.contains(c)) continue;
        int deficient = 0;
        for (int v : inst.supporters(c).to_vector()) deficient += inst.ballot(v).intersection_size(w) < level ? 1 : 0;
        if (deficient >= 1 && Rational(deficient) >= threshold && deficient > best) {
          pick = c;
          best = deficient;
        }
      }
      if (pick < 0) break;
      w.insert(pick);
      order.push_back(pick);
    }
  }
  return order;
}

// Helpers --------------------------------------------------------------------

bool all_in(const std::vector<Committee>& ws, CandidateSet pool) {
  return std::all_of(ws.begin(), ws.end(), [&](Committee w) { return w.subset_of(pool); });
}

CandidateSet block_candidates(int k) { return CandidateSet::full(k + 1); }

// Scores -----------------------------------------------------------------------

TEST(Scores, HarmonicNumbers) {
  EXPECT_EQ(harmonic(0), Rational(0));
  EXPECT_EQ(harmonic(1), Rational(1));
  EXPECT_EQ(harmonic(3), Rational(11, 6));
}

TEST(Scores, BridgeValues) {
  const Instance inst = testing::bridge();
  EXPECT_EQ(cc_score(inst, CandidateSet{0, 1}), 10);
  EXPECT_EQ(pav_score(inst, CandidateSet{0, 1}), Rational(10));
  EXPECT_EQ(pav_score(inst, CandidateSet{2, 3}), Rational(3));
}

TEST(Scores, MesPrice) {
  const std::vector<Rational> equal(3, Rational(1, 2));
  EXPECT_EQ(mes_price(equal), Rational(1, 3));
  const std::vector<Rational> short_budget{Rational(1, 2), Rational(1, 4), Rational(1, 8)};
  EXPECT_FALSE(mes_price(short_budget).has_value());
  const std::vector<Rational> capped{Rational(1, 4), Rational(1), Rational(1)};
  EXPECT_EQ(mes_price(capped), Rational(3, 8));
  EXPECT_FALSE(mes_price(std::vector<Rational>{}).has_value());
}

// Score rules ---------------------------------------------------------------

TEST(Cc, BridgeCoversEveryone) {
  const RuleOutcome r = cc(testing::bridge());
  ASSERT_EQ(r.committees.size(), 1U);
  EXPECT_EQ(r.committees[0], (CandidateSet{0, 1}));
}

TEST(Cc, SharedBlockOptimumScoresTen) {
  const Instance inst = testing::shared_block();
  const RuleOutcome r = cc(inst, {.max_committees = 10});
  EXPECT_EQ(r.committees.size(), 3U);  // {ci, c4, c6} for i = 1..3
  for (Committee w : r.committees) EXPECT_EQ(cc_score(inst, w), 10);
  EXPECT_EQ(r.committees[0], (CandidateSet{0, 3, 5}));
}

TEST(Pav, GapFixtureTiesThreeWays) {
  const RuleOutcome r = pav(testing::gap(), {.max_committees = 10});
  EXPECT_EQ(r.committees, (std::vector<Committee>{CandidateSet{0, 1}, CandidateSet{0, 2}, CandidateSet{1, 2}}));
}

TEST(ScoreRulesProperty, MatchFullEnumeration) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 150; ++i) {
    const Instance inst = testing::random_small(rng, 10, 8);
    std::vector<Committee> cc_best;
    std::vector<Committee> pav_best;
    std::int64_t cc_max = -1;
    Rational pav_max(-1);
    oracle::for_each_subset_of_size(inst.num_candidates(), inst.committee_size(), [&](Committee w) {
      const auto c = cc_score(inst, w);
      if (c > cc_max) cc_best.clear(), cc_max = c;
      if (c == cc_max) cc_best.push_back(w);
      const Rational p = pav_score(inst, w);
      if (p > pav_max) pav_best.clear(), pav_max = p;
      if (p == pav_max) pav_best.push_back(w);
    });
    auto lex_sorted = [](std::vector<Committee> ws) {
      std::sort(ws.begin(), ws.end(), lex_less);
      ws.resize(std::min<std::size_t>(ws.size(), 5));
      return ws;
    };
    EXPECT_EQ(cc(inst).committees, lex_sorted(cc_best));
    EXPECT_EQ(pav(inst).committees, lex_sorted(pav_best));
  }
}

// Sequential rules -------------------------------------------------------------

TEST(SeqCc, SharedBlockGreedyPath) {
  const RuleOutcome r = seq_cc(testing::shared_block(), {.max_committees = 1});
  ASSERT_EQ(r.trace.size(), 3U);
  EXPECT_EQ(r.trace[0].candidate, 0);
  EXPECT_EQ(r.trace[0].value, Rational(4));
  EXPECT_EQ(r.trace[1].candidate, 3);
  EXPECT_EQ(r.trace[2].candidate, 5);
}

TEST(SeqPhragmen, BridgePicksBothParties) {
  const RuleOutcome r = seq_phragmen(testing::bridge());
  ASSERT_EQ(r.committees.size(), 1U);
  EXPECT_EQ(r.committees[0], (CandidateSet{0, 1}));
  EXPECT_EQ(r.trace[0].value, Rational(1, 5));
}

TEST(SeqPhragmenProperty, MatchesReferenceAndConservesLoad) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 300; ++i) {
    const Instance inst = testing::random_small(rng, 12, 8);
    const PhragmenState s = seq_phragmen_run(inst);
    EXPECT_EQ(s.order, phragmen_oracle(inst));
    Rational total;
    for (const auto& x : s.loads) {
      EXPECT_GE(x, Rational(0));
      total += x;
    }
    EXPECT_EQ(total, Rational(static_cast<std::int64_t>(s.order.size())));
    const RuleOutcome r = seq_phragmen(inst);
    for (std::size_t j = 1; j < s.order.size(); ++j) EXPECT_GE(r.trace[j].value, r.trace[j - 1].value);
  }
}

TEST(Mes, BridgeBuysBothParties) {
  const Instance inst = testing::bridge();
  EXPECT_EQ(mes(inst, Rational(1, 5)), (std::vector<int>{0, 1}));
  EXPECT_TRUE(mes(inst, Rational(0)).empty());
  EXPECT_EQ(alpha_mes_budget(inst), Rational(1, 5));
}

TEST(MesProperty, MatchesReferenceAndConservesBudget) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i) {
    const Instance inst = testing::random_small(rng, 12, 8);
    const Rational b(std::uniform_int_distribution<int>(1, 6)(rng), inst.num_voters());
    EXPECT_EQ(mes(inst, b), mes_oracle(inst, b));
    const MesState s = mes_run(inst, b);
    Rational left;
    for (const auto& x : s.budgets) {
      EXPECT_GE(x, Rational(0));
      left += x;
    }
    EXPECT_EQ(b * Rational(inst.num_voters()) - left, Rational(static_cast<std::int64_t>(s.order.size())));
  }
}

TEST(AlphaMes, BudgetBuysKCandidates) {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 100; ++i) {
    const Instance inst = testing::random_small(rng, 10, 7);
    int supported = 0;
    for (int c = 0; c < inst.num_candidates(); ++c) supported += inst.support_size(c) > 0 ? 1 : 0;
    if (supported == 0) continue;
    const Rational b = alpha_mes_budget(inst);
    EXPECT_GT(b, Rational(0));
    EXPECT_GE(static_cast<int>(mes(inst, b).size()), std::min(supported, inst.committee_size()));
  }
}

TEST(Gjcr, BridgeTraceAndPrices) {
  const Instance inst = testing::bridge();
  const GjcrState s = gjcr_run(inst, Rational(1));
  EXPECT_EQ(s.order, (std::vector<int>{0, 1}));
  for (const auto& p : s.prices) EXPECT_EQ(p, Rational(1, 5));
}

TEST(Gjcr, NoCohesiveGroupSelectsNothing) {
  const Instance inst = testing::make(3, 2, {{0}, {1}, {2}, {0}});  // threshold 2 at level 1 only reached by c0
  EXPECT_EQ(gjcr_run(inst, Rational(1)).order, (std::vector<int>{0}));
  const RuleOutcome r = gjcr(inst);
  EXPECT_EQ(r.filled, 1);
  EXPECT_EQ(r.committees[0], (CandidateSet{0, 1}));
}

TEST(GjcrProperty, MatchesReferenceAndCertifiesEjrPlus) {
  std::mt19937_64 rng(25);
  for (int i = 0; i < 300; ++i) {
    const Instance inst = testing::random_small(rng, 12, 8);
    const GjcrState s = gjcr_run(inst, Rational(1));
    EXPECT_EQ(s.order, gjcr_oracle(inst, Rational(1)));
    Rational total;
    for (const auto& p : s.prices) total += p;
    EXPECT_EQ(total, Rational(static_cast<std::int64_t>(s.order.size())));
    if (static_cast<int>(s.order.size()) == inst.committee_size()) {
      EXPECT_TRUE(satisfies(inst, s.selected, Rational(1), Axiom::EJRPlus));
    }
    const Rational half(1, 2);
    EXPECT_EQ(gjcr_run(inst, half).order, gjcr_oracle(inst, half));
  }
}

// Worst-case constructions -------------------------------------------------------

TEST(TiedBlocks, AdversarialTiesPickOnlyBlocks) {
  const Instance inst = testing::tied_blocks(2);
  EXPECT_EQ(optimal_alpha_jr(inst).alpha_star, Rational(2, 9));
  for (Rule rule : {Rule::CC, Rule::SeqCC, Rule::PAV, Rule::SeqPhragmen, Rule::AlphaMES, Rule::AlphaGJCR}) {
    const RuleOutcome r = run_rule(inst, rule, {.adversarial = true});
    ASSERT_EQ(r.committees.size(), 1U) << to_string(rule);
    EXPECT_TRUE(r.committees[0].subset_of(block_candidates(2))) << to_string(rule);
    EXPECT_EQ(alpha_jr(inst, r.committees[0]).alpha_value, Rational(2, 3)) << to_string(rule);
  }
  EXPECT_EQ(*alpha_mes(inst).parameter, Rational(1, 3));
  EXPECT_EQ(*alpha_gjcr(inst).parameter, Rational(2, 3));
}

TEST(TieFreeBlocks, EveryTieBranchElectsBlocks) {
  const Instance inst = testing::tie_free_blocks(5);
  for (Rule rule : {Rule::CC, Rule::SeqCC, Rule::PAV, Rule::SeqPhragmen, Rule::AlphaMES, Rule::AlphaGJCR}) {
    const RuleOutcome r = run_rule(inst, rule, {.max_committees = 10});
    EXPECT_EQ(r.committees.size(), 6U) << to_string(rule);
    EXPECT_TRUE(all_in(r.committees, block_candidates(5))) << to_string(rule);
    for (Committee w : r.committees) EXPECT_EQ(alpha_jr(inst, w).alpha_value, Rational(5, 6));
  }
  EXPECT_EQ(optimal_alpha_jr(inst).alpha_star, Rational(10, 42));
}

// Plumbing -----------------------------------------------------------------------

TEST(Rules, ParseNames) {
  EXPECT_EQ(parse_rule("seq-phragmen"), Rule::SeqPhragmen);
  EXPECT_EQ(parse_rule("alpha_gjcr"), Rule::AlphaGJCR);
  EXPECT_EQ(parse_rule("MES_completed"), Rule::MESCompleted);
  EXPECT_THROW(parse_rule("stv"), Error);
  for (Rule r : {Rule::CC, Rule::SeqCC, Rule::PAV, Rule::SeqPhragmen, Rule::MES, Rule::MESCompleted, Rule::AlphaMES,
                 Rule::GJCR, Rule::AlphaGJCR}) {
    EXPECT_EQ(parse_rule(to_string(r)), r);
  }
}

TEST(RulesProperty, OutcomesAreDistinctSizeKCommittees) {
  std::mt19937_64 rng(26);
  for (int i = 0; i < 60; ++i) {
    const Instance inst = testing::random_small(rng, 10, 7);
    const bool any_approval = std::any_of(inst.ballots().begin(), inst.ballots().end(),
                                          [](CandidateSet b) { return !b.empty(); });
    for (Rule rule : {Rule::CC, Rule::SeqCC, Rule::PAV, Rule::SeqPhragmen, Rule::MES, Rule::MESCompleted,
                      Rule::AlphaMES, Rule::GJCR, Rule::AlphaGJCR}) {
      if (rule == Rule::AlphaMES && !any_approval) {
        EXPECT_THROW(run_rule(inst, rule), PreconditionError);
        continue;
      }
      for (bool adversarial : {false, true}) {
        const RuleOutcome r = run_rule(inst, rule, {.adversarial = adversarial});
        ASSERT_FALSE(r.committees.empty());
        EXPECT_LE(r.committees.size(), adversarial ? 1U : 5U);
        for (std::size_t a = 0; a < r.committees.size(); ++a) {
          EXPECT_EQ(r.committees[a].size(), inst.committee_size());
          for (std::size_t b = 0; b < a; ++b) EXPECT_NE(r.committees[a], r.committees[b]);
        }
      }
    }
  }
}

TEST(Rules, AdversarialMaximisesJrAmongBranches) {
  std::mt19937_64 rng(27);
  for (int i = 0; i < 60; ++i) {
    const Instance inst = testing::random_small(rng, 9, 6);
    for (Rule rule : {Rule::SeqCC, Rule::SeqPhragmen, Rule::PAV}) {
      const RuleOutcome all = run_rule(inst, rule, {.max_committees = 1000});
      const RuleOutcome worst = run_rule(inst, rule, {.adversarial = true});
      Rational best;
      for (Committee w : all.committees) best = max(best, alpha_jr(inst, w).alpha_value);
      EXPECT_EQ(alpha_jr(inst, worst.committees[0]).alpha_value, best) << to_string(rule);
    }
  }
}

}  // namespace
}  // namespace alphaquota
