#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alphaquota/instance.hpp"

namespace alphaquota {

enum class Rule { CC, SeqCC, PAV, SeqPhragmen, MES, MESCompleted, AlphaMES, GJCR, AlphaGJCR };

std::string to_string(Rule rule);
/// Accepts cc, seqcc, pav, seqphragmen, mes, mes_completed, alphames, gjcr,
/// alphagjcr (dashes and underscores are ignored).
Rule parse_rule(std::string_view text);

struct RuleOptions {
  int max_committees = 5;
  /// Break every tie towards the committee with the largest alpha_JR
  /// instead of listing committees in branch order.
  bool adversarial = false;
  /// Committees for CC/PAV, explored states for sequential rules.
  std::int64_t budget = 1'000'000;
};

/// One selection step: the candidate and the quantity that decided it
/// (new coverage, PAV gain, new load, MES price or |N(c)|).
struct TraceStep {
  int candidate = -1;
  Rational value;
};

struct RuleOutcome {
  Rule rule = Rule::CC;
  std::vector<Committee> committees;  // distinct, size k, branch order
  std::vector<TraceStep> trace;       // steps behind committees.front()
  int filled = 0;                     // seats of committees.front() filled by index order
  std::optional<Rational> parameter;  // alpha-MES budget or alpha-GJCR alpha
  std::vector<std::string> notes;
};

std::int64_t cc_score(const Instance& inst, CandidateSet w);
Rational pav_score(const Instance& inst, CandidateSet w);
/// H(t) = 1 + 1/2 + ... + 1/t, H(0) = 0.
Rational harmonic(int t);

/// Smallest q with sum_i min(budgets[i], q) >= 1, or nullopt when the
/// budgets sum to less than 1.
std::optional<Rational> mes_price(std::span<const Rational> budgets);

struct PhragmenState {
  CandidateSet selected;
  std::vector<int> order;
  std::vector<Rational> loads;
};

struct MesState {
  CandidateSet selected;
  std::vector<int> order;
  std::vector<Rational> budgets;
};

struct GjcrState {
  CandidateSet selected;
  std::vector<int> order;
  std::vector<Rational> prices;
  int level = 0;
};

/// Single runs with ties broken towards the lowest candidate index.
PhragmenState seq_phragmen_run(const Instance& inst);
/// MES(b): purchases until nothing is affordable, or until `cap` purchases.
MesState mes_run(const Instance& inst, const Rational& budget_per_voter, int cap = -1);
/// Purchase sequence of MES(b), uncapped.
std::vector<int> mes(const Instance& inst, const Rational& budget_per_voter);
/// The thresholded greedy justified candidate rule (alpha = 1 is plain GJCR).
GjcrState gjcr_run(const Instance& inst, const Rational& alpha, int cap = -1);

RuleOutcome cc(const Instance& inst, const RuleOptions& opts = {});
RuleOutcome pav(const Instance& inst, const RuleOptions& opts = {});
RuleOutcome seq_cc(const Instance& inst, const RuleOptions& opts = {});
RuleOutcome seq_phragmen(const Instance& inst, const RuleOptions& opts = {});
/// MES with budget k/n, padded by index order when it buys fewer than k.
RuleOutcome mes_rule(const Instance& inst, const RuleOptions& opts = {});
/// MES with budget k/n, completed by seq-Phragmen starting from the spent budgets as loads.
RuleOutcome mes_completed(const Instance& inst, const RuleOptions& opts = {});
/// MES at the smallest budget that buys k candidates; stops after k purchases.
RuleOutcome alpha_mes(const Instance& inst, const RuleOptions& opts = {});
RuleOutcome gjcr(const Instance& inst, const RuleOptions& opts = {});
/// GJCR at the largest EJR-grid alpha for which the run selects at least k
/// candidates; stops after k.
RuleOutcome alpha_gjcr(const Instance& inst, const RuleOptions& opts = {});

/// Smallest b for which MES(b) buys min(k, #supported candidates). Exact.
Rational alpha_mes_budget(const Instance& inst, std::vector<std::string>* notes = nullptr);

RuleOutcome run_rule(const Instance& inst, Rule rule, const RuleOptions& opts = {});

}  // namespace alphaquota
