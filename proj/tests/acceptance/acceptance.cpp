// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Reference values come either from the
// published examples or from the brute-force oracles in tests/support.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "alphaquota/detail/combinatorics.hpp"
#include "alphaquota/domains.hpp"
#include "alphaquota/experiments.hpp"
#include "alphaquota/optimize.hpp"
#include "alphaquota/rules.hpp"
#include "alphaquota/sampling.hpp"
#include "alphaquota/verify.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace aq = alphaquota;
using aq::Axiom;
using aq::CandidateSet;
using aq::Committee;
using aq::Instance;
using aq::Rational;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Collects mismatches; the first few are kept for the report line.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) first_.push_back(what);
  }
  void note(std::string text) { notes_.push_back(std::move(text)); }

  bool ok() const { return failures_ == 0; }
  std::string detail() const {
    std::string s = std::to_string(checks_) + " checks";
    for (const auto& n : notes_) s += ", " + n;
    if (failures_ > 0) {
      s += ", " + std::to_string(failures_) + " failed";
      for (const auto& f : first_) s += "; " + f;
    }
    return s;
  }

 private:
  long checks_ = 0;
  long failures_ = 0;
  std::vector<std::string> first_;
  std::vector<std::string> notes_;
};

std::string str(const Rational& r) { return r.to_string(); }

bool exists_below(const Instance& inst, const Rational& alpha) {
  bool found = false;
  aq::oracle::for_each_subset_of_size(inst.num_candidates(), inst.committee_size(), [&](Committee w) {
    if (!found && aq::oracle::alpha_jr(inst, w) < alpha) found = true;
  });
  return found;
}

std::vector<Instance> small_instances(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  for (int i = 0; i < count; ++i) out.push_back(aq::testing::random_small(rng, 8, 6));
  return out;
}

void bridge_fixture(Check& c) {
  const Instance inst = aq::testing::bridge();
  const auto start = Clock::now();
  const Rational high = aq::alpha_jr(inst, CandidateSet{2, 3}).alpha_value;
  const Rational low = aq::alpha_jr(inst, CandidateSet{0, 1}).alpha_value;
  const bool jr = aq::satisfies(inst, CandidateSet{2, 3}, Rational(1), Axiom::JR);
  const double elapsed = ms_since(start);
  c.expect(high == Rational(4, 5), "alpha_jr({c3,c4}) = " + str(high));
  c.expect(low == Rational(0), "alpha_jr({c1,c2}) = " + str(low));
  c.expect(jr, "{c3,c4} does not satisfy JR");
  c.expect(high == aq::oracle::alpha_jr(inst, CandidateSet{2, 3}), "oracle disagrees on {c3,c4}");
  c.expect(low == aq::oracle::alpha_jr(inst, CandidateSet{0, 1}), "oracle disagrees on {c1,c2}");
  c.expect(elapsed < 1.0, "took " + std::to_string(elapsed) + " ms");
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f ms", elapsed);
  c.note(buf);
}

void shared_block_fixture(Check& c) {
  const Instance inst = aq::testing::shared_block();
  const aq::OptimizationOutcome o = aq::optimal_alpha_jr(inst);
  c.expect(o.alpha_star == Rational(1, 4), "optimum " + str(o.alpha_star));
  c.expect(aq::largest_uncovered_group(inst, o.committee).size == 1, "optimal committee leaves a group above 1");
  c.expect(aq::alpha_jr(inst, CandidateSet{0, 1, 2}).alpha_value == Rational(3, 4), "alpha_jr({c1,c2,c3})");
  int committees = 0;
  std::optional<Rational> best;
  aq::oracle::for_each_subset_of_size(7, 3, [&](Committee w) {
    ++committees;
    const Rational a = aq::oracle::alpha_jr(inst, w);
    c.expect(a == aq::alpha_jr(inst, w).alpha_value, "committee " + w.to_string());
    if (!best || a < *best) best = a;
  });
  c.expect(committees == 35, std::to_string(committees) + " committees enumerated");
  c.expect(best && *best == o.alpha_star, "enumerated optimum differs");
  c.note(std::to_string(committees) + " committees");
}

void gap(Check& c) {
  const Instance inst = aq::testing::gap();
  const Rational ejr = aq::optimal_alpha_ejr(inst).alpha_star;
  const Rational jr = aq::optimal_alpha_jr(inst).alpha_star;
  c.expect(ejr == Rational(2, 3), "alpha*_EJR = " + str(ejr));
  c.expect(jr == Rational(0), "alpha*_JR = " + str(jr));
  c.expect(aq::oracle::optimum(inst, aq::oracle::alpha_ejr) == Rational(2, 3), "oracle alpha*_EJR");
  c.expect(aq::oracle::optimum(inst, aq::oracle::alpha_jr) == Rational(0), "oracle alpha*_JR");
}

void tie_free_worst_case(Check& c) {
  const int k = 5;
  const Instance inst = aq::testing::tie_free_blocks(k);
  c.expect(inst.num_voters() == 42, "n = " + std::to_string(inst.num_voters()));
  const CandidateSet blocks = CandidateSet::full(k + 1);
  const auto start = Clock::now();
  int branches = 0;
  for (aq::Rule rule : {aq::Rule::CC, aq::Rule::SeqCC, aq::Rule::SeqPhragmen, aq::Rule::PAV, aq::Rule::AlphaMES,
                        aq::Rule::AlphaGJCR}) {
    const aq::RuleOutcome r = aq::run_rule(inst, rule, {.max_committees = 10});
    c.expect(!r.committees.empty(), aq::to_string(rule) + " elected nothing");
    for (Committee w : r.committees) {
      ++branches;
      const std::string name = aq::to_string(rule) + " " + w.to_string();
      c.expect(w.size() == k && (w - blocks).empty(), name + " is not five B-candidates");
      c.expect(aq::alpha_jr(inst, w).alpha_value == Rational(5, 6), name + " has alpha_jr != 5/6");
    }
  }
  const Rational opt = aq::optimal_alpha_jr(inst).alpha_star;
  const double elapsed = ms_since(start);
  c.expect(opt == Rational(10, 42), "alpha*_JR = " + str(opt));
  c.expect(elapsed < 1000.0, "took " + std::to_string(elapsed) + " ms");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%d tie branches, %.1f ms", branches, elapsed);
  c.note(buf);
}

void ilp_equivalence(Check& c, const std::vector<Instance>& instances) {
  long points = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const Instance& inst = instances[i];
    const Rational half_step(inst.committee_size(), 2 * inst.num_voters());
    for (const Rational& g : aq::alpha_grid(inst, Axiom::JR).values) {
      for (const Rational& alpha : {g, g + half_step}) {
        if (alpha.sign() <= 0) continue;
        ++points;
        const auto found = aq::exists_committee_jr(inst, alpha);
        const bool expected = exists_below(inst, alpha);
        const std::string at = "instance " + std::to_string(i) + " alpha " + str(alpha);
        c.expect(found.has_value() == expected, at);
        if (found) c.expect(aq::oracle::alpha_jr(inst, *found) < alpha, at + " returned a violating committee");
      }
    }
  }
  c.note(std::to_string(instances.size()) + " instances, " + std::to_string(points) + " alpha points");
}

void grid_bounds(Check& c, const std::vector<Instance>& instances) {
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const Instance& inst = instances[i];
    const int n = inst.num_voters();
    const int k = inst.committee_size();
    const auto jr = aq::alpha_grid(inst, Axiom::JR).values;
    const auto ejr = aq::alpha_grid(inst, Axiom::EJR).values;
    const Rational a = aq::optimal_alpha_jr(inst).alpha_star;
    const Rational b = aq::optimal_alpha_ejr(inst).alpha_star;
    const std::string at = "instance " + std::to_string(i);
    c.expect(static_cast<int>(jr.size()) <= (n + k - 1) / k, at + " |X| too large");
    c.expect(static_cast<int>(ejr.size()) <= n * k + 1, at + " |X_l| too large");
    c.expect(std::binary_search(jr.begin(), jr.end(), a), at + " alpha*_JR off grid");
    c.expect(std::binary_search(ejr.begin(), ejr.end(), b), at + " alpha*_EJR off grid");
    c.expect(a == aq::oracle::optimum(inst, aq::oracle::alpha_jr), at + " alpha*_JR differs from oracle");
    c.expect(b == aq::oracle::optimum(inst, aq::oracle::alpha_ejr), at + " alpha*_EJR differs from oracle");
  }
}

void implication_chain(Check& c) {
  std::mt19937_64 rng(7001);
  for (int i = 0; i < 500; ++i) {
    const Instance inst = aq::testing::random_small(rng, 12, 8);
    const Committee w = aq::testing::random_committee(rng, inst.num_candidates(), inst.committee_size());
    const Rational jr = aq::alpha_jr(inst, w).alpha_value;
    const Rational ejr = aq::alpha_ejr(inst, w).alpha_value;
    const Rational plus = aq::alpha_ejr_plus(inst, w).alpha_value;
    const std::string at = "pair " + std::to_string(i);
    c.expect(jr <= ejr && ejr <= plus, at + " chain " + str(jr) + " " + str(ejr) + " " + str(plus));
    c.expect(jr == aq::oracle::alpha_jr(inst, w), at + " alpha_jr differs from oracle");
    c.expect(ejr == aq::oracle::alpha_ejr(inst, w), at + " alpha_ejr differs from oracle");
    c.expect(plus == aq::oracle::alpha_ejr_plus(inst, w), at + " alpha_ejr_plus differs from oracle");
  }
}

void party_list(Check& c) {
  std::mt19937_64 rng(7002);
  int oracle_checked = 0;
  long committees = 0;
  for (int i = 0; i < 200; ++i) {
    const Instance inst = aq::testing::random_party_list(rng, 12);
    const std::string at = "instance " + std::to_string(i);
    const auto check = aq::detect_party_list(inst);
    c.expect(check.structure.has_value(), at + " not recognised");
    if (!check.structure) continue;
    const aq::OptimizationOutcome o = aq::party_list_optimal_ejr(inst, *check.structure);
    c.expect(o.alpha_star == aq::optimal_alpha_ejr(inst).alpha_star, at + " differs from enumeration");
    c.expect(aq::alpha_ejr(inst, o.committee).alpha_value == o.alpha_star, at + " committee value");
    const std::int64_t work = aq::binomial(inst.num_candidates(), inst.committee_size(), 1 << 20)
                              << inst.num_voters();
    if (work <= (std::int64_t{1} << 22)) {
      ++oracle_checked;
      c.expect(o.alpha_star == aq::oracle::optimum(inst, aq::oracle::alpha_ejr), at + " differs from oracle");
    }
    aq::for_each_committee(inst.num_candidates(), inst.committee_size(), aq::kDefaultCommitteeBudget,
                           [&](Committee w) {
                             ++committees;
                             c.expect(aq::alpha_ejr(inst, w).alpha_value == aq::alpha_ejr_plus(inst, w).alpha_value,
                                      at + " EJR and EJR+ differ on " + w.to_string());
                             return true;
                           });
  }
  c.note(std::to_string(oracle_checked) + " also against the definition oracle");
  c.note(std::to_string(committees) + " committees compared");
}

void interval_domains(Check& c) {
  std::mt19937_64 rng(7003);
  for (int i = 0; i < 200; ++i) {
    const bool voter_side = i % 2 == 0;
    const Instance inst = voter_side ? aq::testing::random_vi(rng, 8, 8) : aq::testing::random_ci(rng, 8, 8);
    const std::string at = std::string(voter_side ? "VI" : "CI") + " instance " + std::to_string(i);
    const auto order = voter_side ? aq::recognize_vi(inst) : aq::recognize_ci(inst);
    c.expect(order.has_value(), at + " not recognised");
    if (!order) continue;
    const int n = inst.num_voters();
    const int k = inst.committee_size();
    for (int j = 1; j <= (n + k - 1) / k + 1; ++j) {
      const Rational alpha(j * k, n);
      const CandidateSet w =
          voter_side ? aq::vi_greedy_jr(inst, *order, alpha) : aq::ci_greedy_jr(inst, *order, alpha);
      c.expect(aq::oracle::alpha_jr(inst, w) < alpha, at + " greedy set violates at " + str(alpha));
      c.expect(w.size() == aq::oracle::min_jr_set_size(inst, alpha), at + " greedy set not minimal at " + str(alpha));
    }
    aq::oracle::for_each_subset_of_size(inst.num_candidates(), k, [&](Committee w) {
      const aq::AxiomResult r = voter_side ? aq::vi_alpha_ejr(inst, *order, w) : aq::ci_alpha_ejr(inst, *order, w);
      c.expect(r.alpha_value == aq::oracle::alpha_ejr(inst, w), at + " EJR value on " + w.to_string());
    });
  }
}

void droop(Check& c) {
  std::mt19937_64 rng(7004);
  int per_model[2] = {0, 0};
  for (int i = 0; i < 1000; ++i) {
    aq::SamplerConfig cfg;
    cfg.model = i % 2 == 0 ? aq::Model::IC : aq::Model::Euclidean;
    cfg.n = std::uniform_int_distribution<int>(1, 12)(rng);
    cfg.m = std::uniform_int_distribution<int>(2, 8)(rng);
    cfg.k = std::uniform_int_distribution<int>(1, cfg.m - 1)(rng);
    cfg.p = std::array{0.2, 0.4, 0.6}[std::uniform_int_distribution<std::size_t>(0, 2)(rng)];
    cfg.t = std::array{0.8, 1.2, 1.7}[std::uniform_int_distribution<std::size_t>(0, 2)(rng)];
    cfg.seed = rng();
    const Instance inst = aq::sample(cfg);
    ++per_model[i % 2];
    const Rational plus = aq::optimal_alpha_ejr_plus(inst).alpha_star;
    const Rational droop(cfg.k, cfg.k + 1);
    c.expect(plus <= droop, "instance " + std::to_string(i) + " alpha*_EJR+ = " + str(plus));
  }
  c.note(std::to_string(per_model[0]) + " IC, " + std::to_string(per_model[1]) + " Euclidean");
}

void experiment(Check& c) {
  const aq::ExperimentGrid grid;
  aq::RunOptions opts;
  opts.scale = 0.1;
  opts.master_seed = 1;
  const auto start = Clock::now();
  const auto first = aq::run_grid(grid, opts);
  const auto second = aq::run_grid(grid, opts);
  const double elapsed = ms_since(start);
  std::ostringstream a;
  std::ostringstream b;
  aq::write_csv(a, first);
  aq::write_csv(b, second);
  c.expect(a.str() == b.str(), "CSV differs between runs");

  std::map<std::string, int> per_model;
  for (const auto& r : first) ++per_model[r.model];
  for (const auto& [model, count] : per_model) c.expect(count == 640, model + " has " + std::to_string(count));
  c.expect(per_model.size() == 2, std::to_string(per_model.size()) + " models");

  int excluded = 0;
  for (const auto& r : first) {
    if (r.excluded()) {
      ++excluded;
      continue;
    }
    for (std::size_t j = 0; j < aq::kExperimentRules.size(); ++j) {
      c.expect(r.rules[j].ejr_mean >= r.alpha_ejr_opt,
               "seed " + std::to_string(r.seed) + " " + aq::to_string(aq::kExperimentRules[j]) + " below optimum");
    }
  }
  const aq::Summary s = aq::summarize(first);
  const auto index = [](aq::Rule rule) {
    return static_cast<std::size_t>(std::find(aq::kExperimentRules.begin(), aq::kExperimentRules.end(), rule) -
                                    aq::kExperimentRules.begin());
  };
  const Rational cc = s.pooled_ejr_distance[index(aq::Rule::CC)];
  const Rational pav = s.pooled_ejr_distance[index(aq::Rule::PAV)];
  c.expect(cc > pav, "pooled CC EJR distance " + std::to_string(cc.to_double()) + " <= PAV " +
                         std::to_string(pav.to_double()));
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu instances, %d excluded, pooled EJR distance CC %.4f vs PAV %.4f, %.1f s",
                first.size(), excluded, cc.to_double(), pav.to_double(), elapsed / 1000.0);
  c.note(buf);
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void(Check&)> run;
  };
  const std::vector<Instance> shared = small_instances(7000, 500);
  const std::vector<Criterion> criteria{
      {"bridge-fixture", bridge_fixture},
      {"shared-block-fixture", shared_block_fixture},
      {"jr-ejr-gap", gap},
      {"tie-free-worst-case", tie_free_worst_case},
      {"ilp-equivalence", [&](Check& c) { ilp_equivalence(c, shared); }},
      {"grid-bounds", [&](Check& c) { grid_bounds(c, shared); }},
      {"implication-chain", implication_chain},
      {"party-list", party_list},
      {"interval-domains", interval_domains},
      {"droop-ceiling", droop},
      {"desk-scale-experiment", experiment},
  };
  int failed = 0;
  for (const auto& criterion : criteria) {
    Check check;
    const auto start = Clock::now();
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double elapsed = ms_since(start);
    if (!check.ok()) ++failed;
    std::printf("%s %s (%s) [%.0f ms]\n", check.ok() ? "PASS" : "FAIL", criterion.name, check.detail().c_str(),
                elapsed);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
