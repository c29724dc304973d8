#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "alphaquota/instance.hpp"

namespace alphaquota::testing {

inline Instance make(int m, int k, const std::vector<std::vector<int>>& ballots) {
  std::vector<CandidateSet> b;
  for (const auto& ballot : ballots) b.push_back(CandidateSet::from(ballot));
  return Instance(m, k, std::move(b));
}

inline std::vector<std::vector<int>> repeat(std::vector<int> ballot, int times) {
  return std::vector<std::vector<int>>(static_cast<std::size_t>(times), std::move(ballot));
}

inline std::vector<std::vector<int>> concat(std::initializer_list<std::vector<std::vector<int>>> parts) {
  std::vector<std::vector<int>> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// Four voters approve c0, four approve c1; two bridge voters approve {c0,c2,c3} and {c1,c2,c3}.
inline Instance bridge() {
  return make(4, 2, concat({repeat({0}, 4), {{0, 2, 3}, {1, 2, 3}}, repeat({1}, 4)}));
}

// Four voters share c1..c3; the rest split over c4..c7 as 3, 1, 3, 1.
inline Instance shared_block() {
  return make(7, 3, concat({repeat({0, 1, 2}, 4), repeat({3}, 3), {{4}}, repeat({5}, 3), {{6}}}));
}

// x = 4 voters approve {a, b}, y = 2 voters approve {c}; k = 2.
inline Instance gap() { return make(3, 2, concat({repeat({0, 1}, 4), repeat({2}, 2)})); }

// Blocks of `block` consecutive voters approve b_i; voter v (1-based) also
// approves d_{v mod block} when that residue lies in 1..k.
inline Instance block_family(int k, int block) {
  const int n = (k + 1) * block;
  std::vector<std::vector<int>> ballots(static_cast<std::size_t>(n));
  for (int v = 1; v <= n; ++v) {
    auto& b = ballots[static_cast<std::size_t>(v - 1)];
    b.push_back((v - 1) / block);
    const int r = v % block;
    if (r >= 1 && r <= k) b.push_back(k + r);
  }
  return make(2 * k + 1, k, ballots);
}

// B = {0..k}, D = {k+1..2k}.
inline Instance tied_blocks(int k) { return block_family(k, k + 1); }
inline Instance tie_free_blocks(int k) { return block_family(k, k + 2); }

// Voter-interval: supporters of c0, c1, c2 are {0,1,2}, {2,3,4}, {4,5}.
inline Instance vi_fixture() { return make(3, 2, {{0}, {0}, {0, 1}, {1}, {1, 2}, {2}}); }

// Candidate-interval along 0 < 1 < 2.
inline Instance ci_fixture() { return make(3, 1, {{0, 1}, {0, 1}, {1, 2}, {1, 2}, {2}}); }

inline Instance random_instance(std::mt19937_64& rng, int n, int m, int k, double p) {
  std::bernoulli_distribution approve(p);
  std::vector<CandidateSet> ballots(static_cast<std::size_t>(n));
  for (auto& b : ballots) {
    for (int c = 0; c < m; ++c) {
      if (approve(rng)) b.insert(c);
    }
  }
  return Instance(m, k, std::move(ballots));
}

/// n in [1, max_n], m in [1, max_m], k in [1, m], p in {0.2, 0.4, 0.6}.
inline Instance random_small(std::mt19937_64& rng, int max_n, int max_m) {
  const int n = std::uniform_int_distribution<int>(1, max_n)(rng);
  const int m = std::uniform_int_distribution<int>(1, max_m)(rng);
  const int k = std::uniform_int_distribution<int>(1, m)(rng);
  const double p = std::array{0.2, 0.4, 0.6}[std::uniform_int_distribution<std::size_t>(0, 2)(rng)];
  return random_instance(rng, n, m, k, p);
}

inline Committee random_committee(std::mt19937_64& rng, int m, int k) {
  std::vector<int> c(static_cast<std::size_t>(m));
  std::iota(c.begin(), c.end(), 0);
  std::shuffle(c.begin(), c.end(), rng);
  c.resize(static_cast<std::size_t>(k));
  return CandidateSet::from(c);
}

/// Pairwise equal-or-disjoint ballots of k or k+1 candidates each; some
/// voters abstain and a few candidates stay unapproved. Voter 0 never abstains.
inline Instance random_party_list(std::mt19937_64& rng, int max_n) {
  const int n = std::uniform_int_distribution<int>(1, max_n)(rng);
  const int k = std::uniform_int_distribution<int>(1, 3)(rng);
  const int parties = std::uniform_int_distribution<int>(1, 4)(rng);
  std::vector<std::vector<int>> lists;
  int next = 0;
  for (int p = 0; p < parties; ++p) {
    const int size = std::uniform_int_distribution<int>(k, k + 1)(rng);
    std::vector<int> list;
    for (int i = 0; i < size; ++i) list.push_back(next++);
    lists.push_back(list);
  }
  const int m = next + std::uniform_int_distribution<int>(0, 2)(rng);
  std::vector<std::vector<int>> ballots;
  std::uniform_int_distribution<int> pick(0, parties);  // `parties` means abstain
  for (int v = 0; v < n; ++v) {
    const int p = v == 0 ? 0 : pick(rng);
    ballots.push_back(p == parties ? std::vector<int>{} : lists[static_cast<std::size_t>(p)]);
  }
  return make(m, k, ballots);
}

/// Every candidate's supporters form an interval of a hidden voter order.
inline Instance random_vi(std::mt19937_64& rng, int max_n, int max_m) {
  const int n = std::uniform_int_distribution<int>(1, max_n)(rng);
  const int m = std::uniform_int_distribution<int>(1, max_m)(rng);
  const int k = std::uniform_int_distribution<int>(1, m)(rng);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<CandidateSet> ballots(static_cast<std::size_t>(n));
  for (int c = 0; c < m; ++c) {
    int a = std::uniform_int_distribution<int>(0, n - 1)(rng);
    int b = std::uniform_int_distribution<int>(0, n - 1)(rng);
    if (a > b) std::swap(a, b);
    if (std::bernoulli_distribution(0.1)(rng)) continue;  // unsupported candidate
    for (int i = a; i <= b; ++i) ballots[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])].insert(c);
  }
  return Instance(m, k, std::move(ballots));
}

/// Every ballot is an interval of a hidden candidate order.
inline Instance random_ci(std::mt19937_64& rng, int max_n, int max_m) {
  const int n = std::uniform_int_distribution<int>(1, max_n)(rng);
  const int m = std::uniform_int_distribution<int>(1, max_m)(rng);
  const int k = std::uniform_int_distribution<int>(1, m)(rng);
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<CandidateSet> ballots(static_cast<std::size_t>(n));
  for (auto& ballot : ballots) {
    if (std::bernoulli_distribution(0.1)(rng)) continue;  // empty ballot
    int a = std::uniform_int_distribution<int>(0, m - 1)(rng);
    int b = std::uniform_int_distribution<int>(0, m - 1)(rng);
    if (a > b) std::swap(a, b);
    for (int i = a; i <= b; ++i) ballot.insert(perm[static_cast<std::size_t>(i)]);
  }
  return Instance(m, k, std::move(ballots));
}

}  // namespace alphaquota::testing
