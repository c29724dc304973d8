#include "alphaquota/sampling.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "alphaquota/errors.hpp"

namespace alphaquota {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() {
  state_ += kGamma;
  return mix64(state_);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::pair<double, double> SplitMix64::normal_pair() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t replicate) {
  return mix64(mix64(master + kGamma * (cell + 1)) + kGamma * (replicate + 1));
}

std::string to_string(Model model) { return model == Model::IC ? "ic" : "euclidean"; }

Model parse_model(std::string_view text) {
  if (text == "ic" || text == "IC") return Model::IC;
  if (text == "euclidean" || text == "eut" || text == "EUT") return Model::Euclidean;
  throw PreconditionError("unknown model '" + std::string(text) + "' (expected ic or euclidean)");
}

std::string to_string(CandidatePlacement placement) {
  return placement == CandidatePlacement::Uniform ? "uniform" : "gaussian";
}

CandidatePlacement parse_placement(std::string_view text) {
  if (text == "uniform") return CandidatePlacement::Uniform;
  if (text == "gaussian") return CandidatePlacement::Gaussian;
  throw PreconditionError("unknown candidate placement '" + std::string(text) + "' (expected uniform or gaussian)");
}

namespace {

void check_dimensions(const SamplerConfig& cfg) {
  if (cfg.n < 1 || cfg.m < 1 || cfg.k < 1) throw ValidationError("n, m and k must be positive");
  if (cfg.m > kMaxCandidates) throw ValidationError("m exceeds the supported maximum of 64");
  if (cfg.k > cfg.m) throw ValidationError("k must not exceed m");
}

}  // namespace

Instance sample_ic(const SamplerConfig& cfg) {
  check_dimensions(cfg);
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw ValidationError("p must lie in [0, 1]");
  SplitMix64 rng(cfg.seed);
  std::vector<CandidateSet> ballots(static_cast<std::size_t>(cfg.n));
  for (auto& ballot : ballots)
    for (int c = 0; c < cfg.m; ++c)
      if (rng.uniform() < cfg.p) ballot.insert(c);
  return Instance(cfg.m, cfg.k, std::move(ballots));
}

Instance sample_euclidean(const SamplerConfig& cfg) {
  check_dimensions(cfg);
  if (!(cfg.t >= 0.0)) throw ValidationError("t must be non-negative");
  if (!(cfg.sigma >= 0.0)) throw ValidationError("sigma must be non-negative");
  SplitMix64 rng(cfg.seed);
  std::vector<std::pair<double, double>> voters(static_cast<std::size_t>(cfg.n));
  for (auto& pos : voters) {
    const auto [x, y] = rng.normal_pair();
    pos = {cfg.sigma * x, cfg.sigma * y};
  }
  std::vector<std::pair<double, double>> candidates(static_cast<std::size_t>(cfg.m));
  for (auto& pos : candidates) {
    if (cfg.placement == CandidatePlacement::Uniform) {
      const double x = 2.0 * rng.uniform() - 1.0;
      const double y = 2.0 * rng.uniform() - 1.0;
      pos = {x, y};
    } else {
      const auto [x, y] = rng.normal_pair();
      pos = {cfg.sigma * x, cfg.sigma * y};
    }
  }
  const double radius2 = cfg.t * cfg.t;
  std::vector<CandidateSet> ballots(static_cast<std::size_t>(cfg.n));
  for (std::size_t v = 0; v < voters.size(); ++v) {
    for (int c = 0; c < cfg.m; ++c) {
      const double dx = voters[v].first - candidates[static_cast<std::size_t>(c)].first;
      const double dy = voters[v].second - candidates[static_cast<std::size_t>(c)].second;
      if (dx * dx + dy * dy <= radius2) ballots[v].insert(c);
    }
  }
  return Instance(cfg.m, cfg.k, std::move(ballots));
}

Instance sample(const SamplerConfig& cfg) {
  return cfg.model == Model::IC ? sample_ic(cfg) : sample_euclidean(cfg);
}

}  // namespace alphaquota
