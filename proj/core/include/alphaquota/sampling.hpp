#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "alphaquota/instance.hpp"

namespace alphaquota {

/// SplitMix64: a counter-based generator with 64-bit state. The stream for a
/// seed is fixed by the published constants, so other implementations can
/// reproduce it exactly.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Two independent standard normal draws (Box-Muller).
  std::pair<double, double> normal_pair();

 private:
  std::uint64_t state_;
};

/// The SplitMix64 output finaliser.
std::uint64_t mix64(std::uint64_t z);

/// Seed of replicate `replicate` in grid cell `cell`:
/// mix64(mix64(master + G*(cell+1)) + G*(replicate+1)), G = 0x9E3779B97F4A7C15.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t replicate);

enum class Model { IC, Euclidean };
std::string to_string(Model model);
Model parse_model(std::string_view text);

enum class CandidatePlacement { Uniform, Gaussian };
std::string to_string(CandidatePlacement placement);
CandidatePlacement parse_placement(std::string_view text);

struct SamplerConfig {
  Model model = Model::IC;
  int n = 1;
  int m = 1;
  int k = 1;
  double p = 0.5;      // IC approval probability
  double t = 1.7;      // Euclidean approval radius
  double sigma = 0.5;  // voter spread per axis
  CandidatePlacement placement = CandidatePlacement::Uniform;
  std::uint64_t seed = 0;
};

/// Every (voter, candidate) pair approved independently with probability p,
/// drawn voter by voter.
Instance sample_ic(const SamplerConfig& cfg);

/// Voters ~ N(0, sigma^2) per axis, then candidates uniform on [-1, 1]^2
/// (or Gaussian like the voters); v approves c iff their distance is <= t.
Instance sample_euclidean(const SamplerConfig& cfg);

Instance sample(const SamplerConfig& cfg);

}  // namespace alphaquota
