#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "alphaquota/rules.hpp"
#include "alphaquota/sampling.hpp"

namespace alphaquota {

struct ModelSpec {
  Model model = Model::IC;
  std::vector<double> params;  // p for IC, t for Euclidean
};

struct ExperimentGrid {
  std::vector<int> n_values{11, 12, 29, 59};
  std::vector<int> m_values{5, 9, 15};
  std::vector<int> k_values{3, 5, 8, 11};
  std::vector<ModelSpec> models{{Model::IC, {0.3, 0.5}}, {Model::Euclidean, {1.7, 2.3}}};
  int instances_per_cell = 100;
  double sigma = 0.5;
  CandidatePlacement placement = CandidatePlacement::Uniform;
  int max_committees = 5;
  std::int64_t committee_budget = 1'000'000;
};

/// Parses `key = value` lines (`#` starts a comment). Keys: n, m, k, ic_p,
/// euclidean_t (lists like `[0.3, 0.5]`; an empty list drops the model),
/// instances_per_cell, sigma, candidates (uniform|gaussian),
/// max_committees, committee_budget. Unset keys keep the default grid.
ExperimentGrid parse_grid_config(std::string_view text);

struct Cell {
  Model model = Model::IC;
  double param = 0;
  int n = 0;
  int m = 0;
  int k = 0;
};

/// Cells ordered by model, parameter, k, m, n; only k < m is kept.
std::vector<Cell> grid_cells(const ExperimentGrid& grid);

/// (k, m, n) rows with k < m, in the same order.
std::vector<std::array<int, 3>> grid_rows(const ExperimentGrid& grid);

/// round(instances_per_cell * scale), at least 1. Requires 0 < scale <= 1.
int replicates_per_cell(const ExperimentGrid& grid, double scale);

/// Rules compared against the optimum, in CSV column order.
inline constexpr std::array<Rule, 4> kExperimentRules{Rule::MESCompleted, Rule::SeqPhragmen, Rule::CC, Rule::PAV};

struct RuleStats {
  Rational jr_mean;
  Rational ejr_mean;
  int committees = 0;
};

struct ExperimentRecord {
  std::string model;
  std::string param;
  int n = 0;
  int m = 0;
  int k = 0;
  std::uint64_t seed = 0;
  Rational alpha_jr_opt;
  Rational alpha_ejr_opt;
  std::array<RuleStats, kExperimentRules.size()> rules;
  std::vector<std::string> flags;

  /// Rows whose optimum search ran out of budget carry no values.
  bool excluded() const;
};

/// Samples and evaluates one instance.
ExperimentRecord run_instance(const Cell& cell, std::uint64_t seed, const ExperimentGrid& grid);

struct RunOptions {
  double scale = 0.1;
  std::uint64_t master_seed = 1;
  int jobs = 1;
  /// Called after each finished instance with (done, total).
  std::function<void(std::size_t, std::size_t)> progress;
};

/// Runs every cell and replicate; records come back ordered by (cell, replicate).
std::vector<ExperimentRecord> run_grid(const ExperimentGrid& grid, const RunOptions& opts);

std::string csv_header();
std::string csv_row(const ExperimentRecord& record);
void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> read_csv(std::istream& in);

struct RowSummary {
  int k = 0;
  int m = 0;
  int n = 0;
  int instances = 0;
  int excluded = 0;
  std::array<Rational, kExperimentRules.size()> jr_distance;   // mean rule alpha minus optimum
  std::array<Rational, kExperimentRules.size()> ejr_distance;
};

struct Summary {
  std::vector<RowSummary> rows;
  std::array<Rational, kExperimentRules.size()> pooled_jr_distance;
  std::array<Rational, kExperimentRules.size()> pooled_ejr_distance;
  int instances = 0;
  int excluded = 0;
  /// Sorted values per axiom ("jr", "ejr") and series ("opt" or a rule name).
  std::map<std::string, std::map<std::string, std::vector<double>>> cdf;
  /// Counts of the optimum over `bins` equal bins of [0, 1], per axiom and model.
  std::map<std::string, std::map<std::string, std::vector<int>>> histogram;
  int bins = 20;
};

/// Pools models and parameters per (k, m, n) row. Rejects records that do
/// not form one grid (unequal replicate counts or row sets across cells).
Summary summarize(const std::vector<ExperimentRecord>& records, int bins = 20);

void write_summary(std::ostream& out, const Summary& summary);

}  // namespace alphaquota
