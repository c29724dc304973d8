#include "alphaquota/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "alphaquota/domains.hpp"
#include "alphaquota/errors.hpp"
#include "alphaquota/optimize.hpp"
#include "alphaquota/verify.hpp"

namespace alphaquota {

namespace {

constexpr std::string_view kBudgetFlag = "budget_exceeded";

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view text, int line) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError("not a number: '" + std::string(text) + "'", line);
  }
  return value;
}

template <class T>
std::vector<T> parse_list(std::string_view text, int line) {
  text = trim(text);
  if (text.empty() || text.front() != '[') return {parse_number<T>(text, line)};
  if (text.back() != ']') throw ParseError("unterminated list", line);
  text = trim(text.substr(1, text.size() - 2));
  std::vector<T> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_number<T>(text.substr(0, comma), line));
    if (comma == std::string_view::npos) break;
    text = trim(text.substr(comma + 1));
    if (text.empty()) throw ParseError("trailing comma", line);
  }
  return out;
}

std::string format_param(double value) {
  std::ostringstream os;
  os << value;
  return os.str();
}

std::string format_double(const Rational& r) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, r.to_double(), std::chars_format::fixed, 6);
  (void)ec;
  return std::string(buf, ptr);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Rational mean(const std::vector<Rational>& values) {
  Rational sum;
  for (const auto& v : values) sum += v;
  return values.empty() ? sum : sum / Rational(static_cast<std::int64_t>(values.size()));
}

}  // namespace

ExperimentGrid parse_grid_config(std::string_view text) {
  ExperimentGrid grid;
  std::vector<ModelSpec> models = grid.models;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    auto line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value", line_no);
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    auto set_model = [&](Model model) {
      auto params = parse_list<double>(value, line_no);
      for (auto& spec : models) {
        if (spec.model == model) spec.params = params;
      }
    };
    if (key == "n") {
      grid.n_values = parse_list<int>(value, line_no);
    } else if (key == "m") {
      grid.m_values = parse_list<int>(value, line_no);
    } else if (key == "k") {
      grid.k_values = parse_list<int>(value, line_no);
    } else if (key == "ic_p") {
      set_model(Model::IC);
    } else if (key == "euclidean_t") {
      set_model(Model::Euclidean);
    } else if (key == "instances_per_cell") {
      grid.instances_per_cell = parse_number<int>(value, line_no);
    } else if (key == "sigma") {
      grid.sigma = parse_number<double>(value, line_no);
    } else if (key == "candidates") {
      std::string_view v = value;
      if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
      try {
        grid.placement = parse_placement(v);
      } catch (const Error& e) {
        throw ParseError(e.what(), line_no);
      }
    } else if (key == "max_committees") {
      grid.max_committees = parse_number<int>(value, line_no);
    } else if (key == "committee_budget") {
      grid.committee_budget = parse_number<std::int64_t>(value, line_no);
    } else {
      throw ParseError("unknown key '" + std::string(key) + "'", line_no);
    }
  }
  grid.models.clear();
  for (auto& spec : models) {
    if (!spec.params.empty()) grid.models.push_back(std::move(spec));
  }
  if (grid.instances_per_cell < 1) throw ValidationError("instances_per_cell must be positive");
  if (grid.max_committees < 1) throw ValidationError("max_committees must be positive");
  if (grid.committee_budget < 1) throw ValidationError("committee_budget must be positive");
  if (!(grid.sigma > 0)) throw ValidationError("sigma must be positive");
  for (int v : grid.n_values) {
    if (v < 1) throw ValidationError("n values must be positive");
  }
  for (int v : grid.m_values) {
    if (v < 1 || v > kMaxCandidates) throw ValidationError("m values must lie in [1, 64]");
  }
  for (int v : grid.k_values) {
    if (v < 1) throw ValidationError("k values must be positive");
  }
  for (const auto& spec : grid.models) {
    for (double p : spec.params) {
      if (spec.model == Model::IC && !(p >= 0 && p <= 1)) throw ValidationError("ic_p values must lie in [0, 1]");
      if (spec.model == Model::Euclidean && !(p >= 0)) throw ValidationError("euclidean_t values must be >= 0");
    }
  }
  return grid;
}

std::vector<std::array<int, 3>> grid_rows(const ExperimentGrid& grid) {
  std::vector<std::array<int, 3>> rows;
  for (int k : grid.k_values) {
    for (int m : grid.m_values) {
      if (k >= m) continue;
      for (int n : grid.n_values) rows.push_back({k, m, n});
    }
  }
  return rows;
}

std::vector<Cell> grid_cells(const ExperimentGrid& grid) {
  std::vector<Cell> cells;
  const auto rows = grid_rows(grid);
  for (const auto& spec : grid.models) {
    for (double param : spec.params) {
      for (const auto& [k, m, n] : rows) cells.push_back({spec.model, param, n, m, k});
    }
  }
  return cells;
}

int replicates_per_cell(const ExperimentGrid& grid, double scale) {
  if (!(scale > 0 && scale <= 1)) throw ValidationError("scale must lie in (0, 1]");
  return std::max(1, static_cast<int>(std::lround(grid.instances_per_cell * scale)));
}

bool ExperimentRecord::excluded() const {
  return std::find(flags.begin(), flags.end(), kBudgetFlag) != flags.end();
}

ExperimentRecord run_instance(const Cell& cell, std::uint64_t seed, const ExperimentGrid& grid) {
  SamplerConfig cfg;
  cfg.model = cell.model;
  cfg.n = cell.n;
  cfg.m = cell.m;
  cfg.k = cell.k;
  (cell.model == Model::IC ? cfg.p : cfg.t) = cell.param;
  cfg.sigma = grid.sigma;
  cfg.placement = grid.placement;
  cfg.seed = seed;
  const Instance inst = sample(cfg);

  ExperimentRecord rec;
  rec.model = to_string(cell.model);
  rec.param = format_param(cell.param);
  rec.n = cell.n;
  rec.m = cell.m;
  rec.k = cell.k;
  rec.seed = seed;
  try {
    rec.alpha_jr_opt = optimal_alpha(inst, Axiom::JR, DomainChoice::Auto).alpha_star;
    rec.alpha_ejr_opt = optimal_alpha_ejr(inst, grid.committee_budget).alpha_star;
    if (rec.alpha_ejr_opt > Rational(cell.k, cell.k + 1)) {
      throw std::logic_error("optimal alpha_EJR " + rec.alpha_ejr_opt.to_string() + " exceeds k/(k+1) for seed " +
                             std::to_string(seed));
    }
    RuleOptions opts;
    opts.max_committees = grid.max_committees;
    opts.budget = grid.committee_budget;
    for (std::size_t i = 0; i < kExperimentRules.size(); ++i) {
      const auto outcome = run_rule(inst, kExperimentRules[i], opts);
      std::vector<Rational> jr;
      std::vector<Rational> ejr;
      for (Committee w : outcome.committees) {
        jr.push_back(alpha_jr(inst, w).alpha_value);
        ejr.push_back(alpha_ejr(inst, w).alpha_value);
      }
      auto& stats = rec.rules[i];
      stats.jr_mean = mean(jr);
      stats.ejr_mean = mean(ejr);
      stats.committees = static_cast<int>(outcome.committees.size());
      if (stats.jr_mean < rec.alpha_jr_opt || stats.ejr_mean < rec.alpha_ejr_opt) {
        throw std::logic_error(to_string(kExperimentRules[i]) + " beats the optimum for seed " + std::to_string(seed));
      }
      if (outcome.filled > 0) rec.flags.push_back(to_string(kExperimentRules[i]) + "_filled");
    }
  } catch (const BudgetExceeded&) {
    rec.alpha_jr_opt = Rational();
    rec.alpha_ejr_opt = Rational();
    rec.rules = {};
    rec.flags.assign(1, std::string(kBudgetFlag));
  }
  return rec;
}

std::vector<ExperimentRecord> run_grid(const ExperimentGrid& grid, const RunOptions& opts) {
  const auto cells = grid_cells(grid);
  const auto reps = static_cast<std::size_t>(replicates_per_cell(grid, opts.scale));
  const std::size_t total = cells.size() * reps;
  std::vector<ExperimentRecord> records(total);

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex mu;
  std::exception_ptr failure;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      {
        std::lock_guard lock(mu);
        if (failure) return;
      }
      try {
        const std::size_t cell = i / reps;
        const std::size_t rep = i % reps;
        records[i] = run_instance(cells[cell], derive_seed(opts.master_seed, cell, rep), grid);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
      const std::size_t finished = done.fetch_add(1) + 1;
      if (opts.progress) {
        std::lock_guard lock(mu);
        opts.progress(finished, total);
      }
    }
  };

  const int jobs = std::max(1, opts.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

// CSV ---------------------------------------------------------------------------

std::string csv_header() {
  std::string h = "model,param,n,m,k,seed,alpha_jr_opt,alpha_jr_opt_float,alpha_ejr_opt,alpha_ejr_opt_float";
  for (Rule r : kExperimentRules) {
    const auto name = to_string(r);
    h += "," + name + "_jr_mean," + name + "_jr_mean_float," + name + "_ejr_mean," + name + "_ejr_mean_float";
  }
  for (Rule r : kExperimentRules) h += "," + to_string(r) + "_committees";
  h += ",flags";
  return h;
}

std::string csv_row(const ExperimentRecord& rec) {
  std::ostringstream os;
  os << rec.model << ',' << rec.param << ',' << rec.n << ',' << rec.m << ',' << rec.k << ',' << rec.seed;
  const bool skip = rec.excluded();
  auto value = [&](const Rational& r) {
    if (skip) {
      os << ",,";
    } else {
      os << ',' << r.to_string() << ',' << format_double(r);
    }
  };
  value(rec.alpha_jr_opt);
  value(rec.alpha_ejr_opt);
  for (const auto& s : rec.rules) {
    value(s.jr_mean);
    value(s.ejr_mean);
  }
  for (const auto& s : rec.rules) {
    os << ',';
    if (!skip) os << s.committees;
  }
  os << ',';
  for (std::size_t i = 0; i < rec.flags.size(); ++i) os << (i ? ";" : "") << rec.flags[i];
  return os.str();
}

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << csv_header() << '\n';
  for (const auto& rec : records) out << csv_row(rec) << '\n';
}

std::vector<ExperimentRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != csv_header()) throw ParseError("CSV header does not match the experiment schema", 1);
  const std::size_t columns = split(csv_header(), ',').size();
  std::vector<ExperimentRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != columns) throw ParseError("expected " + std::to_string(columns) + " fields", line_no);
    ExperimentRecord rec;
    rec.model = f[0];
    rec.param = f[1];
    rec.n = parse_number<int>(f[2], line_no);
    rec.m = parse_number<int>(f[3], line_no);
    rec.k = parse_number<int>(f[4], line_no);
    rec.seed = parse_number<std::uint64_t>(f[5], line_no);
    if (!f.back().empty()) rec.flags = split(f.back(), ';');
    if (!rec.excluded()) {
      auto rational = [&](std::size_t i) {
        try {
          return Rational::parse(f[i]);
        } catch (const Error& e) {
          throw ParseError(e.what(), line_no);
        }
      };
      rec.alpha_jr_opt = rational(6);
      rec.alpha_ejr_opt = rational(8);
      std::size_t col = 10;
      for (auto& s : rec.rules) {
        s.jr_mean = rational(col);
        s.ejr_mean = rational(col + 2);
        col += 4;
      }
      for (auto& s : rec.rules) s.committees = parse_number<int>(f[col++], line_no);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

// Summaries ---------------------------------------------------------------------

Summary summarize(const std::vector<ExperimentRecord>& records, int bins) {
  if (bins < 1) throw ValidationError("bins must be positive");
  using CellKey = std::tuple<std::string, std::string, int, int, int>;
  std::map<CellKey, int> per_cell;
  std::map<std::pair<std::string, std::string>, std::vector<std::array<int, 3>>> rows_per_series;
  for (const auto& rec : records) {
    if (per_cell[{rec.model, rec.param, rec.k, rec.m, rec.n}]++ == 0) {
      rows_per_series[{rec.model, rec.param}].push_back({rec.k, rec.m, rec.n});
    }
  }
  if (!per_cell.empty()) {
    const int reps = per_cell.begin()->second;
    for (const auto& [key, count] : per_cell) {
      if (count != reps) throw ValidationError("records mix grids: cells have different replicate counts");
    }
    auto first = rows_per_series.begin()->second;
    std::sort(first.begin(), first.end());
    for (auto& [series, rows] : rows_per_series) {
      std::sort(rows.begin(), rows.end());
      if (rows != first) throw ValidationError("records mix grids: model parameters cover different rows");
    }
  }

  constexpr std::size_t R = kExperimentRules.size();
  Summary s;
  s.bins = bins;
  std::map<std::array<int, 3>, std::size_t> row_index;
  std::vector<std::array<std::vector<Rational>, 2 * R>> row_values;
  std::array<std::vector<Rational>, 2 * R> pooled;
  for (const auto& rec : records) {
    const std::array<int, 3> key{rec.k, rec.m, rec.n};
    auto [it, inserted] = row_index.try_emplace(key, s.rows.size());
    if (inserted) {
      s.rows.push_back({rec.k, rec.m, rec.n, 0, 0, {}, {}});
      row_values.emplace_back();
    }
    auto& row = s.rows[it->second];
    ++row.instances;
    ++s.instances;
    if (rec.excluded()) {
      ++row.excluded;
      ++s.excluded;
      continue;
    }
    for (std::size_t i = 0; i < R; ++i) {
      const Rational dj = rec.rules[i].jr_mean - rec.alpha_jr_opt;
      const Rational de = rec.rules[i].ejr_mean - rec.alpha_ejr_opt;
      row_values[it->second][i].push_back(dj);
      row_values[it->second][R + i].push_back(de);
      pooled[i].push_back(dj);
      pooled[R + i].push_back(de);
      s.cdf["jr"][to_string(kExperimentRules[i])].push_back(rec.rules[i].jr_mean.to_double());
      s.cdf["ejr"][to_string(kExperimentRules[i])].push_back(rec.rules[i].ejr_mean.to_double());
    }
    s.cdf["jr"]["opt"].push_back(rec.alpha_jr_opt.to_double());
    s.cdf["ejr"]["opt"].push_back(rec.alpha_ejr_opt.to_double());
    for (const auto& [axiom, value] : {std::pair{"jr", &rec.alpha_jr_opt}, std::pair{"ejr", &rec.alpha_ejr_opt}}) {
      auto& hist = s.histogram[axiom][rec.model];
      hist.resize(static_cast<std::size_t>(bins));
      const auto bin = std::clamp<std::int64_t>((*value * Rational(bins)).floor(), 0, bins - 1);
      ++hist[static_cast<std::size_t>(bin)];
    }
  }
  for (std::size_t r = 0; r < s.rows.size(); ++r) {
    for (std::size_t i = 0; i < R; ++i) {
      s.rows[r].jr_distance[i] = mean(row_values[r][i]);
      s.rows[r].ejr_distance[i] = mean(row_values[r][R + i]);
    }
  }
  for (std::size_t i = 0; i < R; ++i) {
    s.pooled_jr_distance[i] = mean(pooled[i]);
    s.pooled_ejr_distance[i] = mean(pooled[R + i]);
  }
  for (auto& [axiom, series] : s.cdf) {
    for (auto& [name, values] : series) std::sort(values.begin(), values.end());
  }
  return s;
}

void write_summary(std::ostream& out, const Summary& s) {
  out << "k,m,n,instances,excluded";
  for (const char* axiom : {"jr", "ejr"}) {
    for (Rule r : kExperimentRules) out << ',' << to_string(r) << '_' << axiom << "_distance";
  }
  out << '\n';
  auto emit = [&](const std::string& label, int instances, int excluded, const auto& jr, const auto& ejr) {
    out << label << ',' << instances << ',' << excluded;
    for (const auto& d : jr) out << ',' << format_double(d);
    for (const auto& d : ejr) out << ',' << format_double(d);
    out << '\n';
  };
  for (const auto& row : s.rows) {
    emit(std::to_string(row.k) + ',' + std::to_string(row.m) + ',' + std::to_string(row.n), row.instances,
         row.excluded, row.jr_distance, row.ejr_distance);
  }
  emit("all,all,all", s.instances, s.excluded, s.pooled_jr_distance, s.pooled_ejr_distance);
}

}  // namespace alphaquota
