#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "alphaquota/domains.hpp"
#include "alphaquota/errors.hpp"
#include "alphaquota/experiments.hpp"
#include "alphaquota/optimize.hpp"
#include "alphaquota/rules.hpp"
#include "alphaquota/sampling.hpp"
#include "alphaquota/verify.hpp"

namespace alphaquota::cli {

namespace {

using nlohmann::json;

// Thrown for unreadable or unwritable files; maps to exit code 2.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string shortest(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string show(const Rational& r) { return r.to_string() + " (" + shortest(r.to_double()) + ")"; }

json rational_json(const Rational& r) { return {{"exact", r.to_string()}, {"float", r.to_double()}}; }

struct Display {
  int offset = 0;

  std::vector<int> shift(std::vector<int> xs) const {
    for (int& x : xs) x += offset;
    return xs;
  }
  std::vector<int> members(CandidateSet s) const { return shift(s.to_vector()); }
  std::string list(CandidateSet s) const { return "{" + s.to_string(offset) + "}"; }
  std::string list(const std::vector<int>& xs) const {
    std::string out = "{";
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i] + offset);
    return out + "}";
  }
};

json witness_json(const std::optional<Violation>& w, const Display& d) {
  if (!w) return nullptr;
  return {{"voters", d.shift(w->voters)},
          {"candidates", d.members(w->candidates)},
          {"level", w->level},
          {"alpha", rational_json(w->alpha)}};
}

void print_witness(std::ostream& out, const std::optional<Violation>& w, const Display& d) {
  if (!w) {
    out << "witness: none\n";
    return;
  }
  out << "witness: voters " << d.list(w->voters) << " candidates " << d.list(w->candidates) << " level " << w->level
      << " alpha " << show(w->alpha) << '\n';
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw IoError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

json outcome_json(const OptimizationOutcome& o, Axiom axiom, const Display& d) {
  return {{"axiom", to_string(axiom)},
          {"alpha_star", rational_json(o.alpha_star)},
          {"committee", d.members(o.committee)},
          {"method", to_string(o.method)},
          {"explored", o.explored}};
}

// CLI11 validator that accepts whatever `parse` accepts.
template <class Parse>
CLI::Validator parses_as(const char* what, Parse parse) {
  return CLI::Validator(
      [parse](std::string& text) {
        try {
          parse(text);
          return std::string();
        } catch (const Error& e) {
          return std::string(e.what());
        }
      },
      what);
}

std::vector<int> parse_order(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int value = -1;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && item[used] == ' ') ++used;
    if (used == 0 || used != item.size()) throw CLI::ValidationError("--order", "not an index list: '" + text + "'");
    out.push_back(value);
  }
  return out;
}

bool is_permutation_of(const std::vector<int>& order, int size) {
  std::vector<bool> seen(static_cast<std::size_t>(size), false);
  if (static_cast<int>(order.size()) != size) return false;
  for (int x : order) {
    if (x < 0 || x >= size || seen[static_cast<std::size_t>(x)]) return false;
    seen[static_cast<std::size_t>(x)] = true;
  }
  return true;
}

json order_json(const std::optional<std::vector<int>>& order, const Display& d) {
  return order ? json(d.shift(*order)) : json(nullptr);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compute and optimise alpha-JR, alpha-EJR and alpha-EJR+ quotas of approval elections", "alpha"};
  app.set_version_flag("--version", std::string(ALPHAQUOTA_VERSION));
  app.require_subcommand(1);

  bool as_json = false;
  bool one_indexed = false;
  app.add_flag("--json", as_json, "Machine-readable JSON output")->configurable(false);
  app.add_flag("--one-indexed", one_indexed, "Print voter and candidate indices starting at 1");

  std::string instance_path;
  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("--instance", instance_path, "Instance file (.json or plain text)")->required();
  };

  // eval
  auto* eval = app.add_subcommand("eval", "Alpha value of a committee and a witness");
  add_instance(eval);
  std::string committee_text;
  std::string axiom_text = "jr";
  eval->add_option("--committee", committee_text, "Comma-separated 0-indexed candidates, e.g. 2,3")->required();
  const auto axiom_check = parses_as("AXIOM", [](const std::string& t) { parse_axiom(t); });
  eval->add_option("--axiom", axiom_text, "jr | ejr | ejrplus")->check(axiom_check);

  // opt
  auto* opt = app.add_subcommand("opt", "Optimal alpha over all committees");
  add_instance(opt);
  std::string method_text = "auto";
  std::string domain_text = "auto";
  std::int64_t budget = kDefaultCommitteeBudget;
  std::string order_text;
  opt->add_option("--axiom", axiom_text, "jr | ejr | ejrplus")->check(axiom_check);
  opt->add_option("--method", method_text, "auto | bnb | brute")->check(CLI::IsMember({"auto", "bnb", "brute"}));
  opt->add_option("--domain", domain_text, "auto | general | partylist | vi | ci")
      ->check(parses_as("DOMAIN", [](const std::string& t) { parse_domain_choice(t); }));
  opt->add_option("--order", order_text, "Voter (vi) or candidate (ci) order, comma-separated; skips recognition");
  opt->add_option("--budget", budget, "Committee enumeration budget")->check(CLI::PositiveNumber);

  // rule
  auto* rule = app.add_subcommand("rule", "Committees of a voting rule");
  add_instance(rule);
  std::string rule_text;
  RuleOptions rule_opts;
  bool trace = false;
  rule->add_option("--rule", rule_text, "cc | seqcc | pav | seqphragmen | mes | mes_completed | alphames | gjcr | alphagjcr")
      ->required()
      ->check(parses_as("RULE", [](const std::string& t) { parse_rule(t); }));
  rule->add_option("--max-committees", rule_opts.max_committees, "Committees to list")->check(CLI::PositiveNumber);
  rule->add_flag("--adversarial", rule_opts.adversarial, "Break ties towards the committee with the largest alpha_JR");
  rule->add_flag("--trace", trace, "Print the selection steps");
  rule->add_option("--budget", rule_opts.budget, "Committee or state budget")->check(CLI::PositiveNumber);

  // domain
  auto* domain = app.add_subcommand("domain", "Detect party-list, voter-interval and candidate-interval structure");
  add_instance(domain);

  // sample
  auto* samp = app.add_subcommand("sample", "Draw a random instance");
  SamplerConfig cfg;
  std::string model_text;
  std::string placement_text = "uniform";
  std::string sample_out;
  samp->add_option("--model", model_text, "ic | euclidean")
      ->required()
      ->check(parses_as("MODEL", [](const std::string& t) { parse_model(t); }));
  samp->add_option("--n", cfg.n, "Voters")->required()->check(CLI::PositiveNumber);
  samp->add_option("--m", cfg.m, "Candidates")->required()->check(CLI::Range(1, kMaxCandidates));
  samp->add_option("--k", cfg.k, "Committee size")->required()->check(CLI::PositiveNumber);
  auto* p_opt = samp->add_option("--p", cfg.p, "IC approval probability")->check(CLI::Range(0.0, 1.0));
  auto* t_opt = samp->add_option("--t", cfg.t, "Euclidean approval radius")->check(CLI::NonNegativeNumber);
  auto* s_opt = samp->add_option("--sigma", cfg.sigma, "Euclidean voter spread")->check(CLI::PositiveNumber);
  samp->add_option("--candidates", placement_text, "uniform | gaussian (Euclidean candidates)")
      ->check(parses_as("PLACEMENT", [](const std::string& t) { parse_placement(t); }));
  p_opt->excludes(t_opt)->excludes(s_opt);
  samp->add_option("--seed", cfg.seed, "Random seed")->required();
  samp->add_option("--out", sample_out, "Output file (.json or plain text); stdout if omitted");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run the sampling experiment and write a CSV");
  std::string config_path;
  std::string csv_out;
  std::string summary_out;
  RunOptions run_opts;
  bool progress = false;
  exp->add_option("--config", config_path, "Grid config (key = value lines); default is the full grid");
  exp->add_option("--out", csv_out, "CSV output path")->required();
  exp->add_option("--summary", summary_out, "Per-row summary output path");
  exp->add_option("--scale", run_opts.scale, "Fraction of instances per cell")->check(CLI::Range(0.0, 1.0));
  exp->add_option("--seed", run_opts.master_seed, "Master seed");
  exp->add_option("--jobs", run_opts.jobs, "Worker threads")->check(CLI::PositiveNumber);
  exp->add_flag("--progress", progress, "Report progress on stderr");

  // export-ilp
  auto* ilp = app.add_subcommand("export-ilp", "Write the alpha-JR feasibility ILP in LP format");
  add_instance(ilp);
  std::string alpha_text;
  std::string lp_out;
  ilp->add_option("--alpha", alpha_text, "Alpha as p/q")->required();
  ilp->add_option("--out", lp_out, "LP output path; stdout if omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const Display d{one_indexed ? 1 : 0};
  try {
    if (eval->parsed()) {
      const Instance inst = load_instance(instance_path);
      const Axiom axiom = parse_axiom(axiom_text);
      const Committee w = parse_candidate_list(committee_text, inst.num_candidates());
      require_committee(inst, w);
      const AxiomResult r = alpha_value(inst, w, axiom);
      if (as_json) {
        out << json{{"axiom", to_string(axiom)},
                    {"committee", d.members(w)},
                    {"alpha", rational_json(r.alpha_value)},
                    {"witness", witness_json(r.witness, d)}}
                   .dump()
            << '\n';
      } else {
        out << show(r.alpha_value) << '\n';
        print_witness(out, r.witness, d);
      }
    } else if (opt->parsed()) {
      const Instance inst = load_instance(instance_path);
      const Axiom axiom = parse_axiom(axiom_text);
      const DomainChoice choice = parse_domain_choice(domain_text);
      OptimizationOutcome o;
      if (!order_text.empty()) {
        if (choice != DomainChoice::VoterInterval && choice != DomainChoice::CandidateInterval) {
          throw CLI::ValidationError("--order", "--order requires --domain vi or --domain ci");
        }
        const auto kind = choice == DomainChoice::VoterInterval ? OrderKind::VoterInterval : OrderKind::CandidateInterval;
        const std::vector<int> order = parse_order(order_text);
        const int size = kind == OrderKind::VoterInterval ? inst.num_voters() : inst.num_candidates();
        if (!is_permutation_of(order, size)) {
          throw CLI::ValidationError("--order", "--order must list every index below " + std::to_string(size) + " once");
        }
        if (!verify_order(inst, order, kind)) throw PreconditionError("the given order does not make every set an interval");
        if (axiom == Axiom::JR) {
          o = kind == OrderKind::VoterInterval ? vi_optimal_alpha_jr(inst, order) : ci_optimal_alpha_jr(inst, order);
        } else if (axiom == Axiom::EJR) {
          o = interval_optimal_alpha_ejr(inst, order, kind, budget);
        } else {
          throw PreconditionError("domain algorithms cover JR and EJR only");
        }
      } else if (axiom == Axiom::EJRPlus) {
        if (choice != DomainChoice::Auto && choice != DomainChoice::General) {
          throw PreconditionError("domain algorithms cover JR and EJR only");
        }
        o = optimal_alpha_ejr_plus(inst, budget);
      } else if (method_text == "brute") {
        o = axiom == Axiom::JR ? optimal_alpha_jr_brute(inst, budget) : optimal_alpha_ejr(inst, budget);
      } else if (method_text == "bnb") {
        o = axiom == Axiom::JR ? optimal_alpha_jr(inst) : optimal_alpha_ejr(inst, budget);
      } else if (choice == DomainChoice::General) {
        o = axiom == Axiom::JR ? optimal_alpha_jr(inst) : optimal_alpha_ejr(inst, budget);
      } else {
        o = optimal_alpha(inst, axiom, choice);
      }
      if (as_json) {
        out << outcome_json(o, axiom, d).dump() << '\n';
      } else {
        out << show(o.alpha_star) << '\n'
            << "committee: " << d.list(o.committee) << '\n'
            << "method: " << to_string(o.method) << " (explored " << o.explored << ")\n";
      }
    } else if (rule->parsed()) {
      const Instance inst = load_instance(instance_path);
      const Rule r = parse_rule(rule_text);
      const RuleOutcome res = run_rule(inst, r, rule_opts);
      if (as_json) {
        json committees = json::array();
        for (Committee w : res.committees) {
          committees.push_back({{"members", d.members(w)},
                                {"alpha_jr", rational_json(alpha_jr(inst, w).alpha_value)},
                                {"alpha_ejr", rational_json(alpha_ejr(inst, w).alpha_value)}});
        }
        json j{{"rule", to_string(res.rule)}, {"committees", committees}, {"filled", res.filled}, {"notes", res.notes}};
        j["parameter"] = res.parameter ? rational_json(*res.parameter) : json(nullptr);
        if (trace) {
          json steps = json::array();
          for (const auto& s : res.trace) steps.push_back({{"candidate", s.candidate + d.offset}, {"value", rational_json(s.value)}});
          j["trace"] = steps;
        }
        out << j.dump() << '\n';
      } else {
        out << "rule: " << to_string(res.rule) << '\n';
        if (res.parameter) out << "parameter: " << show(*res.parameter) << '\n';
        for (Committee w : res.committees) {
          out << d.list(w) << "  alpha_jr " << show(alpha_jr(inst, w).alpha_value) << "  alpha_ejr "
              << show(alpha_ejr(inst, w).alpha_value) << '\n';
        }
        if (res.filled > 0) out << "filled by index order: " << res.filled << '\n';
        for (const auto& note : res.notes) out << "note: " << note << '\n';
        if (trace) {
          for (std::size_t i = 0; i < res.trace.size(); ++i) {
            out << "step " << i + 1 << ": candidate " << res.trace[i].candidate + d.offset << " value "
                << show(res.trace[i].value) << '\n';
          }
        }
      }
    } else if (domain->parsed()) {
      const Instance inst = load_instance(instance_path);
      const DomainReport rep = analyze_domains(inst);
      const auto& pl = rep.party_list;
      if (as_json) {
        json parties = nullptr;
        if (pl.structure) {
          parties = json::array();
          for (const auto& p : pl.structure->parties) {
            parties.push_back({{"voters", d.shift(p.voters)}, {"candidates", d.members(p.candidates)}});
          }
        }
        json ce = nullptr;
        if (pl.counterexample) ce = d.shift({pl.counterexample->first, pl.counterexample->second});
        out << json{{"party_list", {{"parties", parties}, {"counterexample", ce}, {"reason", pl.reason}}},
                    {"voter_interval", order_json(rep.voter_order, d)},
                    {"candidate_interval", order_json(rep.candidate_order, d)}}
                   .dump()
            << '\n';
      } else {
        if (pl.structure) {
          out << "party-list: yes (" << pl.structure->parties.size() << " parties)\n";
          for (const auto& p : pl.structure->parties) {
            out << "  voters " << d.list(p.voters) << " candidates " << d.list(p.candidates) << '\n';
          }
        } else {
          out << "party-list: no (" << pl.reason << ")\n";
        }
        out << "voter-interval: " << (rep.voter_order ? "yes, order " + d.list(*rep.voter_order) : std::string("no"))
            << '\n';
        out << "candidate-interval: "
            << (rep.candidate_order ? "yes, order " + d.list(*rep.candidate_order) : std::string("no")) << '\n';
      }
    } else if (samp->parsed()) {
      cfg.model = parse_model(model_text);
      cfg.placement = parse_placement(placement_text);
      if (cfg.model == Model::IC && (t_opt->count() > 0 || s_opt->count() > 0)) {
        throw CLI::ValidationError("--t and --sigma apply to the Euclidean model only");
      }
      if (cfg.model == Model::Euclidean && p_opt->count() > 0) {
        throw CLI::ValidationError("--p applies to the IC model only");
      }
      const Instance inst = sample(cfg);
      const bool plain = !sample_out.empty() && !(sample_out.size() >= 5 && sample_out.ends_with(".json"));
      const std::string text = serialize_instance(inst, plain ? Format::Plain : Format::Json);
      if (sample_out.empty()) {
        out << text;
        if (!text.empty() && text.back() != '\n') out << '\n';
      } else {
        write_text_file(sample_out, text);
      }
    } else if (exp->parsed()) {
      if (!(run_opts.scale > 0)) throw CLI::ValidationError("--scale must be positive");
      const ExperimentGrid grid = config_path.empty() ? ExperimentGrid{} : parse_grid_config(read_text_file(config_path));
      if (progress) {
        run_opts.progress = [&err](std::size_t done, std::size_t total) {
          if (done % 64 == 0 || done == total) err << done << '/' << total << " instances\n";
        };
      }
      const auto records = run_grid(grid, run_opts);
      std::ostringstream csv;
      write_csv(csv, records);
      write_text_file(csv_out, csv.str());
      const Summary s = summarize(records);
      if (!summary_out.empty()) {
        std::ostringstream table;
        write_summary(table, s);
        write_text_file(summary_out, table.str());
      }
      if (as_json) {
        json pooled = json::object();
        for (std::size_t i = 0; i < kExperimentRules.size(); ++i) {
          pooled[to_string(kExperimentRules[i])] = {{"jr", rational_json(s.pooled_jr_distance[i])},
                                                    {"ejr", rational_json(s.pooled_ejr_distance[i])}};
        }
        out << json{{"instances", s.instances}, {"excluded", s.excluded}, {"rows", s.rows.size()}, {"out", csv_out},
                    {"pooled_distance", pooled}}
                   .dump()
            << '\n';
      } else {
        out << "instances: " << s.instances << " (excluded " << s.excluded << ")\n";
        for (std::size_t i = 0; i < kExperimentRules.size(); ++i) {
          out << to_string(kExperimentRules[i]) << ": mean jr distance " << show(s.pooled_jr_distance[i])
              << ", mean ejr distance " << show(s.pooled_ejr_distance[i]) << '\n';
        }
        out << "wrote " << csv_out << '\n';
      }
    } else if (ilp->parsed()) {
      const Instance inst = load_instance(instance_path);
      const Rational alpha = Rational::parse(alpha_text);
      std::ostringstream lp;
      export_lp(inst, alpha, lp);
      if (lp_out.empty()) {
        out << lp.str();
      } else {
        write_text_file(lp_out, lp.str());
        if (as_json) {
          out << json{{"out", lp_out}, {"alpha", rational_json(alpha)}}.dump() << '\n';
        } else {
          out << "wrote " << lp_out << '\n';
        }
      }
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const BudgetExceeded& e) {
    err << "error: budget exceeded: " << e.what() << '\n';
    return 1;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace alphaquota::cli
