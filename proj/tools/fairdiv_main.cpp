#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "fairdiv/checks.hpp"
#include "fairdiv/errors.hpp"
#include "fairdiv/io.hpp"
#include "fairdiv/reductions.hpp"
#include "fairdiv/solve.hpp"
#include "fairdiv/welfare.hpp"

namespace {

using namespace fairdiv;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitLimit = 3;
constexpr int kExitRefuted = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write file: " + path);
  out << text;
}

mpq_class parse_epsilon(const std::string& text) {
  mpq_class q;
  if (q.set_str(text, 10) != 0) throw InvalidInput("malformed epsilon: " + text);
  q.canonicalize();
  return q;
}

std::string join_assignment(const Allocation& alloc) {
  std::ostringstream os;
  for (std::size_t i = 0; i < alloc.assignment.size(); ++i) {
    if (i) os << ' ';
    os << alloc.assignment[i];
  }
  return os.str();
}

struct GenOptions {
  std::string reduction;
  std::string source_path;
  std::string out_path;
  std::vector<Value> values;
  int k = 0;
  int kstar = 0;
  Value b = 0;
  std::string epsilon = "0";
};

int run_gen(const GenOptions& opt) {
  std::string text = read_file(opt.source_path);
  Instance inst;
  auto need_values = [&](std::size_t count) {
    if (opt.values.size() != count)
      throw InvalidInput(opt.reduction + " needs --values with " + std::to_string(count) +
                         " entries");
  };
  if (opt.reduction == "mnw-sat") {
    need_values(3);
    inst = gen_mnw_sat(parse_cnf2p2n(text), opt.values[0], opt.values[1], opt.values[2],
                       parse_epsilon(opt.epsilon));
  } else if (opt.reduction == "mnw-vc") {
    need_values(3);
    inst = gen_mnw_vc(parse_graph3reg(text), opt.k, opt.values[0], opt.values[1], opt.values[2]);
  } else if (opt.reduction == "mnw-3c") {
    need_values(2);
    if (opt.values[0] != 3) throw InvalidInput("mnw-3c needs --values 3,c");
    inst = gen_mnw_bivalued3c(parse_graph3reg(text), opt.k, opt.values[1]);
  } else if (opt.reduction == "mew-goods") {
    need_values(3);
    inst = gen_mew_goods(parse_cnf2p2n(text), opt.values[0], opt.values[1], opt.values[2]);
  } else if (opt.reduction == "mew-mixed") {
    need_values(2);
    inst = gen_mew_mixed(parse_cnf2p2n(text), opt.values[0], opt.values[1]);
  } else if (opt.reduction == "mew-two-negative") {
    inst = gen_mew_two_negative(parse_cnf2p2n(text), opt.b, opt.kstar);
  } else if (opt.reduction == "mew-rx3c") {
    inst = gen_mew_rx3c(parse_rx3c(text));
  } else {
    throw InvalidInput("unknown reduction: " + opt.reduction);
  }
  std::string doc = store_instance(inst);
  write_output(opt.out_path, doc);
  if (!opt.out_path.empty())
    std::cout << "wrote " << opt.out_path << " (" << inst.num_agents() << " agents, "
              << inst.num_items() << " items)\n";
  return kExitOk;
}

struct SolveOptions {
  std::string instance_path;
  std::string objective = "nsw";
  std::string method = "bnb";
  std::uint64_t max_nodes = SolveLimits{}.max_nodes;
  double max_seconds = 0.0;
  int workers = 0;
  bool doc_format = false;
};

int run_solve(const SolveOptions& opt) {
  Instance inst = load_instance(read_file(opt.instance_path));
  Objective objective = opt.objective == "mew" ? Objective::Mew : Objective::Nsw;
  Method method = opt.method == "brute" ? Method::Brute : Method::Bnb;
  SolveLimits limits;
  limits.max_nodes = opt.max_nodes;
  limits.max_seconds = opt.max_seconds;
  limits.workers = opt.workers;
  OptResult result = solve_exact(inst, objective, method, limits);
  if (opt.doc_format) {
    std::cout << result_to_json(result, inst);
  } else {
    std::cout << "objective: " << to_string(objective) << "\n";
    std::cout << "method: " << opt.method << "\n";
    std::cout << "status: " << to_string(result.status) << "\n";
    if (objective == Objective::Nsw) {
      std::cout << "zero_count: " << result.nash.zero_count << "\n";
      std::cout << "product: " << result.nash.positive_product.get_str() << "\n";
      std::cout << "geometric_mean: " << result.nash.geometric_mean(inst.num_agents()) << "\n";
    } else {
      std::cout << "egalitarian_welfare: " << result.mew << "\n";
    }
    std::cout << "assignment: " << join_assignment(result.best) << "\n";
    std::cout << "nodes: " << result.nodes << "\n";
  }
  return result.status == SolveStatus::Proved ? kExitOk : kExitLimit;
}

struct VerifyOptions {
  std::string instance_path;
  std::string witness_path;
  bool no_side = false;
  std::uint64_t max_nodes = 20'000'000;
  int workers = 0;
  bool doc_format = false;
};

int run_verify(const VerifyOptions& opt) {
  Instance inst = load_instance(read_file(opt.instance_path));
  std::optional<WitnessData> witness;
  if (!opt.witness_path.empty()) witness = parse_witness(read_file(opt.witness_path));
  if (opt.no_side && witness) throw InvalidInput("pass either --witness or --no, not both");
  if (!opt.no_side && !witness) throw InvalidInput("pass --witness FILE or --no");
  SolveLimits limits;
  limits.max_nodes = opt.max_nodes;
  limits.workers = opt.workers;
  GapReport report = verify_gap(inst, witness, limits);
  if (opt.doc_format) {
    std::cout << report_to_json(report);
  } else {
    std::cout << "mode: " << (witness ? "witness" : "no") << "\n";
    std::cout << report.summary << "\n";
    std::cout << "verdict: " << to_string(report.verdict) << "\n";
  }
  switch (report.verdict) {
    case GapVerdict::Confirmed: return kExitOk;
    case GapVerdict::ForwardOnly: return kExitLimit;
    case GapVerdict::Refuted: return kExitRefuted;
  }
  return kExitInvalid;
}

struct OracleOptions {
  std::string oracle;  // "rx3c" or empty when --instance is used
  std::string instance_path;
  int k = 1;
  int agent = 0;
};

Oracle pick_oracle(const OracleOptions& opt, Instance* storage) {
  if (!opt.instance_path.empty()) {
    *storage = load_instance(read_file(opt.instance_path));
    if (opt.agent < 0 || opt.agent >= static_cast<int>(storage->num_agents()))
      throw InvalidInput("agent index out of range");
    if (storage->additive()) {
      const auto& row = storage->additive_profile().matrix[opt.agent];
      if (row.size() > 14) throw TooLarge("exhaustive checks are capped at 14 items");
      TabularOracle tab;
      tab.arity = static_cast<int>(row.size());
      tab.table.assign(std::size_t{1} << tab.arity, 0);
      for (std::uint32_t mask = 0; mask < tab.table.size(); ++mask) {
        Value sum = 0;
        for (std::size_t o = 0; o < row.size(); ++o)
          if (mask >> o & 1) sum += row[o];
        tab.table[mask] = sum;
      }
      return tab;
    }
    return storage->submodular_profile().oracles[opt.agent];
  }
  if (opt.oracle == "rx3c") {
    Rx3cInstance r;
    r.k = opt.k;
    // The canonical all-identical family keeps k=1 valid; larger k uses a
    // block-diagonal pattern of repeated triples.
    for (int b = 0; b < opt.k; ++b)
      for (int copy = 0; copy < 3; ++copy)
        r.triples.push_back({3 * b + 1, 3 * b + 2, 3 * b + 3});
    *storage = gen_mew_rx3c(r);
    if (opt.agent < 0 || opt.agent >= static_cast<int>(storage->num_agents()))
      throw InvalidInput("agent index out of range");
    return storage->submodular_profile().oracles[opt.agent];
  }
  throw InvalidInput("pass --oracle rx3c or --instance FILE");
}

std::string items_text(const Instance& inst, std::uint32_t mask) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (std::size_t i = 0; i < inst.item_names.size() && i < 32; ++i) {
    if (!(mask >> i & 1)) continue;
    if (!first) os << ", ";
    os << inst.item_names[i];
    first = false;
  }
  os << '}';
  return os.str();
}

int run_check_oracle(const std::string& which, const OracleOptions& opt,
                     const std::vector<Value>& set_values, bool doc_format) {
  Instance storage;
  Oracle oracle = pick_oracle(opt, &storage);
  if (which == "order-neutral") {
    auto violation = check_order_neutrality(oracle);
    if (doc_format) {
      CheckReport report;
      if (violation) {
        report.ok = false;
        report.total = 1;
        report.violations.push_back(*violation);
      }
      std::cout << report_to_json(report, &storage);
      return kExitOk;
    }
    std::cout << "check: order-neutral\n";
    if (!violation) {
      std::cout << "result: ok\n";
    } else {
      std::cout << "result: violation\n";
      std::cout << "S = " << items_text(storage, violation->s_mask) << "\n";
      std::cout << "o = " << storage.item_names[violation->o]
                << ", o2 = " << storage.item_names[violation->o2] << "\n";
      std::cout << "multiset o-first: {" << violation->numbers[0] << ", " << violation->numbers[1]
                << "}\n";
      std::cout << "multiset o2-first: {" << violation->numbers[2] << ", "
                << violation->numbers[3] << "}\n";
    }
    return kExitOk;
  }

  CheckReport report;
  if (which == "submodular") {
    report = check_submodularity(oracle);
  } else {
    ValueSet set(set_values);
    if (set.values.empty()) {
      if (storage.additive())
        set = storage.additive_profile().value_set;
      else
        set = storage.submodular_profile().marginal_set;
    }
    report = check_marginal_set(oracle, set);
  }
  if (doc_format) {
    std::cout << report_to_json(report, &storage);
    return kExitOk;
  }
  std::cout << "check: " << which << "\n";
  std::cout << "violations: " << report.total << (report.truncated ? " (truncated list)" : "")
            << "\n";
  const std::size_t shown = std::min<std::size_t>(report.violations.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) {
    const Violation& v = report.violations[i];
    if (v.kind == Violation::Submodularity) {
      std::cout << "violation: S=" << items_text(storage, v.s_mask)
                << " T=" << items_text(storage, v.t_mask) << " o=" << storage.item_names[v.o]
                << " marginals (" << v.numbers[0] << ", " << v.numbers[1] << ")\n";
    } else {
      std::cout << "violation: S=" << items_text(storage, v.s_mask)
                << " o=" << storage.item_names[v.o] << " marginal " << v.numbers[0] << "\n";
    }
  }
  if (report.violations.size() > shown)
    std::cout << "... (" << report.violations.size() - shown << " more)\n";
  std::cout << "result: " << (report.ok ? "ok" : "violations found") << "\n";
  return kExitOk;
}

struct BoundsOptions {
  std::string kind;
  std::vector<Value> values;
  std::string epsilon = "0";
  int k = 0;
  int vertices = 0;
  bool doc_format = false;
};

int run_bounds(const BoundsOptions& opt) {
  BoundsQuery query;
  query.kind = opt.kind;
  query.values = ValueSet(opt.values);
  query.epsilon = parse_epsilon(opt.epsilon);
  if (opt.k > 0) query.k = opt.k;
  if (opt.vertices > 0) query.vertices = opt.vertices;
  GapCertificate cert = compute_bounds(query);
  if (opt.doc_format) {
    std::cout << certificate_to_json(cert);
    return kExitOk;
  }
  std::cout << "kind: " << cert.kind << "\n";
  std::cout << "values: " << query.values.to_string() << "\n";
  std::cout << "regime: " << to_string(cert.regime.tag) << "\n";
  if (cert.case_tag) std::cout << "case: " << cert.case_tag << "\n";
  std::cout << "epsilon: " << cert.epsilon.get_str() << "\n";
  if (cert.yes_value)
    std::cout << "yes_value: " << cert.yes_value->to_string() << " ~= "
              << cert.yes_value->to_double() << "\n";
  if (cert.no_bound)
    std::cout << "no_bound: " << cert.no_bound->to_string() << " ~= "
              << cert.no_bound->to_double() << "\n";
  if (cert.ratio) {
    std::cout << "ratio: " << cert.ratio->to_string() << "\n";
    std::cout << "ratio_approx: " << cert.ratio->to_double() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fair-division solver and hardness-gadget workbench for ternary valuations"};
  app.require_subcommand(1);
  std::cout.precision(12);

  GenOptions gen;
  CLI::App* cmd_gen = app.add_subcommand("gen", "generate a reduced instance from a source file");
  cmd_gen->add_option("reduction", gen.reduction,
                      "mnw-sat | mnw-vc | mnw-3c | mew-goods | mew-mixed | mew-two-negative | mew-rx3c")
      ->required();
  cmd_gen->add_option("--source", gen.source_path, "source problem file")->required();
  cmd_gen->add_option("--values", gen.values, "value set, e.g. 0,1,2")->delimiter(',');
  cmd_gen->add_option("--k", gen.k, "cover budget (vertex-cover reductions)");
  cmd_gen->add_option("--kstar", gen.kstar, "k* parameter (mew-two-negative)");
  cmd_gen->add_option("--b", gen.b, "b parameter (mew-two-negative)");
  cmd_gen->add_option("--epsilon", gen.epsilon, "promise-gap slack, rational (mnw-sat)");
  cmd_gen->add_option("--out", gen.out_path, "output file (stdout when absent)");

  SolveOptions solve;
  CLI::App* cmd_solve = app.add_subcommand("solve", "exactly optimize an instance document");
  cmd_solve->add_option("instance", solve.instance_path, "instance document")->required();
  cmd_solve->add_option("--objective", solve.objective, "nsw | mew")
      ->check(CLI::IsMember({"nsw", "mew"}));
  cmd_solve->add_option("--method", solve.method, "brute | bnb")
      ->check(CLI::IsMember({"brute", "bnb"}));
  cmd_solve->add_option("--max-nodes", solve.max_nodes, "node budget");
  cmd_solve->add_option("--max-seconds", solve.max_seconds, "wall-clock safety valve");
  cmd_solve->add_option("--workers", solve.workers, "worker threads (0: $FAIRDIV_WORKERS or 1)");
  cmd_solve->add_option("--format", [&solve](const std::vector<std::string>& vals) {
        solve.doc_format = vals.front() == "doc";
        return true;
      }, "text | doc");

  VerifyOptions verify;
  CLI::App* cmd_verify =
      app.add_subcommand("verify-gap", "check a reduced instance against its certificate");
  cmd_verify->add_option("instance", verify.instance_path, "instance document")->required();
  cmd_verify->add_option("--witness", verify.witness_path, "witness file (YES direction)");
  cmd_verify->add_flag("--no", verify.no_side, "NO direction: prove the optimum is bounded");
  cmd_verify->add_option("--max-nodes", verify.max_nodes, "node budget for exact search");
  cmd_verify->add_option("--workers", verify.workers, "worker threads");
  cmd_verify->add_option("--format", [&verify](const std::vector<std::string>& vals) {
        verify.doc_format = vals.front() == "doc";
        return true;
      }, "text | doc");

  CLI::App* cmd_check = app.add_subcommand("check", "structural checkers");
  cmd_check->require_subcommand(1);
  OracleOptions oracle_opt;
  std::vector<Value> set_values;
  bool check_doc = false;
  auto add_oracle_flags = [&](CLI::App* cmd) {
    cmd->add_option("--oracle", oracle_opt.oracle, "built-in oracle family: rx3c");
    cmd->add_option("--k", oracle_opt.k, "gadget size for --oracle rx3c");
    cmd->add_option("--instance", oracle_opt.instance_path, "take the oracle from an instance");
    cmd->add_option("--agent", oracle_opt.agent, "agent index within the instance");
    cmd->add_option("--format", [&check_doc](const std::vector<std::string>& vals) {
          check_doc = vals.front() == "doc";
          return true;
        }, "text | doc");
  };
  CLI::App* cmd_check_sub = cmd_check->add_subcommand("submodular", "decreasing-marginals check");
  add_oracle_flags(cmd_check_sub);
  CLI::App* cmd_check_marg =
      cmd_check->add_subcommand("marginals", "marginal-alphabet membership check");
  add_oracle_flags(cmd_check_marg);
  cmd_check_marg->add_option("--set", set_values, "declared marginal set, e.g. -1,0,1")
      ->delimiter(',');
  CLI::App* cmd_check_on =
      cmd_check->add_subcommand("order-neutral", "insertion-order neutrality check");
  add_oracle_flags(cmd_check_on);
  std::vector<Value> lemma_values;
  CLI::App* cmd_check_lemmas =
      cmd_check->add_subcommand("lemmas", "transfer-argument inequality chains");
  cmd_check_lemmas->add_option("--values", lemma_values, "value triple a,b,c")
      ->delimiter(',')
      ->required();
  cmd_check_lemmas->add_option("--format", [&check_doc](const std::vector<std::string>& vals) {
        check_doc = vals.front() == "doc";
        return true;
      }, "text | doc");
  Value decomposition_c = 2;
  CLI::App* cmd_check_dec =
      cmd_check->add_subcommand("decomposition", "two-marginal sum uniqueness over {-1,0,c}");
  cmd_check_dec->add_option("--c", decomposition_c, "positive marginal value c")->required();

  BoundsOptions bounds;
  CLI::App* cmd_bounds = app.add_subcommand("bounds", "gap thresholds and ratio constants");
  cmd_bounds->add_option("kind", bounds.kind,
                         "sat-case1 | sat-case2 | vc | vc-corollary | vc-3c | mew-goods | "
                         "mew-mixed | mew-two-negative")
      ->required();
  cmd_bounds->add_option("--values", bounds.values, "value set")->delimiter(',')->required();
  cmd_bounds->add_option("--epsilon", bounds.epsilon, "promise-gap slack, rational");
  cmd_bounds->add_option("--k", bounds.k, "cover budget for instance-level thresholds");
  cmd_bounds->add_option("--vertices", bounds.vertices, "|V| for instance-level thresholds");
  cmd_bounds->add_option("--format", [&bounds](const std::vector<std::string>& vals) {
        bounds.doc_format = vals.front() == "doc";
        return true;
      }, "text | doc");

  std::uint64_t fuzz_seed = 1, fuzz_trials = 1000;
  int fuzz_workers = 0, fuzz_max_agents = 4, fuzz_max_items = 8;
  bool fuzz_doc = false;
  CLI::App* cmd_fuzz = app.add_subcommand("fuzz", "seeded solver cross-checks");
  cmd_fuzz->add_option("--seed", fuzz_seed, "master seed");
  cmd_fuzz->add_option("--trials", fuzz_trials, "number of random instances");
  cmd_fuzz->add_option("--max-agents", fuzz_max_agents, "agent cap per trial (<= 6)");
  cmd_fuzz->add_option("--max-items", fuzz_max_items, "item cap per trial (<= 10)");
  cmd_fuzz->add_option("--workers", fuzz_workers, "worker threads");
  cmd_fuzz->add_option("--format", [&fuzz_doc](const std::vector<std::string>& vals) {
        fuzz_doc = vals.front() == "doc";
        return true;
      }, "text | doc");

  std::string canon_path;
  CLI::App* cmd_canon = app.add_subcommand("canon", "reprint an instance document canonically");
  cmd_canon->add_option("instance", canon_path, "instance document")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_gen->parsed()) return run_gen(gen);
    if (cmd_solve->parsed()) return run_solve(solve);
    if (cmd_verify->parsed()) return run_verify(verify);
    if (cmd_check->parsed()) {
      if (cmd_check_sub->parsed()) return run_check_oracle("submodular", oracle_opt, {}, check_doc);
      if (cmd_check_marg->parsed())
        return run_check_oracle("marginals", oracle_opt, set_values, check_doc);
      if (cmd_check_on->parsed())
        return run_check_oracle("order-neutral", oracle_opt, {}, check_doc);
      if (cmd_check_lemmas->parsed()) {
        if (lemma_values.size() != 3) throw InvalidInput("check lemmas needs --values a,b,c");
        LemmaReport report = check_transfer_lemmas(lemma_values[0], lemma_values[1],
                                                   lemma_values[2]);
        if (check_doc) {
          std::cout << report_to_json(report);
        } else {
          std::cout << "regime: " << to_string(report.regime.tag) << "\n";
          for (const auto& check : report.checks)
            std::cout << (check.pass ? "pass " : "FAIL ") << check.name << ": " << check.detail
                      << "\n";
          std::cout << "all: " << (report.all_pass ? "pass" : "fail") << "\n";
        }
        return report.all_pass ? kExitOk : kExitRefuted;
      }
      if (cmd_check_dec->parsed()) {
        DecompositionReport report = check_unique_decomposition(decomposition_c);
        std::cout << "c: " << decomposition_c << "\n";
        if (report.ok) {
          std::cout << "result: ok (all two-marginal sums decompose uniquely)\n";
        } else {
          std::cout << "result: collision at sum " << report.colliding_sum << ": {"
                    << report.pair1[0] << "," << report.pair1[1] << "} vs {" << report.pair2[0]
                    << "," << report.pair2[1] << "}\n";
        }
        return kExitOk;
      }
    }
    if (cmd_bounds->parsed()) return run_bounds(bounds);
    if (cmd_fuzz->parsed()) {
      FuzzSummary summary =
          fuzz_cross_check(fuzz_seed, fuzz_trials, fuzz_max_agents, fuzz_max_items, fuzz_workers);
      if (fuzz_doc) {
        std::cout << report_to_json(summary);
      } else {
        std::cout << "seed: " << fuzz_seed << "\n";
        std::cout << "trials: " << summary.trials << "\n";
        std::cout << "discrepancies: " << summary.discrepancies.size() << "\n";
        for (const auto& d : summary.discrepancies)
          std::cout << "discrepancy: trial " << d.trial << " seed " << d.seed << ": " << d.what
                    << "\n";
      }
      return summary.discrepancies.empty() ? kExitOk : kExitRefuted;
    }
    if (cmd_canon->parsed()) {
      std::cout << store_instance(load_instance(read_file(canon_path)));
      return kExitOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
