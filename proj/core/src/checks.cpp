#include "fairdiv/checks.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "fairdiv/errors.hpp"
#include "fairdiv/welfare.hpp"

namespace fairdiv {

namespace {

constexpr int kExhaustiveMaxItems = 14;
constexpr std::size_t kViolationCap = 100'000;

std::vector<Value> checked_table(const Oracle& oracle) {
  if (oracle_arity(oracle) > kExhaustiveMaxItems)
    throw TooLarge("exhaustive checks are capped at " + std::to_string(kExhaustiveMaxItems) +
                   " items, oracle has " + std::to_string(oracle_arity(oracle)));
  return tabulate(oracle);
}

void record(CheckReport& report, Violation v) {
  report.ok = false;
  ++report.total;
  if (report.violations.size() < kViolationCap)
    report.violations.push_back(std::move(v));
  else
    report.truncated = true;
}

}  // namespace

CheckReport check_submodularity(const Oracle& oracle) {
  const int m = oracle_arity(oracle);
  std::vector<Value> v = checked_table(oracle);
  CheckReport report;
  const std::uint32_t full = (1u << m) - 1;
  for (int o = 0; o < m; ++o) {
    const std::uint32_t bit = 1u << o;
    const std::uint32_t rest = full & ~bit;
    // Enumerate T as submasks of rest, then S as proper submasks of T.
    for (std::uint32_t t = rest;; t = (t - 1) & rest) {
      Value delta_t = v[t | bit] - v[t];
      for (std::uint32_t s = (t - 1) & t; ; s = (s - 1) & t) {
        Value delta_s = v[s | bit] - v[s];
        if (delta_s < delta_t)
          record(report, Violation{Violation::Submodularity, s, t, o, -1, {delta_s, delta_t}});
        if (s == 0) break;
      }
      if (t == 0) break;
    }
  }
  return report;
}

CheckReport check_marginal_set(const Oracle& oracle, const ValueSet& marginal_set) {
  validate(marginal_set);
  const int m = oracle_arity(oracle);
  std::vector<Value> v = checked_table(oracle);
  CheckReport report;
  for (int o = 0; o < m; ++o) {
    const std::uint32_t bit = 1u << o;
    for (std::uint32_t s = 0; s < v.size(); ++s) {
      if (s & bit) continue;
      Value delta = v[s | bit] - v[s];
      if (!marginal_set.contains(delta))
        record(report, Violation{Violation::MarginalSet, s, 0, o, -1, {delta}});
    }
  }
  return report;
}

std::optional<Violation> check_order_neutrality(const Oracle& oracle) {
  const int m = oracle_arity(oracle);
  std::vector<Value> v = checked_table(oracle);
  for (std::uint32_t s = 0; s < v.size(); ++s) {
    for (int o = 0; o < m; ++o) {
      if (s & (1u << o)) continue;
      for (int o2 = o + 1; o2 < m; ++o2) {
        if (s & (1u << o2)) continue;
        const std::uint32_t so = s | (1u << o), so2 = s | (1u << o2);
        const std::uint32_t both = so | (1u << o2);
        Value a1 = v[so] - v[s], a2 = v[both] - v[so];
        Value b1 = v[so2] - v[s], b2 = v[both] - v[so2];
        std::pair<Value, Value> ma = std::minmax(a1, a2), mb = std::minmax(b1, b2);
        if (ma != mb)
          return Violation{Violation::OrderNeutrality, s, 0, o, o2, {a1, a2, b1, b2}};
      }
    }
  }
  return std::nullopt;
}

DecompositionReport check_unique_decomposition(Value c) {
  if (c < 1) throw InvalidInput("decomposition check needs c >= 1");
  const std::array<Value, 3> alphabet{-1, 0, c};
  DecompositionReport report;
  // All unordered two-marginal sums over {-1, 0, c}; a collision of distinct
  // pairs on the same sum breaks order neutrality.
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    for (std::size_t j = i; j < alphabet.size(); ++j) {
      for (std::size_t p = 0; p < alphabet.size(); ++p) {
        for (std::size_t q = p; q < alphabet.size(); ++q) {
          if (std::make_pair(i, j) >= std::make_pair(p, q)) continue;
          if (alphabet[i] + alphabet[j] != alphabet[p] + alphabet[q]) continue;
          report.ok = false;
          report.colliding_sum = alphabet[i] + alphabet[j];
          report.pair1 = {alphabet[i], alphabet[j]};
          report.pair2 = {alphabet[p], alphabet[q]};
          return report;
        }
      }
    }
  }
  return report;
}

namespace {

void add_check(LemmaReport& report, std::string name, bool pass, std::string detail) {
  report.all_pass = report.all_pass && pass;
  report.checks.push_back({std::move(name), std::move(detail), pass});
}

std::string show(const mpq_class& q) { return q.get_str(); }

}  // namespace

LemmaReport check_transfer_lemmas(Value a, Value b, Value c) {
  Regime regime = classify_regime(a, b, c);
  LemmaReport report;
  report.regime = regime;

  const mpq_class qa(static_cast<long>(a)), qb(static_cast<long>(b)), qc(static_cast<long>(c));
  auto detail = [&](const std::string& text) {
    std::ostringstream os;
    os << text << " with (a,b,c)=(" << a << "," << b << "," << c << ")";
    return os.str();
  };

  switch (regime.tag) {
    case RegimeTag::GoodsCase1:
    case RegimeTag::GoodsCase2: {
      // Unloading a third item onto a special-item holder: 2/3 >= c/(c+b)
      // needs c <= 2b, and 2/3 >= b/(c+b) holds outright.
      add_check(report, "trim-to-two-items", 2 * (qc + qb) >= 3 * qc,
                detail("2(c+b) >= 3c"));
      add_check(report, "trim-keeps-literal-target", 2 * (qc + qb) >= 3 * qb,
                detail("2(c+b) >= 3b"));
      // Swapping a floor pair against a literal pair: (a+b)^2 > 4ab.
      add_check(report, "floor-pair-swap", (qa + qb) * (qa + qb) > 4 * qa * qb,
                detail("(a+b)^2 > 4ab"));
      add_check(report, "floor-pair-upgrade", (qb + qa) * 2 * qb > 4 * qa * qb,
                detail("(b+a)2b > 2a*2b"));
      add_check(report, "floor-single-upgrade", (qb + qa) * qb > 2 * qa * qb,
                detail("(b+a)b > a*2b"));
      if (regime.tag == RegimeTag::GoodsCase1) {
        // Dropping a floor item beats keeping it: b/(a+b) >= c/(c+b),
        // equivalent to b^2 >= ca.
        add_check(report, "floor-item-removal", qb * (qc + qb) >= qc * (qa + qb),
                  detail("b(c+b) >= c(a+b)"));
      } else {
        // The floor is valuable: c/(b+c) > b/(a+b), equivalent to ca > b^2.
        add_check(report, "sink-unload-strict", qc * (qa + qb) > qb * (qb + qc),
                  detail("c(a+b) > b(b+c)"));
      }
      break;
    }
    case RegimeTag::GoodsVC: {
      const mpq_class floor_vs_c = 2 * qb * qb / qc;
      const mpq_class floor_vs_bundle = 2 * qb / 3;
      mpq_class a_prime = std::max({qa, floor_vs_c, floor_vs_bundle});
      add_check(report, "cover-dominates-pair", qc > 2 * qb, detail("c > 2b"));
      add_check(report, "floor-below-b", a_prime < qb,
                detail("a' = " + show(a_prime) + " < b"));
      add_check(report, "cover-holder-unload", qc * (a_prime + 2 * qb) >= 2 * qb * (qb + qc),
                detail("c(a'+2b) >= 2b(b+c), a' = " + show(a_prime)));
      add_check(report, "four-item-trim", 3 * a_prime >= 2 * qb,
                detail("3a' >= 2b, a' = " + show(a_prime)));
      break;
    }
    default:
      throw WrongRegime("transfer-lemma checks cover the goods regimes, got " +
                        std::string(to_string(regime.tag)));
  }
  return report;
}

const char* to_string(GapVerdict v) {
  switch (v) {
    case GapVerdict::Confirmed: return "Confirmed";
    case GapVerdict::ForwardOnly: return "ForwardOnly";
    case GapVerdict::Refuted: return "Refuted";
  }
  return "ForwardOnly";
}

namespace {

std::string welfare_string(const Instance& inst, Objective objective,
                           std::span<const Value> utilities) {
  if (objective == Objective::Mew) return std::to_string(egalitarian_welfare(utilities));
  return nash_score(utilities).to_string(inst.num_agents());
}

// Sign of (welfare - threshold), exact.
int compare_welfare(const Instance& inst, Objective objective,
                    std::span<const Value> utilities, const CertValue& threshold) {
  if (objective == Objective::Mew) {
    Value mew = egalitarian_welfare(utilities);
    return CertValue::from_integer(mew).compare(threshold);
  }
  NashScore score = nash_score(utilities);
  if (score.zero_count > 0) {
    // Welfare is 0; positive thresholds dominate it.
    if (threshold.is_rational()) {
      int c = cmp(mpq_class(0), threshold.rational());
      return c < 0 ? -1 : (c == 0 ? 0 : 1);
    }
    return -1;
  }
  if (threshold.is_rational()) {
    PowerExpr mean = PowerExpr::from_rational(mpq_class(score.positive_product))
                         .pow(mpq_class(1, static_cast<unsigned long>(inst.num_agents())));
    if (threshold.rational() <= 0) return 1;
    return mean.compare(threshold.rational());
  }
  return compare_geometric_mean(score.positive_product,
                                static_cast<unsigned long>(inst.num_agents()),
                                threshold.expr());
}

int compare_nash_result(const Instance& inst, const OptResult& result, const CertValue& threshold) {
  std::vector<Value> utilities = evaluate_allocation(inst, result.best);
  return compare_welfare(inst, result.objective, utilities, threshold);
}

}  // namespace

GapReport verify_gap(const Instance& reduced, const std::optional<WitnessData>& witness,
                     const SolveLimits& limits) {
  if (!reduced.certificate)
    throw InvalidInput("verify_gap needs an instance with a certificate block");
  const GapCertificate& cert = *reduced.certificate;
  if (!cert.yes_value || !cert.no_bound)
    throw InvalidInput("verify_gap needs both certificate thresholds");
  const Objective objective = cert.objective;

  GapReport report;
  report.has_witness = witness.has_value();
  std::ostringstream summary;

  if (witness) {
    Allocation alloc = build_witness(reduced, *witness);
    std::vector<Value> utilities = evaluate_allocation(reduced, alloc);
    report.witness_welfare = welfare_string(reduced, objective, utilities);
    report.forward_ok = compare_welfare(reduced, objective, utilities, *cert.yes_value) >= 0;
    summary << "witness welfare " << report.witness_welfare
            << (report.forward_ok ? " reaches" : " MISSES") << " yes-value "
            << cert.yes_value->to_string();
    if (!report.forward_ok) {
      report.verdict = GapVerdict::Refuted;
      report.summary = summary.str();
      return report;
    }
    OptResult opt = solve_exact(reduced, objective, Method::Bnb, limits);
    report.backward_attempted = true;
    report.backward_status = opt.status;
    report.nodes = opt.nodes;
    std::vector<Value> opt_utilities = evaluate_allocation(reduced, opt.best);
    report.backward_optimum = welfare_string(reduced, objective, opt_utilities);
    if (opt.status == SolveStatus::Proved) {
      report.backward_ok = true;
      report.verdict = GapVerdict::Confirmed;
      summary << "; exact optimum " << report.backward_optimum << " proved";
    } else {
      report.verdict = GapVerdict::ForwardOnly;
      summary << "; exact search hit its limit (best found " << report.backward_optimum << ")";
    }
    report.summary = summary.str();
    return report;
  }

  // NO direction: a proved optimum must respect the bound (at most no_bound
  // for NSW, strictly below yes_value for the MEW decision kinds).
  OptResult opt = solve_exact(reduced, objective, Method::Bnb, limits);
  report.backward_attempted = true;
  report.backward_status = opt.status;
  report.nodes = opt.nodes;
  std::vector<Value> opt_utilities = evaluate_allocation(reduced, opt.best);
  report.backward_optimum = welfare_string(reduced, objective, opt_utilities);
  if (opt.status != SolveStatus::Proved) {
    report.verdict = GapVerdict::ForwardOnly;
    summary << "exact search hit its limit (best found " << report.backward_optimum
            << "); nothing proved";
    report.summary = summary.str();
    return report;
  }
  int against;
  std::string claim;
  if (objective == Objective::Nsw) {
    against = compare_nash_result(reduced, opt, *cert.no_bound);
    claim = "no-bound " + cert.no_bound->to_string();
    report.backward_ok = against <= 0;
  } else {
    against = compare_nash_result(reduced, opt, *cert.yes_value);
    claim = "yes-value " + cert.yes_value->to_string();
    report.backward_ok = against < 0;
  }
  report.verdict = report.backward_ok ? GapVerdict::Confirmed : GapVerdict::Refuted;
  summary << "proved optimum " << report.backward_optimum << (report.backward_ok ? " respects " : " VIOLATES ")
          << claim;
  report.summary = summary.str();
  return report;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d649bb133111ebULL;
  return x ^ (x >> 31);
}

const std::vector<ValueSet>& fuzz_value_sets() {
  static const std::vector<ValueSet> sets = {
      ValueSet{0, 1, 2}, ValueSet{0, 1, 3}, ValueSet{1, 2, 3},
      ValueSet{2, 3, 5}, ValueSet{0, 2, 5}, ValueSet{1, 3, 7},
  };
  return sets;
}

struct TrialOutcome {
  std::vector<std::string> problems;
};

TrialOutcome run_trial(std::uint64_t trial_seed, int max_agents, int max_items,
                       const BnbTuning& tuning) {
  TrialOutcome outcome;
  std::mt19937_64 rng(trial_seed);
  const auto& sets = fuzz_value_sets();
  const ValueSet& vs = sets[rng() % sets.size()];
  int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_agents));
  int m = static_cast<int>(rng() % static_cast<unsigned>(max_items + 1));
  std::vector<std::vector<Value>> matrix(n, std::vector<Value>(m));
  for (auto& row : matrix)
    for (auto& entry : row) entry = vs.values[rng() % vs.size()];
  Instance inst = make_additive_instance(vs, std::move(matrix));

  SolveLimits limits;
  for (Objective objective : {Objective::Nsw, Objective::Mew}) {
    OptResult brute = solve_exact(inst, objective, Method::Brute, limits);
    OptResult bnb = solve_exact_tuned(inst, objective, Method::Bnb, limits, tuning);
    bool value_equal = objective == Objective::Nsw
                           ? compare(brute.nash, bnb.nash) == 0
                           : brute.mew == bnb.mew;
    if (!value_equal) {
      outcome.problems.push_back(std::string(to_string(objective)) +
                                 ": branch-and-bound value differs from brute force");
      continue;
    }
    if (brute.best != bnb.best)
      outcome.problems.push_back(std::string(to_string(objective)) +
                                 ": optimal allocations differ under the shared tie-break");
    Allocation polished = local_search(inst, brute.best, objective);
    if (!(polished == brute.best))
      outcome.problems.push_back(std::string(to_string(objective)) +
                                 ": optimum is not a local-search fixed point");

    // Argmax invariance under positive scaling of every entry.
    if (m <= 6 || (n <= 3 && m <= 8)) {
      Value lambda = 2 + static_cast<Value>(rng() % 2);
      std::vector<std::vector<Value>> scaled = inst.additive_profile().matrix;
      std::vector<Value> scaled_values;
      for (auto& row : scaled)
        for (auto& entry : row) entry *= lambda;
      for (Value v : vs.values) scaled_values.push_back(v * lambda);
      Instance scaled_inst = make_additive_instance(ValueSet(scaled_values), std::move(scaled));
      auto optima = enumerate_optima(inst, objective);
      auto scaled_optima = enumerate_optima(scaled_inst, objective);
      if (optima != scaled_optima)
        outcome.problems.push_back(std::string(to_string(objective)) +
                                   ": optimal set changed under positive scaling");
    }
  }
  return outcome;
}

}  // namespace

FuzzSummary fuzz_cross_check(std::uint64_t seed, std::uint64_t trials, int max_agents,
                             int max_items, int workers) {
  return fuzz_cross_check_tuned(seed, trials, max_agents, max_items, workers, BnbTuning{});
}

FuzzSummary fuzz_cross_check_tuned(std::uint64_t seed, std::uint64_t trials, int max_agents,
                                   int max_items, int workers, const BnbTuning& tuning) {
  if (max_agents < 1 || max_agents > 6 || max_items < 0 || max_items > 10)
    throw InvalidInput("fuzz caps must keep n^m within exhaustive reach");
  FuzzSummary summary;
  summary.trials = trials;
  if (trials == 0) return summary;

  std::vector<TrialOutcome> outcomes(trials);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr worker_error;
  std::mutex error_mutex;
  auto worker_loop = [&]() {
    try {
      for (;;) {
        std::uint64_t t = next.fetch_add(1);
        if (t >= trials) return;
        outcomes[t] = run_trial(splitmix64(seed ^ (t + 1)), max_agents, max_items, tuning);
      }
    } catch (...) {
      std::scoped_lock lock(error_mutex);
      if (!worker_error) worker_error = std::current_exception();
    }
  };
  int pool_size = std::max(1, resolve_workers(workers));
  if (pool_size <= 1) {
    worker_loop();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(pool_size));
    for (int w = 0; w < pool_size; ++w) pool.emplace_back(worker_loop);
    for (auto& th : pool) th.join();
  }
  if (worker_error) std::rethrow_exception(worker_error);
  for (std::uint64_t t = 0; t < trials; ++t)
    for (const auto& problem : outcomes[t].problems)
      summary.discrepancies.push_back({t, splitmix64(seed ^ (t + 1)), problem});
  return summary;
}

}  // namespace fairdiv
