#include "fairdiv/solve.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "fairdiv/errors.hpp"

namespace fairdiv {

namespace {

constexpr long double kBoundSafety = 1e-12L;
constexpr std::size_t kFrontierTarget = 256;

using Clock = std::chrono::steady_clock;

// Double value of q rounded toward zero; a lower bound for positive q.
double to_double_floor(const mpz_class& z) { return z.get_d(); }

struct SearchScore {
  // NSW: lexicographic (fewer zeros, larger product). MEW: larger min.
  std::int64_t zeros = 0;
  mpz_class product{1};
  Value mew = 0;
};

int compare_scores(Objective objective, const SearchScore& a, const SearchScore& b) {
  if (objective == Objective::Mew) return a.mew < b.mew ? -1 : (a.mew == b.mew ? 0 : 1);
  if (a.zeros != b.zeros) return a.zeros < b.zeros ? 1 : -1;
  int c = cmp(a.product, b.product);
  return c > 0 ? 1 : (c == 0 ? 0 : -1);
}

// Preprocessed view of an instance for search.
struct Prep {
  int n = 0, m = 0;
  bool additive = true;
  std::vector<std::vector<Value>> matrix;  // additive values
  std::vector<std::vector<Value>> tables;  // submodular: per-agent 2^m tables
  std::vector<std::vector<Value>> posgain; // per agent/item optimistic marginal, clamped at 0
  std::vector<Value> itemgain;             // max over agents of posgain
  std::vector<int> order;                  // branch order: descending max value
  std::vector<std::vector<int>> sym_members;  // symmetry class -> agent list
  std::vector<int> sym_class;                 // agent -> class
  // Interchangeable-item rule (additive only): within a group of identical
  // columns, assignments must be non-decreasing. prev_same_branch[d] is the
  // branch position of the previous same-group item, prev_same_original[o]
  // the previous same-group item index; -1 when none.
  std::vector<int> prev_same_branch;
  std::vector<int> prev_same_original;
};

Prep prepare(const Instance& inst, Objective objective) {
  Prep prep;
  prep.n = static_cast<int>(inst.num_agents());
  prep.m = static_cast<int>(inst.num_items());
  prep.additive = inst.additive();
  if (prep.n == 0) throw InvalidInput("cannot solve an instance without agents");

  if (objective == Objective::Nsw && inst.min_possible_value() < 0)
    throw ObjectiveUndefined(
        "Nash welfare is only defined when no item can be valued negatively");

  if (prep.additive) {
    prep.matrix = inst.additive_profile().matrix;
    prep.posgain.assign(prep.n, std::vector<Value>(prep.m, 0));
    for (int i = 0; i < prep.n; ++i)
      for (int o = 0; o < prep.m; ++o)
        prep.posgain[i][o] = std::max<Value>(0, prep.matrix[i][o]);
  } else {
    const auto& prof = inst.submodular_profile();
    if (prep.m > kTabularMaxItems)
      throw TooLarge("exact search over oracle valuations is capped at " +
                     std::to_string(kTabularMaxItems) + " items");
    prep.tables.reserve(prep.n);
    for (const Oracle& oracle : prof.oracles) prep.tables.push_back(tabulate(oracle));
    prep.posgain.assign(prep.n, std::vector<Value>(prep.m, 0));
    for (int i = 0; i < prep.n; ++i) {
      const auto& table = prep.tables[i];
      for (int o = 0; o < prep.m; ++o) {
        Value best = std::numeric_limits<Value>::min();
        std::uint32_t bit = 1u << o;
        for (std::uint32_t mask = 0; mask < table.size(); ++mask) {
          if (mask & bit) continue;
          best = std::max(best, table[mask | bit] - table[mask]);
        }
        prep.posgain[i][o] = std::max<Value>(0, best);
      }
    }
  }

  prep.itemgain.assign(prep.m, 0);
  for (int o = 0; o < prep.m; ++o) {
    Value g = 0;
    for (int i = 0; i < prep.n; ++i) g = std::max(g, prep.posgain[i][o]);
    prep.itemgain[o] = g;
  }

  std::vector<Value> item_max(prep.m, std::numeric_limits<Value>::min());
  for (int o = 0; o < prep.m; ++o) {
    for (int i = 0; i < prep.n; ++i) {
      Value v = prep.additive ? prep.matrix[i][o] : prep.posgain[i][o];
      item_max[o] = std::max(item_max[o], v);
    }
  }
  prep.order.resize(prep.m);
  for (int o = 0; o < prep.m; ++o) prep.order[o] = o;
  std::stable_sort(prep.order.begin(), prep.order.end(),
                   [&](int x, int y) { return item_max[x] > item_max[y]; });

  // Items with identical columns are interchangeable: canonical assignments
  // are non-decreasing within each group, both in branch and original order.
  prep.prev_same_branch.assign(prep.m, -1);
  prep.prev_same_original.assign(prep.m, -1);
  if (prep.additive) {
    std::vector<int> item_group(prep.m, -1);
    std::vector<int> group_rep;
    for (int o = 0; o < prep.m; ++o) {
      for (std::size_t g = 0; g < group_rep.size(); ++g) {
        int rep = group_rep[g];
        bool same = true;
        for (int i = 0; i < prep.n && same; ++i) same = prep.matrix[i][o] == prep.matrix[i][rep];
        if (same) {
          item_group[o] = static_cast<int>(g);
          break;
        }
      }
      if (item_group[o] < 0) {
        item_group[o] = static_cast<int>(group_rep.size());
        group_rep.push_back(o);
      }
    }
    std::vector<int> last_original(group_rep.size(), -1);
    for (int o = 0; o < prep.m; ++o) {
      prep.prev_same_original[o] = last_original[item_group[o]];
      last_original[item_group[o]] = o;
    }
    std::vector<int> last_branch(group_rep.size(), -1);
    for (int d = 0; d < prep.m; ++d) {
      int g = item_group[prep.order[d]];
      prep.prev_same_branch[d] = last_branch[g];
      last_branch[g] = d;
    }
  }

  // Agents with identical valuations are interchangeable; group them.
  prep.sym_class.assign(prep.n, -1);
  for (int i = 0; i < prep.n; ++i) {
    if (prep.sym_class[i] >= 0) continue;
    int cls = static_cast<int>(prep.sym_members.size());
    prep.sym_members.push_back({i});
    prep.sym_class[i] = cls;
    for (int j = i + 1; j < prep.n; ++j) {
      if (prep.sym_class[j] >= 0) continue;
      bool same = prep.additive ? prep.matrix[i] == prep.matrix[j]
                                : prep.tables[i] == prep.tables[j];
      if (same) {
        prep.sym_members[cls].push_back(j);
        prep.sym_class[j] = cls;
      }
    }
  }
  return prep;
}

// Mutable search state shared by all passes.
struct State {
  const Prep* prep = nullptr;
  std::vector<int> assign;          // item -> agent, -1 unassigned
  std::vector<Value> utility;
  std::vector<std::uint32_t> mask;  // submodular bundles
  std::vector<Value> remaining;     // per-agent optimistic unassigned gain
  std::vector<int> bundle_size;
  Value total_utility = 0;
  Value total_itemgain = 0;

  explicit State(const Prep& p) : prep(&p) {
    assign.assign(p.m, -1);
    utility.assign(p.n, 0);
    mask.assign(p.n, 0);
    bundle_size.assign(p.n, 0);
    remaining.assign(p.n, 0);
    for (int i = 0; i < p.n; ++i)
      for (int o = 0; o < p.m; ++o) remaining[i] += p.posgain[i][o];
    for (int o = 0; o < p.m; ++o) total_itemgain += p.itemgain[o];
  }

  Value gain(int agent, int item) const {
    if (prep->additive) return prep->matrix[agent][item];
    const auto& table = prep->tables[agent];
    return table[mask[agent] | (1u << item)] - table[mask[agent]];
  }

  void apply(int item, int agent) {
    Value g = gain(agent, item);
    assign[item] = agent;
    utility[agent] += g;
    total_utility += g;
    if (!prep->additive) mask[agent] |= 1u << item;
    ++bundle_size[agent];
    for (int i = 0; i < prep->n; ++i) remaining[i] -= prep->posgain[i][item];
    total_itemgain -= prep->itemgain[item];
  }

  void undo(int item, int agent) {
    if (!prep->additive) mask[agent] &= ~(1u << item);
    Value g = prep->additive
                  ? prep->matrix[agent][item]
                  : prep->tables[agent][mask[agent] | (1u << item)] - prep->tables[agent][mask[agent]];
    assign[item] = -1;
    utility[agent] -= g;
    total_utility -= g;
    --bundle_size[agent];
    for (int i = 0; i < prep->n; ++i) remaining[i] += prep->posgain[i][item];
    total_itemgain += prep->itemgain[item];
  }

  // Interchangeable-agent rule: an empty agent may receive an item only if it
  // is the lowest-indexed empty member of its class.
  bool symmetry_allows(int agent) const {
    if (bundle_size[agent] > 0) return true;
    for (int member : prep->sym_members[prep->sym_class[agent]]) {
      if (member == agent) return true;
      if (bundle_size[member] == 0) return false;
    }
    return true;
  }

  SearchScore leaf_score(Objective objective) const {
    SearchScore s;
    if (objective == Objective::Mew) {
      s.mew = *std::min_element(utility.begin(), utility.end());
      return s;
    }
    for (Value u : utility) {
      if (u <= 0)
        ++s.zeros;
      else
        s.product *= static_cast<unsigned long>(u);
    }
    return s;
  }
};

struct Bound {
  std::int64_t min_zeros = 0;      // NSW
  long double product_upper = 0;   // NSW, already inflated
  Value mew_upper = 0;             // MEW
};

Bound compute_bound(const State& st, Objective objective, double multiplier) {
  const Prep& p = *st.prep;
  Bound b;
  if (objective == Objective::Mew) {
    Value lo = std::numeric_limits<Value>::max();
    for (int i = 0; i < p.n; ++i) lo = std::min(lo, st.utility[i] + st.remaining[i]);
    b.mew_upper = lo;
    return b;
  }
  for (int i = 0; i < p.n; ++i)
    if (st.utility[i] <= 0 && st.utility[i] + st.remaining[i] <= 0) ++b.min_zeros;
  int positive_agents = p.n - static_cast<int>(b.min_zeros);
  if (positive_agents <= 0) {
    b.product_upper = 1.0L;
    return b;
  }
  long double avg = (static_cast<long double>(st.total_utility) +
                     static_cast<long double>(st.total_itemgain)) /
                    static_cast<long double>(positive_agents);
  if (avg < 1.0L) avg = 1.0L;  // positive integer utilities multiply to >= 1
  long double bound = std::pow(avg, static_cast<long double>(positive_agents));
  bound *= static_cast<long double>(multiplier);
  b.product_upper = bound * (1.0L + kBoundSafety) + 1e-30L;
  return b;
}

// Could a completion strictly beat `best`?
bool can_improve(const Bound& b, Objective objective, const SearchScore& best) {
  if (objective == Objective::Mew) return b.mew_upper > best.mew;
  if (b.min_zeros != best.zeros) return b.min_zeros < best.zeros;
  double floor = to_double_floor(best.product + 1);
  if (std::isinf(floor)) return true;  // beyond double range: never prune
  return b.product_upper >= static_cast<long double>(floor);
}

// Could a completion reach exactly `target`?
bool can_reach(const Bound& b, Objective objective, const SearchScore& target) {
  if (objective == Objective::Mew) return b.mew_upper >= target.mew;
  if (b.min_zeros > target.zeros) return false;
  if (b.min_zeros < target.zeros) return true;
  double floor = to_double_floor(target.product);
  if (std::isinf(floor)) return true;
  return b.product_upper >= static_cast<long double>(floor);
}

struct EntryResult {
  bool improved = false;
  bool complete = true;
  SearchScore score;
  std::vector<int> assignment;
  std::uint64_t nodes = 0;
};

// Depth-first value search below one frontier entry, with an entry-local
// incumbent. Pure function of the entry and the starting incumbent, so the
// outcome does not depend on the worker count.
class EntrySearch {
 public:
  EntrySearch(const Prep& prep, Objective objective, double multiplier,
              const SearchScore& incumbent, std::uint64_t budget)
      : state_(prep), objective_(objective), multiplier_(multiplier),
        best_(incumbent), budget_(budget) {}

  EntryResult run(const std::vector<int>& prefix) {
    const Prep& p = *state_.prep;
    for (std::size_t d = 0; d < prefix.size(); ++d)
      state_.apply(p.order[d], prefix[d]);
    Bound root = compute_bound(state_, objective_, multiplier_);
    if (can_improve(root, objective_, best_)) dfs(static_cast<int>(prefix.size()));
    result_.complete = !exhausted_;
    result_.nodes = nodes_;
    result_.score = best_;
    return result_;
  }

 private:
  bool dfs(int depth) {
    if (nodes_ >= budget_) {
      exhausted_ = true;
      return false;
    }
    ++nodes_;
    const Prep& p = *state_.prep;
    if (depth == p.m) {
      SearchScore leaf = state_.leaf_score(objective_);
      if (compare_scores(objective_, leaf, best_) > 0) {
        best_ = leaf;
        result_.improved = true;
        result_.assignment = state_.assign;
      }
      return true;
    }
    int item = p.order[depth];
    int first_agent = 0;
    if (int prev = p.prev_same_branch[depth]; prev >= 0)
      first_agent = state_.assign[p.order[prev]];
    for (int agent = first_agent; agent < p.n; ++agent) {
      if (!state_.symmetry_allows(agent)) continue;
      state_.apply(item, agent);
      Bound bound = compute_bound(state_, objective_, multiplier_);
      if (can_improve(bound, objective_, best_)) {
        if (!dfs(depth + 1)) {
          state_.undo(item, agent);
          return false;
        }
      }
      state_.undo(item, agent);
    }
    return true;
  }

  State state_;
  Objective objective_;
  double multiplier_;
  SearchScore best_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
  EntryResult result_;
};

// Reconstructs the lexicographically smallest assignment vector achieving a
// proved optimal score: items in original index order, agents in ascending
// order, pruning every subtree that provably cannot reach the target.
class Reconstruct {
 public:
  Reconstruct(const Prep& prep, Objective objective, double multiplier,
              const SearchScore& target, std::uint64_t budget)
      : state_(prep), objective_(objective), multiplier_(multiplier),
        target_(target), budget_(budget) {}

  bool run() { return dfs(0); }
  const std::vector<int>& assignment() const { return state_.assign; }
  std::uint64_t nodes() const { return nodes_; }
  bool exhausted() const { return exhausted_; }

 private:
  bool dfs(int depth) {
    if (nodes_ >= budget_) {
      exhausted_ = true;
      return false;
    }
    ++nodes_;
    const Prep& p = *state_.prep;
    if (depth == p.m)
      return compare_scores(objective_, state_.leaf_score(objective_), target_) == 0;
    int first_agent = 0;
    if (int prev = p.prev_same_original[depth]; prev >= 0) first_agent = state_.assign[prev];
    for (int agent = first_agent; agent < p.n; ++agent) {
      if (!state_.symmetry_allows(agent)) continue;
      state_.apply(depth, agent);
      Bound bound = compute_bound(state_, objective_, multiplier_);
      if (can_reach(bound, objective_, target_) && dfs(depth + 1)) return true;
      if (exhausted_) {
        state_.undo(depth, agent);
        return false;
      }
      state_.undo(depth, agent);
    }
    return false;
  }

  State state_;
  Objective objective_;
  double multiplier_;
  SearchScore target_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

// Deterministic warm start: greedy in branch order, then local search.
Allocation greedy_incumbent(const Instance& inst, const Prep& prep, Objective objective,
                            bool polish) {
  State st(prep);
  for (int depth = 0; depth < prep.m; ++depth) {
    int item = prep.order[depth];
    int pick = 0;
    SearchScore pick_score;
    bool first = true;
    for (int agent = 0; agent < prep.n; ++agent) {
      st.apply(item, agent);
      SearchScore score = st.leaf_score(objective);
      st.undo(item, agent);
      if (first || compare_scores(objective, score, pick_score) > 0) {
        pick = agent;
        pick_score = score;
        first = false;
      }
    }
    st.apply(item, pick);
  }
  Allocation alloc{st.assign};
  if (polish) alloc = local_search(inst, alloc, objective);
  return alloc;
}

OptResult finish_result(const Instance& inst, Objective objective, SolveStatus status,
                        std::vector<int> assignment, std::uint64_t nodes) {
  OptResult result;
  result.objective = objective;
  result.status = status;
  result.best = Allocation{std::move(assignment)};
  result.nodes = nodes;
  std::vector<Value> utilities = evaluate_allocation(inst, result.best);
  if (objective == Objective::Nsw) {
    result.nash = nash_score(utilities);
  } else if (!utilities.empty()) {
    result.mew = egalitarian_welfare(utilities);
  }
  return result;
}

OptResult solve_brute(const Instance& inst, const Prep& prep, Objective objective,
                      const SolveLimits& limits) {
  const int n = prep.n, m = prep.m;
  State st(prep);
  std::vector<int> current(m, 0);
  std::vector<int> best_assign;
  SearchScore best;
  bool have_best = false;
  std::uint64_t leaves = 0;
  bool limited = false;

  // Odometer over assignment vectors in lexicographic order; the first
  // strictly best leaf is therefore the lexicographically smallest optimum.
  for (int o = 0; o < m; ++o) st.apply(o, 0);
  for (;;) {
    ++leaves;
    SearchScore leaf = st.leaf_score(objective);
    if (!have_best || compare_scores(objective, leaf, best) > 0) {
      best = leaf;
      best_assign = st.assign;
      have_best = true;
    }
    if (leaves >= limits.max_nodes) {
      limited = true;
      break;
    }
    int pos = m - 1;
    while (pos >= 0 && current[pos] == n - 1) {
      st.undo(pos, current[pos]);
      current[pos] = 0;
      st.apply(pos, 0);
      --pos;
    }
    if (pos < 0) break;
    st.undo(pos, current[pos]);
    ++current[pos];
    st.apply(pos, current[pos]);
  }
  if (m == 0) best_assign.clear();
  return finish_result(inst, objective, limited ? SolveStatus::LimitReached : SolveStatus::Proved,
                       std::move(best_assign), leaves);
}

OptResult solve_bnb(const Instance& inst, const Prep& prep, Objective objective,
                    const SolveLimits& limits, const BnbTuning& tuning) {
  const int n = prep.n, m = prep.m;
  const double multiplier = tuning.bound_multiplier;

  Allocation warm = greedy_incumbent(inst, prep, objective, tuning.local_search_incumbent);
  std::vector<Value> warm_utilities = evaluate_allocation(inst, warm);
  SearchScore incumbent;
  if (objective == Objective::Nsw) {
    NashScore ns = nash_score(warm_utilities);
    incumbent.zeros = ns.zero_count;
    incumbent.product = ns.positive_product;
  } else {
    incumbent.mew = egalitarian_welfare(warm_utilities);
  }

  // Frontier of deterministic subtree roots in branch order.
  std::vector<std::vector<int>> frontier{{}};
  std::uint64_t expansion_nodes = 1;
  {
    State st(prep);
    int depth = 0;
    while (depth < m && frontier.size() < kFrontierTarget) {
      std::vector<std::vector<int>> next;
      for (const auto& prefix : frontier) {
        for (std::size_t d = 0; d < prefix.size(); ++d) st.apply(prep.order[d], prefix[d]);
        int first_agent = 0;
        if (int prev = prep.prev_same_branch[prefix.size()]; prev >= 0)
          first_agent = st.assign[prep.order[prev]];
        for (int agent = first_agent; agent < n; ++agent) {
          if (!st.symmetry_allows(agent)) continue;
          auto child = prefix;
          child.push_back(agent);
          next.push_back(std::move(child));
          ++expansion_nodes;
        }
        for (std::size_t d = prefix.size(); d-- > 0;) st.undo(prep.order[d], prefix[d]);
      }
      frontier = std::move(next);
      ++depth;
    }
  }

  std::uint64_t remaining_budget =
      limits.max_nodes > expansion_nodes ? limits.max_nodes - expansion_nodes : 0;
  std::uint64_t per_entry = std::max<std::uint64_t>(1, remaining_budget / std::max<std::size_t>(1, frontier.size()));

  const auto deadline_enabled = limits.max_seconds > 0;
  const auto start_time = Clock::now();
  auto out_of_time = [&]() {
    if (!deadline_enabled) return false;
    return std::chrono::duration<double>(Clock::now() - start_time).count() > limits.max_seconds;
  };

  std::vector<EntryResult> results(frontier.size());
  std::atomic<std::size_t> next_entry{0};
  std::exception_ptr worker_error;
  std::mutex error_mutex;
  const int frontier_width = static_cast<int>(std::min<std::size_t>(frontier.size(), 1024));
  int workers = std::clamp(resolve_workers(limits.workers), 1, std::max(1, frontier_width));
  auto worker_loop = [&]() {
    try {
      for (;;) {
        std::size_t idx = next_entry.fetch_add(1);
        if (idx >= frontier.size()) return;
        if (out_of_time()) {
          results[idx].complete = false;
          continue;
        }
        EntrySearch search(prep, objective, multiplier, incumbent, per_entry);
        results[idx] = search.run(frontier[idx]);
      }
    } catch (...) {
      std::scoped_lock lock(error_mutex);
      if (!worker_error) worker_error = std::current_exception();
    }
  };
  if (workers <= 1) {
    worker_loop();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker_loop);
    for (auto& t : pool) t.join();
  }
  if (worker_error) std::rethrow_exception(worker_error);

  // Merge in entry order; the incumbent seeds the best and wins ties.
  SearchScore best = incumbent;
  std::vector<int> best_assign = warm.assignment;
  std::uint64_t nodes = expansion_nodes;
  bool complete = true;
  for (const EntryResult& r : results) {
    nodes += r.nodes;
    complete = complete && r.complete;
    if (r.improved && compare_scores(objective, r.score, best) > 0) {
      best = r.score;
      best_assign = r.assignment;
    }
  }

  if (!complete)
    return finish_result(inst, objective, SolveStatus::LimitReached, std::move(best_assign),
                         nodes);

  std::uint64_t recon_budget = limits.max_nodes > nodes ? limits.max_nodes - nodes : 0;
  Reconstruct recon(prep, objective, multiplier, best, recon_budget);
  bool found = recon.run();
  nodes += recon.nodes();
  if (found)
    return finish_result(inst, objective, SolveStatus::Proved, recon.assignment(), nodes);
  // Out of budget, or the value search accepted a score that reconstruction
  // cannot reach (possible only with an unsound tuned bound).
  return finish_result(inst, objective, SolveStatus::LimitReached, std::move(best_assign),
                       nodes);
}

}  // namespace

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FAIRDIV_WORKERS")) {
    int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  return 1;
}

const char* to_string(SolveStatus s) {
  return s == SolveStatus::Proved ? "proved" : "limit-reached";
}

OptResult solve_exact(const Instance& inst, Objective objective, Method method,
                      const SolveLimits& limits) {
  return solve_exact_tuned(inst, objective, method, limits, BnbTuning{});
}

OptResult solve_exact_tuned(const Instance& inst, Objective objective, Method method,
                            const SolveLimits& limits, const BnbTuning& tuning) {
  Prep prep = prepare(inst, objective);
  if (prep.m == 0) return finish_result(inst, objective, SolveStatus::Proved, {}, 1);
  if (method == Method::Brute) return solve_brute(inst, prep, objective, limits);
  return solve_bnb(inst, prep, objective, limits, tuning);
}

std::vector<Allocation> enumerate_optima(const Instance& inst, Objective objective,
                                         std::uint64_t cap) {
  Prep prep = prepare(inst, objective);
  const int n = prep.n, m = prep.m;
  long double total = std::pow(static_cast<long double>(n), static_cast<long double>(m));
  if (total > static_cast<long double>(cap))
    throw TooLarge("enumerate_optima over " + std::to_string(n) + "^" + std::to_string(m) +
                   " assignments exceeds the cap of " + std::to_string(cap));
  if (m == 0) return {Allocation{}};

  State st(prep);
  std::vector<int> current(m, 0);
  for (int o = 0; o < m; ++o) st.apply(o, 0);
  SearchScore best;
  bool have_best = false;
  std::vector<Allocation> optima;
  for (;;) {
    SearchScore leaf = st.leaf_score(objective);
    int c = have_best ? compare_scores(objective, leaf, best) : 1;
    if (c > 0) {
      best = leaf;
      have_best = true;
      optima.clear();
      optima.push_back(Allocation{st.assign});
    } else if (c == 0) {
      optima.push_back(Allocation{st.assign});
    }
    int pos = m - 1;
    while (pos >= 0 && current[pos] == n - 1) {
      st.undo(pos, current[pos]);
      current[pos] = 0;
      st.apply(pos, 0);
      --pos;
    }
    if (pos < 0) break;
    st.undo(pos, current[pos]);
    ++current[pos];
    st.apply(pos, current[pos]);
  }
  return optima;
}

bool improving_move(Value u_i, Value loss, Value u_j, Value gain, bool strict) {
  __int128 before = static_cast<__int128>(u_i) * u_j;
  __int128 after = static_cast<__int128>(u_i - loss) * (u_j + gain);
  return strict ? after > before : after >= before;
}

namespace {

// Exact comparison of (zeros, positive product) before/after a move touching
// at most two agents; products of the touched factors fit __int128 at desk
// scale, everything else cancels.
bool move_improves(Objective objective, std::span<const Value> utilities,
                   int i, Value ui_new, int j, Value uj_new) {
  if (objective == Objective::Mew) {
    Value old_min = *std::min_element(utilities.begin(), utilities.end());
    Value new_min = std::numeric_limits<Value>::max();
    for (int t = 0; t < static_cast<int>(utilities.size()); ++t) {
      Value u = utilities[t];
      if (t == i) u = ui_new;
      if (t == j) u = uj_new;
      new_min = std::min(new_min, u);
    }
    return new_min > old_min;
  }
  auto zeros_of = [](Value u) { return u <= 0 ? 1 : 0; };
  int dz = zeros_of(ui_new) + zeros_of(uj_new) - zeros_of(utilities[i]) - zeros_of(utilities[j]);
  if (dz != 0) return dz < 0;
  auto pos = [](Value u) -> __int128 { return u > 0 ? u : 1; };
  return pos(ui_new) * pos(uj_new) > pos(utilities[i]) * pos(utilities[j]);
}

}  // namespace

Allocation local_search(const Instance& inst, const Allocation& start, Objective objective) {
  validate_allocation(inst, start);
  if (objective == Objective::Nsw && inst.min_possible_value() < 0)
    throw ObjectiveUndefined(
        "Nash welfare is only defined when no item can be valued negatively");
  const int n = static_cast<int>(inst.num_agents());
  const int m = static_cast<int>(inst.num_items());
  Allocation alloc = start;
  std::vector<Value> utilities = evaluate_allocation(inst, alloc);

  std::vector<std::vector<int>> bundles(n);
  auto rebuild_bundles = [&]() {
    for (auto& b : bundles) b.clear();
    for (int o = 0; o < m; ++o) bundles[alloc.assignment[o]].push_back(o);
  };
  rebuild_bundles();

  auto bundle_value = [&](int agent, const std::vector<int>& items) -> Value {
    if (inst.additive()) {
      Value sum = 0;
      for (int o : items) sum += inst.additive_profile().matrix[agent][o];
      return sum;
    }
    return oracle_value(inst.submodular_profile().oracles[agent], items);
  };
  auto without = [](const std::vector<int>& items, int o) {
    std::vector<int> out;
    out.reserve(items.size());
    for (int x : items)
      if (x != o) out.push_back(x);
    return out;
  };
  auto with = [](const std::vector<int>& items, int o) {
    std::vector<int> out = items;
    out.insert(std::lower_bound(out.begin(), out.end(), o), o);
    return out;
  };

  for (;;) {
    bool moved = false;
    // Single-item transfers, first improving move in scan order.
    for (int o = 0; o < m && !moved; ++o) {
      int i = alloc.assignment[o];
      for (int j = 0; j < n && !moved; ++j) {
        if (j == i) continue;
        Value ui_new = bundle_value(i, without(bundles[i], o));
        Value uj_new = bundle_value(j, with(bundles[j], o));
        if (move_improves(objective, utilities, i, ui_new, j, uj_new)) {
          alloc.assignment[o] = j;
          utilities[i] = ui_new;
          utilities[j] = uj_new;
          rebuild_bundles();
          moved = true;
        }
      }
    }
    if (moved) continue;
    // Pairwise swaps.
    for (int o1 = 0; o1 < m && !moved; ++o1) {
      for (int o2 = o1 + 1; o2 < m && !moved; ++o2) {
        int i = alloc.assignment[o1], j = alloc.assignment[o2];
        if (i == j) continue;
        Value ui_new = bundle_value(i, with(without(bundles[i], o1), o2));
        Value uj_new = bundle_value(j, with(without(bundles[j], o2), o1));
        if (move_improves(objective, utilities, i, ui_new, j, uj_new)) {
          alloc.assignment[o1] = j;
          alloc.assignment[o2] = i;
          utilities[i] = ui_new;
          utilities[j] = uj_new;
          rebuild_bundles();
          moved = true;
        }
      }
    }
    if (!moved) break;
  }
  return alloc;
}

}  // namespace fairdiv
