#include "fairdiv/reductions.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <set>

#include "fairdiv/errors.hpp"

namespace fairdiv {

namespace {

const mpq_class kGamma(1, 297);          // uncovered-edge fraction of the VC promise
const mpq_class kSatPromise(1, 1016);    // unsatisfied-clause fraction of the SAT promise

void require_goods_triple(Value a, Value b, Value c) {
  if (!(0 <= a && a < b && b < c))
    throw WrongRegime("need 0 <= a < b < c, got (" + std::to_string(a) + "," +
                      std::to_string(b) + "," + std::to_string(c) + ")");
}

void require_epsilon(const mpq_class& epsilon) {
  if (epsilon < 0 || epsilon >= mpq_class(1, 2032))
    throw InvalidInput("epsilon must lie in [0, 1/2032), got " + epsilon.get_str());
}

std::string num(Value v) { return std::to_string(v); }

// mpq_class(num, den) does not reduce; this does.
mpq_class frac(Value p, Value q) {
  mpq_class out(static_cast<long>(p), static_cast<long>(q));
  out.canonicalize();
  return out;
}

// Item layout shared by the SAT-based constructions: per-variable groups of
// literal items (x, x', negated x, negated x'), optionally followed by a clog
// item, then construction-specific specials.
struct SatLayout {
  int n = 0, m = 0;
  int per_var = 4;  // 5 when the construction uses clog items

  int x(int var, int copy) const { return (var - 1) * per_var + copy; }        // copy 0/1
  int nx(int var, int copy) const { return (var - 1) * per_var + 2 + copy; }
  int clog(int var) const { return (var - 1) * per_var + 4; }
  int literal_block() const { return n * per_var; }

  // Both item copies of a signed literal.
  std::pair<int, int> copies(int literal) const {
    int var = std::abs(literal);
    return literal > 0 ? std::pair{x(var, 0), x(var, 1)} : std::pair{nx(var, 0), nx(var, 1)};
  }
};

void push_variable_items(Instance& inst, const SatLayout& layout) {
  for (int i = 1; i <= layout.n; ++i) {
    inst.item_names.push_back("x" + num(i));
    inst.item_names.push_back("x" + num(i) + "p");
    inst.item_names.push_back("nx" + num(i));
    inst.item_names.push_back("nx" + num(i) + "p");
    inst.item_roles.insert(inst.item_roles.end(), 4, "literal");
    if (layout.per_var == 5) {
      inst.item_names.push_back("clog" + num(i));
      inst.item_roles.push_back("clog");
    }
  }
}

Instance start_additive(ValueSet vs) {
  Instance inst;
  AdditiveProfile prof;
  prof.value_set = std::move(vs);
  inst.profile = std::move(prof);
  return inst;
}

AdditiveProfile& additive(Instance& inst) { return std::get<AdditiveProfile>(inst.profile); }

void fill_matrix(Instance& inst, std::size_t agents, Value floor_value) {
  additive(inst).matrix.assign(agents, std::vector<Value>(inst.item_names.size(), floor_value));
}

// Assignment witnesses must certify the source outright.
std::vector<int> checked_assignment(const Cnf2p2n& phi, const WitnessData& witness) {
  if (witness.kind != WitnessData::Assignment)
    throw InvalidWitness("this reduction expects a variable assignment witness");
  if (witness.data.size() != static_cast<std::size_t>(phi.num_vars))
    throw InvalidWitness("assignment covers " + std::to_string(witness.data.size()) +
                         " variables, formula has " + std::to_string(phi.num_vars));
  for (std::size_t ci = 0; ci < phi.clauses.size(); ++ci)
    if (!clause_satisfied(phi.clauses[ci], witness.data))
      throw InvalidWitness("assignment leaves clause " + std::to_string(ci + 1) + " unsatisfied");
  return witness.data;
}

// Tracks the unallocated copies of each literal item during witness replay.
struct CopyPool {
  const SatLayout* layout;
  std::vector<char> taken;

  CopyPool(const SatLayout& l) : layout(&l), taken(l.literal_block(), 0) {}

  // Lowest-index free copy of a literal, or -1.
  int take(int literal) {
    auto [first, second] = layout->copies(literal);
    for (int idx : {first, second}) {
      if (!taken[idx]) {
        taken[idx] = 1;
        return idx;
      }
    }
    return -1;
  }

  int take_any() {
    for (int idx = 0; idx < layout->literal_block(); ++idx) {
      if (idx % layout->per_var >= 4) continue;  // clog items are not literals
      if (!taken[idx]) {
        taken[idx] = 1;
        return idx;
      }
    }
    return -1;
  }
};

int sat_agent_pos(int var) { return 2 * (var - 1); }
int sat_agent_neg(int var) { return 2 * (var - 1) + 1; }

}  // namespace

Instance gen_mnw_sat(const Cnf2p2n& phi, Value a, Value b, Value c, const mpq_class& epsilon) {
  validate(phi);
  require_goods_triple(a, b, c);
  if (c > 2 * b)
    throw WrongRegime("the SAT construction needs c <= 2b; use the vertex-cover one for 2b < c");
  require_epsilon(epsilon);
  const int n = phi.num_vars, m = phi.num_clauses();

  Instance inst = start_additive(ValueSet{a, b, c});
  SatLayout layout{n, m, 5};
  push_variable_items(inst, layout);
  const int d_base = static_cast<int>(inst.item_names.size());
  for (int j = 1; j <= 2 * n; ++j) {
    inst.item_names.push_back("d" + num(j));
    inst.item_roles.push_back("specialI");
  }
  const int dh_base = static_cast<int>(inst.item_names.size());
  for (int j = 1; j <= 4 * n; ++j) {
    inst.item_names.push_back("dh" + num(j));
    inst.item_roles.push_back("specialII");
  }

  for (int i = 1; i <= n; ++i) {
    inst.agent_names.push_back("pos" + num(i));
    inst.agent_roles.push_back("pos");
    inst.agent_names.push_back("neg" + num(i));
    inst.agent_roles.push_back("neg");
  }
  for (int j = 1; j <= m; ++j) {
    inst.agent_names.push_back("clause" + num(j));
    inst.agent_roles.push_back("clause");
  }
  for (int j = 1; j <= 2 * n - m; ++j) {
    inst.agent_names.push_back("sdum" + num(j));
    inst.agent_roles.push_back("dummyI");
  }
  for (int j = 1; j <= 4 * n; ++j) {
    inst.agent_names.push_back("tdum" + num(j));
    inst.agent_roles.push_back("dummyII");
  }
  fill_matrix(inst, 8 * static_cast<std::size_t>(n), a);
  auto& matrix = additive(inst).matrix;

  for (int i = 1; i <= n; ++i) {
    matrix[sat_agent_pos(i)][layout.x(i, 0)] = b;
    matrix[sat_agent_pos(i)][layout.x(i, 1)] = b;
    matrix[sat_agent_pos(i)][layout.clog(i)] = c;
    matrix[sat_agent_neg(i)][layout.nx(i, 0)] = b;
    matrix[sat_agent_neg(i)][layout.nx(i, 1)] = b;
    matrix[sat_agent_neg(i)][layout.clog(i)] = c;
  }
  const int clause_base = 2 * n;
  for (int j = 0; j < m; ++j) {
    for (int literal : phi.clauses[j]) {
      auto [first, second] = layout.copies(literal);
      matrix[clause_base + j][first] = b;
      matrix[clause_base + j][second] = b;
    }
    matrix[clause_base + j][d_base + j] = b;
  }
  const int sdum_base = clause_base + m;
  for (int j = 0; j < 2 * n - m; ++j) {
    for (int o = 0; o < layout.literal_block(); ++o)
      if (inst.item_roles[o] == "literal") matrix[sdum_base + j][o] = b;
    matrix[sdum_base + j][d_base + m + j] = b;
  }
  const int tdum_base = sdum_base + (2 * n - m);
  for (int j = 0; j < 4 * n; ++j) {
    for (int o = 0; o < layout.literal_block(); ++o)
      if (inst.item_roles[o] == "literal") matrix[tdum_base + j][o] = b;
    matrix[tdum_base + j][dh_base + j] = c;
  }

  const bool case1 = b * b >= c * a;
  GapCertificate cert;
  cert.objective = Objective::Nsw;
  cert.kind = "mnw-sat";
  cert.regime = classify_regime(a, b, c);
  cert.case_tag = case1 ? 1 : 2;
  cert.epsilon = epsilon;
  mpq_class penalty = case1 ? frac(b * (c + b), 2 * b * c) : frac(b + a, 2 * b);
  mpq_class inv_agents = frac(1, 8 * static_cast<Value>(n));
  PowerExpr base;
  base.mul(mpq_class(2 * b), mpq_class(3 * n) * inv_agents);
  base.mul(mpq_class(c), mpq_class(5 * n) * inv_agents);
  PowerExpr yes = base;
  yes.mul(penalty, epsilon * m * inv_agents);
  PowerExpr no = base;
  no.mul(penalty, (kSatPromise - epsilon) * m * inv_agents);
  cert.yes_value = CertValue(yes);
  cert.no_bound = CertValue(no);
  cert.ratio = CertValue(yes.div(no));
  inst.certificate = cert;
  inst.reduction = ReductionInfo{"mnw-sat",
                                 {{"n", n}, {"m", m}, {"a", a}, {"b", b}, {"c", c}},
                                 epsilon};
  inst.source = phi;
  return inst;
}

namespace {

// Shared frame of the two vertex-cover constructions: edge items in input
// order, a block of cover items, then two private specials per dummy agent.
struct VcFrame {
  int vertices = 0;
  int edges = 0;
  int dummies = 0;
  int cover_base = 0;
  int special_base = 0;
};

VcFrame start_vc_instance(Instance& inst, const Graph3Reg& g, int k, int cover_items) {
  validate(g);
  if (k < g.num_vertices / 2 || k > g.num_vertices)
    throw InvalidSource("cover budget k=" + std::to_string(k) + " outside [" +
                        std::to_string(g.num_vertices / 2) + ", " +
                        std::to_string(g.num_vertices) + "]");
  VcFrame frame;
  frame.vertices = g.num_vertices;
  frame.edges = g.num_edges();
  frame.dummies = 3 * k - 3 * g.num_vertices / 2;

  for (const auto& [u, v] : g.edges) {
    inst.item_names.push_back("e" + num(std::min(u, v)) + "_" + num(std::max(u, v)));
    inst.item_roles.push_back("edge");
  }
  frame.cover_base = static_cast<int>(inst.item_names.size());
  for (int j = 1; j <= cover_items; ++j) {
    inst.item_names.push_back("cov" + num(j));
    inst.item_roles.push_back("cover");
  }
  frame.special_base = static_cast<int>(inst.item_names.size());
  for (int j = 1; j <= 2 * frame.dummies; ++j) {
    inst.item_names.push_back("sp" + num(j));
    inst.item_roles.push_back("special");
  }

  for (int v = 1; v <= g.num_vertices; ++v) {
    inst.agent_names.push_back("node" + num(v));
    inst.agent_roles.push_back("node");
  }
  for (int j = 1; j <= frame.dummies; ++j) {
    inst.agent_names.push_back("dum" + num(j));
    inst.agent_roles.push_back("dummy");
  }
  return frame;
}

}  // namespace

Instance gen_mnw_vc(const Graph3Reg& g, int k, Value a, Value b, Value c) {
  require_goods_triple(a, b, c);
  if (2 * b >= c)
    throw WrongRegime("the vertex-cover construction needs 2b < c; use the SAT one for c <= 2b");
  Instance inst = start_additive(ValueSet{a, b, c});
  VcFrame frame = start_vc_instance(inst, g, k, k);
  fill_matrix(inst, static_cast<std::size_t>(frame.vertices) + frame.dummies, a);
  auto& matrix = additive(inst).matrix;

  for (int e = 0; e < frame.edges; ++e) {
    auto [u, v] = g.edges[e];
    matrix[u - 1][e] = b;
    matrix[v - 1][e] = b;
  }
  for (std::size_t i = 0; i < matrix.size(); ++i)
    for (int j = 0; j < k; ++j) matrix[i][frame.cover_base + j] = c;
  for (int j = 0; j < frame.dummies; ++j) {
    int dummy = frame.vertices + j;
    for (int e = 0; e < frame.edges; ++e) matrix[dummy][e] = b;
    matrix[dummy][frame.special_base + 2 * j] = b;
    matrix[dummy][frame.special_base + 2 * j + 1] = b;
  }

  // A = 3k - |V|/2 agents; NSW+ = (c^k (3b)^(2k - |V|/2))^(1/A).
  const int V = frame.vertices, E = frame.edges;
  mpq_class inv_agents = frac(2, 6 * static_cast<Value>(k) - V);
  mpq_class a_prime = std::max({mpq_class(static_cast<long>(a)), frac(2 * b * b, c), frac(2 * b, 3)});
  GapCertificate cert;
  cert.objective = Objective::Nsw;
  cert.kind = "mnw-vc";
  cert.regime = classify_regime(a, b, c);
  PowerExpr yes;
  yes.mul(mpq_class(static_cast<long>(c)), mpq_class(k) * inv_agents);
  yes.mul(mpq_class(3 * static_cast<long>(b)), frac(4 * static_cast<Value>(k) - V, 2) * inv_agents);
  PowerExpr no = yes;
  no.mul((2 * b + a_prime) / (3 * b), kGamma * E / 3 * inv_agents);
  cert.yes_value = CertValue(yes);
  cert.no_bound = CertValue(no);
  cert.ratio = CertValue(yes.div(no));
  inst.certificate = cert;
  inst.reduction = ReductionInfo{
      "mnw-vc", {{"k", k}, {"vertices", V}, {"edges", E}, {"a", a}, {"b", b}, {"c", c}}};
  inst.source = g;
  return inst;
}

Instance gen_mnw_bivalued3c(const Graph3Reg& g, int k, Value c) {
  if (c <= 3 || c % 3 == 0)
    throw WrongRegime("the {3,c} construction needs c > 3 with c not divisible by 3, got c=" +
                      num(c));
  Instance inst = start_additive(ValueSet{3, c});
  VcFrame frame = start_vc_instance(inst, g, k, static_cast<int>(c) * k);
  fill_matrix(inst, static_cast<std::size_t>(frame.vertices) + frame.dummies, 3);
  auto& matrix = additive(inst).matrix;

  for (int e = 0; e < frame.edges; ++e) {
    auto [u, v] = g.edges[e];
    matrix[u - 1][e] = c;
    matrix[v - 1][e] = c;
  }
  for (int j = 0; j < frame.dummies; ++j) {
    int dummy = frame.vertices + j;
    for (int e = 0; e < frame.edges; ++e) matrix[dummy][e] = c;
    matrix[dummy][frame.special_base + 2 * j] = c;
    matrix[dummy][frame.special_base + 2 * j + 1] = c;
  }
  // Cover items keep the floor value of 3 for every agent.

  const int V = frame.vertices, E = frame.edges;
  mpq_class inv_agents = frac(2, 6 * static_cast<Value>(k) - V);
  GapCertificate cert;
  cert.objective = Objective::Nsw;
  cert.kind = "mnw-3c";
  cert.regime = classify_regime(ValueSet{3, c});
  PowerExpr yes = PowerExpr::from_rational(mpq_class(3 * static_cast<long>(c)));
  PowerExpr no = yes;
  no.mul(frac(9 * c * c - 1, 9 * c * c), kGamma * E / 6 * inv_agents);
  cert.yes_value = CertValue(yes);
  cert.no_bound = CertValue(no);
  cert.ratio = CertValue(yes.div(no));
  inst.certificate = cert;
  inst.reduction =
      ReductionInfo{"mnw-3c", {{"k", k}, {"vertices", V}, {"edges", E}, {"c", c}}};
  inst.source = g;
  return inst;
}

Instance gen_mew_goods(const Cnf2p2n& phi, Value a, Value b, Value c) {
  validate(phi);
  require_goods_triple(a, b, c);
  const int n = phi.num_vars, m = phi.num_clauses();
  const int case_tag = c >= 2 * b ? 1 : (a == 0 ? 2 : 3);

  Instance inst = start_additive(ValueSet{a, b, c});
  SatLayout layout{n, m, 5};
  push_variable_items(inst, layout);
  const int d_base = static_cast<int>(inst.item_names.size());
  for (int j = 1; j <= 2 * n; ++j) {
    inst.item_names.push_back("d" + num(j));
    inst.item_roles.push_back("special");
  }
  const int pad_base = static_cast<int>(inst.item_names.size());
  if (case_tag == 3) {
    for (int j = 1; j <= n; ++j) {
      inst.item_names.push_back("pad" + num(j));
      inst.item_roles.push_back("padding");
    }
  }

  for (int i = 1; i <= n; ++i) {
    inst.agent_names.push_back("pos" + num(i));
    inst.agent_roles.push_back("pos");
    inst.agent_names.push_back("neg" + num(i));
    inst.agent_roles.push_back("neg");
  }
  for (int j = 1; j <= m; ++j) {
    inst.agent_names.push_back("clause" + num(j));
    inst.agent_roles.push_back("clause");
  }
  for (int j = 1; j <= 2 * n - m; ++j) {
    inst.agent_names.push_back("dum" + num(j));
    inst.agent_roles.push_back("dummy");
  }
  fill_matrix(inst, 4 * static_cast<std::size_t>(n), a);
  auto& matrix = additive(inst).matrix;
  (void)pad_base;  // padding items stay at the floor value for everyone

  for (int i = 1; i <= n; ++i) {
    matrix[sat_agent_pos(i)][layout.x(i, 0)] = b;
    matrix[sat_agent_pos(i)][layout.x(i, 1)] = b;
    matrix[sat_agent_pos(i)][layout.clog(i)] = c;
    matrix[sat_agent_neg(i)][layout.nx(i, 0)] = b;
    matrix[sat_agent_neg(i)][layout.nx(i, 1)] = b;
    matrix[sat_agent_neg(i)][layout.clog(i)] = c;
  }
  const int clause_base = 2 * n;
  for (int j = 0; j < m; ++j) {
    for (int literal : phi.clauses[j]) {
      auto [first, second] = layout.copies(literal);
      matrix[clause_base + j][first] = b;
      matrix[clause_base + j][second] = b;
    }
    matrix[clause_base + j][d_base + j] = b;
  }
  const int dum_base = clause_base + m;
  for (int j = 0; j < 2 * n - m; ++j) {
    for (int o = 0; o < layout.literal_block(); ++o)
      if (inst.item_roles[o] == "literal") matrix[dum_base + j][o] = b;
    matrix[dum_base + j][d_base + m + j] = b;
  }

  Value yes, no;
  switch (case_tag) {
    case 1: yes = 2 * b; no = b + a; break;
    case 2: yes = c; no = b; break;
    default: yes = std::min(c + a, 2 * b); no = std::min(c + a, 2 * b) - 1; break;
  }
  GapCertificate cert;
  cert.objective = Objective::Mew;
  cert.kind = "mew-goods";
  cert.regime = classify_regime(a, b, c);
  cert.case_tag = case_tag;
  cert.yes_value = CertValue::from_integer(yes);
  cert.no_bound = CertValue::from_integer(no);
  cert.ratio = CertValue(frac(yes, no));
  inst.certificate = cert;
  inst.reduction = ReductionInfo{
      "mew-goods", {{"n", n}, {"m", m}, {"a", a}, {"b", b}, {"c", c}, {"case", case_tag}}};
  inst.source = phi;
  return inst;
}

Instance gen_mew_mixed(const Cnf2p2n& phi, Value a, Value c) {
  validate(phi);
  if (!(a < 0 && 0 < c)) throw WrongRegime("the mixed construction needs a < 0 < c");
  Value g = std::gcd(-a, c);
  a /= g;
  c /= g;
  if (-a <= c)
    throw WrongRegime("the mixed construction needs |a| > |c| after gcd scaling, got a=" +
                      num(a) + ", c=" + num(c));
  const int n = phi.num_vars, m = phi.num_clauses();
  const Value A = -a;  // |a| >= 2

  Instance inst = start_additive(ValueSet{a, c});
  SatLayout layout{n, m, 4};
  push_variable_items(inst, layout);
  std::vector<int> sink_special(n + 1, 0), clause_special(m + 1, 0), dummy_special(2 * n - m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    sink_special[i] = static_cast<int>(inst.item_names.size());
    for (Value t = 1; t <= A - 2; ++t) {
      inst.item_names.push_back("sd" + num(i) + "_" + num(t));
      inst.item_roles.push_back("special");
    }
  }
  for (int j = 1; j <= m; ++j) {
    clause_special[j] = static_cast<int>(inst.item_names.size());
    for (Value t = 1; t <= A - 1; ++t) {
      inst.item_names.push_back("cd" + num(j) + "_" + num(t));
      inst.item_roles.push_back("special");
    }
  }
  for (int j = 1; j <= 2 * n - m; ++j) {
    dummy_special[j] = static_cast<int>(inst.item_names.size());
    for (Value t = 1; t <= A - 1; ++t) {
      inst.item_names.push_back("dd" + num(j) + "_" + num(t));
      inst.item_roles.push_back("special");
    }
  }
  const int pad_base = static_cast<int>(inst.item_names.size());
  for (Value j = 1; j <= 3 * c * n; ++j) {
    inst.item_names.push_back("pad" + num(j));
    inst.item_roles.push_back("padding");
  }

  for (int i = 1; i <= n; ++i) {
    inst.agent_names.push_back("pos" + num(i));
    inst.agent_roles.push_back("pos");
    inst.agent_names.push_back("neg" + num(i));
    inst.agent_roles.push_back("neg");
  }
  for (int j = 1; j <= m; ++j) {
    inst.agent_names.push_back("clause" + num(j));
    inst.agent_roles.push_back("clause");
  }
  for (int j = 1; j <= 2 * n - m; ++j) {
    inst.agent_names.push_back("dum" + num(j));
    inst.agent_roles.push_back("dummy");
  }
  fill_matrix(inst, 4 * static_cast<std::size_t>(n), a);
  auto& matrix = additive(inst).matrix;
  (void)pad_base;  // paddings are valued a by everyone

  for (int i = 1; i <= n; ++i) {
    matrix[sat_agent_pos(i)][layout.x(i, 0)] = c;
    matrix[sat_agent_pos(i)][layout.x(i, 1)] = c;
    matrix[sat_agent_neg(i)][layout.nx(i, 0)] = c;
    matrix[sat_agent_neg(i)][layout.nx(i, 1)] = c;
    for (Value t = 0; t < A - 2; ++t) {
      matrix[sat_agent_pos(i)][sink_special[i] + t] = c;
      matrix[sat_agent_neg(i)][sink_special[i] + t] = c;
    }
  }
  const int clause_base = 2 * n;
  for (int j = 0; j < m; ++j) {
    for (int literal : phi.clauses[j]) {
      auto [first, second] = layout.copies(literal);
      matrix[clause_base + j][first] = c;
      matrix[clause_base + j][second] = c;
    }
    for (Value t = 0; t < A - 1; ++t) matrix[clause_base + j][clause_special[j + 1] + t] = c;
  }
  const int dum_base = clause_base + m;
  for (int j = 0; j < 2 * n - m; ++j) {
    for (int o = 0; o < layout.literal_block(); ++o) matrix[dum_base + j][o] = c;
    for (Value t = 0; t < A - 1; ++t) matrix[dum_base + j][dummy_special[j + 1] + t] = c;
  }

  GapCertificate cert;
  cert.objective = Objective::Mew;
  cert.kind = "mew-mixed";
  cert.regime = classify_regime(ValueSet{a, c});
  cert.yes_value = CertValue::from_integer(0);
  cert.no_bound = CertValue::from_integer(-1);
  inst.certificate = cert;
  inst.reduction = ReductionInfo{"mew-mixed", {{"n", n}, {"m", m}, {"a", a}, {"c", c}}};
  inst.source = phi;
  return inst;
}

Instance gen_mew_two_negative(const Cnf2p2n& phi, Value b, int kstar) {
  validate(phi);
  if (b >= 0) throw WrongRegime("the two-negative construction needs b < 0, got b=" + num(b));
  if (kstar < 2) throw WrongRegime("the two-negative construction needs k* >= 2, got k*=" +
                                   std::to_string(kstar));
  const Value a = 2 * b, c = -static_cast<Value>(kstar) * b;
  const int n = phi.num_vars, m = phi.num_clauses();

  Instance inst = start_additive(ValueSet{a, b, c});
  SatLayout layout{n, m, 4};
  push_variable_items(inst, layout);
  std::vector<int> sink_special(n + 1, 0), clause_special(m + 1, 0), dummy_special(2 * n - m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    sink_special[i] = static_cast<int>(inst.item_names.size());
    for (int t = 1; t <= kstar - 2; ++t) {
      inst.item_names.push_back("sd" + num(i) + "_" + num(t));
      inst.item_roles.push_back("special");
    }
  }
  for (int j = 1; j <= m; ++j) {
    clause_special[j] = static_cast<int>(inst.item_names.size());
    for (int t = 1; t <= kstar - 1; ++t) {
      inst.item_names.push_back("cd" + num(j) + "_" + num(t));
      inst.item_roles.push_back("special");
    }
  }
  for (int j = 1; j <= 2 * n - m; ++j) {
    dummy_special[j] = static_cast<int>(inst.item_names.size());
    for (int t = 1; t <= kstar - 1; ++t) {
      inst.item_names.push_back("dd" + num(j) + "_" + num(t));
      inst.item_roles.push_back("special");
    }
  }
  const int sink_pad_base = static_cast<int>(inst.item_names.size());
  for (int i = 1; i <= n; ++i) {
    inst.item_names.push_back("spad" + num(i));
    inst.item_roles.push_back("padding");
  }
  const int clause_pad_base = static_cast<int>(inst.item_names.size());
  for (int j = 1; j <= m; ++j) {
    inst.item_names.push_back("cpad" + num(j));
    inst.item_roles.push_back("padding");
  }
  const int dummy_pad_base = static_cast<int>(inst.item_names.size());
  for (int j = 1; j <= 2 * n - m; ++j) {
    inst.item_names.push_back("dpad" + num(j));
    inst.item_roles.push_back("padding");
  }

  for (int i = 1; i <= n; ++i) {
    inst.agent_names.push_back("pos" + num(i));
    inst.agent_roles.push_back("pos");
    inst.agent_names.push_back("neg" + num(i));
    inst.agent_roles.push_back("neg");
  }
  for (int j = 1; j <= m; ++j) {
    inst.agent_names.push_back("clause" + num(j));
    inst.agent_roles.push_back("clause");
  }
  for (int j = 1; j <= 2 * n - m; ++j) {
    inst.agent_names.push_back("dum" + num(j));
    inst.agent_roles.push_back("dummy");
  }
  fill_matrix(inst, 4 * static_cast<std::size_t>(n), a);
  auto& matrix = additive(inst).matrix;

  for (int i = 1; i <= n; ++i) {
    matrix[sat_agent_pos(i)][layout.x(i, 0)] = b;
    matrix[sat_agent_pos(i)][layout.x(i, 1)] = b;
    matrix[sat_agent_neg(i)][layout.nx(i, 0)] = b;
    matrix[sat_agent_neg(i)][layout.nx(i, 1)] = b;
    for (int t = 0; t < kstar - 2; ++t) {
      matrix[sat_agent_pos(i)][sink_special[i] + t] = b;
      matrix[sat_agent_neg(i)][sink_special[i] + t] = b;
    }
    matrix[sat_agent_pos(i)][sink_pad_base + i - 1] = c;
    matrix[sat_agent_neg(i)][sink_pad_base + i - 1] = c;
  }
  const int clause_base = 2 * n;
  for (int j = 0; j < m; ++j) {
    for (int literal : phi.clauses[j]) {
      auto [first, second] = layout.copies(literal);
      matrix[clause_base + j][first] = b;
      matrix[clause_base + j][second] = b;
    }
    for (int t = 0; t < kstar - 1; ++t) matrix[clause_base + j][clause_special[j + 1] + t] = b;
    matrix[clause_base + j][clause_pad_base + j] = c;
  }
  const int dum_base = clause_base + m;
  for (int j = 0; j < 2 * n - m; ++j) {
    for (int o = 0; o < layout.literal_block(); ++o) matrix[dum_base + j][o] = b;
    for (int t = 0; t < kstar - 1; ++t) matrix[dum_base + j][dummy_special[j + 1] + t] = b;
    matrix[dum_base + j][dummy_pad_base + j] = c;
  }

  GapCertificate cert;
  cert.objective = Objective::Mew;
  cert.kind = "mew-two-negative";
  cert.regime = classify_regime(a, b, c);
  cert.yes_value = CertValue::from_integer(0);
  cert.no_bound = CertValue::from_integer(-1);
  inst.certificate = cert;
  inst.reduction = ReductionInfo{
      "mew-two-negative",
      {{"n", n}, {"m", m}, {"a", a}, {"b", b}, {"c", c}, {"kstar", kstar}}};
  inst.source = phi;
  return inst;
}

Instance gen_mew_rx3c(const Rx3cInstance& r) {
  validate(r);
  const int k = r.k;

  Instance inst;
  SubmodularProfile prof;
  prof.marginal_set = ValueSet{-1, 0, 1};
  prof.num_items = 9 * k;

  std::vector<Rx3cItemTag> tags;
  for (int e = 1; e <= 3 * k; ++e) {
    inst.item_names.push_back("el" + num(e) + "a");
    inst.item_names.push_back("el" + num(e) + "b");
    inst.item_roles.insert(inst.item_roles.end(), 2, "element");
    tags.push_back({Rx3cItemTag::Element, e});
    tags.push_back({Rx3cItemTag::Element, e});
  }
  for (int j = 1; j <= k; ++j) {
    inst.item_names.push_back("cov" + num(j));
    inst.item_roles.push_back("cover");
    tags.push_back({Rx3cItemTag::Cover, 0});
  }
  for (int j = 1; j <= 2 * k; ++j) {
    inst.item_names.push_back("pad" + num(j));
    inst.item_roles.push_back("padding");
    tags.push_back({Rx3cItemTag::Padding, 0});
  }

  for (int j = 0; j < 3 * k; ++j) {
    inst.agent_names.push_back("set" + num(j + 1));
    inst.agent_roles.push_back("triple");
    Rx3cGadgetOracle oracle;
    oracle.triple = r.triples[j];
    oracle.tags = tags;
    prof.oracles.push_back(std::move(oracle));
  }
  inst.profile = std::move(prof);

  GapCertificate cert;
  cert.objective = Objective::Mew;
  cert.kind = "mew-rx3c";
  cert.regime.tag = RegimeTag::Unclassified;
  cert.regime.values = ValueSet{-1, 0, 1};
  cert.yes_value = CertValue::from_integer(1);
  cert.no_bound = CertValue::from_integer(0);
  inst.certificate = cert;
  inst.reduction = ReductionInfo{"mew-rx3c", {{"k", k}}};
  inst.source = r;
  return inst;
}

namespace {

Allocation witness_sat_family(const Instance& reduced, const Cnf2p2n& phi,
                              const WitnessData& witness) {
  const std::string& kind = reduced.reduction->kind;
  const auto& params = reduced.reduction->params;
  const int n = phi.num_vars, m = phi.num_clauses();
  std::vector<int> sigma = checked_assignment(phi, witness);

  SatLayout layout{n, m, kind == "mnw-sat" || kind == "mew-goods" ? 5 : 4};
  std::vector<int> assign(reduced.num_items(), -1);
  auto name_index = [&](const std::string& name) {
    int idx = reduced.item_index(name);
    if (idx < 0) throw InvalidWitness("generated instance lacks expected item " + name);
    return idx;
  };

  CopyPool pool(layout);
  // Sink agents: the agent on the true side takes the clog (or the padding
  // bundle in the mixed constructions); the other keeps its own literals.
  for (int i = 1; i <= n; ++i) {
    int own_side = sigma[i - 1] ? sat_agent_neg(i) : sat_agent_pos(i);
    auto [first, second] = layout.copies(sigma[i - 1] ? -i : i);
    assign[first] = own_side;
    assign[second] = own_side;
    pool.taken[first] = pool.taken[second] = 1;
    if (layout.per_var == 5) {
      int clogged = sigma[i - 1] ? sat_agent_pos(i) : sat_agent_neg(i);
      assign[layout.clog(i)] = clogged;
    }
  }

  const int clause_base = 2 * n;
  const int dum_base = clause_base + m;
  for (int j = 0; j < m; ++j) {
    int picked = -1;
    for (int literal : phi.clauses[j]) {
      bool true_literal = (literal > 0) == (sigma[std::abs(literal) - 1] != 0);
      if (!true_literal) continue;
      picked = pool.take(literal);
      if (picked >= 0) break;
    }
    if (picked < 0) throw InvalidWitness("no free satisfying copy for clause " +
                                         std::to_string(j + 1));
    assign[picked] = clause_base + j;
  }
  for (int j = 0; j < 2 * n - m; ++j) {
    int picked = pool.take_any();
    if (picked < 0) throw InvalidWitness("ran out of literal items for dummy agents");
    assign[picked] = dum_base + j;
  }

  if (kind == "mnw-sat") {
    for (int j = 1; j <= m; ++j) assign[name_index("d" + num(j))] = clause_base + j - 1;
    for (int j = 1; j <= 2 * n - m; ++j) assign[name_index("d" + num(m + j))] = dum_base + j - 1;
    const int tdum_base = dum_base + (2 * n - m);
    for (int j = 1; j <= 4 * n; ++j) assign[name_index("dh" + num(j))] = tdum_base + j - 1;
  } else if (kind == "mew-goods") {
    for (int j = 1; j <= m; ++j) assign[name_index("d" + num(j))] = clause_base + j - 1;
    for (int j = 1; j <= 2 * n - m; ++j) assign[name_index("d" + num(m + j))] = dum_base + j - 1;
    if (params.at("case") == 3) {
      for (int i = 1; i <= n; ++i) {
        int clogged = sigma[i - 1] ? sat_agent_pos(i) : sat_agent_neg(i);
        assign[name_index("pad" + num(i))] = clogged;
      }
    }
  } else if (kind == "mew-mixed") {
    const Value A = -params.at("a");
    const Value c = params.at("c");
    int next_pad = 1;
    auto give_paddings = [&](int agent) {
      for (Value t = 0; t < c; ++t) assign[name_index("pad" + num(next_pad++))] = agent;
    };
    for (int i = 1; i <= n; ++i) {
      int receiver = sigma[i - 1] ? sat_agent_neg(i) : sat_agent_pos(i);
      for (Value t = 1; t <= A - 2; ++t)
        assign[name_index("sd" + num(i) + "_" + num(t))] = receiver;
      give_paddings(receiver);
    }
    for (int j = 1; j <= m; ++j) {
      for (Value t = 1; t <= A - 1; ++t)
        assign[name_index("cd" + num(j) + "_" + num(t))] = clause_base + j - 1;
      give_paddings(clause_base + j - 1);
    }
    for (int j = 1; j <= 2 * n - m; ++j) {
      for (Value t = 1; t <= A - 1; ++t)
        assign[name_index("dd" + num(j) + "_" + num(t))] = dum_base + j - 1;
      give_paddings(dum_base + j - 1);
    }
  } else if (kind == "mew-two-negative") {
    const int kstar = static_cast<int>(params.at("kstar"));
    for (int i = 1; i <= n; ++i) {
      int receiver = sigma[i - 1] ? sat_agent_neg(i) : sat_agent_pos(i);
      for (int t = 1; t <= kstar - 2; ++t)
        assign[name_index("sd" + num(i) + "_" + num(t))] = receiver;
      assign[name_index("spad" + num(i))] = receiver;
    }
    for (int j = 1; j <= m; ++j) {
      for (int t = 1; t <= kstar - 1; ++t)
        assign[name_index("cd" + num(j) + "_" + num(t))] = clause_base + j - 1;
      assign[name_index("cpad" + num(j))] = clause_base + j - 1;
    }
    for (int j = 1; j <= 2 * n - m; ++j) {
      for (int t = 1; t <= kstar - 1; ++t)
        assign[name_index("dd" + num(j) + "_" + num(t))] = dum_base + j - 1;
      assign[name_index("dpad" + num(j))] = dum_base + j - 1;
    }
  } else {
    throw InvalidWitness("unknown SAT-family reduction kind " + kind);
  }

  // Anything still unassigned belongs to an empty sink agent; there is none
  // for the MNW/MEW goods kinds, and the mixed kinds leave one sink per
  // variable empty, which the allocation must still make total. Items are all
  // placed above, so a hole here is a construction bug.
  for (std::size_t o = 0; o < assign.size(); ++o)
    if (assign[o] < 0)
      throw InvalidWitness("witness replay left item " + reduced.item_names[o] + " unassigned");
  return Allocation{assign};
}

Allocation witness_vc_family(const Instance& reduced, const Graph3Reg& g,
                             const WitnessData& witness) {
  if (witness.kind != WitnessData::VertexCover)
    throw InvalidWitness("this reduction expects a vertex-cover witness");
  const auto& params = reduced.reduction->params;
  const int k = static_cast<int>(params.at("k"));
  std::set<int> cover(witness.data.begin(), witness.data.end());
  if (static_cast<int>(cover.size()) != k ||
      static_cast<int>(witness.data.size()) != k)
    throw InvalidWitness("witness must list exactly k=" + std::to_string(k) +
                         " distinct vertices");
  for (int v : cover)
    if (v < 1 || v > g.num_vertices)
      throw InvalidWitness("witness vertex " + std::to_string(v) + " out of range");
  if (!is_vertex_cover(g, witness.data))
    throw InvalidWitness("witness vertices do not cover every edge");

  const bool bivalued = reduced.reduction->kind == "mnw-3c";
  const Value covers_per_member = bivalued ? params.at("c") : 1;
  std::vector<int> assign(reduced.num_items(), -1);
  const int E = g.num_edges();

  // Cover items go to the cover members in ascending vertex order.
  std::vector<int> members(cover.begin(), cover.end());
  int next_cover = E;
  for (int member : members)
    for (Value t = 0; t < covers_per_member; ++t) assign[next_cover++] = member - 1;

  // Every edge goes to a non-cover endpoint; edges inside the cover queue up
  // for the dummy agents.
  std::vector<int> leftover;
  for (int e = 0; e < E; ++e) {
    auto [u, v] = g.edges[e];
    if (!cover.count(u))
      assign[e] = u - 1;
    else if (!cover.count(v))
      assign[e] = v - 1;
    else
      leftover.push_back(e);
  }
  const int dummies = 3 * k - 3 * g.num_vertices / 2;
  if (static_cast<int>(leftover.size()) != dummies)
    throw InvalidWitness("leftover edge count does not match the dummy agents");
  const int special_base = next_cover;
  for (int j = 0; j < dummies; ++j) {
    int dummy = g.num_vertices + j;
    assign[leftover[j]] = dummy;
    assign[special_base + 2 * j] = dummy;
    assign[special_base + 2 * j + 1] = dummy;
  }
  return Allocation{assign};
}

Allocation witness_rx3c(const Instance& reduced, const Rx3cInstance& r,
                        const WitnessData& witness) {
  if (witness.kind != WitnessData::ExactCover)
    throw InvalidWitness("this reduction expects an exact-cover witness");
  if (!is_exact_cover(r, witness.data))
    throw InvalidWitness("witness triples are not an exact cover");
  const int k = r.k;
  std::vector<int> chosen(witness.data.begin(), witness.data.end());
  std::sort(chosen.begin(), chosen.end());

  std::vector<int> assign(reduced.num_items(), -1);
  std::vector<char> in_cover(3 * k + 1, 0);
  const int cover_base = 6 * k, pad_base = 7 * k;
  for (int p = 0; p < k; ++p) {
    assign[cover_base + p] = chosen[p] - 1;
    in_cover[chosen[p]] = 1;
  }
  int next_pad = 0;
  for (int j = 0; j < 3 * k; ++j)
    if (!in_cover[j + 1]) assign[pad_base + next_pad++] = j;

  // Element copies: for each element, its two containing triples outside the
  // cover take the two copies in index order.
  std::vector<std::vector<int>> holders(3 * k + 1);
  for (int j = 0; j < 3 * k; ++j) {
    if (in_cover[j + 1]) continue;
    for (int e : r.triples[j]) holders[e].push_back(j);
  }
  for (int e = 1; e <= 3 * k; ++e) {
    if (holders[e].size() != 2)
      throw InvalidWitness("element " + std::to_string(e) + " is not held by exactly two " +
                           "non-cover triples");
    assign[2 * static_cast<std::size_t>(e - 1)] = holders[e][0];
    assign[2 * static_cast<std::size_t>(e - 1) + 1] = holders[e][1];
  }
  return Allocation{assign};
}

}  // namespace

Allocation build_witness(const Instance& reduced, const WitnessData& witness) {
  if (!reduced.reduction || !reduced.source)
    throw InvalidInput("witness replay needs a generated instance with embedded source");
  const std::string& kind = reduced.reduction->kind;
  if (kind == "mnw-sat" || kind == "mew-goods" || kind == "mew-mixed" ||
      kind == "mew-two-negative")
    return witness_sat_family(reduced, std::get<Cnf2p2n>(*reduced.source), witness);
  if (kind == "mnw-vc" || kind == "mnw-3c")
    return witness_vc_family(reduced, std::get<Graph3Reg>(*reduced.source), witness);
  if (kind == "mew-rx3c")
    return witness_rx3c(reduced, std::get<Rx3cInstance>(*reduced.source), witness);
  throw InvalidInput("unknown reduction kind " + kind);
}

GapCertificate compute_bounds(const BoundsQuery& query) {
  const ValueSet& vs = query.values;
  validate(vs);
  GapCertificate cert;
  cert.kind = query.kind;
  cert.regime = classify_regime(vs);
  cert.epsilon = query.epsilon;

  auto values3 = [&]() -> std::array<Value, 3> {
    if (vs.size() != 3) throw InvalidInput(query.kind + " needs three values");
    return {vs.values[0], vs.values[1], vs.values[2]};
  };

  if (query.kind == "sat-case1" || query.kind == "sat-case2") {
    auto [a, b, c] = values3();
    require_goods_triple(a, b, c);
    if (c > 2 * b) throw WrongRegime("the SAT bounds need c <= 2b");
    const bool case1 = query.kind == "sat-case1";
    if (case1 && b * b < c * a) throw WrongRegime("case 1 needs b^2 >= ca");
    if (!case1 && b * b >= c * a) throw WrongRegime("case 2 needs b^2 < ca");
    require_epsilon(query.epsilon);
    cert.objective = Objective::Nsw;
    cert.case_tag = case1 ? 1 : 2;
    mpq_class penalty = case1 ? frac(b * (c + b), 2 * b * c) : frac(b + a, 2 * b);
    // m = 4n/3 makes the per-agent exponents independent of n.
    PowerExpr base;
    base.mul(mpq_class(2 * static_cast<long>(b)), mpq_class(3, 8));
    base.mul(mpq_class(static_cast<long>(c)), mpq_class(5, 8));
    PowerExpr yes = base;
    yes.mul(penalty, query.epsilon / 6);
    PowerExpr no = base;
    no.mul(penalty, (kSatPromise - query.epsilon) / 6);
    cert.yes_value = CertValue(yes);
    cert.no_bound = CertValue(no);
    cert.ratio = CertValue(yes.div(no));
    return cert;
  }

  if (query.kind == "vc" || query.kind == "vc-corollary") {
    auto [a, b, c] = values3();
    require_goods_triple(a, b, c);
    if (2 * b >= c) throw WrongRegime("the vertex-cover bounds need 2b < c");
    cert.objective = Objective::Nsw;
    mpq_class a_prime = std::max({mpq_class(static_cast<long>(a)), frac(2 * b * b, c), frac(2 * b, 3)});
    mpq_class ratio_base = mpq_class(3 * static_cast<long>(b)) / (2 * b + a_prime);
    // k <= |V| gives exponent gamma/5; the corollary's k <= 2|V|/3 gives gamma/3.
    mpq_class exponent = query.kind == "vc" ? kGamma / 5 : kGamma / 3;
    PowerExpr ratio;
    ratio.mul(ratio_base, exponent);
    cert.ratio = CertValue(ratio);
    if (query.k && query.vertices) {
      const int k = *query.k, V = *query.vertices, E = 3 * V / 2;
      mpq_class inv_agents = frac(2, 6 * static_cast<Value>(k) - V);
      PowerExpr yes;
      yes.mul(mpq_class(static_cast<long>(c)), mpq_class(k) * inv_agents);
      yes.mul(mpq_class(3 * static_cast<long>(b)), frac(4 * static_cast<Value>(k) - V, 2) * inv_agents);
      PowerExpr no = yes;
      no.mul((2 * b + a_prime) / (3 * b), kGamma * E / 3 * inv_agents);
      cert.yes_value = CertValue(yes);
      cert.no_bound = CertValue(no);
    }
    return cert;
  }

  if (query.kind == "vc-3c") {
    if (vs.size() != 2 || vs.values[0] != 3)
      throw InvalidInput("vc-3c needs the value pair {3, c}");
    Value c = vs.values[1];
    if (c <= 3 || c % 3 == 0) throw WrongRegime("vc-3c needs c > 3 with c not divisible by 3");
    cert.objective = Objective::Nsw;
    PowerExpr ratio;
    ratio.mul(frac(9 * c * c, 9 * c * c - 1), kGamma / 10);
    cert.ratio = CertValue(ratio);
    if (query.k && query.vertices) {
      const int k = *query.k, V = *query.vertices, E = 3 * V / 2;
      mpq_class inv_agents = frac(2, 6 * static_cast<Value>(k) - V);
      PowerExpr yes = PowerExpr::from_rational(mpq_class(3 * static_cast<long>(c)));
      PowerExpr no = yes;
      no.mul(frac(9 * c * c - 1, 9 * c * c), kGamma * E / 6 * inv_agents);
      cert.yes_value = CertValue(yes);
      cert.no_bound = CertValue(no);
    }
    return cert;
  }

  if (query.kind == "mew-goods") {
    auto [a, b, c] = values3();
    require_goods_triple(a, b, c);
    cert.objective = Objective::Mew;
    Value yes, no;
    if (c >= 2 * b) {
      cert.case_tag = 1;
      yes = 2 * b;
      no = b + a;
    } else if (a == 0) {
      cert.case_tag = 2;
      yes = c;
      no = b;
    } else {
      cert.case_tag = 3;
      yes = std::min(c + a, 2 * b);
      no = yes - 1;
    }
    cert.yes_value = CertValue::from_integer(yes);
    cert.no_bound = CertValue::from_integer(no);
    cert.ratio = CertValue(frac(yes, no));
    return cert;
  }

  if (query.kind == "mew-mixed") {
    if (vs.size() != 2) throw InvalidInput("mew-mixed needs the value pair {a, c}");
    Value a = vs.values[0], c = vs.values[1];
    if (!(a < 0 && 0 < c)) throw WrongRegime("mew-mixed needs a < 0 < c");
    Value g = std::gcd(-a, c);
    if (-(a / g) <= c / g) throw WrongRegime("mew-mixed needs |a| > |c| after gcd scaling");
    cert.objective = Objective::Mew;
    cert.yes_value = CertValue::from_integer(0);
    cert.no_bound = CertValue::from_integer(-1);
    return cert;
  }

  if (query.kind == "mew-two-negative") {
    auto [a, b, c] = values3();
    if (!(a < b && b < 0 && 0 < c && a == 2 * b && c % (-b) == 0 && c / (-b) >= 2))
      throw WrongRegime("mew-two-negative needs {2b, b, -k*b} with b < 0 and k* >= 2");
    cert.objective = Objective::Mew;
    cert.yes_value = CertValue::from_integer(0);
    cert.no_bound = CertValue::from_integer(-1);
    return cert;
  }

  throw InvalidInput("unknown bounds kind " + query.kind);
}

}  // namespace fairdiv
