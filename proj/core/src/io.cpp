#include "fairdiv/io.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

#include "fairdiv/errors.hpp"

namespace fairdiv {

namespace {

using nlohmann::json;

constexpr const char* kDocVersion = "fairdiv/1";

struct LineReader {
  std::vector<std::string> lines;
  std::size_t next = 0;

  explicit LineReader(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) lines.push_back(line);
  }

  // Next non-empty, non-comment line; 0 when exhausted.
  int next_content(std::string& out) {
    while (next < lines.size()) {
      const std::string& line = lines[next++];
      std::size_t at = line.find_first_not_of(" \t\r");
      if (at == std::string::npos || line[at] == 'c' || line[at] == '#') continue;
      out = line;
      return static_cast<int>(next);
    }
    return 0;
  }
};

std::vector<long> parse_ints(const std::string& line, int line_no) {
  std::istringstream is(line);
  std::vector<long> out;
  std::string token;
  while (is >> token) {
    try {
      std::size_t used = 0;
      long v = std::stol(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ParseError("expected an integer, got '" + token + "'", line_no);
    }
  }
  return out;
}

}  // namespace

Cnf2p2n parse_cnf2p2n(const std::string& text) {
  LineReader reader(text);
  std::string line;
  int line_no = reader.next_content(line);
  if (line_no == 0) throw ParseError("missing 'p cnf <vars> <clauses>' header", 1);
  std::istringstream header(line);
  std::string p, fmt;
  long vars = 0, clauses = 0;
  if (!(header >> p >> fmt >> vars >> clauses) || p != "p" || fmt != "cnf")
    throw ParseError("expected 'p cnf <vars> <clauses>', got '" + line + "'", line_no);

  Cnf2p2n phi;
  phi.num_vars = static_cast<int>(vars);
  std::vector<int> pending;
  int pending_line = line_no;
  while ((line_no = reader.next_content(line)) != 0) {
    for (long lit : parse_ints(line, line_no)) {
      if (lit == 0) {
        if (pending.size() != 3)
          throw InvalidSource("clause " + std::to_string(phi.clauses.size() + 1) + " (line " +
                              std::to_string(pending_line) + ") has " +
                              std::to_string(pending.size()) + " literals, expected 3");
        phi.clauses.push_back({pending[0], pending[1], pending[2]});
        pending.clear();
      } else {
        if (pending.empty()) pending_line = line_no;
        pending.push_back(static_cast<int>(lit));
      }
    }
  }
  if (!pending.empty())
    throw ParseError("clause starting at line " + std::to_string(pending_line) +
                         " is not terminated by 0",
                     pending_line);
  if (static_cast<long>(phi.clauses.size()) != clauses)
    throw ParseError("header announces " + std::to_string(clauses) + " clauses, found " +
                         std::to_string(phi.clauses.size()),
                     1);
  validate(phi);
  return phi;
}

Graph3Reg parse_graph3reg(const std::string& text) {
  LineReader reader(text);
  std::string line;
  int line_no = reader.next_content(line);
  if (line_no == 0) throw ParseError("missing 'p graph <vertices> <edges>' header", 1);
  std::istringstream header(line);
  std::string p, fmt;
  long vertices = 0, edges = 0;
  if (!(header >> p >> fmt >> vertices >> edges) || p != "p" || fmt != "graph")
    throw ParseError("expected 'p graph <vertices> <edges>', got '" + line + "'", line_no);

  Graph3Reg g;
  g.num_vertices = static_cast<int>(vertices);
  while ((line_no = reader.next_content(line)) != 0) {
    auto ints = parse_ints(line, line_no);
    if (ints.size() != 2)
      throw ParseError("expected an edge 'u v', got '" + line + "'", line_no);
    g.edges.emplace_back(static_cast<int>(ints[0]), static_cast<int>(ints[1]));
  }
  if (static_cast<long>(g.edges.size()) != edges)
    throw ParseError("header announces " + std::to_string(edges) + " edges, found " +
                         std::to_string(g.edges.size()),
                     1);
  validate(g);
  return g;
}

Rx3cInstance parse_rx3c(const std::string& text) {
  LineReader reader(text);
  std::string line;
  int line_no = reader.next_content(line);
  if (line_no == 0) throw ParseError("missing leading k line", 1);
  auto head = parse_ints(line, line_no);
  if (head.size() != 1) throw ParseError("expected a single integer k, got '" + line + "'", line_no);

  Rx3cInstance r;
  r.k = static_cast<int>(head[0]);
  while ((line_no = reader.next_content(line)) != 0) {
    auto ints = parse_ints(line, line_no);
    if (ints.size() != 3)
      throw ParseError("expected a triple of element indices, got '" + line + "'", line_no);
    r.triples.push_back({static_cast<int>(ints[0]), static_cast<int>(ints[1]),
                         static_cast<int>(ints[2])});
  }
  validate(r);
  return r;
}

SourceInfo parse_source(SourceKind kind, const std::string& text) {
  switch (kind) {
    case SourceKind::Cnf2p2n: return parse_cnf2p2n(text);
    case SourceKind::Graph3Reg: return parse_graph3reg(text);
    case SourceKind::Rx3c: return parse_rx3c(text);
  }
  throw InvalidInput("unknown source kind");
}

namespace {

mpq_class parse_rational(const std::string& s, const std::string& path) {
  mpq_class q;
  if (q.set_str(s, 10) != 0)
    throw ParseError(path + ": malformed rational '" + s + "'");
  q.canonicalize();
  return q;
}

json cert_value_to_json(const CertValue& v) {
  json out = json::object();
  if (v.is_rational()) {
    out["rational"] = v.rational().get_str();
  } else {
    json factors = json::array();
    for (const auto& f : v.expr().factors())
      factors.push_back(json::array({f.base.get_str(), f.exponent.get_str()}));
    out["factors"] = std::move(factors);
    out["approx"] = v.expr().to_double();
  }
  return out;
}

CertValue cert_value_from_json(const json& j, const std::string& path) {
  if (j.contains("rational")) return CertValue(parse_rational(j["rational"], path));
  if (!j.contains("factors")) throw ParseError(path + ": expected 'rational' or 'factors'");
  PowerExpr expr;
  for (const auto& f : j["factors"]) {
    if (!f.is_array() || f.size() != 2)
      throw ParseError(path + ": each factor must be a [base, exponent] pair");
    expr.mul(parse_rational(f[0], path + ".base"), parse_rational(f[1], path + ".exponent"));
  }
  return CertValue(expr);
}

json source_to_json(const SourceInfo& source) {
  json out = json::object();
  if (const auto* phi = std::get_if<Cnf2p2n>(&source)) {
    out["kind"] = "cnf2p2n";
    out["vars"] = phi->num_vars;
    json clauses = json::array();
    for (const auto& clause : phi->clauses)
      clauses.push_back(json::array({clause[0], clause[1], clause[2]}));
    out["clauses"] = std::move(clauses);
  } else if (const auto* g = std::get_if<Graph3Reg>(&source)) {
    out["kind"] = "graph3reg";
    out["vertices"] = g->num_vertices;
    json edges = json::array();
    for (const auto& [u, v] : g->edges) edges.push_back(json::array({u, v}));
    out["edges"] = std::move(edges);
  } else {
    const auto& r = std::get<Rx3cInstance>(source);
    out["kind"] = "rx3c";
    out["k"] = r.k;
    json triples = json::array();
    for (const auto& t : r.triples) triples.push_back(json::array({t[0], t[1], t[2]}));
    out["triples"] = std::move(triples);
  }
  return out;
}

SourceInfo source_from_json(const json& j) {
  std::string kind = j.at("kind");
  if (kind == "cnf2p2n") {
    Cnf2p2n phi;
    phi.num_vars = j.at("vars");
    for (const auto& clause : j.at("clauses")) {
      if (!clause.is_array() || clause.size() != 3)
        throw ParseError("source.clauses: each clause needs exactly 3 literals");
      phi.clauses.push_back({clause[0].get<int>(), clause[1].get<int>(), clause[2].get<int>()});
    }
    return phi;
  }
  if (kind == "graph3reg") {
    Graph3Reg g;
    g.num_vertices = j.at("vertices");
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("source.edges: each edge is [u, v]");
      g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return g;
  }
  if (kind == "rx3c") {
    Rx3cInstance r;
    r.k = j.at("k");
    for (const auto& t : j.at("triples")) {
      if (!t.is_array() || t.size() != 3) throw ParseError("source.triples: each entry is a triple");
      r.triples.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
    }
    return r;
  }
  throw ParseError("source.kind: unknown kind '" + kind + "'");
}

std::vector<Rx3cItemTag> gadget_tags(int k) {
  std::vector<Rx3cItemTag> tags;
  for (int e = 1; e <= 3 * k; ++e) {
    tags.push_back({Rx3cItemTag::Element, e});
    tags.push_back({Rx3cItemTag::Element, e});
  }
  for (int j = 0; j < k; ++j) tags.push_back({Rx3cItemTag::Cover, 0});
  for (int j = 0; j < 2 * k; ++j) tags.push_back({Rx3cItemTag::Padding, 0});
  return tags;
}

}  // namespace

Instance load_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("not a JSON document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("top level: expected an object");
  if (doc.value("version", "") != kDocVersion)
    throw ParseError("version: expected '" + std::string(kDocVersion) + "'");

  Instance inst;
  for (const auto& agent : doc.value("agents", json::array())) {
    inst.agent_names.push_back(agent.at("name"));
    inst.agent_roles.push_back(agent.value("role", "agent"));
  }
  for (const auto& item : doc.value("items", json::array())) {
    inst.item_names.push_back(item.at("name"));
    inst.item_roles.push_back(item.value("role", "item"));
  }

  const json& val = doc.at("valuation");
  std::string type = val.at("type");
  if (type == "additive") {
    AdditiveProfile prof;
    for (const auto& v : val.at("value_set")) prof.value_set.values.push_back(v.get<Value>());
    for (const auto& row : val.at("matrix")) {
      prof.matrix.emplace_back();
      for (const auto& entry : row) prof.matrix.back().push_back(entry.get<Value>());
    }
    if (prof.matrix.size() != inst.agent_names.size())
      throw ParseError("valuation.matrix: row count does not match agents");
    for (const auto& row : prof.matrix)
      if (row.size() != inst.item_names.size())
        throw ParseError("valuation.matrix: row width does not match items");
    inst.profile = std::move(prof);
  } else if (type == "tabular") {
    SubmodularProfile prof;
    for (const auto& v : val.at("marginal_set")) prof.marginal_set.values.push_back(v.get<Value>());
    prof.num_items = val.at("num_items");
    if (prof.num_items < 0 || prof.num_items > kTabularMaxItems)
      throw ParseError("valuation.num_items: tabular oracles are capped at " +
                       std::to_string(kTabularMaxItems) + " items");
    for (const auto& table : val.at("tables")) {
      TabularOracle oracle;
      oracle.arity = prof.num_items;
      for (const auto& entry : table) oracle.table.push_back(entry.get<Value>());
      if (oracle.table.size() != (std::size_t{1} << prof.num_items))
        throw ParseError("valuation.tables: each table needs 2^num_items entries");
      prof.oracles.push_back(std::move(oracle));
    }
    if (prof.oracles.size() != inst.agent_names.size())
      throw ParseError("valuation.tables: table count does not match agents");
    inst.profile = std::move(prof);
  } else if (type == "rx3c_gadget") {
    SubmodularProfile prof;
    for (const auto& v : val.at("marginal_set")) prof.marginal_set.values.push_back(v.get<Value>());
    int k = val.at("k");
    if (k < 1) throw ParseError("valuation.k: need k >= 1");
    prof.num_items = 9 * k;
    std::vector<Rx3cItemTag> tags = gadget_tags(k);
    for (const auto& t : val.at("triples")) {
      if (!t.is_array() || t.size() != 3)
        throw ParseError("valuation.triples: each entry is a triple");
      Rx3cGadgetOracle oracle;
      oracle.triple = {t[0].get<int>(), t[1].get<int>(), t[2].get<int>()};
      for (int e : oracle.triple)
        if (e < 1 || e > 3 * k)
          throw ParseError("valuation.triples: element " + std::to_string(e) +
                           " outside the universe [1, " + std::to_string(3 * k) + "]");
      oracle.tags = tags;
      prof.oracles.push_back(std::move(oracle));
    }
    if (prof.oracles.size() != inst.agent_names.size())
      throw ParseError("valuation.triples: triple count does not match agents");
    inst.profile = std::move(prof);
  } else {
    throw ParseError("valuation.type: unknown type '" + type + "'");
  }

  if (doc.contains("reduction")) {
    const json& red = doc["reduction"];
    ReductionInfo info;
    info.kind = red.at("kind");
    const json params = red.value("params", json::object());
    for (const auto& [key, value] : params.items()) info.params[key] = value.get<Value>();
    info.epsilon = parse_rational(red.value("epsilon", "0"), "reduction.epsilon");
    inst.reduction = std::move(info);
  }
  if (doc.contains("source")) inst.source = source_from_json(doc["source"]);
  if (doc.contains("certificate")) {
    const json& c = doc["certificate"];
    GapCertificate cert;
    cert.objective = c.at("objective") == "nsw" ? Objective::Nsw : Objective::Mew;
    cert.kind = c.at("kind");
    cert.regime.tag = regime_tag_from_string(c.at("regime"));
    for (const auto& v : c.value("regime_values", json::array()))
      cert.regime.values.values.push_back(v.get<Value>());
    cert.case_tag = c.value("case", 0);
    cert.epsilon = parse_rational(c.value("epsilon", "0"), "certificate.epsilon");
    if (c.contains("yes_value"))
      cert.yes_value = cert_value_from_json(c["yes_value"], "certificate.yes_value");
    if (c.contains("no_bound"))
      cert.no_bound = cert_value_from_json(c["no_bound"], "certificate.no_bound");
    if (c.contains("ratio")) cert.ratio = cert_value_from_json(c["ratio"], "certificate.ratio");
    inst.certificate = std::move(cert);
  }
  return inst;
}

std::string store_instance(const Instance& inst) {
  json doc;
  doc["version"] = kDocVersion;
  json agents = json::array();
  for (std::size_t i = 0; i < inst.agent_names.size(); ++i) {
    json a;
    a["name"] = inst.agent_names[i];
    a["role"] = i < inst.agent_roles.size() ? inst.agent_roles[i] : "agent";
    agents.push_back(std::move(a));
  }
  doc["agents"] = std::move(agents);
  json items = json::array();
  for (std::size_t i = 0; i < inst.item_names.size(); ++i) {
    json o;
    o["name"] = inst.item_names[i];
    o["role"] = i < inst.item_roles.size() ? inst.item_roles[i] : "item";
    items.push_back(std::move(o));
  }
  doc["items"] = std::move(items);

  json val;
  if (inst.additive()) {
    const auto& prof = inst.additive_profile();
    val["type"] = "additive";
    val["value_set"] = prof.value_set.values;
    val["matrix"] = prof.matrix;
  } else {
    const auto& prof = inst.submodular_profile();
    val["marginal_set"] = prof.marginal_set.values;
    bool gadget = !prof.oracles.empty() &&
                  std::holds_alternative<Rx3cGadgetOracle>(prof.oracles.front());
    if (gadget) {
      val["type"] = "rx3c_gadget";
      val["k"] = prof.num_items / 9;
      json triples = json::array();
      for (const auto& oracle : prof.oracles) {
        const auto& g = std::get<Rx3cGadgetOracle>(oracle);
        triples.push_back(json::array({g.triple[0], g.triple[1], g.triple[2]}));
      }
      val["triples"] = std::move(triples);
    } else {
      val["type"] = "tabular";
      val["num_items"] = prof.num_items;
      json tables = json::array();
      for (const auto& oracle : prof.oracles) tables.push_back(std::get<TabularOracle>(oracle).table);
      val["tables"] = std::move(tables);
    }
  }
  doc["valuation"] = std::move(val);

  if (inst.reduction) {
    json red;
    red["kind"] = inst.reduction->kind;
    json params = json::object();
    for (const auto& [key, value] : inst.reduction->params) params[key] = value;
    red["params"] = std::move(params);
    red["epsilon"] = inst.reduction->epsilon.get_str();
    doc["reduction"] = std::move(red);
  }
  if (inst.source) doc["source"] = source_to_json(*inst.source);
  if (inst.certificate) {
    const GapCertificate& cert = *inst.certificate;
    json c;
    c["objective"] = to_string(cert.objective);
    c["kind"] = cert.kind;
    c["regime"] = to_string(cert.regime.tag);
    c["regime_values"] = cert.regime.values.values;
    c["case"] = cert.case_tag;
    c["epsilon"] = cert.epsilon.get_str();
    if (cert.yes_value) c["yes_value"] = cert_value_to_json(*cert.yes_value);
    if (cert.no_bound) c["no_bound"] = cert_value_to_json(*cert.no_bound);
    if (cert.ratio) c["ratio"] = cert_value_to_json(*cert.ratio);
    doc["certificate"] = std::move(c);
  }
  return doc.dump(2) + "\n";
}

WitnessData parse_witness(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("not a JSON document: ") + e.what());
  }
  WitnessData witness;
  std::string type = doc.at("type");
  if (type == "assignment")
    witness.kind = WitnessData::Assignment;
  else if (type == "cover")
    witness.kind = WitnessData::VertexCover;
  else if (type == "exact-cover")
    witness.kind = WitnessData::ExactCover;
  else
    throw ParseError("type: unknown witness type '" + type + "'");
  for (const auto& v : doc.at("values")) witness.data.push_back(v.get<int>());
  return witness;
}

std::string store_witness(const WitnessData& witness) {
  json doc;
  switch (witness.kind) {
    case WitnessData::Assignment: doc["type"] = "assignment"; break;
    case WitnessData::VertexCover: doc["type"] = "cover"; break;
    case WitnessData::ExactCover: doc["type"] = "exact-cover"; break;
  }
  doc["values"] = witness.data;
  return doc.dump(2) + "\n";
}

namespace {

json violation_to_json(const Violation& v, const Instance* naming) {
  json out;
  auto items_of = [&](std::uint32_t mask) {
    json arr = json::array();
    for (int i = 0; i < 32; ++i)
      if (mask >> i & 1) {
        if (naming && i < static_cast<int>(naming->item_names.size()))
          arr.push_back(naming->item_names[i]);
        else
          arr.push_back(i);
      }
    return arr;
  };
  auto item_of = [&](int i) -> json {
    if (naming && i >= 0 && i < static_cast<int>(naming->item_names.size()))
      return naming->item_names[i];
    return i;
  };
  switch (v.kind) {
    case Violation::Submodularity:
      out["kind"] = "submodularity";
      out["S"] = items_of(v.s_mask);
      out["T"] = items_of(v.t_mask);
      out["o"] = item_of(v.o);
      out["marginal_S"] = v.numbers[0];
      out["marginal_T"] = v.numbers[1];
      break;
    case Violation::MarginalSet:
      out["kind"] = "marginal-set";
      out["S"] = items_of(v.s_mask);
      out["o"] = item_of(v.o);
      out["marginal"] = v.numbers[0];
      break;
    case Violation::OrderNeutrality:
      out["kind"] = "order-neutrality";
      out["S"] = items_of(v.s_mask);
      out["o"] = item_of(v.o);
      out["o2"] = item_of(v.o2);
      out["multiset_o_first"] = {v.numbers[0], v.numbers[1]};
      out["multiset_o2_first"] = {v.numbers[2], v.numbers[3]};
      break;
  }
  return out;
}

}  // namespace

std::string report_to_json(const GapReport& report) {
  json out;
  out["verdict"] = to_string(report.verdict);
  out["summary"] = report.summary;
  if (report.has_witness) {
    out["forward"] = {{"witness_welfare", report.witness_welfare}, {"ok", report.forward_ok}};
  }
  if (report.backward_attempted) {
    out["backward"] = {{"status", to_string(report.backward_status)},
                       {"optimum", report.backward_optimum},
                       {"ok", report.backward_ok},
                       {"nodes", report.nodes}};
  }
  return out.dump(2) + "\n";
}

std::string report_to_json(const CheckReport& report, const Instance* naming) {
  json out;
  out["ok"] = report.ok;
  out["total_violations"] = report.total;
  out["truncated"] = report.truncated;
  json violations = json::array();
  for (const auto& v : report.violations) violations.push_back(violation_to_json(v, naming));
  out["violations"] = std::move(violations);
  return out.dump(2) + "\n";
}

std::string report_to_json(const LemmaReport& report) {
  json out;
  out["regime"] = to_string(report.regime.tag);
  out["all_pass"] = report.all_pass;
  json checks = json::array();
  for (const auto& check : report.checks)
    checks.push_back({{"name", check.name}, {"detail", check.detail}, {"pass", check.pass}});
  out["checks"] = std::move(checks);
  return out.dump(2) + "\n";
}

std::string report_to_json(const FuzzSummary& summary) {
  json out;
  out["trials"] = summary.trials;
  out["discrepancy_count"] = summary.discrepancies.size();
  json list = json::array();
  for (const auto& d : summary.discrepancies)
    list.push_back({{"trial", d.trial}, {"seed", d.seed}, {"what", d.what}});
  out["discrepancies"] = std::move(list);
  return out.dump(2) + "\n";
}

std::string result_to_json(const OptResult& result, const Instance& inst) {
  json out;
  out["objective"] = to_string(result.objective);
  out["status"] = to_string(result.status);
  out["nodes"] = result.nodes;
  out["assignment"] = result.best.assignment;
  if (result.objective == Objective::Nsw) {
    out["zero_count"] = result.nash.zero_count;
    out["product"] = result.nash.positive_product.get_str();
    out["geometric_mean"] = result.nash.geometric_mean(inst.num_agents());
  } else {
    out["egalitarian_welfare"] = result.mew;
  }
  return out.dump(2) + "\n";
}

std::string certificate_to_json(const GapCertificate& cert) {
  json out;
  out["objective"] = to_string(cert.objective);
  out["kind"] = cert.kind;
  out["regime"] = to_string(cert.regime.tag);
  out["case"] = cert.case_tag;
  out["epsilon"] = cert.epsilon.get_str();
  if (cert.yes_value) out["yes_value"] = cert_value_to_json(*cert.yes_value);
  if (cert.no_bound) out["no_bound"] = cert_value_to_json(*cert.no_bound);
  if (cert.ratio) out["ratio"] = cert_value_to_json(*cert.ratio);
  return out.dump(2) + "\n";
}

}  // namespace fairdiv
