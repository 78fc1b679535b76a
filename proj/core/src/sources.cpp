#include "fairdiv/sources.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <string>

#include "fairdiv/errors.hpp"

namespace fairdiv {

void validate(const Cnf2p2n& phi) {
  if (phi.num_vars <= 0 || phi.num_vars % 3 != 0)
    throw InvalidSource("2P2N-3SAT needs a positive variable count divisible by 3, got " +
                        std::to_string(phi.num_vars));
  if (phi.num_clauses() != 4 * phi.num_vars / 3)
    throw InvalidSource("2P2N-3SAT with n=" + std::to_string(phi.num_vars) + " must have " +
                        std::to_string(4 * phi.num_vars / 3) + " clauses, got " +
                        std::to_string(phi.num_clauses()));
  std::vector<int> pos(phi.num_vars + 1, 0), neg(phi.num_vars + 1, 0);
  for (std::size_t ci = 0; ci < phi.clauses.size(); ++ci) {
    const auto& clause = phi.clauses[ci];
    std::set<int> vars;
    for (int lit : clause) {
      int var = std::abs(lit);
      if (lit == 0 || var > phi.num_vars)
        throw InvalidSource("clause " + std::to_string(ci + 1) + " has out-of-range literal " +
                            std::to_string(lit));
      if (!vars.insert(var).second)
        throw InvalidSource("clause " + std::to_string(ci + 1) + " repeats variable " +
                            std::to_string(var));
      (lit > 0 ? pos : neg)[var]++;
    }
  }
  for (int v = 1; v <= phi.num_vars; ++v)
    if (pos[v] != 2 || neg[v] != 2)
      throw InvalidSource("variable " + std::to_string(v) + " occurs " + std::to_string(pos[v]) +
                          " times positively and " + std::to_string(neg[v]) +
                          " times negatively; 2P2N requires exactly 2 and 2");
}

bool clause_satisfied(const std::array<int, 3>& clause, std::span<const int> sigma) {
  for (int lit : clause) {
    int var = std::abs(lit);
    if ((lit > 0) == (sigma[var - 1] != 0)) return true;
  }
  return false;
}

bool satisfies(const Cnf2p2n& phi, std::span<const int> sigma) {
  if (sigma.size() != static_cast<std::size_t>(phi.num_vars)) return false;
  return std::all_of(phi.clauses.begin(), phi.clauses.end(),
                     [&](const auto& clause) { return clause_satisfied(clause, sigma); });
}

void validate(const Graph3Reg& g) {
  if (g.num_vertices <= 0 || g.num_vertices % 2 != 0)
    throw InvalidSource("a 3-regular graph needs a positive even vertex count, got " +
                        std::to_string(g.num_vertices));
  std::vector<int> degree(g.num_vertices + 1, 0);
  std::set<std::pair<int, int>> seen;
  for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
    auto [u, v] = g.edges[ei];
    if (u < 1 || v < 1 || u > g.num_vertices || v > g.num_vertices)
      throw InvalidSource("edge " + std::to_string(ei + 1) + " out of range");
    if (u == v) throw InvalidSource("edge " + std::to_string(ei + 1) + " is a self-loop");
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second)
      throw InvalidSource("edge " + std::to_string(ei + 1) + " is a duplicate");
    degree[u]++;
    degree[v]++;
  }
  for (int v = 1; v <= g.num_vertices; ++v)
    if (degree[v] != 3)
      throw InvalidSource("vertex " + std::to_string(v) + " has degree " +
                          std::to_string(degree[v]) + ", expected 3");
}

bool is_vertex_cover(const Graph3Reg& g, std::span<const int> vertices) {
  std::set<int> cover(vertices.begin(), vertices.end());
  return std::all_of(g.edges.begin(), g.edges.end(), [&](const auto& e) {
    return cover.count(e.first) || cover.count(e.second);
  });
}

void validate(const Rx3cInstance& r) {
  if (r.k <= 0) throw InvalidSource("RX3C needs k >= 1, got " + std::to_string(r.k));
  if (r.triples.size() != 3 * static_cast<std::size_t>(r.k))
    throw InvalidSource("RX3C with k=" + std::to_string(r.k) + " must list " +
                        std::to_string(3 * r.k) + " triples, got " +
                        std::to_string(r.triples.size()));
  std::vector<int> occurrences(r.universe_size() + 1, 0);
  for (std::size_t ti = 0; ti < r.triples.size(); ++ti) {
    std::set<int> members;
    for (int e : r.triples[ti]) {
      if (e < 1 || e > r.universe_size())
        throw InvalidSource("triple " + std::to_string(ti + 1) + " has out-of-range element " +
                            std::to_string(e));
      if (!members.insert(e).second)
        throw InvalidSource("triple " + std::to_string(ti + 1) + " repeats element " +
                            std::to_string(e));
      occurrences[e]++;
    }
  }
  for (int e = 1; e <= r.universe_size(); ++e)
    if (occurrences[e] != 3)
      throw InvalidSource("element " + std::to_string(e) + " appears in " +
                          std::to_string(occurrences[e]) + " triples, expected 3");
}

bool is_exact_cover(const Rx3cInstance& r, std::span<const int> triple_indices) {
  std::vector<int> covered(r.universe_size() + 1, 0);
  std::set<int> chosen;
  for (int idx : triple_indices) {
    if (idx < 1 || idx > static_cast<int>(r.triples.size())) return false;
    if (!chosen.insert(idx).second) return false;
    for (int e : r.triples[idx - 1]) covered[e]++;
  }
  for (int e = 1; e <= r.universe_size(); ++e)
    if (covered[e] != 1) return false;
  return true;
}

}  // namespace fairdiv
