#pragma once

#include <array>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace fairdiv {

// 3-CNF formula in which every variable occurs exactly twice positively and
// twice negatively, so the clause count is m = 4n/3. Literals are signed
// 1-based variable indices.
struct Cnf2p2n {
  int num_vars = 0;
  std::vector<std::array<int, 3>> clauses;

  int num_clauses() const { return static_cast<int>(clauses.size()); }
};

// Throws InvalidSource when the occurrence counts, clause arity, or variable
// ranges are off.
void validate(const Cnf2p2n& phi);

// sigma[i] is the 0/1 assignment of variable i+1.
bool clause_satisfied(const std::array<int, 3>& clause, std::span<const int> sigma);
bool satisfies(const Cnf2p2n& phi, std::span<const int> sigma);

// Simple 3-regular graph with 1-based vertices.
struct Graph3Reg {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;

  int num_edges() const { return static_cast<int>(edges.size()); }
};

void validate(const Graph3Reg& g);
bool is_vertex_cover(const Graph3Reg& g, std::span<const int> vertices);

// Restricted exact 3-cover instance: universe [3k] and 3k triples, each
// element appearing in exactly 3 triples. Repeated triples are allowed.
struct Rx3cInstance {
  int k = 0;
  std::vector<std::array<int, 3>> triples;

  int universe_size() const { return 3 * k; }
};

void validate(const Rx3cInstance& r);
// triple_indices are 1-based positions into r.triples.
bool is_exact_cover(const Rx3cInstance& r, std::span<const int> triple_indices);

using SourceInfo = std::variant<Cnf2p2n, Graph3Reg, Rx3cInstance>;

}  // namespace fairdiv
