#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fairdiv/certificate.hpp"
#include "fairdiv/sources.hpp"
#include "fairdiv/values.hpp"

namespace fairdiv {

struct AdditiveProfile {
  ValueSet value_set;
  std::vector<std::vector<Value>> matrix;  // matrix[agent][item]
};

// Explicit set function over at most kTabularMaxItems items, indexed by
// bitmask. table[0] must be 0.
inline constexpr int kTabularMaxItems = 20;

struct TabularOracle {
  int arity = 0;
  std::vector<Value> table;  // size 2^arity

  Value value(std::uint32_t mask) const { return table[mask]; }
  bool operator==(const TabularOracle&) const = default;
};

// Item universe of a restricted-exact-3-cover gadget instance.
struct Rx3cItemTag {
  enum Kind : std::uint8_t { Element, Cover, Padding };
  Kind kind = Element;
  int element = 0;  // 1-based element class, meaningful for Element items

  bool operator==(const Rx3cItemTag&) const = default;
};

// Structured closed-form valuation of the triple agent F over gadget items:
//   v(S) = P - x - d - max(0, C-1) + [C >= 1] * (1 - t)
// with P paddings, C covers, t distinct F-element classes present, d excess
// copies of F's elements, and x copies of foreign elements in S.
struct Rx3cGadgetOracle {
  std::array<int, 3> triple{};      // 1-based element classes
  std::vector<Rx3cItemTag> tags;    // one per instance item

  int arity() const { return static_cast<int>(tags.size()); }
  Value value(std::span<const int> items) const;
  Value value(std::uint64_t mask) const;
  bool operator==(const Rx3cGadgetOracle&) const = default;
};

Value rx3c_gadget_value(const std::array<int, 3>& triple,
                        std::span<const Rx3cItemTag> tags,
                        std::span<const int> items);

using Oracle = std::variant<TabularOracle, Rx3cGadgetOracle>;

int oracle_arity(const Oracle& o);
Value oracle_value(const Oracle& o, std::uint64_t mask);
Value oracle_value(const Oracle& o, std::span<const int> items);
// Expands an oracle into a 2^m lookup table; m must stay within
// kTabularMaxItems.
std::vector<Value> tabulate(const Oracle& o);

struct SubmodularProfile {
  ValueSet marginal_set;  // the declared marginal alphabet
  int num_items = 0;
  std::vector<Oracle> oracles;  // one per agent
};

// Provenance of a generated instance: which construction produced it and
// with which parameters.
struct ReductionInfo {
  std::string kind;  // "mnw-sat", "mnw-vc", "mnw-3c", "mew-goods", ...
  std::map<std::string, Value> params;
  mpq_class epsilon{0};
};

struct Instance {
  std::vector<std::string> agent_names;
  std::vector<std::string> agent_roles;
  std::vector<std::string> item_names;
  std::vector<std::string> item_roles;
  std::variant<AdditiveProfile, SubmodularProfile> profile;

  std::optional<ReductionInfo> reduction;
  std::optional<SourceInfo> source;
  std::optional<GapCertificate> certificate;

  std::size_t num_agents() const;
  std::size_t num_items() const;
  bool additive() const { return std::holds_alternative<AdditiveProfile>(profile); }
  const AdditiveProfile& additive_profile() const { return std::get<AdditiveProfile>(profile); }
  const SubmodularProfile& submodular_profile() const { return std::get<SubmodularProfile>(profile); }

  // Lowest item value that can appear anywhere in the instance; used to rule
  // out Nash-welfare comparisons on mixed manna.
  Value min_possible_value() const;

  int item_index(const std::string& name) const;  // -1 when absent
};

// Convenience constructor for tests and the fuzzer.
Instance make_additive_instance(ValueSet vs, std::vector<std::vector<Value>> matrix);

// Total assignment of every item to exactly one agent.
struct Allocation {
  std::vector<int> assignment;  // item index -> agent index

  std::size_t num_items() const { return assignment.size(); }
  bool operator==(const Allocation&) const = default;
};

// Throws InvalidAllocation on dimension mismatch or out-of-range agents.
void validate_allocation(const Instance& inst, const Allocation& alloc);

// Exact per-agent utilities of a valid allocation.
std::vector<Value> evaluate_allocation(const Instance& inst, const Allocation& alloc);

struct Diagnostic {
  std::string message;
  int agent = -1;
  int item = -1;
};

// Structural validation: additive entries against the declared value set,
// empty-set normalization of oracles, dimension and naming consistency.
// Violations come back as data; an empty vector means the instance is well
// formed.
std::vector<Diagnostic> validate_instance(const Instance& inst);

}  // namespace fairdiv
