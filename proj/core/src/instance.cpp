#include "fairdiv/instance.hpp"

#include <algorithm>
#include <bit>

#include "fairdiv/errors.hpp"

namespace fairdiv {

Value rx3c_gadget_value(const std::array<int, 3>& triple,
                        std::span<const Rx3cItemTag> tags,
                        std::span<const int> items) {
  int paddings = 0, covers = 0, foreign = 0;
  std::array<int, 3> copies{0, 0, 0};
  for (int idx : items) {
    if (idx < 0 || idx >= static_cast<int>(tags.size()))
      throw InvalidInput("bundle refers to item " + std::to_string(idx) +
                         " outside the gadget universe");
    const Rx3cItemTag& tag = tags[idx];
    switch (tag.kind) {
      case Rx3cItemTag::Padding: ++paddings; break;
      case Rx3cItemTag::Cover: ++covers; break;
      case Rx3cItemTag::Element: {
        auto it = std::find(triple.begin(), triple.end(), tag.element);
        if (it == triple.end())
          ++foreign;
        else
          ++copies[it - triple.begin()];
        break;
      }
    }
  }
  int classes_present = 0, excess = 0;
  for (int c : copies) {
    if (c > 0) ++classes_present;
    if (c > 1) excess += c - 1;
  }
  Value v = paddings - foreign - excess - std::max(0, covers - 1);
  if (covers >= 1) v += 1 - classes_present;
  return v;
}

Value Rx3cGadgetOracle::value(std::span<const int> items) const {
  return rx3c_gadget_value(triple, tags, items);
}

Value Rx3cGadgetOracle::value(std::uint64_t mask) const {
  std::vector<int> items;
  for (int i = 0; i < arity(); ++i)
    if (mask >> i & 1) items.push_back(i);
  return rx3c_gadget_value(triple, tags, items);
}

int oracle_arity(const Oracle& o) {
  return std::visit([](const auto& impl) -> int {
    if constexpr (std::is_same_v<std::decay_t<decltype(impl)>, TabularOracle>)
      return impl.arity;
    else
      return impl.arity();
  }, o);
}

Value oracle_value(const Oracle& o, std::uint64_t mask) {
  return std::visit([mask](const auto& impl) -> Value {
    if constexpr (std::is_same_v<std::decay_t<decltype(impl)>, TabularOracle>)
      return impl.value(static_cast<std::uint32_t>(mask));
    else
      return impl.value(mask);
  }, o);
}

Value oracle_value(const Oracle& o, std::span<const int> items) {
  if (const auto* gadget = std::get_if<Rx3cGadgetOracle>(&o)) return gadget->value(items);
  std::uint64_t mask = 0;
  int m = oracle_arity(o);
  for (int idx : items) {
    if (idx < 0 || idx >= m)
      throw InvalidInput("bundle refers to item " + std::to_string(idx) +
                         " outside the oracle universe");
    mask |= std::uint64_t{1} << idx;
  }
  return oracle_value(o, mask);
}

std::vector<Value> tabulate(const Oracle& o) {
  int m = oracle_arity(o);
  if (m > kTabularMaxItems)
    throw TooLarge("cannot tabulate an oracle over " + std::to_string(m) + " items (cap " +
                   std::to_string(kTabularMaxItems) + ")");
  std::vector<Value> table(std::size_t{1} << m);
  for (std::size_t mask = 0; mask < table.size(); ++mask)
    table[mask] = oracle_value(o, static_cast<std::uint64_t>(mask));
  return table;
}

std::size_t Instance::num_agents() const {
  if (additive()) return additive_profile().matrix.size();
  return submodular_profile().oracles.size();
}

std::size_t Instance::num_items() const {
  if (additive()) {
    const auto& m = additive_profile().matrix;
    return m.empty() ? item_names.size() : m.front().size();
  }
  return static_cast<std::size_t>(submodular_profile().num_items);
}

Value Instance::min_possible_value() const {
  if (additive()) {
    Value lo = 0;
    for (const auto& row : additive_profile().matrix)
      for (Value v : row) lo = std::min(lo, v);
    return lo;
  }
  const auto& prof = submodular_profile();
  return prof.marginal_set.values.empty() ? 0 : prof.marginal_set.low();
}

int Instance::item_index(const std::string& name) const {
  auto it = std::find(item_names.begin(), item_names.end(), name);
  return it == item_names.end() ? -1 : static_cast<int>(it - item_names.begin());
}

Instance make_additive_instance(ValueSet vs, std::vector<std::vector<Value>> matrix) {
  Instance inst;
  AdditiveProfile prof;
  prof.value_set = std::move(vs);
  prof.matrix = std::move(matrix);
  inst.profile = std::move(prof);
  std::size_t n = inst.additive_profile().matrix.size();
  std::size_t m = n ? inst.additive_profile().matrix.front().size() : 0;
  for (std::size_t i = 0; i < n; ++i) inst.agent_names.push_back("a" + std::to_string(i + 1));
  for (std::size_t j = 0; j < m; ++j) inst.item_names.push_back("o" + std::to_string(j + 1));
  inst.agent_roles.assign(n, "agent");
  inst.item_roles.assign(m, "item");
  return inst;
}

void validate_allocation(const Instance& inst, const Allocation& alloc) {
  if (alloc.assignment.size() != inst.num_items())
    throw InvalidAllocation("allocation covers " + std::to_string(alloc.assignment.size()) +
                            " items, instance has " + std::to_string(inst.num_items()));
  int n = static_cast<int>(inst.num_agents());
  for (std::size_t o = 0; o < alloc.assignment.size(); ++o)
    if (alloc.assignment[o] < 0 || alloc.assignment[o] >= n)
      throw InvalidAllocation("item " + std::to_string(o) + " assigned to agent " +
                              std::to_string(alloc.assignment[o]) + " of " + std::to_string(n));
}

std::vector<Value> evaluate_allocation(const Instance& inst, const Allocation& alloc) {
  validate_allocation(inst, alloc);
  std::size_t n = inst.num_agents();
  std::vector<Value> utilities(n, 0);
  if (inst.additive()) {
    const auto& matrix = inst.additive_profile().matrix;
    for (std::size_t o = 0; o < alloc.assignment.size(); ++o)
      utilities[alloc.assignment[o]] += matrix[alloc.assignment[o]][o];
    return utilities;
  }
  const auto& prof = inst.submodular_profile();
  std::vector<std::vector<int>> bundles(n);
  for (std::size_t o = 0; o < alloc.assignment.size(); ++o)
    bundles[alloc.assignment[o]].push_back(static_cast<int>(o));
  for (std::size_t i = 0; i < n; ++i)
    utilities[i] = oracle_value(prof.oracles[i], bundles[i]);
  return utilities;
}

std::vector<Diagnostic> validate_instance(const Instance& inst) {
  std::vector<Diagnostic> out;
  auto report = [&out](std::string msg, int agent = -1, int item = -1) {
    out.push_back({std::move(msg), agent, item});
  };

  std::size_t n = inst.num_agents(), m = inst.num_items();
  if (n == 0) report("instance has no agents");
  if (!inst.agent_names.empty() && inst.agent_names.size() != n)
    report("agent name count does not match agent count");
  if (!inst.item_names.empty() && inst.item_names.size() != m)
    report("item name count does not match item count");

  if (inst.additive()) {
    const auto& prof = inst.additive_profile();
    try {
      validate(prof.value_set);
    } catch (const InvalidValueSet& e) {
      report(e.what());
    }
    for (std::size_t i = 0; i < prof.matrix.size(); ++i) {
      if (prof.matrix[i].size() != m) {
        report("agent " + std::to_string(i) + " row has " + std::to_string(prof.matrix[i].size()) +
                   " entries, expected " + std::to_string(m),
               static_cast<int>(i));
        continue;
      }
      for (std::size_t o = 0; o < m; ++o)
        if (!prof.value_set.contains(prof.matrix[i][o]))
          report("entry " + std::to_string(prof.matrix[i][o]) + " at agent " + std::to_string(i) +
                     ", item " + std::to_string(o) + " is outside the value set " +
                     prof.value_set.to_string(),
                 static_cast<int>(i), static_cast<int>(o));
    }
  } else {
    const auto& prof = inst.submodular_profile();
    try {
      validate(prof.marginal_set);
    } catch (const InvalidValueSet& e) {
      report(e.what());
    }
    for (std::size_t i = 0; i < prof.oracles.size(); ++i) {
      const Oracle& oracle = prof.oracles[i];
      if (oracle_arity(oracle) != prof.num_items) {
        report("oracle " + std::to_string(i) + " covers " + std::to_string(oracle_arity(oracle)) +
                   " items, instance has " + std::to_string(prof.num_items),
               static_cast<int>(i));
        continue;
      }
      if (const auto* tab = std::get_if<TabularOracle>(&oracle)) {
        if (tab->arity > kTabularMaxItems) {
          report("tabular oracle " + std::to_string(i) + " exceeds the " +
                     std::to_string(kTabularMaxItems) + "-item cap",
                 static_cast<int>(i));
          continue;
        }
        if (tab->table.size() != (std::size_t{1} << tab->arity)) {
          report("tabular oracle " + std::to_string(i) + " has " +
                     std::to_string(tab->table.size()) + " entries, expected 2^" +
                     std::to_string(tab->arity),
                 static_cast<int>(i));
          continue;
        }
      }
      if (oracle_value(oracle, std::uint64_t{0}) != 0)
        report("oracle " + std::to_string(i) + " has v(empty) = " +
                   std::to_string(oracle_value(oracle, std::uint64_t{0})) + ", expected 0",
               static_cast<int>(i));
    }
  }
  return out;
}

}  // namespace fairdiv
