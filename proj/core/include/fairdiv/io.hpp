#pragma once

#include <string>

#include "fairdiv/checks.hpp"
#include "fairdiv/instance.hpp"
#include "fairdiv/reductions.hpp"
#include "fairdiv/sources.hpp"

namespace fairdiv {

// Source-problem text formats. All diagnostics carry 1-based line numbers;
// 'c' starts a comment line in each format.
//
//   cnf2p2n:   DIMACS CNF ("p cnf <vars> <clauses>", clauses end in 0),
//              plus the twice-positive/twice-negative occurrence check.
//   graph3reg: "p graph <vertices> <edges>" followed by "u v" lines, 1-based.
//   rx3c:      "<k>" followed by 3k lines of three element indices in [3k].
Cnf2p2n parse_cnf2p2n(const std::string& text);
Graph3Reg parse_graph3reg(const std::string& text);
Rx3cInstance parse_rx3c(const std::string& text);

enum class SourceKind { Cnf2p2n, Graph3Reg, Rx3c };
SourceInfo parse_source(SourceKind kind, const std::string& text);

// Canonical JSON instance documents: sorted keys, exact integers, rationals
// and power expressions as strings, so store is byte-stable and
// store . load is the identity on canonical documents.
Instance load_instance(const std::string& text);
std::string store_instance(const Instance& inst);

// {"type": "assignment"|"cover"|"exact-cover", "values": [...]}.
WitnessData parse_witness(const std::string& text);
std::string store_witness(const WitnessData& witness);

// Machine-readable renderings for the CLI's --format doc mode.
std::string report_to_json(const GapReport& report);
std::string report_to_json(const CheckReport& report, const Instance* naming);
std::string report_to_json(const LemmaReport& report);
std::string report_to_json(const FuzzSummary& summary);
std::string result_to_json(const OptResult& result, const Instance& inst);
std::string certificate_to_json(const GapCertificate& cert);

}  // namespace fairdiv
