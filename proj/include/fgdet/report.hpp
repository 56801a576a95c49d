#pragma once

#include "fgdet/acceptance.hpp"
#include "fgdet/automaton.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fgdet {

// ---------------------------------------------------------------------------
// Statistics

struct StatsRow {
    std::string formula;
    std::size_t logical_states = 0; ///< distinct reachable chi
    std::size_t states = 0;         ///< including the initial state
    std::size_t gr_disjuncts = 0;
    std::uint64_t gr_factor = 1;
    std::uint64_t rabin_bound = 0;  ///< gr_factor * states
    std::size_t rabin_states = 0;   ///< reachable product states
    std::size_t rabin_pairs = 0;
    std::string regime;
    bool merge_fallback = false;
    bool bisim_collapse = false;
    double wall_ms = 0.0;
};

StatsRow compute_stats(const Formula& f, const BuildOptions& opts);
nlohmann::json to_json(const StatsRow& row);

// ---------------------------------------------------------------------------
// Serialization

/// HOA v1 with state-based generalized-Rabin acceptance. Acceptance sets are
/// numbered disjunct by disjunct: Fin first, then one set per Inf component.
std::string to_hoa(const Automaton& aut, const GrCondition& gr, const std::string& name = "");
/// HOA v1 with state-based Rabin acceptance, sets 2k (Fin) and 2k+1 (Inf).
std::string to_hoa(const RabinAutomaton& rabin, const PropList& props, const std::string& name = "");

nlohmann::json to_json(const Automaton& aut, const GrCondition& gr);
nlohmann::json to_json(const RabinAutomaton& rabin, const PropList& props);

/// HOA edge label of a concrete letter, e.g. "0&!1"; "t" without propositions.
std::string hoa_letter_label(Letter a, std::size_t num_props);

// ---------------------------------------------------------------------------
// Benchmark table

struct BenchRow {
    int id = 0;
    std::string formula;
    /// "exact", "tolerance" or "reported".
    std::string check;
    std::size_t states = 0;
    std::size_t muller_gr = 0;
    std::uint64_t gr_factor = 1;
    std::uint64_t rabin = 0;
    std::uint64_t ltl2dstar = 0;
    bool ambiguous = false;
    std::string reading;
};

std::vector<BenchRow> load_bench_table(const std::string& path);

struct BenchResult {
    BenchRow row;
    StatsRow stats;
    std::size_t collapsed_states = 0;
    /// Human-readable differences from the reference values.
    std::vector<std::string> deviations;
    /// Whether the row meets its check class.
    bool ok = true;
};

/// Builds the row's formula and compares it against the reference values.
BenchResult run_bench_row(const BenchRow& row, const BuildOptions& opts);
nlohmann::json to_json(const BenchResult& r);

} // namespace fgdet
