#pragma once

#include "fgdet/acceptance.hpp"
#include "fgdet/automaton.hpp"
#include "fgdet/formula.hpp"
#include "fgdet/word.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace fgdet {

// ---------------------------------------------------------------------------
// Semantics on lasso words

/// Truth of every subformula at every normalized position of one word,
/// computed bottom-up and memoized by structural key.
class LassoEvaluator {
public:
    explicit LassoEvaluator(LassoWord w);

    const LassoWord& word() const { return w_; }
    /// Truth values over the normalized positions [0, span()).
    const std::vector<char>& values(const NnfFormula& f);
    bool holds(const NnfFormula& f, std::size_t pos) { return values(f)[w_.normalize(pos)] != 0; }

private:
    LassoWord w_;
    std::unordered_map<std::string, std::vector<char>> memo_;
};

bool ltl_holds(const NnfFormula& f, const LassoWord& w, std::size_t pos = 0);

// ---------------------------------------------------------------------------
// Acceptance of lasso words

/// Membership of Inf in an explicit Muller family (each set sorted).
bool accepts(const Automaton& aut, const std::vector<std::vector<StateId>>& muller, const LassoWord& w);
bool accepts(const Automaton& aut, const GrCondition& gr, const LassoWord& w);
bool accepts(const RabinAutomaton& rabin, const LassoWord& w);
/// Muller acceptance checked directly on Inf, without listing the family.
bool accepts_muller(const Automaton& aut, const LassoWord& w);

// ---------------------------------------------------------------------------
// Random instances

/// Propositions a, b, c, ... (p26, p27, ... past z).
PropList default_props(std::size_t n);

/// The size is drawn uniformly from [1, max_size]. Size 1 is a literal,
/// size 2 a temporal operator over a literal; larger sizes pick uniformly among
/// and/or/F/G, splitting binary sizes uniformly.
Formula random_formula(std::uint64_t seed, std::size_t max_size, std::size_t num_props);
LassoWord random_lasso(std::uint64_t seed, std::size_t max_prefix, std::size_t max_period, std::size_t num_props);

// ---------------------------------------------------------------------------
// Differential checking

struct BackendConfig {
    bool merge_letters = true;
    bool bisim_collapse = false;

    std::string label() const;
};

/// merge on/off x bisim on/off.
std::vector<BackendConfig> all_backend_configs();

struct Backend {
    BackendConfig config;
    Automaton aut;
    GrCondition gr;
    RabinAutomaton rabin;
};

/// Everything built for one formula, reusable across words.
class Subject {
public:
    Subject(const Formula& f, std::span<const BackendConfig> configs, const BuildOptions& base = {});

    const Formula& formula() const { return tr_->formula(); }
    const Translation& translation() const { return *tr_; }
    const std::vector<Backend>& backends() const { return backends_; }
    const BuildOptions& options() const { return base_; }

private:
    std::shared_ptr<const Translation> tr_;
    BuildOptions base_;
    std::vector<Backend> backends_;
};

struct BackendVerdict {
    std::string label;
    bool muller = false;
    bool gr = false;
    bool rabin = false;
};

struct Verdict {
    std::string formula;
    std::string lasso;
    bool oracle = false;
    std::vector<BackendVerdict> backends;
    /// Position of the first violation of w |= phi iff w_n |= chi_n, if any.
    std::optional<std::size_t> local_violation;
    std::size_t local_positions = 0;
    /// For accepted words: commitments of the satisfied disjunct hold as promised.
    bool commitments_ok = true;
    bool agreement = true;

    std::string describe() const;
};

/// w_n |= chi_n for n <= |prefix| + 2|period|, chi_n along the successor chain.
/// Returns the number of positions checked and the first violation.
std::pair<std::size_t, std::optional<std::size_t>> check_local(const Translation& tr, const LassoWord& w,
                                                               const BuildOptions& opts = {});

Verdict crosscheck(const Subject& subject, const LassoWord& w, bool local = true);
Verdict crosscheck(const Formula& f, const LassoWord& w, std::span<const BackendConfig> configs);

// ---------------------------------------------------------------------------
// Differential test harness

struct DifftestConfig {
    std::uint64_t seed = 42;
    std::size_t cases = 1000;
    std::size_t max_size = 12;
    std::size_t num_props = 3;
    std::size_t max_prefix = 4;
    std::size_t max_period = 4;
    bool local = true;
    std::size_t state_cap = 1'000'000;
    /// Fault injection, forwarded to BuildOptions::successor_hook.
    std::function<PosBool(const Translation&, const PosBool&, Letter)> successor_hook;
};

struct FailingCase {
    std::size_t index = 0;
    std::uint64_t case_seed = 0;
    std::string formula;
    std::string lasso;
    std::string reason;

    friend bool operator==(const FailingCase&, const FailingCase&) = default;
};

struct DifftestSummary {
    std::size_t cases = 0;
    std::size_t disagreements = 0;
    std::size_t local_checks = 0;
    std::size_t local_violations = 0;
    std::size_t accepted = 0;
    std::size_t resource_skips = 0;
    /// Sorted by case index.
    std::vector<FailingCase> failures;

    friend bool operator==(const DifftestSummary&, const DifftestSummary&) = default;
};

/// Seed of case i; formula and lasso are drawn from it.
std::uint64_t case_seed(std::uint64_t seed, std::size_t index);

DifftestSummary run_difftest_serial(const DifftestConfig& cfg);
/// Cases spread over OpenMP threads; the result equals the serial one.
DifftestSummary run_difftest(const DifftestConfig& cfg, int threads = 0);

} // namespace fgdet
