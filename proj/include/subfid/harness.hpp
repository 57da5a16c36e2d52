// harness.hpp — Randomized, seeded experiment suites: monotonicity of the
// subsystem measure under structured and computation channels, the
// reduced-operator evolution identities, the measure's properties, the
// swap counterexample, and initialization-error sweeps.

#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "subfid/channels.hpp"
#include "subfid/fidelity.hpp"

namespace subfid {

// Effective tolerances, overridable by name from the CLI and echoed in every
// summary so pass/fail decisions are reproducible.
struct Tolerances {
    double slack = 1e-9;          // monotonicity floor for fidelity differences
    double identity = 1e-10;      // reduced-operator evolution identities
    double psd = 1e-10;           // PSD floor (smallest eigenvalue) for leak/error terms
    double symmetry = 1e-12;
    double normalization = 1e-9;
    double equivalence = 1e-9;    // closed form vs canonical-maximizer fidelity
    double oracle_upper = 1e-9;   // sampled definition bound may exceed the closed form by this
    double oracle_reach = 1e-6;   // injected bound must come this close to the closed form
    double povm_floor = 1e-9;     // measurement overlaps never undercut the measure by more
    double povm_optimal = 1e-7;   // optimal measurement matches the measure within this
    double strict = 1e-6;         // margin certifying a strict change in the swap search

    void set(const std::string& name, double value);
    std::map<std::string, double> named() const;
};

struct TrialReport {
    int trial_index = 0;
    std::uint64_t seed = 0;  // suite seed; the trial stream is seed split by trial_index
    SpaceDecomposition dims{1, 1, 0};
    int n_kraus = 0;
    double leak_strength = 0.0;
    double fa_before = 0.0;
    double fa_after = 0.0;
    double slack = 0.0;
    bool pass = true;
};

// Reproduction record for a failed trial: everything needed to replay it.
struct FailureBundle {
    int trial_index = 0;
    std::uint64_t seed = 0;
    std::string what;
    std::vector<std::pair<std::string, Matrix>> matrices;
};

struct CheckStats {
    long trials = 0;
    long failures = 0;
    double min_slack = std::numeric_limits<double>::infinity();
};

struct SuiteSummary {
    std::string suite;
    SpaceDecomposition dims{1, 1, 0};
    std::uint64_t seed = 0;
    long trials = 0;
    long failures = 0;  // trials with at least one failed check
    double min_slack = std::numeric_limits<double>::infinity();
    double wall_time_s = 0.0;  // reported on the console, never serialized
    std::map<std::string, CheckStats> checks;
    Tolerances tolerances;
};

struct SuiteResult {
    SuiteSummary summary;
    std::vector<TrialReport> reports;
    std::vector<FailureBundle> failures;
};

// ------------------------------- suite configs -------------------------------

// Monotonicity of the subsystem measure under random structured channels,
// plus the intermediate square-concavity inequality on the unnormalized
// reduced operators. Requires dK >= 1 (with no complement there is nothing
// to leak).
struct Theorem3Config {
    SpaceDecomposition dims{2, 2, 2};
    std::vector<int> n_kraus{3};  // cycled across trials
    int trials = 1000;
    double leak_strength = 1.0;
    std::uint64_t seed = 0;
    Tolerances tol;
};
SuiteResult run_theorem3(const Theorem3Config& cfg);

// Monotonicity under random computation channels, plus the reduced-update
// decomposition reduced' = logical(reduced) + PSD error term.
struct Theorem4Config {
    SpaceDecomposition dims{2, 2, 2};
    std::vector<int> n_logical{1, 2, 3};
    std::vector<int> n_kraus{2, 3, 4};
    int trials = 1000;
    double leak_strength = 1.0;
    std::uint64_t seed = 0;
    Tolerances tol;
};
SuiteResult run_theorem4(const Theorem4Config& cfg);

// Reduced-operator invariance for perfectly initialized states, the
// leak-term update identity for arbitrary states, and universal invariance
// under initialization-free channels.
struct EvolutionConfig {
    SpaceDecomposition dims{2, 2, 2};
    std::vector<int> n_kraus{2, 3, 4};
    int trials = 1000;
    double leak_strength = 1.0;
    std::uint64_t seed = 0;
    Tolerances tol;
};
SuiteResult run_evolution_identities(const EvolutionConfig& cfg);

// The measure's quantified properties: symmetry, the normalization
// iff-condition, strong concavity, concavity of the square, monotonicity and
// angle contractivity under block-local product channels, the triangle
// inequality, the measurement sandwich, and the operational check of the
// plain fidelity.
struct PropertyConfig {
    SpaceDecomposition dims{2, 2, 2};
    int trials = 1000;
    int povm_samples = 10;  // random measurements per trial and side
    std::uint64_t seed = 0;
    Tolerances tol;
};
SuiteResult run_property_suite(const PropertyConfig& cfg);

// Agreement of the three forms of the measure: closed form, fidelity of the
// canonical maximizers, the sampled definition bound, and the measurement
// minimum.
struct EquivalenceConfig {
    SpaceDecomposition dims{2, 2, 2};
    int pairs = 1000;
    int oracle_samples = 8;
    int povm_samples = 10;
    std::uint64_t seed = 0;
    Tolerances tol;
};
SuiteResult run_equivalence(const EquivalenceConfig& cfg);

// Operational check of the plain fidelity on full-space pairs at dimensions
// 2..max_dim: the constructed optimal measurement matches, random
// measurements never undercut.
struct FuchsConfig {
    int max_dim = 6;
    int pairs = 100;
    int povm_samples = 100;
    std::uint64_t seed = 0;
    Tolerances tol;
};
SuiteResult run_global_fuchs(const FuchsConfig& cfg);

// Search for strict increases and strict decreases of the measure under the
// factor-swap unitary. Finding both directions confirms that the swap is
// neither monotone nor antitone; missing either within the trial budget is a
// suite failure.
struct SwapConfig {
    SpaceDecomposition dims{2, 2, 1};
    int trials = 1000;
    std::uint64_t seed = 0;
    Tolerances tol;
};
struct SwapResult {
    SuiteSummary summary;
    std::vector<TrialReport> reports;
    bool found_increase = false;
    bool found_decrease = false;
    int increase_trial = -1;
    int decrease_trial = -1;
    double max_increase = 0.0;
    double min_decrease = 0.0;
};
SwapResult swap_counterexample_search(const SwapConfig& cfg);

// Initialization-error sweep over (epsilon, leak_strength) cells; per-trial
// rows plus per-cell aggregates. The imperfect state in each trial is an
// imperfect preparation of the same target as the reference state.
struct SweepConfig {
    SpaceDecomposition dims{2, 2, 2};
    std::vector<double> epsilons{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
    std::vector<double> leak_strengths{0.0, 0.5, 1.0};
    int trials = 200;
    int n_kraus = 3;
    std::uint64_t seed = 0;
    Tolerances tol;
};
struct SweepRow {
    double epsilon = 0.0;
    double leak_strength = 0.0;
    int trial = 0;
    double fa_before = 0.0;
    double fa_after = 0.0;
    double slack = 0.0;
};
struct SweepCell {
    double epsilon = 0.0;
    double leak_strength = 0.0;
    double mean_before = 0.0;
    double mean_after = 0.0;
    double min_before = 0.0;
    double min_after = 0.0;
    double mean_slack = 0.0;
    double min_slack = 0.0;
    bool pass = true;
};
struct SweepResult {
    SuiteSummary summary;
    std::vector<SweepRow> rows;
    std::vector<SweepCell> cells;
    std::vector<FailureBundle> failures;
};
SweepResult sweep_init_error(const SweepConfig& cfg);

}  // namespace subfid
