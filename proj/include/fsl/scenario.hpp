#pragma once

// Scenario runner: named figure presets and user configs, executed into
// CSV/JSON (and optional SVG) outputs with byte-deterministic content for
// a fixed (config, seed) pair.

#include "fsl/algebra.hpp"
#include "fsl/observables.hpp"
#include "fsl/states.hpp"
#include "fsl/walk.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fsl::scenario {

inline constexpr const char* kVersion = "0.1.0";

struct VariantSpec {
    std::string label;  // output subdirectory; empty for single-variant runs
    algebra::AlgebraKind kind = algebra::AlgebraKind::HeisenbergWeyl;
    algebra::AlgebraParams params;
    bool auto_truncation = false;   // Heisenberg-Weyl: size n_max from state/walk
    double truncation_safety = 1.5; // excursion factor c in the auto-sizing rule
    states::StateSpec state = states::GlauberCoherent{{0.0, 0.0}};
    walk::CoinSpec coin = walk::CoinSpec::hadamard();
    states::CoinInit coin_init = states::CoinInit::symmetric_plus_i();
    numerics::Complex beta{0.0, 0.0};
    int steps = 0;
    double leakage_threshold = 1e-8;
    std::optional<walk::NoiseSpec> noise;  // master_seed filled from the scenario seed
};

struct ScenarioConfig {
    std::string name = "custom";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int record_every = 1;
    int fit_lo = 5;   // fit window in steps (inclusive)
    int fit_hi = 0;   // 0 = use final step
    double csv_min_probability = 1e-16;
    std::vector<VariantSpec> variants;
};

/// Canonical 64-bit FNV-1a hash of the fully resolved configuration.
std::string config_hash(const ScenarioConfig& config);

/// Built-in figure presets: fig2a, fig2b, fig3, fig4a, fig4b, fig5, fig6.
std::vector<std::string> preset_names();
ScenarioConfig preset(const std::string& name);

/// Parses the flat key-value/section config format. Throws with a
/// "line N: ..." diagnostic on malformed input.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& file);

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct VariantEstimate {
    std::string label;
    std::int64_t site_count = 0;
    int coin_dim = 0;
    std::int64_t total_dimension = 0;
    int suggested_n_max = 0;          // HW auto-truncation result (0 if n/a)
    double est_generator_norm = 0.0;  // per-step exponential size
    double est_seconds = 0.0;         // crude runtime estimate
    std::vector<std::string> notes;
};

struct ValidationReport {
    bool ok = true;
    std::vector<VariantEstimate> variants;
    std::vector<std::string> errors;
};

/// Dry-run checks: dimensions, truncation and runtime estimates. Never
/// simulates.
ValidationReport validate_scenario(const ScenarioConfig& config);

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

struct VariantResult {
    std::string label;
    algebra::AlgebraKind kind{};
    Eigen::Index site_count = 0;
    int coin_dim = 0;
    int resolved_n_max = 0;
    // deterministic runs
    std::optional<walk::Trajectory> trajectory;
    // noisy runs
    std::optional<walk::NoisyResult> noisy;
    std::optional<observables::PowerLawFit> sigma_fit;  // log sigma vs log m
    double final_leakage = 0.0;
    double wall_seconds = 0.0;  // reported on stdout only, never in files
};

struct RunResult {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<VariantResult> variants;
};

struct RunOptions {
    std::filesystem::path out_dir = "out";
    bool plot = false;
    int threads = 0;  // 0 = hardware concurrency
    bool quiet = false;
};

/// Executes every variant and writes distribution.csv / summary.json /
/// meta.json (and optional SVG) atomically under out_dir. Deterministic
/// output bytes for fixed (config, seed).
RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options);

}  // namespace fsl::scenario
