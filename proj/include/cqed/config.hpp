#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cqed/gate.hpp"
#include "cqed/model.hpp"

namespace cqed {

inline constexpr std::string_view kSchemaVersion = "cavity-gate-sim/1";

struct ScenarioPreset {
    std::string_view name;
    RatesMHz rates;
};

// fig2, fig3, fig2-dissipative, fig3-dissipative.
const std::vector<ScenarioPreset>& presets();
const ScenarioPreset* find_preset(std::string_view name);

enum class OutputFormat { Csv, Json };

struct RunConfig {
    std::string preset = "fig2";
    ParameterSet params;
    // Basis labels joined by '+' (simulate) e.g. "a10+010".
    std::string initial = "a10+010";
    std::optional<double> t_final_us;
    double rel_tol = 1e-10;
    double sample_interval_us = 0.01;
    std::string out;
    OutputFormat format = OutputFormat::Csv;
    std::vector<SweepAxis> axes;
    std::size_t sweep_cap = 10000;
    std::vector<BasisState> tracked;

    RunConfig();
};

// JSON object with flat keys; see README for the schema. Frequencies in MHz.
// Throws ConfigError: key "" with line/column for syntax errors, the offending
// key for semantic errors. Unknown keys are rejected.
RunConfig parse_config(std::string_view text);

// Every explicit field, such that parse_config(emit_config(c)) reproduces c.
std::string emit_config(const RunConfig& config);

std::vector<BasisState> default_tracked_states();

}  // namespace cqed
