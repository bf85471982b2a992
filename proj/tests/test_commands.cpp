#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "cqed/commands.hpp"
#include "cqed/config.hpp"
#include "cqed/errors.hpp"

using namespace cqed;

namespace {

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t col(const std::string& name) const {
        const auto it = std::find(header.begin(), header.end(), name);
        REQUIRE(it != header.end());
        return static_cast<std::size_t>(it - header.begin());
    }
    double num(std::size_t row, const std::string& name) const { return std::stod(rows[row][col(name)]); }
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') quoted = !quoted;
        else if (c == ',' && !quoted) {
            out.push_back(cell);
            cell.clear();
        } else cell += c;
    }
    out.push_back(cell);
    return out;
}

Csv parse_csv(const std::string& doc) {
    std::istringstream in(doc);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# schema: cavity-gate-sim/1");
    Csv csv;
    std::getline(in, line);
    csv.header = split(line);
    while (std::getline(in, line)) {
        csv.rows.push_back(split(line));
        CHECK(csv.rows.back().size() == csv.header.size());
    }
    return csv;
}

std::string value_of(const Csv& kv, const std::string& key) {
    for (const auto& r : kv.rows)
        if (r[0] == key) return r[1];
    FAIL("missing key " << key);
    return "";
}

double circular_distance_to_pi(double phase) {
    return std::abs(std::remainder(phase - std::numbers::pi, 2 * std::numbers::pi));
}

bool has_unit_suffix(const std::string& name) {
    for (const char* s : {"_MHz", "_rad", "_us"})
        if (name.size() > std::strlen(s) && name.compare(name.size() - std::strlen(s), std::strlen(s), s) == 0)
            return true;
    return false;
}

}  // namespace

TEST_SUITE("commands") {

TEST_CASE("number formatting") {
    CHECK(format_number(0.041666666666666667) == "0.0416666667");
    CHECK(format_number(24.0) == "24");
    CHECK(format_number(1e-12) == "1e-12");
    CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("simulate: fig2 superposition settles at +-pi") {
    const RunConfig cfg = parse_config(R"({"preset": "fig2", "initial": "a10+010", "t_final_us": 24, "sample_us": 0.1})");
    const CommandResult res = cmd_simulate(cfg);
    CHECK(res.exit_code == kExitOk);
    const Csv csv = parse_csv(res.document);
    CHECK(csv.rows.size() == 241);
    CHECK(csv.header.front() == "t_us");
    CHECK(csv.header.back() == "rel_phase_wrapped_rad");
    const double wrapped = csv.num(240, "rel_phase_wrapped_rad");
    CHECK(circular_distance_to_pi(wrapped) < 0.15);
    CHECK(std::abs(wrapped) <= std::numbers::pi);
    CHECK(csv.num(0, "pop_a10") == doctest::Approx(0.5));
    CHECK(std::remainder(csv.num(240, "rel_phase_rad") - wrapped, 2 * std::numbers::pi) ==
          doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("simulate: row count and determinism") {
    const RunConfig cfg = parse_config(R"({"preset": "fig3", "t_final_us": 1.05, "sample_us": 0.1, "initial": "010"})");
    const std::string a = cmd_simulate(cfg).document, b = cmd_simulate(cfg).document;
    CHECK(a == b);
    CHECK(parse_csv(a).rows.size() == 11);
}

TEST_CASE("simulate: zero coupling keeps every population constant") {
    const RunConfig cfg = parse_config(R"({"omega": 0, "g": 0, "initial": "a10+010+0e0", "sample_us": 0.5})");
    const Csv csv = parse_csv(cmd_simulate(cfg).document);
    REQUIRE(csv.rows.size() == 21);  // no gate time: 10 us default
    for (std::size_t c = 0; c < csv.header.size(); ++c) {
        if (csv.header[c].rfind("pop_", 0) != 0) continue;
        for (const auto& row : csv.rows) CHECK(std::stod(row[c]) == doctest::Approx(std::stod(csv.rows[0][c])).epsilon(1e-8));
    }
}

TEST_CASE("simulate: fig3 population of |a,1,0> makes a full return") {
    // The default duration is the eliminated-model gate time.
    Csv csv = parse_csv(cmd_simulate(parse_config(R"({"preset": "fig3", "initial": "a10", "sample_us": 0.1})")).document);
    REQUIRE(csv.rows.size() == 164);
    CHECK(csv.num(163, "t_us") == doctest::Approx(16.3));

    // Exact diagonalisation of the closed five-state block puts the full
    // model's return at 19.61 us: the eliminated model is off by ~20% here.
    csv = parse_csv(
        cmd_simulate(parse_config(R"({"preset": "fig3", "initial": "a10", "sample_us": 0.1, "t_final_us": 21})")).document);
    double lowest = 1.0, t_low = 0.0, back = 0.0, t_back = 0.0;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const double t = csv.num(r, "t_us"), pop = csv.num(r, "pop_a10");
        if (pop < lowest) lowest = pop, t_low = t;
        if (t > 15.0 && pop > back) back = pop, t_back = t;
    }
    CHECK(lowest < 0.01);
    CHECK(t_low == doctest::Approx(19.61 / 2).epsilon(0.03));
    CHECK(back > 0.97);
    CHECK(t_back == doctest::Approx(19.61).epsilon(0.02));
}

TEST_CASE("simulate: JSON output") {
    const RunConfig cfg = parse_config(R"({"preset": "fig2", "t_final_us": 0.5, "sample_us": 0.25, "format": "json"})");
    const auto doc = nlohmann::json::parse(cmd_simulate(cfg).document);
    CHECK(doc["schema"] == "cavity-gate-sim/1");
    CHECK(doc["command"] == "simulate");
    CHECK(doc["rows"].size() == 3);
    CHECK(doc["rows"][0]["t_us"] == 0.0);
    CHECK(doc["parameters"]["omega_MHz"] == 20.0);
}

TEST_CASE("reduce") {
    Csv kv = parse_csv(cmd_reduce(parse_config(R"({"preset": "fig2"})")).document);
    CHECK(std::stod(value_of(kv, "omega_eff_exact_MHz")) == doctest::Approx(0.041667).epsilon(1e-6 / 0.041667));
    CHECK(std::stod(value_of(kv, "gate_time_us")) == doctest::Approx(24.0));
    CHECK(value_of(kv, "error") == "");

    kv = parse_csv(cmd_reduce(parse_config(R"({"preset": "fig3"})")).document);
    CHECK(std::abs(std::stod(value_of(kv, "gate_time_us")) - 16.30) < 0.01);
    CHECK(std::stod(value_of(kv, "delta_prime_exact_MHz")) == doctest::Approx(0.862919132).epsilon(1e-9));

    const CommandResult none = cmd_reduce(parse_config(R"({"preset": "fig2", "g": 0})"));
    CHECK(none.exit_code == kExitOk);
    kv = parse_csv(none.document);
    CHECK(std::stod(value_of(kv, "omega_eff_exact_MHz")) == 0.0);
    CHECK(value_of(kv, "notice").rfind("no-gate", 0) == 0);
    CHECK(value_of(kv, "gate_time_us") == "nan");
}

TEST_CASE("reduce: resonance proximity is a structured error record") {
    const CommandResult res = cmd_reduce(parse_config(R"({"preset": "fig2", "delta_C": 2, "format": "json"})"));
    CHECK(res.exit_code == kExitNumerical);
    const auto doc = nlohmann::json::parse(res.document);
    CHECK(doc["error"] == "resonance-proximity");
    CHECK(doc["schema"] == "cavity-gate-sim/1");
    CHECK(doc.contains("message"));
    CHECK_FALSE(doc.contains("omega_eff_exact_MHz"));
}

TEST_CASE("units discipline") {
    const std::vector<std::string> dimensionless{"n_max",      "s_re",        "s_im",          "norm2",
                                                 "mean_success", "average_fidelity", "gate_ok", "detuning_ratio",
                                                 "shifted_detuning_ratio", "fidelity_uniform", "ratio_scale"};
    const auto ok = [&](const std::string& name) {
        return has_unit_suffix(name) || std::find(dimensionless.begin(), dimensionless.end(), name) != dimensionless.end() ||
               name.rfind("pop_", 0) == 0 || name.rfind("success_", 0) == 0 || name.rfind("fidelity_", 0) == 0;
    };
    const auto reduce = nlohmann::json::parse(cmd_reduce(parse_config(R"({"preset": "fig3", "format": "json"})")).document);
    for (const auto& [key, value] : reduce.items()) {
        if (value.is_number()) CHECK_MESSAGE(ok(key), key);
    }
    const Csv sim = parse_csv(cmd_simulate(parse_config(R"({"t_final_us": 0.1, "sample_us": 0.05})")).document);
    for (const auto& h : sim.header) CHECK_MESSAGE(ok(h), h);
    const Csv sw = parse_csv(
        cmd_sweep(parse_config(R"({"preset": "fig3", "rtol": 1e-6, "sweep": [{"field": "delta_C", "values": [0]}, {"field": "n_max", "values": [1]}]})"))
            .document);
    for (const auto& h : sw.header)
        if (h != "error") CHECK_MESSAGE(ok(h), h);
}

TEST_CASE("gate: fig3-dissipative success rate") {
    const Csv csv = parse_csv(cmd_gate(parse_config(R"({"preset": "fig3-dissipative"})")).document);
    REQUIRE(csv.rows.size() == 1);
    const double s = csv.num(0, "mean_success");
    CHECK(s >= 0.85);
    CHECK(s <= 0.95);
    CHECK(csv.num(0, "success_00") == doctest::Approx(1.0));
}

TEST_CASE("sweep over empty axes reproduces the gate row") {
    const RunConfig cfg = parse_config(R"({"preset": "fig3", "rtol": 1e-8})");
    const std::string gate = cmd_gate(cfg).document;
    const std::string sweep = cmd_sweep(cfg).document;
    CHECK(gate == sweep);
    CHECK(parse_csv(sweep).rows.size() == 1);
}

TEST_CASE("sweep rows with failures keep going") {
    const RunConfig cfg =
        parse_config(R"({"preset": "fig3", "rtol": 1e-7, "sweep": [{"field": "g", "values": [0, 3]}]})");
    const Csv csv = parse_csv(cmd_sweep(cfg).document);
    REQUIRE(csv.rows.size() == 2);
    CHECK(csv.header.front() == "g_MHz");
    CHECK(csv.rows[0][csv.col("mean_success")] == "nan");
    CHECK(csv.rows[0][csv.col("error")].find("vanishes") != std::string::npos);
    CHECK(csv.rows[1][csv.col("error")] == "");
    CHECK(csv.num(1, "gate_ok") == 1.0);
}

TEST_CASE("gate JSON report") {
    const auto doc = nlohmann::json::parse(cmd_gate(parse_config(R"({"preset": "fig3", "rtol": 1e-7, "format": "json"})")).document);
    CHECK(doc["runs"].size() == 4);
    CHECK(doc["runs"][3]["input"] == "11");
    CHECK(doc["aggregate"]["gate_ok"] == 1.0);
    CHECK(doc["aggregate"].contains("average_fidelity"));
}

}
