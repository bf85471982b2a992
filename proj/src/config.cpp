#include "cqed/config.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "cqed/errors.hpp"

namespace cqed {
namespace {

using nlohmann::json;

const std::vector<std::string_view> kKnownKeys{
    "preset", "omega",      "delta_L", "delta_C", "g",      "g_A",    "g_B",   "gamma",     "kappa",
    "n_max",  "envelope",   "ramp_us", "initial", "t_final_us", "rtol", "sample_us", "out",
    "format", "sweep",      "sweep_cap", "track"};

double number(const json& doc, const char* key) {
    const json& v = doc.at(key);
    if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number", key);
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(std::string("'") + key + "' must be finite", key);
    return x;
}

double non_negative(const json& doc, const char* key) {
    const double x = number(doc, key);
    if (x < 0.0) throw ConfigError(std::string("'") + key + "' must be >= 0", key);
    return x;
}

std::string string(const json& doc, const char* key) {
    const json& v = doc.at(key);
    if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must be a string", key);
    return v.get<std::string>();
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

std::vector<BasisState> parse_initial_labels(const std::string& text, int n_max, const char* key) {
    std::vector<BasisState> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t plus = text.find('+', start);
        const std::string part = text.substr(start, plus == std::string::npos ? std::string::npos : plus - start);
        try {
            const BasisState s = parse_label(part);
            if (s.photons > n_max) throw InvalidParameter("photon number above n_max");
            out.push_back(s);
        } catch (const InvalidParameter& e) {
            throw ConfigError(std::string("'") + key + "': " + e.what(), key);
        }
        if (plus == std::string::npos) break;
        start = plus + 1;
    }
    return out;
}

std::string envelope_name(EnvelopeShape s) { return s == EnvelopeShape::Constant ? "constant" : "sin2"; }

}  // namespace

const std::vector<ScenarioPreset>& presets() {
    static const std::vector<ScenarioPreset> all{
        {"fig2", {20.0, 100.0, 50.0, 10.0, 10.0, 0.0, 0.0}},
        {"fig3", {10.0, 30.0, 8.75, 3.0, 3.0, 0.0, 0.0}},
        {"fig2-dissipative", {20.0, 100.0, 50.0, 10.0, 10.0, 0.05, 0.1}},
        {"fig3-dissipative", {10.0, 30.0, 8.75, 3.0, 3.0, 0.03, 0.1}},
    };
    return all;
}

const ScenarioPreset* find_preset(std::string_view name) {
    for (const auto& p : presets())
        if (p.name == name) return &p;
    return nullptr;
}

std::vector<BasisState> default_tracked_states() {
    using L = AtomLevel;
    return {{L::Zero, L::One, 0}, {L::Zero, L::E, 0}, {L::Zero, L::A, 1}, {L::A, L::One, 0},
            {L::One, L::A, 0},    {L::A, L::E, 0},    {L::E, L::A, 0},    {L::A, L::A, 1}};
}

RunConfig::RunConfig() : params(find_preset("fig2")->rates), tracked(default_tracked_states()) {}

RunConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ConfigError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                              e.what(),
                          "");
    }
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object", "");
    for (const auto& [key, value] : doc.items()) {
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
            throw ConfigError("unknown key '" + key + "'", key);
    }

    RunConfig cfg;
    if (doc.contains("preset")) {
        cfg.preset = string(doc, "preset");
        if (!find_preset(cfg.preset)) throw ConfigError("'preset' must be one of fig2, fig3, fig2-dissipative, fig3-dissipative", "preset");
    }
    RatesMHz r = find_preset(cfg.preset)->rates;
    if (doc.contains("omega")) r.omega = non_negative(doc, "omega");
    if (doc.contains("delta_L")) r.delta_L = number(doc, "delta_L");
    if (doc.contains("delta_C")) r.delta_C = number(doc, "delta_C");
    if (doc.contains("g")) r.g_A = r.g_B = non_negative(doc, "g");
    if (doc.contains("g_A")) r.g_A = non_negative(doc, "g_A");
    if (doc.contains("g_B")) r.g_B = non_negative(doc, "g_B");
    if (doc.contains("gamma")) r.gamma = non_negative(doc, "gamma");
    if (doc.contains("kappa")) r.kappa = non_negative(doc, "kappa");

    int n_max = ParameterSet::kDefaultNMax;
    if (doc.contains("n_max")) {
        const double n = number(doc, "n_max");
        if (n != std::floor(n) || n < 1 || n > 8) throw ConfigError("'n_max' must be an integer in [1, 8]", "n_max");
        n_max = static_cast<int>(n);
    }
    PulseEnvelope env;
    if (doc.contains("envelope")) {
        const std::string e = string(doc, "envelope");
        if (e == "constant") env.shape = EnvelopeShape::Constant;
        else if (e == "sin2") env.shape = EnvelopeShape::SinSquaredRamp;
        else throw ConfigError("'envelope' must be \"constant\" or \"sin2\"", "envelope");
    }
    if (doc.contains("ramp_us")) env.ramp_time_us = non_negative(doc, "ramp_us");
    cfg.params = ParameterSet(r, n_max, env);

    if (doc.contains("initial")) {
        cfg.initial = string(doc, "initial");
        parse_initial_labels(cfg.initial, n_max, "initial");
    }
    if (doc.contains("t_final_us")) {
        const double t = number(doc, "t_final_us");
        if (!(t > 0.0)) throw ConfigError("'t_final_us' must be > 0", "t_final_us");
        cfg.t_final_us = t;
    }
    if (doc.contains("rtol")) {
        cfg.rel_tol = number(doc, "rtol");
        if (!(cfg.rel_tol > 1e-13 && cfg.rel_tol < 1e-3)) throw ConfigError("'rtol' must lie in (1e-13, 1e-3)", "rtol");
    }
    if (doc.contains("sample_us")) {
        cfg.sample_interval_us = number(doc, "sample_us");
        if (!(cfg.sample_interval_us > 0.0)) throw ConfigError("'sample_us' must be > 0", "sample_us");
    }
    if (doc.contains("out")) cfg.out = string(doc, "out");
    if (doc.contains("format")) {
        const std::string f = string(doc, "format");
        if (f == "csv") cfg.format = OutputFormat::Csv;
        else if (f == "json") cfg.format = OutputFormat::Json;
        else throw ConfigError("'format' must be \"csv\" or \"json\"", "format");
    }
    if (doc.contains("sweep_cap")) {
        const double c = number(doc, "sweep_cap");
        if (c != std::floor(c) || c < 1) throw ConfigError("'sweep_cap' must be a positive integer", "sweep_cap");
        cfg.sweep_cap = static_cast<std::size_t>(c);
    }
    if (doc.contains("sweep")) {
        const json& s = doc.at("sweep");
        if (!s.is_array()) throw ConfigError("'sweep' must be an array of {field, values}", "sweep");
        for (const json& axis : s) {
            if (!axis.is_object() || !axis.contains("field") || !axis.contains("values") || axis.size() != 2 ||
                !axis.at("field").is_string() || !axis.at("values").is_array())
                throw ConfigError("each 'sweep' entry must be {\"field\": name, \"values\": [...]}", "sweep");
            SweepAxis a{axis.at("field").get<std::string>(), {}};
            if (!is_sweep_field(a.field)) throw ConfigError("'sweep' field '" + a.field + "' is not sweepable", "sweep");
            for (const json& v : axis.at("values")) {
                if (!v.is_number()) throw ConfigError("'sweep' values must be numbers", "sweep");
                a.values.push_back(v.get<double>());
            }
            if (a.values.empty()) throw ConfigError("'sweep' axis '" + a.field + "' has no values", "sweep");
            cfg.axes.push_back(std::move(a));
        }
        std::size_t points = 1;
        for (const auto& a : cfg.axes) points *= a.values.size();
        if (points > cfg.sweep_cap)
            throw ConfigError("'sweep' grid has " + std::to_string(points) + " points, above the cap", "sweep");
    }
    if (doc.contains("track")) {
        const json& t = doc.at("track");
        if (!t.is_array()) throw ConfigError("'track' must be an array of basis labels", "track");
        cfg.tracked.clear();
        for (const json& v : t) {
            if (!v.is_string()) throw ConfigError("'track' entries must be strings", "track");
            const auto states = parse_initial_labels(v.get<std::string>(), n_max, "track");
            cfg.tracked.insert(cfg.tracked.end(), states.begin(), states.end());
        }
    }
    return cfg;
}

std::string emit_config(const RunConfig& c) {
    const RatesMHz& r = c.params.rates_mhz();
    json doc{{"preset", c.preset},
             {"omega", r.omega},
             {"delta_L", r.delta_L},
             {"delta_C", r.delta_C},
             {"g_A", r.g_A},
             {"g_B", r.g_B},
             {"gamma", r.gamma},
             {"kappa", r.kappa},
             {"n_max", c.params.n_max()},
             {"envelope", envelope_name(c.params.envelope().shape)},
             {"ramp_us", c.params.envelope().ramp_time_us},
             {"initial", c.initial},
             {"rtol", c.rel_tol},
             {"sample_us", c.sample_interval_us},
             {"format", c.format == OutputFormat::Csv ? "csv" : "json"},
             {"sweep_cap", c.sweep_cap}};
    if (c.t_final_us) doc["t_final_us"] = *c.t_final_us;
    if (!c.out.empty()) doc["out"] = c.out;
    json axes = json::array();
    for (const auto& a : c.axes) axes.push_back({{"field", a.field}, {"values", a.values}});
    if (!c.axes.empty()) doc["sweep"] = axes;
    json track = json::array();
    for (const auto& s : c.tracked) track.push_back(label(s));
    doc["track"] = track;
    return doc.dump(2) + "\n";
}

}  // namespace cqed
