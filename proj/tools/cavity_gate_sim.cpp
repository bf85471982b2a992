// Command-line front end: simulate | reduce | gate | sweep.
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cqed/commands.hpp"
#include "cqed/config.hpp"
#include "cqed/errors.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::string> preset, out, format, envelope, initial;
    std::optional<double> rtol, tmax, sample, omega, delta_l, g, delta_c, gamma, kappa, ramp;
    std::optional<int> n_max;
    std::vector<std::string> axes;
};

// "field=v1,v2,..." or "field=start:stop:count".
nlohmann::json parse_axis(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw cqed::ConfigError("--axis expects field=values", "sweep");
    nlohmann::json values = nlohmann::json::array();
    const std::string body = spec.substr(eq + 1);
    try {
        if (std::count(body.begin(), body.end(), ':') == 2) {
            const auto c1 = body.find(':'), c2 = body.rfind(':');
            const double a = std::stod(body.substr(0, c1)), b = std::stod(body.substr(c1 + 1, c2 - c1 - 1));
            const int n = std::stoi(body.substr(c2 + 1));
            if (n < 1) throw cqed::ConfigError("--axis count must be >= 1", "sweep");
            for (int i = 0; i < n; ++i) values.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
        } else {
            std::stringstream ss(body);
            for (std::string item; std::getline(ss, item, ',');) values.push_back(std::stod(item));
        }
    } catch (const std::logic_error&) {
        throw cqed::ConfigError("--axis values must be numbers: " + spec, "sweep");
    }
    return {{"field", spec.substr(0, eq)}, {"values", values}};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

cqed::RunConfig build_config(const Overrides& o) {
    nlohmann::json doc = nlohmann::json::object();
    if (!o.config_path.empty()) {
        // Syntax errors must point into the user's file, so parse it on its own first.
        const std::string text = read_file(o.config_path);
        cqed::parse_config(text);
        doc = nlohmann::json::parse(text);
    }
    const auto set = [&](const char* key, const auto& v) {
        if (v) doc[key] = *v;
    };
    set("preset", o.preset);
    set("out", o.out);
    set("format", o.format);
    set("envelope", o.envelope);
    set("initial", o.initial);
    set("rtol", o.rtol);
    set("t_final_us", o.tmax);
    set("sample_us", o.sample);
    set("omega", o.omega);
    set("delta_L", o.delta_l);
    set("g", o.g);
    set("delta_C", o.delta_c);
    set("gamma", o.gamma);
    set("kappa", o.kappa);
    set("ramp_us", o.ramp);
    set("n_max", o.n_max);
    if (o.g) {
        doc.erase("g_A");
        doc.erase("g_B");
    }
    if (!o.axes.empty()) {
        doc["sweep"] = nlohmann::json::array();
        for (const auto& a : o.axes) doc["sweep"].push_back(parse_axis(a));
    }
    return cqed::parse_config(doc.dump());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cavity-mediated two-atom conditional phase gate simulator"};
    app.require_subcommand(1);
    Overrides o;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "JSON configuration file");
        sub->add_option("--preset", o.preset, "fig2 | fig3 | fig2-dissipative | fig3-dissipative");
        sub->add_option("--out", o.out, "Output path (default: stdout)");
        sub->add_option("--format", o.format, "csv | json");
        sub->add_option("--rtol", o.rtol, "Integrator relative tolerance");
        sub->add_option("--omega", o.omega, "Laser Rabi frequency (MHz)");
        sub->add_option("--delta-l", o.delta_l, "Laser detuning (MHz)");
        sub->add_option("--g", o.g, "Atom-cavity coupling for both atoms (MHz)");
        sub->add_option("--delta-c", o.delta_c, "Cavity two-photon detuning (MHz)");
        sub->add_option("--gamma", o.gamma, "Excited-state decay rate (MHz)");
        sub->add_option("--kappa", o.kappa, "Cavity decay rate (MHz)");
        sub->add_option("--envelope", o.envelope, "constant | sin2");
        sub->add_option("--ramp", o.ramp, "sin2 ramp time (us)");
        sub->add_option("--nmax", o.n_max, "Photon-number cutoff");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "Time series of populations and phases");
    add_common(simulate);
    simulate->add_option("--initial", o.initial, "Initial basis labels joined by '+', e.g. a10+010");
    simulate->add_option("--tmax", o.tmax, "Final time (us); default: gate duration");
    simulate->add_option("--sample", o.sample, "Sample interval (us)");
    CLI::App* reduce = app.add_subcommand("reduce", "Adiabatically eliminated parameters");
    add_common(reduce);
    CLI::App* gate = app.add_subcommand("gate", "Gate protocol on the four logical inputs");
    add_common(gate);
    CLI::App* sweep = app.add_subcommand("sweep", "Gate protocol over a parameter grid");
    add_common(sweep);
    sweep->add_option("--axis", o.axes, "field=v1,v2,... or field=start:stop:count (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Error& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cqed::kExitConfig;
    }

    cqed::RunConfig cfg;
    try {
        cfg = build_config(o);
    } catch (const cqed::ConfigError& e) {
        std::cerr << "config error" << (e.key().empty() ? "" : " [" + e.key() + "]") << ": " << e.what() << "\n";
        return cqed::kExitConfig;
    } catch (const cqed::InvalidParameter& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return cqed::kExitConfig;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return cqed::kExitIo;
    }

    cqed::CommandResult result;
    try {
        if (simulate->parsed()) result = cqed::cmd_simulate(cfg);
        else if (reduce->parsed()) result = cqed::cmd_reduce(cfg);
        else if (gate->parsed()) result = cqed::cmd_gate(cfg);
        else result = cqed::cmd_sweep(cfg);
    } catch (const cqed::InvalidParameter& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return cqed::kExitConfig;
    } catch (const cqed::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return cqed::kExitNumerical;
    }

    if (cfg.out.empty()) {
        std::cout << result.document << std::flush;
        if (!std::cout) return cqed::kExitIo;
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        f << result.document;
        f.close();
        if (!f) {
            std::cerr << "I/O error: cannot write " << cfg.out << "\n";
            return cqed::kExitIo;
        }
    }
    return result.exit_code;
}
