#include "ordtoep/commands.hpp"

#include <fstream>
#include <ostream>
#include <set>

#include "ordtoep/errors.hpp"
#include "ordtoep/fredholm.hpp"
#include "ordtoep/oracle_suite.hpp"
#include "ordtoep/parallel.hpp"
#include "ordtoep/spectra.hpp"

namespace ordtoep {

namespace {

template <typename T>
T get_as(const nlohmann::json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

const std::set<std::string> kSuites{"index", "spectrum", "matrix"};

AnalysisConfig analysis_config(const RunConfig& c) {
    AnalysisConfig a;
    a.grid_per_axis = c.grid_per_axis;
    a.min_modulus_tolerance = c.tolerances.min_modulus;
    return a;
}

SpectrumConfig spectrum_config(const RunConfig& c) {
    SpectrumConfig s;
    s.raster.grid_per_axis = c.grid_per_axis;
    s.raster.resolution = c.resolution;
    s.raster.fatten_px = c.fatten_px;
    s.analysis = analysis_config(c);
    s.analysis.composition_witness = false;
    return s;
}

const OrderSpec& require_order(const RunConfig& c) {
    if (!c.order) throw ConfigError("an order is required");
    return *c.order;
}

const SymbolExpr& require_symbol(const RunConfig& c) {
    if (!c.symbol) throw ConfigError("a symbol is required");
    return *c.symbol;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open " + path + " for writing");
    f << text;
    if (!f) throw ConfigError("write to " + path + " failed");
}

}  // namespace

RunConfig run_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known{"order", "symbol", "grid_per_axis", "resolution", "fatten_px",
                                             "tolerances", "seed", "n_cases", "suites", "threads", "outputs"};
    for (const auto& [k, v] : j.items()) {
        if (!known.contains(k)) throw ConfigError("unknown config key '" + k + "'");
    }
    RunConfig c;
    if (j.contains("order")) c.order = order_from_json(j["order"]);
    if (j.contains("symbol")) {
        try {
            c.symbol = symbol_from_json(j["symbol"]);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("bad symbol: ") + e.what());
        }
    }
    if (j.contains("grid_per_axis")) c.grid_per_axis = get_as<std::size_t>(j, "grid_per_axis");
    if (j.contains("resolution")) c.resolution = get_as<std::size_t>(j, "resolution");
    if (j.contains("fatten_px")) c.fatten_px = get_as<int>(j, "fatten_px");
    if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j, "seed");
    if (j.contains("n_cases")) c.n_cases = get_as<std::size_t>(j, "n_cases");
    if (j.contains("threads")) c.threads = get_as<unsigned>(j, "threads");
    if (j.contains("suites")) {
        c.suites = get_as<std::vector<std::string>>(j, "suites");
        for (const auto& s : c.suites) {
            if (!kSuites.contains(s)) throw ConfigError("unknown suite '" + s + "'");
        }
    }
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (!t.is_object()) throw ConfigError("tolerances must be an object");
        for (const auto& [k, v] : t.items()) {
            if (k == "min_modulus") c.tolerances.min_modulus = get_as<double>(t, "min_modulus");
            else if (k == "adjoint") c.tolerances.adjoint = get_as<double>(t, "adjoint");
            else if (k == "multiplicativity") c.tolerances.multiplicativity = get_as<double>(t, "multiplicativity");
            else if (k == "norm") c.tolerances.norm = get_as<double>(t, "norm");
            else throw ConfigError("unknown tolerance '" + k + "'");
        }
    }
    if (j.contains("outputs")) {
        const auto& o = j["outputs"];
        if (!o.is_object()) throw ConfigError("outputs must be an object");
        if (o.contains("json")) c.json_out = get_as<std::string>(o, "json");
        if (o.contains("ppm")) c.ppm_out = get_as<std::string>(o, "ppm");
    }
    if (c.resolution < 64) throw ConfigError("resolution must be at least 64");
    if (c.fatten_px < 0) throw ConfigError("fatten_px must be nonnegative");
    return c;
}

nlohmann::json run_config_snapshot(const RunConfig& c) {
    nlohmann::json j;
    j["order"] = c.order ? nlohmann::json(*c.order) : nlohmann::json(nullptr);
    j["symbol"] = c.symbol ? symbol_to_json(*c.symbol) : nlohmann::json(nullptr);
    j["grid_per_axis"] = c.grid_per_axis;
    j["resolution"] = c.resolution;
    j["fatten_px"] = c.fatten_px;
    j["tolerances"] = {{"min_modulus", c.tolerances.min_modulus},
                       {"adjoint", c.tolerances.adjoint},
                       {"multiplicativity", c.tolerances.multiplicativity},
                       {"norm", c.tolerances.norm}};
    j["seed"] = c.seed;
    j["n_cases"] = c.n_cases;
    j["suites"] = c.suites;
    return j;
}

OrderSpec parse_order_argument(const std::string& text) {
    if (!text.empty() && text.front() == '{') {
        try {
            return order_from_json(nlohmann::json::parse(text));
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(std::string("bad order JSON: ") + e.what());
        }
    }
    auto number_after = [&](std::size_t prefix) -> std::int64_t {
        const std::string rest = text.substr(prefix);
        if (rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos) {
            throw ConfigError("bad order '" + text + "'");
        }
        return std::stoll(rest);
    };
    if (text == "colex") return OrderSpec::colex();
    if (text.rfind("lex", 0) == 0) return OrderSpec::lex(static_cast<std::size_t>(number_after(3)));
    if (text.rfind("weight-sqrt", 0) == 0) return OrderSpec::weight_sqrt(number_after(11));
    throw ConfigError("bad order '" + text + "'");
}

nlohmann::json wrap_output(const RunConfig& c, nlohmann::json report) {
    return {{"tool", kToolName}, {"version", kToolVersion}, {"config", run_config_snapshot(c)}, {"report", std::move(report)}};
}

nlohmann::json cmd_analyze(const RunConfig& c) {
    return wrap_output(c, report_to_json(analyze(require_symbol(c), require_order(c), analysis_config(c))));
}

SpectrumOutput cmd_spectrum(const RunConfig& c) {
    const SpectralMap map = spectral_picture(require_symbol(c), require_order(c), spectrum_config(c));
    return {wrap_output(c, spectral_map_to_json(map)), spectral_map_to_ppm(map)};
}

VerifyOutput cmd_verify(const RunConfig& c) {
    std::vector<OrderSpec> orders;
    if (c.order) {
        orders.push_back(*c.order);
    } else {
        orders = {OrderSpec::lex(1), OrderSpec::lex(2), OrderSpec::lex(3), OrderSpec::colex(), OrderSpec::weight_sqrt(2)};
    }
    const auto has = [&](const char* s) { return std::find(c.suites.begin(), c.suites.end(), s) != c.suites.end(); };

    SuiteReport all;
    all.seed = c.seed;
    if (has("index")) {
        for (const auto& o : orders) all.merge(run_index_suite(o, c.seed, c.n_cases, analysis_config(c)));
    }
    if (has("spectrum")) {
        const OrderSpec o = c.order.value_or(OrderSpec::lex(2));
        std::vector<SpectrumCase> cases;
        if (c.symbol) {
            cases.push_back({"configured", *c.symbol});
        } else {
            cases = default_spectrum_cases(o, c.seed);
        }
        all.merge(run_spectrum_suite(o, cases, spectrum_config(c), c.seed));
    }
    if (has("matrix")) {
        MatrixSuiteConfig m;
        m.n_cases = c.n_cases;
        m.adjoint_tolerance = c.tolerances.adjoint;
        m.multiplicativity_tolerance = c.tolerances.multiplicativity;
        m.norm_tolerance = c.tolerances.norm;
        all.merge(run_matrix_suite(c.seed, m));
    }
    all.config = run_config_snapshot(c);
    return {wrap_output(c, suite_to_json(all)), all.all_pass()};
}

int run_command(const std::string& command, const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        if (c.threads) set_thread_cap(c.threads);
        auto emit_json = [&](const nlohmann::json& j) {
            const std::string text = j.dump(2) + "\n";
            if (c.json_out.empty()) {
                out << text;
            } else {
                write_file(c.json_out, text);
            }
        };
        if (command == "analyze") {
            emit_json(cmd_analyze(c));
            return 0;
        }
        if (command == "spectrum") {
            const auto r = cmd_spectrum(c);
            emit_json(r.json);
            if (!c.ppm_out.empty()) write_file(c.ppm_out, r.ppm);
            return 0;
        }
        if (command == "verify") {
            const auto r = cmd_verify(c);
            emit_json(r.json);
            if (!r.pass) err << "verify: " << r.json["report"]["total"].get<std::size_t>() - r.json["report"]["passed"].get<std::size_t>()
                             << " case(s) failed\n";
            return r.pass ? 0 : 1;
        }
        throw ConfigError("unknown command '" + command + "'");
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CountNotEnumerable& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace ordtoep
