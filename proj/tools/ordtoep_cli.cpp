#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ordtoep/commands.hpp"
#include "ordtoep/errors.hpp"

using namespace ordtoep;

namespace {

struct Flags {
    std::string order, symbol, config, json_out, ppm_out;
    std::size_t resolution = 512, grid = 0, cases = 20;
    int fatten = 2;
    std::uint64_t seed = 7;
    unsigned threads = 0;
};

nlohmann::json read_json_argument(const std::string& text) {
    std::string body = text;
    if (!text.empty() && text.front() == '@') {
        std::ifstream f(text.substr(1));
        if (!f) throw ConfigError("cannot read " + text.substr(1));
        std::stringstream ss;
        ss << f.rdbuf();
        body = ss.str();
    }
    try {
        return nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("bad JSON: ") + e.what());
    }
}

RunConfig build_config(const Flags& f, const CLI::App& sub) {
    RunConfig c;
    if (!f.order.empty()) c.order = parse_order_argument(f.order);
    if (!f.symbol.empty()) c.symbol = symbol_from_json(read_json_argument(f.symbol));
    c.resolution = f.resolution;
    c.grid_per_axis = f.grid;
    c.fatten_px = f.fatten;
    c.seed = f.seed;
    c.n_cases = f.cases;
    c.threads = f.threads;
    c.json_out = f.json_out;
    c.ppm_out = f.ppm_out;
    if (c.resolution < 64) throw ConfigError("resolution must be at least 64");

    if (!f.config.empty()) {
        std::size_t flags_given = 0;
        for (const char* name : {"--order", "--symbol", "--resolution", "--grid", "--fatten", "--seed", "--cases"}) {
            if (const auto* opt = sub.get_option_no_throw(name)) flags_given += opt->count();
        }
        RunConfig fromfile = run_config_from_json(read_json_argument("@" + f.config));
        if (flags_given) std::cerr << "warning: --config given; it overrides the other run flags\n";
        // Output paths and thread cap from flags still apply unless the file sets them.
        if (fromfile.json_out.empty()) fromfile.json_out = c.json_out;
        if (fromfile.ppm_out.empty()) fromfile.ppm_out = c.ppm_out;
        if (!fromfile.threads) fromfile.threads = c.threads;
        c = std::move(fromfile);
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toeplitz operators on ordered groups: index and spectral pictures"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    Flags f;
    auto add_common = [&](CLI::App* s) {
        s->add_option("--order", f.order, "lex1, lex2, lexN, colex, weight-sqrtN or order JSON");
        s->add_option("--symbol", f.symbol, "symbol JSON, or @file");
        s->add_option("--config", f.config, "run config JSON file (overrides other run flags)");
        s->add_option("--grid", f.grid, "grid points per torus axis (0: default)");
        s->add_option("--seed", f.seed, "random seed");
        s->add_option("--threads", f.threads, "thread cap (0: hardware)");
        s->add_option("--json,--out", f.json_out, "write the JSON report here instead of stdout");
    };
    auto* analyze = app.add_subcommand("analyze", "Fredholm report for one symbol");
    add_common(analyze);
    auto* spectrum = app.add_subcommand("spectrum", "classified spectral raster");
    add_common(spectrum);
    spectrum->add_option("--resolution", f.resolution, "pixels per axis (>= 64)");
    spectrum->add_option("--fatten", f.fatten, "image dilation radius in pixels");
    spectrum->add_option("--ppm", f.ppm_out, "write the plain PPM image here");
    auto* verify = app.add_subcommand("verify", "run the oracle suites");
    add_common(verify);
    verify->add_option("--resolution", f.resolution, "raster pixels per axis for the spectrum suite");
    verify->add_option("--fatten", f.fatten, "image dilation radius in pixels");
    verify->add_option("--cases", f.cases, "random cases per index suite and matrix suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    RunConfig config;
    try {
        config = build_config(f, *sub);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    return run_command(sub->get_name(), config, std::cout, std::cerr);
}
