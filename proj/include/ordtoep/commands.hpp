#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ordtoep/lattice.hpp"
#include "ordtoep/symbol.hpp"

namespace ordtoep {

inline constexpr const char* kToolName = "ordtoep";
inline constexpr const char* kToolVersion = "1.0.0";

struct Tolerances {
    double min_modulus = 1e-6;
    double adjoint = 1e-12;
    double multiplicativity = 1e-10;
    double norm = 0.05;
};

/// Everything a run depends on. Thread count and output paths do not change
/// results and are left out of the snapshot.
struct RunConfig {
    std::optional<OrderSpec> order;
    std::optional<SymbolExpr> symbol;
    std::size_t grid_per_axis = 0;
    std::size_t resolution = 512;
    int fatten_px = 2;
    Tolerances tolerances;
    std::uint64_t seed = 7;
    std::size_t n_cases = 20;
    std::vector<std::string> suites{"index", "spectrum", "matrix"};
    unsigned threads = 0;
    std::string json_out;
    std::string ppm_out;
};

/// Throws ConfigError on unknown keys or malformed values.
RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json run_config_snapshot(const RunConfig& c);

/// Shorthands accepted on the command line: lex1, lex2, lex3, lexN, colex,
/// weight-sqrtN. Anything starting with '{' is parsed as JSON.
OrderSpec parse_order_argument(const std::string& text);

/// {"tool", "version", "config", "report"}
nlohmann::json wrap_output(const RunConfig& c, nlohmann::json report);

nlohmann::json cmd_analyze(const RunConfig& c);

struct SpectrumOutput {
    nlohmann::json json;
    std::string ppm;
};
SpectrumOutput cmd_spectrum(const RunConfig& c);

struct VerifyOutput {
    nlohmann::json json;
    bool pass = false;
};
VerifyOutput cmd_verify(const RunConfig& c);

/// Runs a subcommand, writes outputs (files or out), maps failures to exit
/// codes: 0 ok, 1 verification failure, 2 config error, 3 numerical failure.
int run_command(const std::string& command, const RunConfig& c, std::ostream& out, std::ostream& err);

}  // namespace ordtoep
