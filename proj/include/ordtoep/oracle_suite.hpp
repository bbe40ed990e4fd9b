#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "ordtoep/fredholm.hpp"
#include "ordtoep/lattice.hpp"
#include "ordtoep/spectra.hpp"
#include "ordtoep/symbol.hpp"

namespace ordtoep {

/// One prediction (from the character index or the spectral picture) checked against an
/// independent oracle (enumeration, matrix rank or raster classification).
struct SuiteCase {
    std::string name;
    std::string prediction;
    std::string oracle_value;
    bool pass = false;
};

struct SuiteReport {
    std::vector<SuiteCase> cases;
    std::uint64_t seed = 0;
    nlohmann::json config = nlohmann::json::object();

    bool all_pass() const;
    std::size_t passed() const;
    /// Appends other's cases and keeps the list ordered by name.
    void merge(const SuiteReport& other);
};

nlohmann::json suite_to_json(const SuiteReport& report);

// Random inputs. Each case draws from its own engine so results do not
// depend on scheduling.
using Rng = std::mt19937_64;
Rng case_rng(std::uint64_t seed, std::string_view stream, std::size_t index);

/// Coefficients uniform in the complex unit disk on 1..max_terms random
/// points of the sup-norm box of the given radius.
TrigPoly random_trig_poly(Rng& rng, std::size_t dim, std::int64_t radius = 2, std::size_t max_terms = 8);
/// Random trigonometric polynomial rescaled so that its coefficient l1 norm
/// (hence its sup norm) is at most bound.
TrigPoly random_exponent(Rng& rng, std::size_t dim, double bound = 0.5);
/// Random cone-supported trigonometric polynomial.
TrigPoly random_analytic_poly(Rng& rng, const OrderSpec& order, std::size_t dim, std::int64_t radius = 2);

/// Interval count #{0 <= tau < chi} read off brute_interval_points once it
/// is constant over three consecutive radii starting at start_radius; nullopt
/// when it is still growing at max_radius.
std::optional<std::size_t> stabilized_interval_count(const LatticePoint& chi, const OrderSpec& order,
                                                     std::int64_t start_radius, std::int64_t max_radius);

SuiteReport run_index_suite(const OrderSpec& order, std::uint64_t seed, std::size_t n_cases,
                            const AnalysisConfig& config = {});

struct SpectrumCase {
    std::string name;
    SymbolExpr phi;
};

/// Standard symbols for an order: the coordinate characters, e^g, and a
/// shifted circle.
std::vector<SpectrumCase> default_spectrum_cases(const OrderSpec& order, std::uint64_t seed);

struct DiskPictureCheck {
    std::size_t spectrum_mismatches = 0;
    std::size_t essential_mismatches = 0;
};

/// Compares a spectral map with the unit-disk picture of a nontrivial
/// character outside a band of band_px pixels around the unit circle.
/// The spectrum should be the closed disk; the essential spectrum the
/// closed disk when essential_is_disk, otherwise the circle, which must be
/// covered on every pixel the circle crosses.
DiskPictureCheck check_unit_disk_picture(const SpectralMap& map, bool essential_is_disk, double band_px = 3.0);

SuiteReport run_spectrum_suite(const OrderSpec& order, const std::vector<SpectrumCase>& cases,
                               const SpectrumConfig& config, std::uint64_t seed);

struct MatrixSuiteConfig {
    std::size_t n_cases = 20;
    double adjoint_tolerance = 1e-12;
    double multiplicativity_tolerance = 1e-10;
    /// Allowed gap between the window-32 norm of 2 + t and ||2 + t||_inf = 3.
    double norm_tolerance = 0.05;
};

/// Adjoint and multiplicativity identities on random finite sections, the
/// non-analytic counterexample and the norm ladder of 2 + t.
SuiteReport run_matrix_suite(std::uint64_t seed, const MatrixSuiteConfig& config);

}  // namespace ordtoep
