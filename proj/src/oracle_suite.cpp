#include "ordtoep/oracle_suite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ordtoep/finite_section.hpp"
#include "ordtoep/parallel.hpp"

namespace ordtoep {

namespace {

double unit_real(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<std::int64_t>(rng() % span);
}

Complex unit_disk(Rng& rng) {
    const double r = std::sqrt(unit_real(rng));
    return std::polar(r, 2.0 * std::numbers::pi * unit_real(rng));
}

LatticePoint random_point(Rng& rng, std::size_t dim, std::int64_t radius) {
    std::vector<std::int64_t> v(dim);
    for (auto& x : v) x = uniform_int(rng, -radius, radius);
    return LatticePoint(v);
}

// Up to `terms` distinct support points; a small box may hold fewer.
template <typename Draw>
TrigPoly distinct_terms(Rng& rng, std::size_t terms, Draw draw) {
    TrigPoly p;
    for (std::size_t attempt = 0; attempt < 8 * terms && p.terms().size() < terms; ++attempt) {
        const LatticePoint n = draw();
        if (p.terms().contains(n)) continue;
        p.add_term(n, unit_disk(rng));
    }
    return p;
}

std::string num(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

std::string index_string(const FredholmReport& r) {
    if (!r.fredholm) return "not Fredholm";
    return "index " + std::to_string(*r.index);
}

std::string padded(std::size_t i) {
    std::string s = std::to_string(i);
    return std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

std::size_t symbol_dim(const OrderSpec& order) { return order.dim().value_or(3); }

template <typename Seq>
bool strictly_increasing(const Seq& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) return false;
    }
    return true;
}

template <typename Seq>
std::string join(const Seq& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

SuiteCase fredholm_case(const OrderSpec& order, const LatticePoint& generator, Rng& rng, const AnalysisConfig& cfg) {
    const std::int64_t n = uniform_int(rng, -8, 8);
    const LatticePoint chi = generator.scaled(n);
    const TrigPoly g = random_exponent(rng, symbol_dim(order));
    const SymbolExpr phi = SymbolExpr::mono(chi) * SymbolExpr::exp(SymbolExpr::poly(g));
    const auto report = analyze(phi, order, cfg);

    const auto m = static_cast<std::size_t>(n < 0 ? -n : n);
    const LatticePoint positive = n < 0 ? -chi : chi;
    const std::size_t rank = semicommutator_rank(positive, make_window_count(order, m + 4));
    const auto brute = stabilized_interval_count(positive, order, 1, static_cast<std::int64_t>(m) + 6);
    const std::int64_t sign = n < 0 ? 1 : -1;

    SuiteCase c;
    c.prediction = "character " + chi.to_string() + ", " + index_string(report);
    c.oracle_value = "semicommutator rank " + std::to_string(rank) + ", interval count " +
                     (brute ? std::to_string(*brute) : std::string("unstable"));
    c.pass = report.fredholm && report.character == chi && brute.has_value() &&
             *report.index == sign * static_cast<std::int64_t>(rank) &&
             *report.index == sign * static_cast<std::int64_t>(*brute);
    return c;
}

SuiteCase non_xi_case(const OrderSpec& order, Rng& rng, const AnalysisConfig& cfg) {
    const std::size_t dim = order.dim() ? *order.dim() : static_cast<std::size_t>(uniform_int(rng, 2, 3));
    LatticePoint chi;
    do {
        chi = random_point(rng, dim, 3);
    } while (ind_character(chi, order).has_value());
    if (!is_positive(chi, order)) chi = -chi;
    const TrigPoly g = random_exponent(rng, symbol_dim(order));
    const SymbolExpr phi = SymbolExpr::mono(chi) * SymbolExpr::exp(SymbolExpr::poly(g));
    const auto report = analyze(phi, order, cfg);

    std::vector<std::size_t> ranks, counts;
    for (std::int64_t r : {2, 3, 4}) {
        ranks.push_back(semicommutator_rank(chi, make_window_box(order, r, enumeration_dim(order, chi))));
        counts.push_back(brute_interval_points(chi, order, r).size());
    }
    SuiteCase c;
    c.prediction = "character " + chi.to_string() + ", " + index_string(report);
    c.oracle_value = "rank ladder " + join(ranks) + ", interval ladder " + join(counts);
    c.pass = !report.fredholm && report.character == chi && strictly_increasing(ranks) && strictly_increasing(counts);
    return c;
}

SuiteCase exponential_case(const OrderSpec& order, Rng& rng, const AnalysisConfig& cfg) {
    const TrigPoly g = random_exponent(rng, symbol_dim(order));
    const auto r = invertibility_of_exponential(g, order, cfg);
    double smallest = std::numeric_limits<double>::infinity();
    for (const auto& s : r.probe) smallest = std::min(smallest, s.smallest_singular_value);
    SuiteCase c;
    c.prediction = index_string(r.report) + ", sided " + to_string(r.report.sided);
    c.oracle_value = "min finite-section singular value " + num(smallest);
    c.pass = r.report.fredholm && r.report.index == 0 && r.report.character &&
             r.report.character->is_zero() && r.report.sided == Sidedness::TwoSided && smallest > 0.1;
    return c;
}

}  // namespace

bool SuiteReport::all_pass() const {
    return std::all_of(cases.begin(), cases.end(), [](const SuiteCase& c) { return c.pass; });
}

std::size_t SuiteReport::passed() const {
    return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const SuiteCase& c) { return c.pass; }));
}

void SuiteReport::merge(const SuiteReport& other) {
    cases.insert(cases.end(), other.cases.begin(), other.cases.end());
    std::stable_sort(cases.begin(), cases.end(), [](const SuiteCase& a, const SuiteCase& b) { return a.name < b.name; });
}

nlohmann::json suite_to_json(const SuiteReport& report) {
    nlohmann::json cases = nlohmann::json::array();
    for (const auto& c : report.cases) {
        cases.push_back({{"name", c.name}, {"prediction", c.prediction}, {"oracle_value", c.oracle_value}, {"pass", c.pass}});
    }
    return {{"seed", report.seed},
            {"config", report.config},
            {"cases", cases},
            {"passed", report.passed()},
            {"total", report.cases.size()},
            {"all_pass", report.all_pass()}};
}

Rng case_rng(std::uint64_t seed, std::string_view stream, std::size_t index) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char ch : stream) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ULL;
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                      static_cast<std::uint32_t>(index)};
    return Rng(seq);
}

TrigPoly random_trig_poly(Rng& rng, std::size_t dim, std::int64_t radius, std::size_t max_terms) {
    const auto terms = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<std::int64_t>(max_terms)));
    return distinct_terms(rng, terms, [&] { return random_point(rng, dim, radius); });
}

TrigPoly random_exponent(Rng& rng, std::size_t dim, double bound) {
    const TrigPoly p = random_trig_poly(rng, dim);
    const double l1 = p.coefficient_l1();
    if (l1 == 0.0) return p;
    const double scale = bound * (0.5 + 0.5 * unit_real(rng)) / l1;
    return Complex{scale, 0.0} * p;
}

TrigPoly random_analytic_poly(Rng& rng, const OrderSpec& order, std::size_t dim, std::int64_t radius) {
    const auto terms = static_cast<std::size_t>(uniform_int(rng, 1, 8));
    return distinct_terms(rng, terms, [&] {
        LatticePoint n = random_point(rng, dim, radius);
        return is_positive(n, order) ? n : -n;
    });
}

std::optional<std::size_t> stabilized_interval_count(const LatticePoint& chi, const OrderSpec& order,
                                                     std::int64_t start_radius, std::int64_t max_radius) {
    std::vector<std::size_t> counts;
    for (std::int64_t r = start_radius; r <= max_radius; ++r) {
        counts.push_back(brute_interval_points(chi, order, r).size());
        const std::size_t k = counts.size();
        if (k >= 3 && counts[k - 1] == counts[k - 2] && counts[k - 2] == counts[k - 3]) return counts[k - 3];
    }
    return std::nullopt;
}

SuiteReport run_index_suite(const OrderSpec& order, std::uint64_t seed, std::size_t n_cases,
                            const AnalysisConfig& config) {
    SuiteReport report;
    report.seed = seed;
    report.config = {{"suite", "index"}, {"order", order}, {"n_cases", n_cases}};
    report.cases.resize(n_cases);
    const auto xi = xi_subgroup(order);
    const auto* cyclic = std::get_if<XiCyclic>(&xi);
    const bool all_xi = order == OrderSpec::lex(1);
    const std::string stream = "index/" + order.name();

    parallel_for(
        n_cases,
        [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                Rng rng = case_rng(seed, stream, i);
                SuiteCase c;
                std::string kind;
                if (cyclic && (all_xi || i % 2 == 0)) {
                    kind = "fredholm";
                    c = fredholm_case(order, cyclic->generator, rng, config);
                } else if (!cyclic && i % 3 == 2) {
                    kind = "exponential";
                    c = exponential_case(order, rng, config);
                } else {
                    kind = "non_fredholm";
                    c = non_xi_case(order, rng, config);
                }
                c.name = "index/" + order.name() + "/" + padded(i) + "/" + kind;
                report.cases[i] = std::move(c);
            }
        },
        1);
    return report;
}

std::vector<SpectrumCase> default_spectrum_cases(const OrderSpec& order, std::uint64_t seed) {
    std::vector<SpectrumCase> out;
    const std::size_t dim = order.dim().value_or(2);
    if (dim == 1 && !std::holds_alternative<ColexOrder>(order.family())) {
        out.push_back({"character_t", SymbolExpr::mono(LatticePoint{1})});
    } else {
        out.push_back({"character_first", SymbolExpr::mono(LatticePoint::unit(0))});
        out.push_back({"character_last", SymbolExpr::mono(LatticePoint::unit(dim - 1))});
    }
    out.push_back({"shifted_circle", SymbolExpr::shift(SymbolExpr::mono(LatticePoint::unit(dim - 1)), 2.0)});
    Rng rng = case_rng(seed, "spectrum/" + order.name(), 0);
    out.push_back({"exponential", SymbolExpr::exp(SymbolExpr::poly(random_exponent(rng, std::min<std::size_t>(dim, 2))))});
    return out;
}

DiskPictureCheck check_unit_disk_picture(const SpectralMap& map, bool essential_is_disk, double band_px) {
    DiskPictureCheck out;
    const double h = map.raster.pixel_size();
    const double band = band_px * h;
    const double ring = h / std::numbers::sqrt2;
    for (std::size_t i = 0; i < map.labels.size(); ++i) {
        const double r = std::abs(map.raster.pixel_center(i));
        const bool sigma = map.in_spectrum(i);
        const bool ess = map.in_essential_spectrum(i);
        if ((r <= 1.0 - band && !sigma) || (r >= 1.0 + band && sigma)) ++out.spectrum_mismatches;
        if (essential_is_disk) {
            if ((r <= 1.0 - band && !ess) || (r >= 1.0 + band && ess)) ++out.essential_mismatches;
        } else {
            if ((std::abs(r - 1.0) > band && ess) || (std::abs(r - 1.0) <= ring && !ess)) ++out.essential_mismatches;
        }
    }
    return out;
}

SuiteReport run_spectrum_suite(const OrderSpec& order, const std::vector<SpectrumCase>& cases,
                               const SpectrumConfig& config, std::uint64_t seed) {
    SuiteReport report;
    report.seed = seed;
    report.config = {{"suite", "spectrum"},
                     {"order", order},
                     {"resolution", config.raster.resolution},
                     {"fatten_px", config.raster.fatten_px},
                     {"grid_per_axis", config.raster.grid_per_axis}};
    std::vector<std::vector<SuiteCase>> per_symbol(cases.size());

    for (std::size_t s = 0; s < cases.size(); ++s) {
        const auto& sc = cases[s];
        const std::string prefix = "spectrum/" + order.name() + "/" + sc.name + "/";
        const SpectralMap map = spectral_picture(sc.phi, order, config);
        const double h = map.raster.pixel_size();
        auto& out = per_symbol[s];

        const auto sigma = map.spectrum_set();
        const auto ess = map.essential_set();
        const bool sigma_conn = connected8(sigma, map.raster.resolution);
        const bool ess_conn = connected8(ess, map.raster.resolution);
        out.push_back({prefix + "connected", "spectrum and essential spectrum connected",
                       std::string("spectrum ") + (sigma_conn ? "connected" : "disconnected") + ", essential " +
                           (ess_conn ? "connected" : "disconnected"),
                       sigma_conn && ess_conn});

        const double tol = 2.0 * std::numbers::sqrt2 * h;
        out.push_back({prefix + "radius", "spectral radius = essential spectral radius = " + num(map.sup_norm_estimate),
                       "raster radii " + num(map.spectral_radius) + ", " + num(map.essential_spectral_radius) +
                           " (tolerance " + num(tol) + ")",
                       std::abs(map.spectral_radius - map.sup_norm_estimate) <= tol &&
                           std::abs(map.essential_spectral_radius - map.sup_norm_estimate) <= tol});

        bool covers = true;
        for (std::size_t i = 0; i < ess.size(); ++i) covers = covers && (!map.raster.mask[i] || ess[i]);
        out.push_back({prefix + "image_in_essential", "image of the symbol inside the essential spectrum",
                       covers ? "contained" : "not contained", covers});

        // Spot-check exterior pixels with enough clearance from the image.
        const auto dist2 = squared_distance_transform(map.raster.mask, map.raster.resolution);
        std::vector<std::size_t> exterior;
        for (std::size_t i = 0; i < map.labels.size(); ++i) {
            if (map.labels[i] == 0 && dist2[i] >= config.min_clearance_px * config.min_clearance_px) exterior.push_back(i);
        }
        Rng rng = case_rng(seed, prefix, s);
        std::size_t zero_chars = 0, checked = 0;
        for (std::size_t k = 0; k < 20 && !exterior.empty(); ++k, ++checked) {
            const auto pix = exterior[rng() % exterior.size()];
            AnalysisConfig cfg = config.analysis;
            cfg.composition_witness = false;
            const auto r = analyze(SymbolExpr::shift(sc.phi, -map.raster.pixel_center(pix)), order, cfg);
            if (r.character && r.character->is_zero()) ++zero_chars;
        }
        out.push_back({prefix + "resolvent_spot_check", "exterior points have character 0",
                       std::to_string(zero_chars) + "/" + std::to_string(checked) + " zero characters",
                       zero_chars == checked});

        if (const auto* mono = std::get_if<MonoNode>(&sc.phi.node()); mono && !mono->n.is_zero()) {
            const bool in_xi = ind_character(mono->n, order).has_value();
            const auto check = check_unit_disk_picture(map, !in_xi);
            out.push_back({prefix + "disk_picture",
                           std::string("spectrum = closed disk, essential spectrum = ") + (in_xi ? "circle" : "closed disk"),
                           std::to_string(check.spectrum_mismatches) + " spectrum and " +
                               std::to_string(check.essential_mismatches) + " essential mismatches",
                           check.spectrum_mismatches == 0 && check.essential_mismatches == 0});
        }
        if (std::holds_alternative<ExpNode>(sc.phi.node())) {
            const auto c = classify_point(0.0, sc.phi, order, config.analysis);
            out.push_back({prefix + "zero_resolvent", "0 in the resolvent set of T_{e^g}", to_string(c.kind),
                           c.kind == PointClass::Resolvent});
        }
    }
    for (auto& v : per_symbol) report.cases.insert(report.cases.end(), v.begin(), v.end());
    std::stable_sort(report.cases.begin(), report.cases.end(),
                     [](const SuiteCase& a, const SuiteCase& b) { return a.name < b.name; });
    return report;
}

SuiteReport run_matrix_suite(std::uint64_t seed, const MatrixSuiteConfig& config) {
    SuiteReport report;
    report.seed = seed;
    report.config = {{"suite", "matrix"},
                     {"n_cases", config.n_cases},
                     {"adjoint_tolerance", config.adjoint_tolerance},
                     {"multiplicativity_tolerance", config.multiplicativity_tolerance},
                     {"norm_tolerance", config.norm_tolerance}};
    const OrderSpec order = OrderSpec::lex(2);
    report.cases.resize(config.n_cases);
    parallel_for(
        config.n_cases,
        [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                Rng rng = case_rng(seed, "matrix", i);
                const TrigPoly phi = random_trig_poly(rng, 2);
                const TrigPoly psi = random_analytic_poly(rng, order, 2);
                const Window w = make_window_box(order, uniform_int(rng, 1, 2));
                const double adj = adjoint_check(phi, w);
                const auto mult = multiplicativity_check(phi, psi, w);
                report.cases[i] = {"matrix/identities/" + padded(i),
                                   "adjoint and multiplicativity identities exact",
                                   "adjoint deviation " + num(adj) + ", multiplicativity deviation " +
                                       num(mult.max_deviation),
                                   adj <= config.adjoint_tolerance &&
                                       mult.max_deviation <= config.multiplicativity_tolerance};
            }
        },
        1);

    const auto counter = multiplicativity_check(TrigPoly::monomial(LatticePoint{1}),
                                                TrigPoly::monomial(LatticePoint{-1}),
                                                make_window_count(OrderSpec::lex(1), 4));
    report.cases.push_back({"matrix/non_analytic_counterexample", "deviation 1 at entry (0,0)",
                            "deviation " + num(counter.max_deviation) + " at (" + std::to_string(counter.row) + "," +
                                std::to_string(counter.col) + ")",
                            counter.max_deviation == 1.0 && counter.row == 0 && counter.col == 0});

    const std::vector<std::size_t> sizes{8, 16, 32};
    const auto ladder =
        norm_ladder(TrigPoly::constant(2.0) + TrigPoly::monomial(LatticePoint{1}), OrderSpec::lex(1), sizes);
    bool monotone = true;
    for (std::size_t k = 1; k < ladder.size(); ++k) monotone = monotone && ladder[k] >= ladder[k - 1];
    report.cases.push_back({"matrix/norm_ladder", "nondecreasing, within " + num(config.norm_tolerance) + " of 3",
                            "norms " + num(ladder[0]) + ", " + num(ladder[1]) + ", " + num(ladder[2]),
                            monotone && std::abs(ladder.back() - 3.0) <= config.norm_tolerance});
    std::stable_sort(report.cases.begin(), report.cases.end(),
                     [](const SuiteCase& a, const SuiteCase& b) { return a.name < b.name; });
    return report;
}

}  // namespace ordtoep
