#include "ordtoep/fredholm.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "ordtoep/errors.hpp"
#include "ordtoep/finite_section.hpp"

namespace ordtoep {

namespace {

CompositionWitness composition_witness(const LatticePoint& chi, const OrderSpec& order, std::int64_t radius) {
    const bool positive = is_positive(chi, order);
    // The analytic factor goes on the right of the identity-producing product.
    const LatticePoint analytic = positive ? chi : -chi;
    const auto left = TrigPoly::monomial(-analytic);
    const auto right = TrigPoly::monomial(analytic);
    const Window w = make_window_box(order, radius, enumeration_dim(order, chi));
    const auto n = static_cast<Eigen::Index>(w.size());
    const ComplexMatrix eye = ComplexMatrix::Identity(n, n);

    CompositionWitness out;
    out.identity = positive ? "T_conj(chi) T_chi = I" : "T_chi T_conj(chi) = I";
    out.window_size = w.size();
    out.identity_deviation = (compressed_product(left, right, w) - eye).cwiseAbs().maxCoeff();
    out.opposite_deviation = (compressed_product(right, left, w) - eye).cwiseAbs().maxCoeff();
    return out;
}

}  // namespace

std::string to_string(Sidedness s) {
    switch (s) {
        case Sidedness::TwoSided: return "TwoSided";
        case Sidedness::IdentityOnLeftComposite: return "IdentityOnLeftComposite";
        case Sidedness::IdentityOnRightComposite: return "IdentityOnRightComposite";
        case Sidedness::NotInvertibleSymbol: return "NotInvertibleSymbol";
    }
    return "?";
}

std::size_t analysis_dim(const SymbolExpr& phi, const OrderSpec& order) {
    if (auto d = order.dim()) {
        if (phi.active_dim() > *d) {
            throw DimensionError("symbol uses " + std::to_string(phi.active_dim()) + " coordinates but order " +
                                 order.name() + " has " + std::to_string(*d));
        }
        return *d;
    }
    return std::max<std::size_t>(1, phi.active_dim());
}

FredholmReport analyze(const SymbolExpr& phi, const OrderSpec& order, const AnalysisConfig& config) {
    const std::size_t dim = analysis_dim(phi, order);
    const std::size_t sample_dim = std::max<std::size_t>(1, phi.active_dim());
    const std::size_t grid = config.grid_per_axis ? config.grid_per_axis : default_grid_per_axis(sample_dim);

    FredholmReport r;
    r.dim = dim;
    r.symbol_min_modulus = min_modulus(phi, grid);
    if (r.symbol_min_modulus <= config.min_modulus_tolerance) {
        r.sided = Sidedness::NotInvertibleSymbol;
        r.notes.push_back("symbol vanishes on the sampling grid within tolerance; T_phi is not Fredholm");
        return r;
    }

    const LatticePoint chi = bvk_character(phi, dim, config.winding);
    r.character = chi;
    const auto ind = ind_character(chi, order);
    r.in_xi = ind.has_value();
    r.fredholm = r.in_xi;
    if (ind) r.index = -*ind;

    if (chi.is_zero()) {
        r.sided = Sidedness::TwoSided;
        r.notes.push_back("symbol lies in exp(C(G)); T_phi is invertible");
        return r;
    }
    r.sided = is_positive(chi, order) ? Sidedness::IdentityOnLeftComposite : Sidedness::IdentityOnRightComposite;
    r.notes.push_back(r.in_xi ? "character has an index; T_phi is Fredholm"
                              : "character has no index; T_phi is one-sided invertible but not Fredholm");
    if (config.composition_witness) r.witness = composition_witness(chi, order, config.witness_box_radius);
    return r;
}

ExponentialReport invertibility_of_exponential(const TrigPoly& g, const OrderSpec& order,
                                               const AnalysisConfig& config) {
    ExponentialReport out;
    const SymbolExpr symbol = SymbolExpr::exp(SymbolExpr::poly(g));
    out.report = analyze(symbol, order, config);

    const bool enumerable = std::holds_alternative<XiCyclic>(xi_subgroup(order));
    const std::size_t dim = analysis_dim(symbol, order);
    std::vector<Window> ladder;
    if (enumerable) {
        for (std::size_t n : {8, 16, 32}) ladder.push_back(make_window_count(order, n));
    } else {
        for (std::int64_t r : {1, 2, 3}) ladder.push_back(make_window_box(order, r, dim));
    }

    const std::size_t coeff_dim = std::max<std::size_t>(1, g.active_dim());
    for (const auto& w : ladder) {
        std::set<LatticePoint> diffs;
        for (const auto& a : w.points()) {
            for (const auto& b : w.points()) {
                LatticePoint d = a - b;
                if (d.active_dim() <= coeff_dim) diffs.insert(std::move(d));
            }
        }
        const std::vector<LatticePoint> chars(diffs.begin(), diffs.end());
        std::int64_t reach = 0;
        for (const auto& c : chars) reach = std::max(reach, c.sup_norm());
        const auto per_axis = std::max<std::size_t>(32, std::bit_ceil(static_cast<std::size_t>(2 * reach + 2)));
        const auto coeffs = sampled_coefficients(symbol, chars, UniformGrid{coeff_dim, per_axis});
        TrigPoly eg;
        for (std::size_t i = 0; i < chars.size(); ++i) eg.add_term(chars[i], coeffs[i]);
        out.probe.push_back({w.size(), smallest_singular_value(truncated_toeplitz(eg, w).entries)});
    }
    return out;
}

nlohmann::json report_to_json(const FredholmReport& r) {
    nlohmann::json j;
    j["symbol_min_modulus"] = r.symbol_min_modulus;
    j["character"] = r.character ? nlohmann::json(r.character->dense(r.dim)) : nlohmann::json(nullptr);
    j["in_xi"] = r.in_xi;
    j["fredholm"] = r.fredholm;
    j["index"] = r.index ? nlohmann::json(*r.index) : nlohmann::json(nullptr);
    j["sided"] = to_string(r.sided);
    if (r.witness) {
        j["composition_witness"] = {{"identity", r.witness->identity},
                                    {"identity_deviation", r.witness->identity_deviation},
                                    {"opposite_deviation", r.witness->opposite_deviation},
                                    {"window_size", r.witness->window_size}};
    } else {
        j["composition_witness"] = nullptr;
    }
    j["notes"] = r.notes;
    return j;
}

nlohmann::json report_to_json(const ExponentialReport& r) {
    nlohmann::json j = report_to_json(r.report);
    nlohmann::json probe = nlohmann::json::array();
    for (const auto& s : r.probe) {
        probe.push_back({{"window_size", s.window_size}, {"smallest_singular_value", s.smallest_singular_value}});
    }
    j["conditioning_probe"] = probe;
    return j;
}

}  // namespace ordtoep
