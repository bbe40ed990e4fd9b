#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ordtoep/lattice.hpp"
#include "ordtoep/symbol.hpp"
#include "ordtoep/winding.hpp"

namespace ordtoep {

/// One-sided invertibility of T_phi, named by which composition of T_chi
/// and T_conj(chi) is the identity (chi the Bohr-van Kampen character).
///   IdentityOnLeftComposite:  T_conj(chi) T_chi = I, chi in T \ {0}
///   IdentityOnRightComposite: T_chi T_conj(chi) = I, chi in -T \ {0}
enum class Sidedness { TwoSided, IdentityOnLeftComposite, IdentityOnRightComposite, NotInvertibleSymbol };

std::string to_string(Sidedness s);

/// Finite-section evidence for the composition identity behind Sidedness.
struct CompositionWitness {
    std::string identity;
    /// max |entry| of (claimed composition - I) on the window block.
    double identity_deviation = 0.0;
    /// Same for the reverse composition; 1 when the window meets T \ chi T.
    double opposite_deviation = 0.0;
    std::size_t window_size = 0;
};

struct AnalysisConfig {
    /// Samples per axis for the invertibility test; 0 picks the default for the dimension.
    std::size_t grid_per_axis = 0;
    double min_modulus_tolerance = 1e-6;
    WindingConfig winding{};
    bool composition_witness = true;
    std::int64_t witness_box_radius = 2;
};

struct FredholmReport {
    std::size_t dim = 1;
    double symbol_min_modulus = 0.0;
    std::optional<LatticePoint> character;
    bool in_xi = false;
    bool fredholm = false;
    std::optional<std::int64_t> index;
    Sidedness sided = Sidedness::NotInvertibleSymbol;
    std::optional<CompositionWitness> witness;
    std::vector<std::string> notes;
};

/// Lattice dimension used for a symbol under an order (colex: the symbol's support).
std::size_t analysis_dim(const SymbolExpr& phi, const OrderSpec& order);

/// Fredholm decision and index of T_phi from the Bohr-van Kampen character.
FredholmReport analyze(const SymbolExpr& phi, const OrderSpec& order, const AnalysisConfig& config = {});

struct ConditioningStep {
    std::size_t window_size = 0;
    double smallest_singular_value = 0.0;
};

struct ExponentialReport {
    FredholmReport report;
    std::vector<ConditioningStep> probe;
};

/// analyze(e^g) together with the smallest singular values of finite
/// sections of T_{e^g} along a window ladder.
ExponentialReport invertibility_of_exponential(const TrigPoly& g, const OrderSpec& order,
                                               const AnalysisConfig& config = {});

nlohmann::json report_to_json(const FredholmReport& r);
nlohmann::json report_to_json(const ExponentialReport& r);

}  // namespace ordtoep
