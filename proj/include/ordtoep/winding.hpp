#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ordtoep/lattice.hpp"
#include "ordtoep/symbol.hpp"

namespace ordtoep {

/// A closed loop sampled at uniform parameter steps; the last sample connects
/// back to the first.
class LoopSamples {
public:
    /// Throws NumericalError(OriginTooClose) when the smallest modulus is
    /// below relative_tolerance * largest modulus.
    explicit LoopSamples(std::vector<Complex> values, double relative_tolerance = 1e-9);

    const std::vector<Complex>& values() const noexcept { return values_; }
    double min_modulus() const noexcept { return min_modulus_; }

private:
    std::vector<Complex> values_;
    double min_modulus_ = 0.0;
};

/// Winding number about the origin from accumulated argument increments.
/// Throws NumericalError(StepTooCoarse) when an increment reaches pi/2.
std::int64_t winding_number(const LoopSamples& loop);

struct WindingConfig {
    std::size_t initial_samples = 256;
    std::size_t max_samples = std::size_t{1} << 16;
    double origin_tolerance = 1e-9;
};

/// Winding of theta -> phi(base with slot coord replaced by theta). The sample
/// count doubles until two consecutive counts give the same winding; throws
/// StepTooCoarse when max_samples is reached first.
std::int64_t coordinate_winding(const SymbolExpr& phi, std::size_t coord, std::span<const double> base,
                                const WindingConfig& config = {});

/// Character of the Bohr-van Kampen factorization phi = chi * e^g on T^d:
/// chi_j is the winding of phi along the j-th coordinate circle. d is the
/// larger of dim_hint and phi.active_dim(); the other angles sit at zero.
LatticePoint bvk_character(const SymbolExpr& phi, std::size_t dim_hint, const WindingConfig& config = {});

/// Same, with the non-active angles fixed at base (base.size() >= d).
LatticePoint bvk_character_at(const SymbolExpr& phi, std::span<const double> base,
                              const WindingConfig& config = {});

}  // namespace ordtoep
