#include "ordtoep/winding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "ordtoep/errors.hpp"

namespace ordtoep {

LoopSamples::LoopSamples(std::vector<Complex> values, double relative_tolerance) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("loop needs at least one sample");
    double lo = std::abs(values_.front());
    double hi = lo;
    for (const auto& v : values_) {
        lo = std::min(lo, std::abs(v));
        hi = std::max(hi, std::abs(v));
    }
    min_modulus_ = lo;
    if (!(lo > 0.0) || lo < relative_tolerance * hi) {
        std::ostringstream os;
        os << "loop passes within " << lo << " of the origin (max modulus " << hi << ")";
        throw NumericalError(NumericalFailure::OriginTooClose, os.str());
    }
}

std::int64_t winding_number(const LoopSamples& loop) {
    const auto& v = loop.values();
    const double limit = std::numbers::pi / 2.0;
    double total = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const Complex next = v[(k + 1) % v.size()];
        const double step = std::arg(next / v[k]);
        if (std::abs(step) >= limit) {
            throw NumericalError(NumericalFailure::StepTooCoarse,
                                 "argument increment " + std::to_string(step) + " at sample " + std::to_string(k));
        }
        total += step;
    }
    return static_cast<std::int64_t>(std::llround(total / (2.0 * std::numbers::pi)));
}

std::int64_t coordinate_winding(const SymbolExpr& phi, std::size_t coord, std::span<const double> base,
                                const WindingConfig& config) {
    std::vector<double> theta(base.begin(), base.end());
    if (coord >= theta.size()) throw DimensionError("winding coordinate outside base point");
    // A loop sampled below its bandwidth can alias to a smaller winding with
    // small steps, so a value is accepted only once a doubled count repeats it.
    std::optional<std::int64_t> previous;
    for (std::size_t n = config.initial_samples;; n *= 2) {
        std::vector<Complex> values(n);
        for (std::size_t k = 0; k < n; ++k) {
            theta[coord] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
            values[k] = phi.eval(theta);
        }
        const bool last = n * 2 > config.max_samples;
        try {
            const auto w = winding_number(LoopSamples(std::move(values), config.origin_tolerance));
            if (previous == w || (last && n == config.initial_samples)) return w;
            previous = w;
        } catch (const NumericalError& e) {
            if (e.kind() != NumericalFailure::StepTooCoarse || last) throw;
            previous.reset();
        }
        if (last) {
            throw NumericalError(NumericalFailure::StepTooCoarse,
                                 "winding did not stabilize within " + std::to_string(n) + " samples");
        }
    }
}

LatticePoint bvk_character_at(const SymbolExpr& phi, std::span<const double> base, const WindingConfig& config) {
    if (base.size() < phi.active_dim()) throw DimensionError("base point shorter than symbol dimension");
    std::vector<LatticePoint::Entry> entries;
    // Coordinates beyond the symbol's support carry constant loops with zero winding.
    for (std::size_t j = 0; j < phi.active_dim(); ++j) {
        const auto w = coordinate_winding(phi, j, base, config);
        if (w != 0) entries.emplace_back(j, w);
    }
    if (phi.active_dim() == 0) {
        // Constant symbol: still reject a (near) zero value.
        LoopSamples({phi.eval(base)}, config.origin_tolerance);
    }
    return LatticePoint::from_entries(std::move(entries));
}

LatticePoint bvk_character(const SymbolExpr& phi, std::size_t dim_hint, const WindingConfig& config) {
    const std::vector<double> base(std::max(dim_hint, phi.active_dim()), 0.0);
    return bvk_character_at(phi, base, config);
}

}  // namespace ordtoep
