#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "ordtoep/lattice.hpp"
#include "ordtoep/symbol.hpp"

namespace ordtoep {

using ComplexMatrix = Eigen::MatrixXcd;

/// Finite set of cone characters, distinct and ascending in the order.
class Window {
public:
    /// Sorts and deduplicates; throws std::invalid_argument on a point outside the cone.
    static Window from_points(const OrderSpec& order, std::vector<LatticePoint> points);

    const OrderSpec& order() const noexcept { return order_; }
    const std::vector<LatticePoint>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool contains(const LatticePoint& p) const;

private:
    Window(OrderSpec order, std::vector<LatticePoint> points) : order_(order), points_(std::move(points)) {}

    OrderSpec order_;
    std::vector<LatticePoint> points_;
};

/// The n smallest cone elements {0, g, 2g, ...} along the X^i generator g.
/// Throws CountNotEnumerable when the order has no least positive element.
Window make_window_count(const OrderSpec& order, std::size_t count);

/// Cone points of the sup-norm box. dim defaults to the order's dimension
/// and is required for the colex family.
Window make_window_box(const OrderSpec& order, std::int64_t radius, std::size_t dim = 0);

struct ToeplitzMatrix {
    Window window;
    /// entries(r, c) = hat(phi)(window[r] - window[c]).
    ComplexMatrix entries;
};

ToeplitzMatrix truncated_toeplitz(const TrigPoly& phi, const Window& window);

/// Rectangular compression: rows indexed by `rows`, columns by `cols`.
ComplexMatrix toeplitz_block(const TrigPoly& phi, std::span<const LatticePoint> rows,
                             std::span<const LatticePoint> cols);

/// Exact block of T_phi T_psi on the window: the middle factor runs over
/// W' = W united with the cone part of W + supp(psi), which holds every
/// character T_psi can reach from W.
ComplexMatrix compressed_product(const TrigPoly& phi, const TrigPoly& psi, const Window& window);

/// Numerical rank with singular values cut at relative_cutoff * sigma_max.
std::size_t numerical_rank(const ComplexMatrix& m, double relative_cutoff = 1e-8);
double largest_singular_value(const ComplexMatrix& m);
double smallest_singular_value(const ComplexMatrix& m);

/// rank(I - T_chi T_{-chi}) with both factors truncated to the window.
std::size_t semicommutator_rank(const LatticePoint& chi, const Window& window);
/// #{tau in W : tau - chi not in T}; equals semicommutator_rank whenever W
/// holds tau - chi for every tau in W with tau - chi in T.
std::size_t count_cone_exits(const LatticePoint& chi, const Window& window);

/// Max entrywise |T_{conj phi} - (T_phi)^H| on the window.
double adjoint_check(const TrigPoly& phi, const Window& window);

struct MultiplicativityResult {
    double max_deviation = 0.0;
    std::size_t row = 0;
    std::size_t col = 0;
    /// Whether psi is supported in the cone (the identity is then exact).
    bool psi_analytic = true;
};

/// Compares the window blocks of T_{phi psi} and T_phi T_psi.
MultiplicativityResult multiplicativity_check(const TrigPoly& phi, const TrigPoly& psi, const Window& window);

/// Largest singular value of the truncation on each window of the ladder.
/// Uses count windows when the order has a least positive element and box
/// windows of radius = size otherwise.
std::vector<double> norm_ladder(const TrigPoly& phi, const OrderSpec& order, std::span<const std::size_t> sizes);

nlohmann::json matrix_to_json(const ToeplitzMatrix& m);
std::string matrix_to_text(const ComplexMatrix& m, int precision = 6);

}  // namespace ordtoep
