#include "ordtoep/finite_section.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "ordtoep/errors.hpp"

namespace ordtoep {

Window Window::from_points(const OrderSpec& order, std::vector<LatticePoint> points) {
    for (const auto& p : points) {
        if (!is_positive(p, order)) throw std::invalid_argument("window point " + p.to_string() + " is not in the cone");
    }
    sort_by_order(points, order);
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return Window(order, std::move(points));
}

bool Window::contains(const LatticePoint& p) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), p, [&](const LatticePoint& a, const LatticePoint& b) {
        return compare(a, b, order_) == std::strong_ordering::less;
    });
    return it != points_.end() && *it == p;
}

Window make_window_count(const OrderSpec& order, std::size_t count) {
    const auto xi = xi_subgroup(order);
    const auto* cyclic = std::get_if<XiCyclic>(&xi);
    if (cyclic == nullptr) {
        throw CountNotEnumerable("order " + order.name() + " has no least positive element");
    }
    std::vector<LatticePoint> pts;
    pts.reserve(count);
    for (std::size_t k = 0; k < count; ++k) pts.push_back(cyclic->generator.scaled(static_cast<std::int64_t>(k)));
    return Window::from_points(order, std::move(pts));
}

Window make_window_box(const OrderSpec& order, std::int64_t radius, std::size_t dim) {
    if (dim == 0) {
        const auto d = order.dim();
        if (!d) throw std::invalid_argument("box window on " + order.name() + " needs an explicit dimension");
        dim = *d;
    }
    std::vector<LatticePoint> pts;
    for (auto& p : box_points(dim, radius)) {
        if (is_positive(p, order)) pts.push_back(std::move(p));
    }
    return Window::from_points(order, std::move(pts));
}

ComplexMatrix toeplitz_block(const TrigPoly& phi, std::span<const LatticePoint> rows,
                             std::span<const LatticePoint> cols) {
    ComplexMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = phi.coefficient(rows[r] - cols[c]);
        }
    }
    return m;
}

ToeplitzMatrix truncated_toeplitz(const TrigPoly& phi, const Window& window) {
    return {window, toeplitz_block(phi, window.points(), window.points())};
}

ComplexMatrix compressed_product(const TrigPoly& phi, const TrigPoly& psi, const Window& window) {
    const auto& order = window.order();
    std::set<LatticePoint> middle(window.points().begin(), window.points().end());
    for (const auto& w : window.points()) {
        for (const auto& term : psi.terms()) {
            LatticePoint p = w + term.first;
            if (is_positive(p, order)) middle.insert(std::move(p));
        }
    }
    const std::vector<LatticePoint> mid(middle.begin(), middle.end());
    return toeplitz_block(phi, window.points(), mid) * toeplitz_block(psi, mid, window.points());
}

namespace {

Eigen::VectorXd singular_values(const ComplexMatrix& m) {
    if (m.size() == 0) return {};
    Eigen::BDCSVD<ComplexMatrix> svd(m);
    return svd.singularValues();
}

}  // namespace

std::size_t numerical_rank(const ComplexMatrix& m, double relative_cutoff) {
    const auto sv = singular_values(m);
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > relative_cutoff * sv(0)) ++r;
    }
    return r;
}

double largest_singular_value(const ComplexMatrix& m) {
    const auto sv = singular_values(m);
    return sv.size() == 0 ? 0.0 : sv(0);
}

double smallest_singular_value(const ComplexMatrix& m) {
    const auto sv = singular_values(m);
    return sv.size() == 0 ? 0.0 : sv(sv.size() - 1);
}

std::size_t semicommutator_rank(const LatticePoint& chi, const Window& window) {
    const auto t_chi = truncated_toeplitz(TrigPoly::monomial(chi), window).entries;
    const auto t_conj = truncated_toeplitz(TrigPoly::monomial(-chi), window).entries;
    const auto n = static_cast<Eigen::Index>(window.size());
    const ComplexMatrix defect = ComplexMatrix::Identity(n, n) - t_chi * t_conj;
    return numerical_rank(defect);
}

std::size_t count_cone_exits(const LatticePoint& chi, const Window& window) {
    return static_cast<std::size_t>(std::count_if(window.points().begin(), window.points().end(),
                                                  [&](const LatticePoint& tau) {
                                                      return !is_positive(tau - chi, window.order());
                                                  }));
}

double adjoint_check(const TrigPoly& phi, const Window& window) {
    const auto a = truncated_toeplitz(phi.conjugate(), window).entries;
    const auto b = truncated_toeplitz(phi, window).entries;
    if (a.size() == 0) return 0.0;
    return (a - b.adjoint()).cwiseAbs().maxCoeff();
}

MultiplicativityResult multiplicativity_check(const TrigPoly& phi, const TrigPoly& psi, const Window& window) {
    MultiplicativityResult out;
    out.psi_analytic = psi.supported_in_cone(window.order());
    const auto direct = truncated_toeplitz(phi * psi, window).entries;
    const auto composed = compressed_product(phi, psi, window);
    if (direct.size() == 0) return out;
    Eigen::Index r = 0, c = 0;
    out.max_deviation = (direct - composed).cwiseAbs().maxCoeff(&r, &c);
    out.row = static_cast<std::size_t>(r);
    out.col = static_cast<std::size_t>(c);
    return out;
}

std::vector<double> norm_ladder(const TrigPoly& phi, const OrderSpec& order, std::span<const std::size_t> sizes) {
    const bool enumerable = std::holds_alternative<XiCyclic>(xi_subgroup(order));
    std::vector<double> out;
    for (const auto size : sizes) {
        const Window w = enumerable ? make_window_count(order, size)
                                    : make_window_box(order, static_cast<std::int64_t>(size),
                                                      std::max<std::size_t>(1, phi.active_dim()));
        out.push_back(largest_singular_value(truncated_toeplitz(phi, w).entries));
    }
    return out;
}

nlohmann::json matrix_to_json(const ToeplitzMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.entries.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.entries.cols(); ++c) {
            row.push_back({m.entries(r, c).real(), m.entries(r, c).imag()});
        }
        rows.push_back(std::move(row));
    }
    nlohmann::json window = nlohmann::json::array();
    for (const auto& p : m.window.points()) window.push_back(p);
    return {{"window", window}, {"rows", m.entries.rows()}, {"cols", m.entries.cols()}, {"entries", rows}};
}

std::string matrix_to_text(const ComplexMatrix& m, int precision) {
    std::string out;
    char buf[96];
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%s(%.*f,%.*f)", c ? " " : "", precision, m(r, c).real() + 0.0,
                          precision, m(r, c).imag() + 0.0);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

}  // namespace ordtoep
