#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ordtoep/lattice.hpp"

namespace ordtoep {

using Complex = std::complex<double>;

/// Trigonometric polynomial: finitely many characters with complex
/// coefficients. Exact zeros are never stored.
class TrigPoly {
public:
    using Terms = std::map<LatticePoint, Complex>;

    TrigPoly() = default;
    explicit TrigPoly(Terms terms);
    static TrigPoly constant(Complex c);
    static TrigPoly monomial(const LatticePoint& n, Complex c = 1.0);

    const Terms& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }
    std::size_t active_dim() const noexcept;

    /// Fourier coefficient at chi under hat(phi)(chi) = integral of phi * conj(chi) dm,
    /// which for a trigonometric polynomial is the stored coefficient.
    Complex coefficient(const LatticePoint& chi) const;
    Complex eval(std::span<const double> theta) const;

    /// The symbol conj(phi): coefficient at chi is conj(hat(phi)(-chi)).
    TrigPoly conjugate() const;
    bool supported_in_cone(const OrderSpec& order) const;
    /// Sum of coefficient moduli, an upper bound for the sup norm.
    double coefficient_l1() const;

    void add_term(const LatticePoint& n, Complex c);

    friend TrigPoly operator+(const TrigPoly& a, const TrigPoly& b);
    friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b);
    friend TrigPoly operator*(Complex s, const TrigPoly& a);
    friend bool operator==(const TrigPoly&, const TrigPoly&) = default;

private:
    Terms terms_;
};

/// Riesz projection: keep exactly the coefficients on the positive cone.
TrigPoly riesz_project(const TrigPoly& f, const OrderSpec& order);

/// Uniform torus grid: per_axis points theta_k = 2*pi*k/per_axis on each of
/// dim axes. Linear index has axis 0 varying fastest.
struct UniformGrid {
    std::size_t dim;
    std::size_t per_axis;

    std::size_t size() const;
    std::vector<double> angles(std::size_t linear_index) const;
};

/// Default samples per axis: 512 for d <= 2, 64 for d = 3, coarser beyond.
std::size_t default_grid_per_axis(std::size_t dim);

struct SymbolNode;

/// Immutable symbol expression tree evaluable on the torus. Copies share
/// structure.
class SymbolExpr {
public:
    static SymbolExpr mono(const LatticePoint& n);
    static SymbolExpr poly(TrigPoly p);
    static SymbolExpr constant(Complex c);
    static SymbolExpr exp(const SymbolExpr& arg);
    static SymbolExpr product(std::vector<SymbolExpr> args);
    static SymbolExpr sum(std::vector<SymbolExpr> args);
    /// arg + lambda.
    static SymbolExpr shift(const SymbolExpr& arg, Complex lambda);

    const SymbolNode& node() const noexcept { return *node_; }
    std::size_t active_dim() const noexcept { return active_dim_; }

    /// Value at (e^{i theta_0}, e^{i theta_1}, ...). Throws DimensionError when
    /// theta is shorter than active_dim().
    Complex eval(std::span<const double> theta) const;

private:
    SymbolExpr(std::shared_ptr<const SymbolNode> node, std::size_t active_dim)
        : node_(std::move(node)), active_dim_(active_dim) {}

    std::shared_ptr<const SymbolNode> node_;
    std::size_t active_dim_ = 0;
};

struct MonoNode {
    LatticePoint n;
};
struct PolyNode {
    TrigPoly poly;
};
struct ExpNode {
    SymbolExpr arg;
};
struct ProductNode {
    std::vector<SymbolExpr> args;
};
struct SumNode {
    std::vector<SymbolExpr> args;
};
struct ShiftNode {
    SymbolExpr arg;
    Complex lambda;
};

struct SymbolNode : std::variant<MonoNode, PolyNode, ExpNode, ProductNode, SumNode, ShiftNode> {
    using variant::variant;
};

SymbolExpr operator*(const SymbolExpr& a, const SymbolExpr& b);

/// Samples phi on the grid; slot i holds the value at grid.angles(i).
/// Throws DimensionError when grid.dim < phi.active_dim().
std::vector<Complex> evaluate_grid(const SymbolExpr& phi, const UniformGrid& grid);

/// Max |phi| over the uniform grid of dimension max(1, active_dim).
double sup_norm_estimate(const SymbolExpr& phi, std::size_t grid_per_axis);
/// Min |phi| over the same grid.
double min_modulus(const SymbolExpr& phi, std::size_t grid_per_axis);

/// Riemann-sum Fourier coefficients of phi at the requested characters,
/// using the grid of the given dimension. Exact for trigonometric polynomials
/// whose support fits the grid without aliasing.
std::vector<Complex> sampled_coefficients(const SymbolExpr& phi, std::span<const LatticePoint> chars,
                                          const UniformGrid& grid);

nlohmann::json symbol_to_json(const SymbolExpr& phi);
/// Throws ConfigError on malformed specs.
SymbolExpr symbol_from_json(const nlohmann::json& j);

nlohmann::json trig_poly_to_json(const TrigPoly& p);
TrigPoly trig_poly_from_json(const nlohmann::json& terms);

}  // namespace ordtoep
