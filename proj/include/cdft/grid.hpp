#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdft {

using Complex = std::complex<double>;

/// Thrown when two fields (or a field and an operator) live on different grids.
class GridMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * Uniform node-centred grid on the square [-L, L]^2 with n nodes per axis.
 *
 * Node (ix, iy) sits at (-L + ix*h, -L + iy*h) with h = 2L/(n-1). Storage
 * is row-major in y: index = iy*n + ix.
 */
class Grid2D {
public:
    static constexpr std::size_t kMinNodes = 16;

    Grid2D(std::size_t n, double half_extent);

    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] double half_extent() const noexcept { return half_extent_; }
    [[nodiscard]] double spacing() const noexcept { return h_; }
    [[nodiscard]] std::size_t size() const noexcept { return n_ * n_; }

    [[nodiscard]] double coord(std::size_t i) const noexcept {
        return -half_extent_ + static_cast<double>(i) * h_;
    }
    [[nodiscard]] std::size_t index(std::size_t ix, std::size_t iy) const noexcept {
        return iy * n_ + ix;
    }
    [[nodiscard]] bool on_boundary(std::size_t ix, std::size_t iy) const noexcept {
        return ix == 0 || iy == 0 || ix + 1 == n_ || iy + 1 == n_;
    }
    /// Trapezoidal quadrature weight of node (ix, iy).
    [[nodiscard]] double weight(std::size_t ix, std::size_t iy) const noexcept;

    [[nodiscard]] double area() const noexcept {
        return 4.0 * half_extent_ * half_extent_;
    }

    friend bool operator==(const Grid2D& a, const Grid2D& b) noexcept {
        return a.n_ == b.n_ && a.half_extent_ == b.half_extent_;
    }

private:
    std::size_t n_;
    double half_extent_;
    double h_;
};

/// Builds the grid; rejects n < 16 or L <= 0.
Grid2D make_grid(double half_extent, std::size_t n);

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what);

/// Real value per node.
class ScalarField {
public:
    explicit ScalarField(const Grid2D& grid, double fill = 0.0);
    ScalarField(const Grid2D& grid, std::vector<double> values);

    static ScalarField from_function(const Grid2D& grid,
                                     const std::function<double(double, double)>& f);

    [[nodiscard]] const Grid2D& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
    [[nodiscard]] double at(std::size_t ix, std::size_t iy) const noexcept {
        return values_[grid_.index(ix, iy)];
    }
    [[nodiscard]] double max() const;
    [[nodiscard]] double min() const;

private:
    Grid2D grid_;
    std::vector<double> values_;
};

/// Planar vector per node, stored as separate x and y component arrays.
class VectorField {
public:
    explicit VectorField(const Grid2D& grid);
    VectorField(const Grid2D& grid, std::vector<double> vx, std::vector<double> vy);

    static VectorField from_function(
        const Grid2D& grid,
        const std::function<std::pair<double, double>(double, double)>& f);

    [[nodiscard]] const Grid2D& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> x() const noexcept { return vx_; }
    [[nodiscard]] std::span<const double> y() const noexcept { return vy_; }
    [[nodiscard]] ScalarField x_component() const { return ScalarField(grid_, vx_); }
    [[nodiscard]] ScalarField y_component() const { return ScalarField(grid_, vy_); }

private:
    Grid2D grid_;
    std::vector<double> vx_;
    std::vector<double> vy_;
};

/// Complex value per node (wavefunctions).
class ComplexField {
public:
    explicit ComplexField(const Grid2D& grid);
    ComplexField(const Grid2D& grid, std::vector<Complex> values);

    static ComplexField from_function(const Grid2D& grid,
                                      const std::function<Complex(double, double)>& f);
    static ComplexField from_real(const ScalarField& f);

    [[nodiscard]] const Grid2D& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const Complex> values() const noexcept { return values_; }
    [[nodiscard]] Complex operator[](std::size_t i) const noexcept { return values_[i]; }

    [[nodiscard]] ScalarField real_part() const;
    [[nodiscard]] ScalarField imag_part() const;

private:
    Grid2D grid_;
    std::vector<Complex> values_;
};

// Pointwise algebra. Every binary operation checks the grids.
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double s, const VectorField& a);
VectorField operator*(const ScalarField& f, const VectorField& v);
ComplexField operator+(const ComplexField& a, const ComplexField& b);
ComplexField operator-(const ComplexField& a, const ComplexField& b);
ComplexField operator*(Complex s, const ComplexField& a);
ComplexField operator*(const ScalarField& f, const ComplexField& psi);

/// Pointwise a.x*b.x + a.y*b.y.
ScalarField dot(const VectorField& a, const VectorField& b);
/// Pointwise |v|^2.
ScalarField norm_squared(const VectorField& v);
/// Pointwise |psi|^2.
ScalarField modulus_squared(const ComplexField& psi);
/// psi * exp(i*phase), pointwise.
ComplexField with_phase(const ComplexField& psi, const ScalarField& phase);

// ---------------------------------------------------------------------------
// Quadrature

/// Trapezoidal rule over [-L, L]^2; accumulation order is fixed (row-major).
double integrate(const ScalarField& f);
/// Quadrature inner product <u, v> = sum_i w_i conj(u_i) v_i.
Complex inner(const ComplexField& u, const ComplexField& v);
double norm(const ComplexField& psi);
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& v);
/// psi / ||psi||; throws on a zero field.
ComplexField normalized(const ComplexField& psi);

// ---------------------------------------------------------------------------
// Finite differences

/**
 * Accuracy of the central stencil used in the bulk of the grid.
 *
 * Nodes closer to the edge than the stencil half-width fall back to the
 * widest central stencil that fits; the two boundary rows use one-sided
 * second-order formulas. Every variant differentiates linear fields exactly.
 */
enum class StencilOrder { second = 2, fourth = 4, sixth = 6 };

inline constexpr StencilOrder kDefaultStencil = StencilOrder::sixth;

ScalarField partial_x(const ScalarField& f, StencilOrder order = kDefaultStencil);
ScalarField partial_y(const ScalarField& f, StencilOrder order = kDefaultStencil);
ComplexField partial_x(const ComplexField& f, StencilOrder order = kDefaultStencil);
ComplexField partial_y(const ComplexField& f, StencilOrder order = kDefaultStencil);

VectorField gradient(const ScalarField& f, StencilOrder order = kDefaultStencil);
ScalarField divergence(const VectorField& v, StencilOrder order = kDefaultStencil);
/// d_x v_y - d_y v_x.
ScalarField curl_z(const VectorField& v, StencilOrder order = kDefaultStencil);
ScalarField laplacian(const ScalarField& f, StencilOrder order = kDefaultStencil);
ComplexField laplacian(const ComplexField& f, StencilOrder order = kDefaultStencil);

/// Number of nodes next to each edge that do not see the full bulk stencil.
std::size_t stencil_reach(StencilOrder order) noexcept;

} // namespace cdft
