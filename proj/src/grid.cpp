#include "cdft/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace cdft {

namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (const double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + ": non-finite entry");
        }
    }
}

void require_finite(std::span<const Complex> values, const char* what) {
    for (const Complex v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::invalid_argument(std::string(what) + ": non-finite entry");
        }
    }
}

void require_count(std::size_t got, const Grid2D& grid, const char* what) {
    if (got != grid.size()) {
        throw std::invalid_argument(std::string(what) + ": expected " +
                                    std::to_string(grid.size()) + " values, got " +
                                    std::to_string(got));
    }
}

// Central first-derivative coefficients c_k for f'(x) ~ sum_k c_k (f_{+k} - f_{-k}) / h.
constexpr std::array<double, 1> kD1Second{0.5};
constexpr std::array<double, 2> kD1Fourth{2.0 / 3.0, -1.0 / 12.0};
constexpr std::array<double, 3> kD1Sixth{3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};

// Central second-derivative coefficients: c_0 f_0 + sum_k c_k (f_{+k} + f_{-k}).
constexpr std::array<double, 2> kD2Second{-2.0, 1.0};
constexpr std::array<double, 3> kD2Fourth{-5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0};
constexpr std::array<double, 4> kD2Sixth{-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0};

std::size_t half_width(StencilOrder order) {
    return static_cast<std::size_t>(order) / 2;
}

// Differentiates one grid line of length n (elements spaced by `stride`).
template <typename T>
void first_derivative_line(const T* f, std::size_t stride, std::size_t n, double h,
                           StencilOrder order, T* out) {
    auto at = [&](std::size_t i) { return f[i * stride]; };
    const double inv_h = 1.0 / h;
    out[0] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) * (0.5 * inv_h);
    out[(n - 1) * stride] = (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) * (0.5 * inv_h);
    const std::size_t reach = half_width(order);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const std::size_t w = std::min({reach, i, n - 1 - i});
        T acc{};
        if (w >= 3) {
            for (std::size_t k = 0; k < 3; ++k) acc += kD1Sixth[k] * (at(i + k + 1) - at(i - k - 1));
        } else if (w == 2) {
            for (std::size_t k = 0; k < 2; ++k) acc += kD1Fourth[k] * (at(i + k + 1) - at(i - k - 1));
        } else {
            acc = kD1Second[0] * (at(i + 1) - at(i - 1));
        }
        out[i * stride] = acc * inv_h;
    }
}

template <typename T>
void second_derivative_line(const T* f, std::size_t stride, std::size_t n, double h,
                            StencilOrder order, T* out) {
    auto at = [&](std::size_t i) { return f[i * stride]; };
    const double inv_h2 = 1.0 / (h * h);
    out[0] = (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) * inv_h2;
    out[(n - 1) * stride] =
        (2.0 * at(n - 1) - 5.0 * at(n - 2) + 4.0 * at(n - 3) - at(n - 4)) * inv_h2;
    const std::size_t reach = half_width(order);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const std::size_t w = std::min({reach, i, n - 1 - i});
        T acc{};
        if (w >= 3) {
            acc = kD2Sixth[0] * at(i);
            for (std::size_t k = 1; k <= 3; ++k) acc += kD2Sixth[k] * (at(i + k) + at(i - k));
        } else if (w == 2) {
            acc = kD2Fourth[0] * at(i);
            for (std::size_t k = 1; k <= 2; ++k) acc += kD2Fourth[k] * (at(i + k) + at(i - k));
        } else {
            acc = kD2Second[0] * at(i) + kD2Second[1] * (at(i + 1) + at(i - 1));
        }
        out[i * stride] = acc * inv_h2;
    }
}

enum class Axis { x, y };

template <typename T>
std::vector<T> differentiate(const Grid2D& grid, std::span<const T> f, Axis axis,
                             StencilOrder order, bool second) {
    const std::size_t n = grid.n();
    std::vector<T> out(f.size());
    for (std::size_t line = 0; line < n; ++line) {
        const std::size_t start = axis == Axis::x ? line * n : line;
        const std::size_t stride = axis == Axis::x ? 1 : n;
        if (second) {
            second_derivative_line(f.data() + start, stride, n, grid.spacing(), order,
                                   out.data() + start);
        } else {
            first_derivative_line(f.data() + start, stride, n, grid.spacing(), order,
                                  out.data() + start);
        }
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------

Grid2D::Grid2D(std::size_t n, double half_extent)
    : n_(n), half_extent_(half_extent), h_(2.0 * half_extent / static_cast<double>(n - 1)) {
    if (n < kMinNodes) {
        throw std::invalid_argument("grid: n must be at least " + std::to_string(kMinNodes) +
                                    " nodes per axis (got " + std::to_string(n) + ")");
    }
    if (!(half_extent > 0.0) || !std::isfinite(half_extent)) {
        throw std::invalid_argument("grid: half extent L must be positive and finite");
    }
}

double Grid2D::weight(std::size_t ix, std::size_t iy) const noexcept {
    double w = h_ * h_;
    if (ix == 0 || ix + 1 == n_) w *= 0.5;
    if (iy == 0 || iy + 1 == n_) w *= 0.5;
    return w;
}

Grid2D make_grid(double half_extent, std::size_t n) { return Grid2D(n, half_extent); }

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what) {
    if (!(a == b)) {
        throw GridMismatch(std::string(what) + ": fields live on different grids (n=" +
                           std::to_string(a.n()) + " vs n=" + std::to_string(b.n()) + ")");
    }
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(const Grid2D& grid, double fill)
    : grid_(grid), values_(grid.size(), fill) {
    if (!std::isfinite(fill)) throw std::invalid_argument("ScalarField: non-finite fill");
}

ScalarField::ScalarField(const Grid2D& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    require_count(values_.size(), grid_, "ScalarField");
    require_finite(values_, "ScalarField");
}

ScalarField ScalarField::from_function(const Grid2D& grid,
                                       const std::function<double(double, double)>& f) {
    std::vector<double> v(grid.size());
    for (std::size_t iy = 0; iy < grid.n(); ++iy) {
        for (std::size_t ix = 0; ix < grid.n(); ++ix) {
            v[grid.index(ix, iy)] = f(grid.coord(ix), grid.coord(iy));
        }
    }
    return ScalarField(grid, std::move(v));
}

double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }

VectorField::VectorField(const Grid2D& grid)
    : grid_(grid), vx_(grid.size(), 0.0), vy_(grid.size(), 0.0) {}

VectorField::VectorField(const Grid2D& grid, std::vector<double> vx, std::vector<double> vy)
    : grid_(grid), vx_(std::move(vx)), vy_(std::move(vy)) {
    require_count(vx_.size(), grid_, "VectorField x");
    require_count(vy_.size(), grid_, "VectorField y");
    require_finite(vx_, "VectorField x");
    require_finite(vy_, "VectorField y");
}

VectorField VectorField::from_function(
    const Grid2D& grid, const std::function<std::pair<double, double>(double, double)>& f) {
    std::vector<double> vx(grid.size());
    std::vector<double> vy(grid.size());
    for (std::size_t iy = 0; iy < grid.n(); ++iy) {
        for (std::size_t ix = 0; ix < grid.n(); ++ix) {
            const auto [a, b] = f(grid.coord(ix), grid.coord(iy));
            vx[grid.index(ix, iy)] = a;
            vy[grid.index(ix, iy)] = b;
        }
    }
    return VectorField(grid, std::move(vx), std::move(vy));
}

ComplexField::ComplexField(const Grid2D& grid) : grid_(grid), values_(grid.size()) {}

ComplexField::ComplexField(const Grid2D& grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
    require_count(values_.size(), grid_, "ComplexField");
    require_finite(values_, "ComplexField");
}

ComplexField ComplexField::from_function(const Grid2D& grid,
                                         const std::function<Complex(double, double)>& f) {
    std::vector<Complex> v(grid.size());
    for (std::size_t iy = 0; iy < grid.n(); ++iy) {
        for (std::size_t ix = 0; ix < grid.n(); ++ix) {
            v[grid.index(ix, iy)] = f(grid.coord(ix), grid.coord(iy));
        }
    }
    return ComplexField(grid, std::move(v));
}

ComplexField ComplexField::from_real(const ScalarField& f) {
    std::vector<Complex> v(f.values().begin(), f.values().end());
    return ComplexField(f.grid(), std::move(v));
}

ScalarField ComplexField::real_part() const {
    std::vector<double> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), [](Complex c) { return c.real(); });
    return ScalarField(grid_, std::move(v));
}

ScalarField ComplexField::imag_part() const {
    std::vector<double> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), [](Complex c) { return c.imag(); });
    return ScalarField(grid_, std::move(v));
}

// ---------------------------------------------------------------------------

namespace {

template <typename Op>
ScalarField zip(const ScalarField& a, const ScalarField& b, const char* what, Op op) {
    require_same_grid(a.grid(), b.grid(), what);
    std::vector<double> v(a.grid().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i], b[i]);
    return ScalarField(a.grid(), std::move(v));
}

template <typename Op>
VectorField zip(const VectorField& a, const VectorField& b, const char* what, Op op) {
    require_same_grid(a.grid(), b.grid(), what);
    std::vector<double> vx(a.grid().size());
    std::vector<double> vy(a.grid().size());
    for (std::size_t i = 0; i < vx.size(); ++i) {
        vx[i] = op(a.x()[i], b.x()[i]);
        vy[i] = op(a.y()[i], b.y()[i]);
    }
    return VectorField(a.grid(), std::move(vx), std::move(vy));
}

template <typename Op>
ComplexField zip(const ComplexField& a, const ComplexField& b, const char* what, Op op) {
    require_same_grid(a.grid(), b.grid(), what);
    std::vector<Complex> v(a.grid().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i], b[i]);
    return ComplexField(a.grid(), std::move(v));
}

} // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, "scalar +", std::plus<>{});
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, "scalar -", std::minus<>{});
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, "scalar *", std::multiplies<>{});
}
ScalarField operator*(double s, const ScalarField& a) {
    std::vector<double> v(a.values().begin(), a.values().end());
    for (double& x : v) x *= s;
    return ScalarField(a.grid(), std::move(v));
}

VectorField operator+(const VectorField& a, const VectorField& b) {
    return zip(a, b, "vector +", std::plus<>{});
}
VectorField operator-(const VectorField& a, const VectorField& b) {
    return zip(a, b, "vector -", std::minus<>{});
}
VectorField operator*(double s, const VectorField& a) {
    std::vector<double> vx(a.x().begin(), a.x().end());
    std::vector<double> vy(a.y().begin(), a.y().end());
    for (double& x : vx) x *= s;
    for (double& y : vy) y *= s;
    return VectorField(a.grid(), std::move(vx), std::move(vy));
}
VectorField operator*(const ScalarField& f, const VectorField& v) {
    require_same_grid(f.grid(), v.grid(), "scalar * vector");
    std::vector<double> vx(f.grid().size());
    std::vector<double> vy(f.grid().size());
    for (std::size_t i = 0; i < vx.size(); ++i) {
        vx[i] = f[i] * v.x()[i];
        vy[i] = f[i] * v.y()[i];
    }
    return VectorField(f.grid(), std::move(vx), std::move(vy));
}

ComplexField operator+(const ComplexField& a, const ComplexField& b) {
    return zip(a, b, "complex +", std::plus<>{});
}
ComplexField operator-(const ComplexField& a, const ComplexField& b) {
    return zip(a, b, "complex -", std::minus<>{});
}
ComplexField operator*(Complex s, const ComplexField& a) {
    std::vector<Complex> v(a.values().begin(), a.values().end());
    for (Complex& x : v) x *= s;
    return ComplexField(a.grid(), std::move(v));
}
ComplexField operator*(const ScalarField& f, const ComplexField& psi) {
    require_same_grid(f.grid(), psi.grid(), "scalar * complex");
    std::vector<Complex> v(f.grid().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i] * psi[i];
    return ComplexField(f.grid(), std::move(v));
}

ScalarField dot(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid(), b.grid(), "dot");
    std::vector<double> v(a.grid().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.x()[i] * b.x()[i] + a.y()[i] * b.y()[i];
    return ScalarField(a.grid(), std::move(v));
}

ScalarField norm_squared(const VectorField& v) { return dot(v, v); }

ScalarField modulus_squared(const ComplexField& psi) {
    std::vector<double> v(psi.grid().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::norm(psi[i]);
    return ScalarField(psi.grid(), std::move(v));
}

ComplexField with_phase(const ComplexField& psi, const ScalarField& phase) {
    require_same_grid(psi.grid(), phase.grid(), "with_phase");
    std::vector<Complex> v(psi.grid().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = psi[i] * std::polar(1.0, phase[i]);
    return ComplexField(psi.grid(), std::move(v));
}

// ---------------------------------------------------------------------------

double integrate(const ScalarField& f) {
    const Grid2D& g = f.grid();
    double total = 0.0;
    for (std::size_t iy = 0; iy < g.n(); ++iy) {
        double row = 0.0;
        for (std::size_t ix = 0; ix < g.n(); ++ix) {
            const double w = (ix == 0 || ix + 1 == g.n()) ? 0.5 : 1.0;
            row += w * f.at(ix, iy);
        }
        const double wy = (iy == 0 || iy + 1 == g.n()) ? 0.5 : 1.0;
        total += wy * row;
    }
    return total * g.spacing() * g.spacing();
}

Complex inner(const ComplexField& u, const ComplexField& v) {
    require_same_grid(u.grid(), v.grid(), "inner");
    const Grid2D& g = u.grid();
    Complex total{};
    for (std::size_t iy = 0; iy < g.n(); ++iy) {
        Complex row{};
        for (std::size_t ix = 0; ix < g.n(); ++ix) {
            const std::size_t i = g.index(ix, iy);
            const double w = (ix == 0 || ix + 1 == g.n()) ? 0.5 : 1.0;
            row += w * std::conj(u[i]) * v[i];
        }
        const double wy = (iy == 0 || iy + 1 == g.n()) ? 0.5 : 1.0;
        total += wy * row;
    }
    return total * (g.spacing() * g.spacing());
}

double norm(const ComplexField& psi) { return std::sqrt(integrate(modulus_squared(psi))); }

double l2_norm(const ScalarField& f) { return std::sqrt(integrate(f * f)); }

double l2_norm(const VectorField& v) { return std::sqrt(integrate(norm_squared(v))); }

ComplexField normalized(const ComplexField& psi) {
    const double nrm = norm(psi);
    if (!(nrm > 0.0)) throw std::invalid_argument("normalized: zero field");
    return Complex(1.0 / nrm) * psi;
}

// ---------------------------------------------------------------------------

std::size_t stencil_reach(StencilOrder order) noexcept { return half_width(order); }

ScalarField partial_x(const ScalarField& f, StencilOrder order) {
    return ScalarField(f.grid(), differentiate(f.grid(), f.values(), Axis::x, order, false));
}
ScalarField partial_y(const ScalarField& f, StencilOrder order) {
    return ScalarField(f.grid(), differentiate(f.grid(), f.values(), Axis::y, order, false));
}
ComplexField partial_x(const ComplexField& f, StencilOrder order) {
    return ComplexField(f.grid(), differentiate(f.grid(), f.values(), Axis::x, order, false));
}
ComplexField partial_y(const ComplexField& f, StencilOrder order) {
    return ComplexField(f.grid(), differentiate(f.grid(), f.values(), Axis::y, order, false));
}

VectorField gradient(const ScalarField& f, StencilOrder order) {
    return VectorField(f.grid(), differentiate(f.grid(), f.values(), Axis::x, order, false),
                       differentiate(f.grid(), f.values(), Axis::y, order, false));
}

ScalarField divergence(const VectorField& v, StencilOrder order) {
    auto dx = differentiate(v.grid(), v.x(), Axis::x, order, false);
    const auto dy = differentiate(v.grid(), v.y(), Axis::y, order, false);
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dy[i];
    return ScalarField(v.grid(), std::move(dx));
}

ScalarField curl_z(const VectorField& v, StencilOrder order) {
    auto dxvy = differentiate(v.grid(), v.y(), Axis::x, order, false);
    const auto dyvx = differentiate(v.grid(), v.x(), Axis::y, order, false);
    for (std::size_t i = 0; i < dxvy.size(); ++i) dxvy[i] -= dyvx[i];
    return ScalarField(v.grid(), std::move(dxvy));
}

ScalarField laplacian(const ScalarField& f, StencilOrder order) {
    auto xx = differentiate(f.grid(), f.values(), Axis::x, order, true);
    const auto yy = differentiate(f.grid(), f.values(), Axis::y, order, true);
    for (std::size_t i = 0; i < xx.size(); ++i) xx[i] += yy[i];
    return ScalarField(f.grid(), std::move(xx));
}

ComplexField laplacian(const ComplexField& f, StencilOrder order) {
    auto xx = differentiate(f.grid(), f.values(), Axis::x, order, true);
    const auto yy = differentiate(f.grid(), f.values(), Axis::y, order, true);
    for (std::size_t i = 0; i < xx.size(); ++i) xx[i] += yy[i];
    return ComplexField(f.grid(), std::move(xx));
}

} // namespace cdft
