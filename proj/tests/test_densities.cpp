#include "cdft/densities.hpp"
#include "cdft/eigensolve.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

using namespace cdft;

namespace {

ComplexField gaussian(const Grid2D& g, double alpha) {
    return normalized(ComplexField::from_function(g, [alpha](double x, double y) {
        return Complex(std::exp(-0.5 * alpha * (x * x + y * y)), 0.0);
    }));
}

VectorField symmetric(const Grid2D& g, double B) {
    return VectorField::from_function(
        g, [B](double x, double y) { return std::pair{-0.5 * B * y, 0.5 * B * x}; });
}

double max_abs(const ScalarField& f) {
    return std::max(std::abs(f.max()), std::abs(f.min()));
}

double max_abs(const VectorField& v) {
    return std::max(max_abs(v.x_component()), max_abs(v.y_component()));
}

} // namespace

TEST_CASE("particle density") {
    const Grid2D g = make_grid(8.0, 257);
    const ComplexField psi0 = gaussian(g, 1.0);
    const ScalarField rho = particle_density(psi0);
    const ScalarField analytic = ScalarField::from_function(
        g, [](double x, double y) { return std::exp(-(x * x + y * y)) / std::numbers::pi; });
    CHECK(max_abs(rho - analytic) <= 1e-12);
    CHECK(std::abs(integrate(rho) - 1.0) <= 1e-6);
    const ScalarField chi = ScalarField::from_function(g, [](double x, double y) { return std::sin(x) * y; });
    CHECK(max_abs(particle_density(with_phase(psi0, chi)) - rho) <= 1e-12);
}

TEST_CASE("paramagnetic current") {
    const Grid2D g = make_grid(8.0, 257);
    const ComplexField psi0 = gaussian(g, 1.0);
    CHECK(max_abs(paramagnetic_current(psi0)) <= 1e-12);

    SUBCASE("plane-wave phase gives k rho") {
        const double k = 0.7;
        const ScalarField phase = ScalarField::from_function(g, [k](double x, double) { return k * x; });
        const ComplexField psi = with_phase(psi0, phase);
        const VectorField jp = paramagnetic_current(psi);
        const VectorField expected = particle_density(psi) * VectorField::from_function(
            g, [k](double, double) { return std::pair{k, 0.0}; });
        CHECK(max_abs(jp - expected) <= g.spacing() * g.spacing());
    }
    SUBCASE("conjugation flips the sign exactly") {
        const ScalarField phase = ScalarField::from_function(g, [](double x, double y) { return 0.3 * x * y; });
        const ComplexField psi = with_phase(psi0, phase);
        std::vector<Complex> conj(psi.values().begin(), psi.values().end());
        for (auto& c : conj) c = std::conj(c);
        const VectorField a = paramagnetic_current(psi);
        const VectorField b = paramagnetic_current(ComplexField(g, conj));
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(a.x()[i] == -b.x()[i]);
            CHECK(a.y()[i] == -b.y()[i]);
        }
    }
}

TEST_CASE("total current") {
    const Grid2D g = make_grid(8.0, 257);
    const ComplexField psi0 = gaussian(g, 1.0);
    const VectorField A = symmetric(g, -1.0);
    const VectorField j0 = total_current(psi0, A);
    CHECK(max_abs(j0 - particle_density(psi0) * A) <= 1e-12);
    CHECK(max_abs(total_current(psi0, VectorField(g))) == 0.0);

    SUBCASE("linear in A at fixed psi") {
        const VectorField dA = VectorField::from_function(
            g, [](double x, double y) { return std::pair{std::cos(y), x * 0.2}; });
        const ScalarField phase = ScalarField::from_function(g, [](double x, double) { return 0.4 * x; });
        const ComplexField psi = with_phase(psi0, phase);
        const VectorField diff = total_current(psi, A + dA) - total_current(psi, A);
        CHECK(max_abs(diff - particle_density(psi) * dA) <= 1e-15);
    }
    CHECK_THROWS_AS(total_current(psi0, VectorField(make_grid(8.0, 129))), GridMismatch);
}

TEST_CASE("gauge invariance of (rho, j)") {
    const Grid2D g = make_grid(8.0, 257);
    const ComplexField psi0 = gaussian(g, 1.0);
    const VectorField A = symmetric(g, -1.0);
    const std::vector<std::pair<std::function<double(double, double)>,
                                std::function<std::pair<double, double>(double, double)>>>
        gauges = {
            {[](double x, double y) { return 0.5 * x + 0.3 * y; },
             [](double, double) { return std::pair{0.5, 0.3}; }},
            {[](double x, double y) { return 0.2 * x * y; },
             [](double x, double y) { return std::pair{0.2 * y, 0.2 * x}; }},
            {[](double x, double y) { return std::sin(0.5 * x) * std::cos(0.3 * y); },
             [](double x, double y) {
                 return std::pair{0.5 * std::cos(0.5 * x) * std::cos(0.3 * y),
                                  -0.3 * std::sin(0.5 * x) * std::sin(0.3 * y)};
             }},
        };
    const DensityPair ref = densities_of(psi0, A);
    for (const auto& [chi, grad] : gauges) {
        const ScalarField minus_chi = -1.0 * ScalarField::from_function(g, chi);
        const DensityPair t = densities_of(with_phase(psi0, minus_chi),
                                           A + VectorField::from_function(g, grad));
        CHECK(l2_norm(t.rho() - ref.rho()) <= 1e-14);
        CHECK(l2_norm(t.j() - ref.j()) <= 1e-5);
        // second-order stencils only reach O(h^2)
        const VectorField j2 = total_current(with_phase(psi0, minus_chi),
                                             A + VectorField::from_function(g, grad),
                                             StencilOrder::second);
        CHECK(l2_norm(j2 - ref.j()) <= g.spacing() * g.spacing());
    }
}

TEST_CASE("continuity residual") {
    const Grid2D g = make_grid(8.0, 257);
    const ComplexField psi0 = gaussian(g, 1.0);
    CHECK(continuity_residual(total_current(psi0, symmetric(g, -1.0))) <= 1e-6);
    CHECK(continuity_residual(total_current(psi0, symmetric(g, -0.5))) <= 1e-6);
    const VectorField non_solenoidal = gradient(
        ScalarField::from_function(g, [](double x, double y) { return std::exp(-0.1 * (x * x + y * y)); }));
    CHECK(continuity_residual(non_solenoidal) > 1e-2);
    const VectorField uniform =
        VectorField::from_function(g, [](double, double) { return std::pair{1.0, 0.0}; });
    CHECK(continuity_residual(uniform) <= 1e-12);
}

TEST_CASE("eigenvector currents are solenoidal up to the operator's h^2 error") {
    // The discrete eigenvector conserves the five-point current, not the
    // continuum one, so the residual tracks h^2 and not the solver tolerance.
    std::vector<double> res;
    for (std::size_t n : {65, 129}) {
        const Grid2D g = make_grid(8.0, n);
        const VectorField A = symmetric(g, -1.0);
        const ScalarField V =
            ScalarField::from_function(g, [](double x, double y) { return 0.75 * (x * x + y * y); });
        const Hamiltonian H(PotentialPair(V, A));
        const auto residual = [&](double tol) {
            return continuity_residual(total_current(lowest_eigenpairs(H, 1, tol, 900, 3).eigenvectors[0], A));
        };
        const double loose = residual(1e-7);
        const double tight = residual(1e-10);
        CHECK(std::abs(loose - tight) <= 1e-3 * tight);
        res.push_back(tight);
    }
    CHECK(res[0] / res[1] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("DensityPair invariants") {
    const Grid2D g = make_grid(8.0, 65);
    const ScalarField rho = particle_density(gaussian(g, 1.0));
    SUBCASE("round-off negatives are clamped") {
        std::vector<double> v(rho.values().begin(), rho.values().end());
        v[0] = -5e-13;
        const DensityPair d(ScalarField(g, v), VectorField(g), "clamp");
        CHECK(d.rho().min() == 0.0);
        CHECK(d.provenance() == "clamp");
    }
    SUBCASE("real negatives are rejected") {
        std::vector<double> v(rho.values().begin(), rho.values().end());
        v[0] = -1e-3;
        CHECK_THROWS_AS(DensityPair(ScalarField(g, v), VectorField(g)), DensityError);
    }
    SUBCASE("normalization") {
        CHECK_THROWS_AS(DensityPair(1.01 * rho, VectorField(g)), DensityError);
        CHECK_NOTHROW(DensityPair((1.0 + 5e-7) * rho, VectorField(g)));
    }
    SUBCASE("provenance from densities_of") {
        CHECK(densities_of(gaussian(g, 1.0), VectorField(g), "psi0, A=0").provenance() == "psi0, A=0");
    }
}
