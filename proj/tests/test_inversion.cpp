#include "cdft/inversion.hpp"

#include <doctest.h>

#include <cmath>

using namespace cdft;

namespace {

double max_on(const TrustedRegion& region, const ScalarField& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.grid().size(); ++i)
        if (region.contains(i)) m = std::max(m, std::abs(f[i]));
    return m;
}

double max_on(const TrustedRegion& region, const VectorField& v) {
    return std::max(max_on(region, v.x_component()), max_on(region, v.y_component()));
}

ScalarField harmonic(const Grid2D& g, double k) { return k * radius_squared(g); }

} // namespace

TEST_CASE("fock_darwin_family") {
    const Grid2D g = make_grid(8.0, 257);
    SUBCASE("B = -1") {
        const FockDarwinFamily f = fock_darwin_family(g, {.alpha = 1.0, .B = -1.0});
        CHECK(f.e0 == 2.0);
        CHECK(l2_norm(f.pair.V - harmonic(g, 0.75)) <= 1e-14);
        CHECK(norm(f.psi0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(verify_ground_state(f.psi0, f.pair).is_ground);
    }
    SUBCASE("B = -0.5 shares psi0") {
        const FockDarwinFamily a = fock_darwin_family(g, {.alpha = 1.0, .B = -1.0});
        const FockDarwinFamily b = fock_darwin_family(g, {.alpha = 1.0, .B = -0.5});
        CHECK(l2_norm(b.pair.V - harmonic(g, 0.9375)) <= 1e-14);
        CHECK(b.e0 == 2.0);
        CHECK(std::abs(inner(a.psi0, b.psi0) - Complex(1.0, 0.0)) <= 1e-14);
    }
    SUBCASE("B = 0 is the plain oscillator") {
        const FockDarwinFamily f = fock_darwin_family(g, {.alpha = 1.0, .B = 0.0});
        CHECK(l2_norm(f.pair.V - radius_squared(g)) <= 1e-14);
        CHECK(l2_norm(f.pair.A) == 0.0);
    }
    CHECK_THROWS_AS(fock_darwin_family(g, {.alpha = 1.0, .B = -2.0}), std::invalid_argument);
    CHECK_THROWS_AS(fock_darwin_family(g, {.alpha = 0.0, .B = 0.0}), std::invalid_argument);
}

TEST_CASE("shared ground state of two fields") {
    const Grid2D g = make_grid(8.0, 257);
    const FockDarwinFamily a = fock_darwin_family(g, {.alpha = 1.0, .B = -1.0});
    const FockDarwinFamily b = fock_darwin_family(g, {.alpha = 1.0, .B = -0.5});
    const GroundStateCheck ca = verify_ground_state(a.psi0, a.pair);
    const GroundStateCheck cb = verify_ground_state(a.psi0, b.pair);
    CHECK(ca.is_ground);
    CHECK(cb.is_ground);
    CHECK(std::abs(inner(ca.ground_state, cb.ground_state)) >= 1.0 - 1e-4);
}

TEST_CASE("trusted region") {
    const Grid2D g = make_grid(8.0, 129);
    const ScalarField rho = particle_density(fock_darwin_family(g, {.alpha = 1.0, .B = 0.0}).psi0);
    const TrustedRegion r(rho);
    const double floor = 1e-12 * rho.max();
    for (std::size_t iy = 0; iy < g.n(); ++iy) {
        for (std::size_t ix = 0; ix < g.n(); ++ix) {
            const std::size_t i = g.index(ix, iy);
            CHECK(r.contains(i) == (!g.on_boundary(ix, iy) && rho[i] >= floor));
        }
    }
    SUBCASE("nearest-value extension") {
        const ScalarField f = ScalarField::from_function(g, [](double x, double y) { return x + 3 * y; });
        const ScalarField e = r.extend(f);
        const std::size_t c = g.n() / 2;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (r.contains(i)) CHECK(e[i] == f[i]);
        // walking out along the +x axis the value freezes at the last trusted node
        std::size_t last = c;
        while (r.contains(g.index(last + 1, c))) ++last;
        for (std::size_t ix = last; ix < g.n(); ++ix) CHECK(e.at(ix, c) == f.at(last, c));
    }
    SUBCASE("erosion") {
        const TrustedRegion e1 = r.eroded(1);
        const TrustedRegion e3 = r.eroded(3);
        CHECK(e1.count() < r.count());
        CHECK(e3.count() < e1.count());
        for (std::size_t i = 0; i < g.size(); ++i)
            if (e3.contains(i)) CHECK(r.contains(i));
    }
}

TEST_CASE("invert_scalar_potential") {
    const Grid2D g = make_grid(8.0, 257);
    const FockDarwinFamily f = fock_darwin_family(g, {.alpha = 1.0, .B = -1.0});
    const TrustedRegion region(particle_density(f.psi0));

    // Inverting the five-point operator gives the potential for which psi0 is
    // an exact discrete eigenstate: the continuum potential plus
    // h^2 (x^4 + y^4)/12 + ..., which is 0.2 near the edge of the trusted
    // region. Checked against the closed form of that discrete inversion and
    // for second-order convergence to the continuum potential.
    const auto discrete_inverse = [](const Grid2D& gg, double e, double B) {
        const double h = gg.spacing();
        const double c = std::exp(-0.5 * h * h);
        return ScalarField::from_function(gg, [=](double x, double y) {
            const double lap = (2 * c * std::cosh(x * h) - 2 + 2 * c * std::cosh(y * h) - 2) / (h * h);
            return e + lap - 0.25 * B * B * (x * x + y * y);
        });
    };
    const auto core_error = [](std::size_t n, double B, double k) {
        const Grid2D gg = make_grid(8.0, n);
        const FockDarwinFamily ff = fock_darwin_family(gg, {.alpha = 1.0, .B = B});
        const InversionResult r = invert_scalar_potential(ff.psi0, ff.pair.A, 2.0);
        double m = 0.0;
        for (std::size_t iy = 0; iy < n; ++iy)
            for (std::size_t ix = 0; ix < n; ++ix) {
                const double x = gg.coord(ix);
                const double y = gg.coord(iy);
                if (x * x + y * y <= 9.0)
                    m = std::max(m, std::abs(r.V.at(ix, iy) - k * (x * x + y * y)));
            }
        return m;
    };
    SUBCASE("symmetric gauge recovers 0.75 r^2") {
        const InversionResult r = invert_scalar_potential(f.psi0, f.pair.A, 2.0);
        CHECK(r.consistent());
        CHECK(max_on(region, r.V - discrete_inverse(g, 2.0, -1.0)) <= 1e-9);
        const double c257 = core_error(257, -1.0, 0.75);
        CHECK(c257 / core_error(513, -1.0, 0.75) == doctest::Approx(4.0).epsilon(0.05));
        CHECK(core_error(1025, -1.0, 0.75) <= 1e-3);
    }
    SUBCASE("A = 0 recovers r^2") {
        const InversionResult r = invert_scalar_potential(f.psi0, VectorField(g), 2.0);
        CHECK(max_on(region, r.V - discrete_inverse(g, 2.0, 0.0)) <= 1e-9);
        CHECK(r.imag_residual == 0.0);
        CHECK(core_error(257, 0.0, 1.0) / core_error(513, 0.0, 1.0) == doctest::Approx(4.0).epsilon(0.05));
    }
    SUBCASE("constant A is inconsistent") {
        const VectorField A = VectorField::from_function(g, [](double, double) { return std::pair{1.0, 0.0}; });
        CHECK_THROWS_AS(invert_scalar_potential(f.psi0, A, 2.0), InconsistentInversion);
        CHECK(compute_inversion(f.psi0, A, 2.0).imag_residual > 1.0);
    }
    SUBCASE("the residual of the symmetric gauge is a discretization effect") {
        const auto residual = [](std::size_t n) {
            const Grid2D gg = make_grid(8.0, n);
            const FockDarwinFamily ff = fock_darwin_family(gg, {.alpha = 1.0, .B = -1.0});
            return compute_inversion(ff.psi0, ff.pair.A).imag_residual;
        };
        const double r257 = residual(257);
        CHECK(r257 <= default_inversion_threshold(g, 2.0));
        CHECK(r257 / residual(513) == doctest::Approx(4.0).epsilon(0.05));
    }
    SUBCASE("Rayleigh-quotient energy fixes the constant") {
        const InversionResult r = compute_inversion(f.psi0, f.pair.A);
        CHECK(std::abs(integrate(particle_density(f.psi0) * r.V)) <= 1e-10);
        // same potential up to that constant
        const InversionResult r2 = compute_inversion(f.psi0, f.pair.A, 2.0);
        const double shift = r2.energy - r.energy;
        CHECK(max_on(region, r2.V - r.V - ScalarField(g, shift)) <= 1e-9);
    }
    SUBCASE("inverted pair reproduces the eigenvalue equation") {
        const InversionResult r = compute_inversion(f.psi0, f.pair.A);
        const Hamiltonian H(PotentialPair(r.V, f.pair.A));
        const ComplexField res = H.apply(f.psi0) - Complex(r.energy, 0.0) * f.psi0;
        double real2 = 0.0;
        double full2 = 0.0;
        for (std::size_t iy = 0; iy < g.n(); ++iy) {
            for (std::size_t ix = 0; ix < g.n(); ++ix) {
                const std::size_t i = g.index(ix, iy);
                if (!region.contains(i)) continue;
                real2 += g.weight(ix, iy) * res[i].real() * res[i].real();
                full2 += g.weight(ix, iy) * std::norm(res[i]);
            }
        }
        CHECK(std::sqrt(real2) <= 1e-6);
        // the imaginary remainder is O(h^2)
        CHECK(std::sqrt(full2) <= g.spacing() * g.spacing());
        // with A = 0 the whole residual vanishes
        const InversionResult r0 = compute_inversion(f.psi0, VectorField(g));
        const ComplexField res0 = Hamiltonian(PotentialPair(r0.V, VectorField(g))).apply(f.psi0) -
                                  Complex(r0.energy, 0.0) * f.psi0;
        double z2 = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (region.contains(i)) z2 += g.spacing() * g.spacing() * std::norm(res0[i]);
        CHECK(std::sqrt(z2) <= 1e-6);
    }
}

TEST_CASE("representing_state") {
    const Grid2D g = make_grid(8.0, 257);
    const FockDarwinFamily f = fock_darwin_family(g, {.alpha = 1.0, .B = -1.0});
    const ScalarField rho0 = particle_density(f.psi0);
    const VectorField j0 = total_current(f.psi0, f.pair.A);

    SUBCASE("(rho0, j0) gives back A and psi0") {
        const RepresentingState s = representing_state(DensityPair(rho0, j0));
        CHECK(max_on(s.region, s.calA - f.pair.A) <= 1e-6);
        CHECK(norm(s.psi - f.psi0) <= 1e-6);
        CHECK(s.rho_residual <= 1e-15);
        CHECK(s.current_residual <= 1e-12);
        CHECK(s.region.fraction() > kMinTrustedFraction);
    }
    SUBCASE("j_eps at eps = 0.25 is the Btilde gauge") {
        const VectorField e = VectorField::from_function(g, [](double x, double y) { return std::pair{-y, x}; });
        const DensityPair d(rho0, j0 + 0.25 * (rho0 * e));
        const RepresentingState s = representing_state(d);
        CHECK(max_on(s.region, s.calA - symmetric_gauge(g, -0.5)) <= 1e-6);
    }
    SUBCASE("zero current") {
        const RepresentingState s = representing_state(DensityPair(rho0, VectorField(g)));
        CHECK(l2_norm(s.calA) == 0.0);
        CHECK(norm(s.psi - f.psi0) <= 1e-6);
    }
    SUBCASE("rho concentrated on a few nodes cannot be represented") {
        std::vector<double> v(g.size(), 0.0);
        const std::size_t c = g.index(g.n() / 2, g.n() / 2);
        v[c] = 1.0 / (g.spacing() * g.spacing());
        CHECK_THROWS_AS(representing_state(DensityPair(ScalarField(g, v), VectorField(g))),
                        RepresentationError);
    }
}

TEST_CASE("membership_check") {
    const Grid2D g = make_grid(8.0, 257);
    const FockDarwinFamily f = fock_darwin_family(g, {.alpha = 1.0, .B = -1.0});
    const ScalarField rho0 = particle_density(f.psi0);
    const VectorField j0 = total_current(f.psi0, f.pair.A);
    const VectorField e = VectorField::from_function(g, [](double x, double y) { return std::pair{-y, x}; });

    SUBCASE("ground-state pair") {
        const MembershipResult m = membership_check(DensityPair(rho0, j0));
        CHECK(m.in_A1);
        CHECK(m.reason.empty());
        CHECK(m.check.has_value());
    }
    SUBCASE("eps family members") {
        for (double eps : {0.1, 0.25}) {
            const MembershipResult m = membership_check(DensityPair(rho0, j0 + eps * (rho0 * e)));
            CHECK(m.in_A1);
            // certified energy of the inverted pair: e0 minus the mean of V
            const double w0sq = 1.0 - std::pow(-1.0 + 2 * eps, 2) / 4.0;
            CHECK(std::abs(m.e0 - (2.0 - w0sq)) <= 2e-3);
        }
    }
    SUBCASE("gradient 'vector potential' with non-zero current") {
        const VectorField radial = VectorField::from_function(g, [](double x, double y) { return std::pair{x, y}; });
        const MembershipResult m = membership_check(DensityPair(rho0, rho0 * radial));
        CHECK_FALSE(m.in_A1);
        CHECK_FALSE(m.check.has_value());
        CHECK(m.inversion.imag_residual > 1.0);
    }
}
