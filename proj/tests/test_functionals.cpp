#include "cdft/functionals.hpp"

#include <doctest.h>

#include <cmath>

using namespace cdft;

namespace {

struct Setup {
    Grid2D g = make_grid(8.0, 257);
    FockDarwinFamily fam = fock_darwin_family(g, {.alpha = 1.0, .B = -1.0});
    ScalarField rho0 = particle_density(fam.psi0);
    VectorField j0 = total_current(fam.psi0, fam.pair.A);
    VectorField ez_cross_x =
        VectorField::from_function(g, [](double x, double y) { return std::pair{-y, x}; });

    [[nodiscard]] DensityPair pair_eps(double eps) const {
        return DensityPair(rho0, j0 + eps * (rho0 * ez_cross_x), "eps test");
    }
};

const Setup& setup() {
    static const Setup s;
    return s;
}

} // namespace

TEST_CASE("f_hk") {
    const Setup& s = setup();
    const double f0 = f_hk(DensityPair(s.rho0, s.j0));
    CHECK(std::abs(f0 - 1.0) <= 2e-3);
    for (double eps : {0.05, 0.25}) CHECK(std::abs(f_hk(s.pair_eps(eps)) - f0) <= 1e-10);

    SUBCASE("uniform density: Dirichlet form by direct summation over edges") {
        const Grid2D g = make_grid(8.0, 65);
        std::vector<double> v(g.size(), 0.0);
        for (std::size_t iy = 1; iy + 1 < g.n(); ++iy)
            for (std::size_t ix = 1; ix + 1 < g.n(); ++ix) v[g.index(ix, iy)] = 1.0;
        const ScalarField ones(g, v);
        const ScalarField rho = (1.0 / integrate(ones)) * ones;
        double edges = 0.0;
        for (std::size_t iy = 0; iy < g.n(); ++iy) {
            for (std::size_t ix = 0; ix < g.n(); ++ix) {
                const double a = std::sqrt(rho.at(ix, iy));
                if (ix + 1 < g.n()) edges += std::pow(a - std::sqrt(rho.at(ix + 1, iy)), 2);
                if (iy + 1 < g.n()) edges += std::pow(a - std::sqrt(rho.at(ix, iy + 1)), 2);
            }
        }
        const double f = f_hk(DensityPair(rho, VectorField(g)));
        CHECK(f > 0.0);
        CHECK(std::abs(f - edges) <= 1e-8);
    }
}

TEST_CASE("e_tilde") {
    const Setup& s = setup();
    CHECK(std::abs(e_tilde(DensityPair(s.rho0, s.j0), s.fam.pair) - 2.0) <= 5e-3);
    CHECK(std::abs(e_tilde(s.pair_eps(0.25), s.fam.pair) - 1.75) <= 5e-3);

    SUBCASE("A0 = 0 reduces to F_HK + int rho V0") {
        const PotentialPair p(radius_squared(s.g), VectorField(s.g));
        const DensityPair d(s.rho0, s.j0);
        CHECK(std::abs(e_tilde(d, p) - (f_hk(d) + integrate(s.rho0 * p.V))) <= 1e-14);
    }
    SUBCASE("no variational floor: the eps = 0.25 pair lies 0.25 below e0") {
        CHECK(e_tilde(s.pair_eps(0.25), s.fam.pair) < 2.0 - 0.1);
    }
}

TEST_CASE("scale sanity of the E~ deficit") {
    const Setup& s = setup();
    for (double scale : {0.5, 1.0}) {
        const double B = -1.0 * scale;
        const double Bt = -0.5 * scale;
        const FockDarwinFamily f = fock_darwin_family(s.g, {.alpha = 1.0, .B = B});
        const VectorField j0 = total_current(f.psi0, f.pair.A);
        const double eps = 0.5 * (Bt - B);
        const DensityPair base(s.rho0, j0);
        const DensityPair moved(s.rho0, j0 + eps * (s.rho0 * s.ez_cross_x));
        const double deficit = e_tilde(moved, f.pair) - e_tilde(base, f.pair);
        CHECK(std::abs(deficit - eps * B / 1.0) <= 5e-3);
    }
}

TEST_CASE("bracket_is_zero on analytic fields") {
    const Setup& s = setup();
    const VectorField A0 = s.fam.pair.A;
    const VectorField grad_xy =
        VectorField::from_function(s.g, [](double x, double y) { return std::pair{y, x}; });
    CHECK(bracket_is_zero(A0 + grad_xy, A0));
    CHECK_FALSE(bracket_is_zero(symmetric_gauge(s.g, -0.5), A0));
    CHECK(bracket_is_zero(A0, A0));
    const BracketResult r = classify_bracket(symmetric_gauge(s.g, -0.5), A0);
    CHECK(r.curl_norm == doctest::Approx(0.5 * 16.0).epsilon(1e-10)); // |curl| * sqrt(area)
    CHECK_FALSE(r.near_threshold);
}

TEST_CASE("bracket near-threshold flag") {
    const Grid2D g = make_grid(1.0, 33);
    const VectorField A0(g);
    // curl of delta (-y, x)/2 is delta; L2 norm over the square is 2 delta
    const auto field = [&g](double delta) {
        return VectorField::from_function(
            g, [delta](double x, double y) { return std::pair{-0.5 * delta * y, 0.5 * delta * x}; });
    };
    const BracketResult above = classify_bracket(field(1e-6), A0);
    CHECK_FALSE(above.zero);
    CHECK(above.near_threshold);
    const BracketResult below = classify_bracket(field(2e-7), A0);
    CHECK(below.zero);
    CHECK(below.near_threshold);
    CHECK_FALSE(classify_bracket(field(1e-3), A0).near_threshold);
    CHECK_FALSE(classify_bracket(field(0.0), A0).near_threshold);
}

TEST_CASE("correction_term") {
    const Setup& s = setup();
    CHECK(std::abs(correction_term(s.pair_eps(0.25), s.fam.pair) - 0.25) <= 5e-3);
    CHECK(correction_term(DensityPair(s.rho0, s.j0), s.fam.pair) == 0.0);

    SUBCASE("gauge-equivalent A0 takes the zero branch whatever chi is") {
        const std::vector<VectorField> grads = {
            VectorField::from_function(s.g, [](double, double) { return std::pair{0.5, 0.3}; }),
            VectorField::from_function(s.g, [](double x, double y) { return std::pair{0.2 * y, 0.2 * x}; }),
            VectorField::from_function(s.g, [](double x, double y) {
                return std::pair{0.5 * std::cos(0.5 * x) * std::cos(0.3 * y),
                                 -0.3 * std::sin(0.5 * x) * std::sin(0.3 * y)};
            }),
        };
        for (const VectorField& gc : grads) {
            const PotentialPair shifted(s.fam.pair.V, s.fam.pair.A + gc);
            CHECK(correction_term(DensityPair(s.rho0, s.j0), shifted) == 0.0);
            // the non-zero branch does not move either when calA gains a gradient
            const DensityPair moved(s.rho0, s.pair_eps(0.25).j() + s.rho0 * gc);
            CHECK(std::abs(correction_term(moved, s.fam.pair) -
                           correction_term(s.pair_eps(0.25), s.fam.pair)) <= 1e-8);
        }
    }
}

TEST_CASE("integrate_gradient") {
    const Grid2D g = make_grid(3.0, 61);
    const VectorField D = VectorField::from_function(
        g, [](double x, double y) { return std::pair{y + 2 * x, x - 0.5}; });
    const ScalarField chi = integrate_gradient(D);
    const std::size_t c = g.n() / 2;
    for (std::size_t iy = 0; iy < g.n(); iy += 7) {
        for (std::size_t ix = 0; ix < g.n(); ix += 5) {
            const double x = g.coord(ix);
            const double y = g.coord(iy);
            const double xc = g.coord(c);
            const double exact = (x * y + x * x - 0.5 * y) - (xc * xc + xc * xc - 0.5 * xc);
            CHECK(chi.at(ix, iy) == doctest::Approx(exact).epsilon(1e-12));
        }
    }
}

TEST_CASE("e_full") {
    const Setup& s = setup();
    SUBCASE("ground-state pair") {
        const FunctionalReport r = e_full(DensityPair(s.rho0, s.j0), s.fam.pair);
        CHECK(std::abs(r.e_full - 2.0) <= 5e-3);
        CHECK(r.bracket_zero);
        CHECK(r.e_full == r.e_tilde + r.correction);
        CHECK(r.discrepancy <= 5e-3);
        CHECK(r.cross_check_state == "certified");
        CHECK(r.in_A1.value_or(false));
    }
    SUBCASE("eps = 0.25 pair reaches the same energy") {
        const FunctionalReport r = e_full(s.pair_eps(0.25), s.fam.pair);
        CHECK(std::abs(r.e_full - 2.0) <= 5e-3);
        CHECK_FALSE(r.bracket_zero);
        CHECK(r.discrepancy <= 5e-3);
        CHECK(std::abs(r.correction - 0.25) <= 5e-3);
        const auto j = to_json(r);
        for (const char* key : {"f_hk", "e_tilde", "correction", "e_full", "bracket_zero",
                                "cross_check", "discrepancy", "provenance"})
            CHECK(j.contains(key));
        CHECK(j["provenance"] == "eps test");
    }
    SUBCASE("A0 = 0 and j = 0: E equals E~ exactly") {
        const PotentialPair p(radius_squared(s.g), VectorField(s.g));
        const FunctionalReport r = e_full(DensityPair(s.rho0, VectorField(s.g)), p);
        CHECK(r.e_full == r.e_tilde);
        CHECK(r.correction == 0.0);
        CHECK(std::abs(r.e_full - 2.0) <= 5e-3);
    }
}
