#include "cdft/operators.hpp"

#include <algorithm>
#include <cmath>

namespace cdft {

namespace {
constexpr double kNormalizationTol = 1e-8;

void require_normalized(const ComplexField& psi) {
    const double n2 = integrate(modulus_squared(psi));
    if (std::abs(n2 - 1.0) > kNormalizationTol) {
        throw std::invalid_argument("expectation: state is not normalized (norm^2 = " +
                                    std::to_string(n2) + ")");
    }
}
} // namespace

PotentialPair::PotentialPair(ScalarField v, VectorField a, std::string lbl)
    : V(std::move(v)), A(std::move(a)), label(std::move(lbl)) {
    require_same_grid(V.grid(), A.grid(), "PotentialPair");
}

PotentialPair free_potentials(const Grid2D& grid) {
    return PotentialPair(ScalarField(grid), VectorField(grid), "free");
}

Hamiltonian::Hamiltonian(PotentialPair potentials) : pair_(std::move(potentials)) {
    const Grid2D& g = pair_.grid();
    const double h = g.spacing();
    diagonal_.resize(g.size());
    double amax = 0.0;
    double dmax = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double ax = pair_.A.x()[i];
        const double ay = pair_.A.y()[i];
        diagonal_[i] = ax * ax + ay * ay + pair_.V[i];
        amax = std::max({amax, std::abs(ax), std::abs(ay)});
        dmax = std::max(dmax, std::abs(diagonal_[i]));
    }
    // Row sum: 8/h^2 from the Laplacian, at most 4 * 2*amax/(2h) from the
    // magnetic coupling, plus the diagonal.
    norm_estimate_ = 8.0 / (h * h) + 4.0 * amax / h + dmax;
}

ComplexField Hamiltonian::apply(const ComplexField& psi) const {
    const Grid2D& g = grid();
    require_same_grid(g, psi.grid(), "Hamiltonian::apply");
    const std::size_t n = g.n();
    const double h = g.spacing();
    const double inv_h2 = 1.0 / (h * h);
    const double inv_2h = 0.5 / h;
    const auto ax = pair_.A.x();
    const auto ay = pair_.A.y();
    const auto in = psi.values();
    const Complex minus_i(0.0, -1.0);

    auto value = [&](std::size_t ix, std::size_t iy) -> Complex {
        return g.on_boundary(ix, iy) ? Complex{} : in[g.index(ix, iy)];
    };

    std::vector<Complex> out(g.size());
    for (std::size_t iy = 1; iy + 1 < n; ++iy) {
        for (std::size_t ix = 1; ix + 1 < n; ++ix) {
            const std::size_t c = g.index(ix, iy);
            const std::size_t e = c + 1;
            const std::size_t w = c - 1;
            const std::size_t no = c + n;
            const std::size_t so = c - n;
            const Complex pc = in[c];
            const Complex pe = value(ix + 1, iy);
            const Complex pw = value(ix - 1, iy);
            const Complex pn = value(ix, iy + 1);
            const Complex ps = value(ix, iy - 1);

            const Complex kinetic = (4.0 * pc - pe - pw - pn - ps) * inv_h2;
            // div(A psi) + A . grad psi, both with central differences.
            const Complex transport =
                ((ax[e] * pe - ax[w] * pw) + ax[c] * (pe - pw) +
                 (ay[no] * pn - ay[so] * ps) + ay[c] * (pn - ps)) *
                inv_2h;
            out[c] = kinetic + minus_i * transport + diagonal_[c] * pc;
        }
    }
    return ComplexField(g, std::move(out));
}

Hamiltonian hamiltonian(const PotentialPair& p) { return Hamiltonian(p); }

ComplexField dirichlet_projection(const ComplexField& psi) {
    const Grid2D& g = psi.grid();
    std::vector<Complex> v(psi.values().begin(), psi.values().end());
    for (std::size_t iy = 0; iy < g.n(); ++iy) {
        for (std::size_t ix = 0; ix < g.n(); ++ix) {
            if (g.on_boundary(ix, iy)) v[g.index(ix, iy)] = Complex{};
        }
    }
    return ComplexField(g, std::move(v));
}

Complex quadratic_form(const Hamiltonian& H, const ComplexField& psi) {
    return inner(psi, H.apply(psi));
}

ExpectationValue expectation(const Hamiltonian& H, const ComplexField& psi) {
    require_normalized(psi);
    const Complex q = quadratic_form(H, psi);
    return {q.real(), q.imag()};
}

double kinetic_free_expectation(const ComplexField& psi) {
    const Hamiltonian free(free_potentials(psi.grid()));
    return expectation(free, psi).value;
}

} // namespace cdft
