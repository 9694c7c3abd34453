#include "cdft/functionals.hpp"

#include <cmath>
#include <vector>

namespace cdft {

namespace {

double masked_l2(const Grid2D& g, const TrustedRegion* region, auto&& value_sq) {
    double sum = 0.0;
    for (std::size_t iy = 0; iy < g.n(); ++iy) {
        for (std::size_t ix = 0; ix < g.n(); ++ix) {
            const std::size_t i = g.index(ix, iy);
            if (region != nullptr && !region->contains(i)) continue;
            sum += g.weight(ix, iy) * value_sq(i);
        }
    }
    return std::sqrt(sum);
}

Hamiltonian free_hamiltonian(const Grid2D& g) { return Hamiltonian(free_potentials(g)); }

double e_tilde_from(const RepresentingState& rep, const DensityPair& d, const PotentialPair& p0) {
    const VectorField& A0 = p0.A;
    return f_hk(rep) + 2.0 * integrate(dot(d.j(), A0)) +
           integrate(d.rho() * (p0.V - norm_squared(A0)));
}

double correction_from(const DensityPair& d, const PotentialPair& p0, const RepresentingState& rep,
                       const BracketResult& bracket) {
    if (bracket.zero) return 0.0;
    return -2.0 * integrate(d.rho() * dot(p0.A, rep.calA - p0.A));
}

} // namespace

BracketResult classify_bracket(const VectorField& calA, const VectorField& A0, double tol,
                               const TrustedRegion* region) {
    require_same_grid(calA.grid(), A0.grid(), "classify_bracket");
    const Grid2D& g = calA.grid();
    const VectorField D = calA - A0;
    const ScalarField c = curl_z(D);
    const double cn = masked_l2(g, region, [&](std::size_t i) { return c[i] * c[i]; });
    const double dn = masked_l2(g, region, [&](std::size_t i) {
        return D.x()[i] * D.x()[i] + D.y()[i] * D.y()[i];
    });
    BracketResult r;
    r.curl_norm = cn;
    r.threshold = tol * (1.0 + dn);
    r.zero = cn <= r.threshold;
    r.near_threshold = cn >= 0.1 * r.threshold && cn <= 10.0 * r.threshold;
    return r;
}

bool bracket_is_zero(const VectorField& calA, const VectorField& A0, double tol) {
    return classify_bracket(calA, A0, tol).zero;
}

TrustedRegion bracket_region(const RepresentingState& rep) {
    return rep.region.eroded(stencil_reach(kDefaultStencil));
}

double f_hk(const RepresentingState& rep) {
    return quadratic_form(free_hamiltonian(rep.psi.grid()), rep.psi).real();
}

double f_hk(const DensityPair& d) { return f_hk(representing_state(d)); }

double e_tilde(const DensityPair& d, const PotentialPair& p0) {
    require_same_grid(d.grid(), p0.grid(), "e_tilde");
    return e_tilde_from(representing_state(d), d, p0);
}

double correction_term(const DensityPair& d, const PotentialPair& p0) {
    require_same_grid(d.grid(), p0.grid(), "correction_term");
    const RepresentingState rep = representing_state(d);
    const TrustedRegion region = bracket_region(rep);
    return correction_from(d, p0, rep, classify_bracket(rep.calA, p0.A, kBracketTol, &region));
}

ScalarField integrate_gradient(const VectorField& D) {
    const Grid2D& g = D.grid();
    const std::size_t n = g.n();
    const double h = g.spacing();
    const std::size_t c = n / 2;
    std::vector<double> chi(g.size(), 0.0);
    const auto dx = D.x();
    const auto dy = D.y();
    for (std::size_t ix = c + 1; ix < n; ++ix) {
        chi[g.index(ix, c)] = chi[g.index(ix - 1, c)] +
                              0.5 * h * (dx[g.index(ix, c)] + dx[g.index(ix - 1, c)]);
    }
    for (std::size_t ix = c; ix-- > 0;) {
        chi[g.index(ix, c)] = chi[g.index(ix + 1, c)] -
                              0.5 * h * (dx[g.index(ix, c)] + dx[g.index(ix + 1, c)]);
    }
    for (std::size_t ix = 0; ix < n; ++ix) {
        for (std::size_t iy = c + 1; iy < n; ++iy) {
            chi[g.index(ix, iy)] = chi[g.index(ix, iy - 1)] +
                                   0.5 * h * (dy[g.index(ix, iy)] + dy[g.index(ix, iy - 1)]);
        }
        for (std::size_t iy = c; iy-- > 0;) {
            chi[g.index(ix, iy)] = chi[g.index(ix, iy + 1)] -
                                   0.5 * h * (dy[g.index(ix, iy)] + dy[g.index(ix, iy + 1)]);
        }
    }
    return ScalarField(g, std::move(chi));
}

FunctionalReport e_full(const DensityPair& d, const PotentialPair& p0, const SolverOptions& opt) {
    require_same_grid(d.grid(), p0.grid(), "e_full");
    return e_full(d, p0, membership_check(d, opt));
}

FunctionalReport e_full(const DensityPair& d, const PotentialPair& p0,
                        const MembershipResult& membership) {
    require_same_grid(d.grid(), p0.grid(), "e_full");
    const RepresentingState& rep = membership.representation;
    const TrustedRegion region = bracket_region(rep);
    const BracketResult bracket = classify_bracket(rep.calA, p0.A, kBracketTol, &region);

    FunctionalReport r;
    r.f_hk = f_hk(rep);
    r.e_tilde = e_tilde_from(rep, d, p0);
    r.correction = correction_from(d, p0, rep, bracket);
    r.e_full = r.e_tilde + r.correction;
    r.bracket_zero = bracket.zero;
    r.bracket_near_threshold = bracket.near_threshold;
    r.curl_norm = bracket.curl_norm;
    r.curl_threshold = bracket.threshold;
    r.in_A1 = membership.in_A1;
    r.provenance = d.provenance();

    // The representing state lives in the gauge of calA; move it to the gauge
    // of A0 when the two differ by a gradient.
    const bool certified = membership.in_A1 && membership.check.has_value();
    ComplexField state = certified ? membership.check->ground_state : normalized(rep.psi);
    r.cross_check_state = certified ? "certified" : "canonical";
    if (bracket.zero) state = with_phase(state, integrate_gradient(rep.calA - p0.A));
    const Hamiltonian H(p0);
    r.cross_check = quadratic_form(H, state).real() / integrate(modulus_squared(state));
    r.discrepancy = std::abs(r.e_full - r.cross_check);
    return r;
}

nlohmann::json to_json(const FunctionalReport& r) {
    nlohmann::json j{
        {"f_hk", r.f_hk},
        {"e_tilde", r.e_tilde},
        {"correction", r.correction},
        {"e_full", r.e_full},
        {"bracket_zero", r.bracket_zero},
        {"bracket_near_threshold", r.bracket_near_threshold},
        {"curl_norm", r.curl_norm},
        {"curl_threshold", r.curl_threshold},
        {"cross_check", r.cross_check},
        {"cross_check_state", r.cross_check_state},
        {"discrepancy", r.discrepancy},
        {"provenance", r.provenance},
    };
    j["in_A1"] = r.in_A1 ? nlohmann::json(*r.in_A1) : nlohmann::json(nullptr);
    return j;
}

} // namespace cdft
