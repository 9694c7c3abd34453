#include "cdft/densities.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

namespace cdft {

DensityPair::DensityPair(ScalarField rho, VectorField j, std::string provenance)
    : rho_(std::move(rho)), j_(std::move(j)), provenance_(std::move(provenance)) {
    require_same_grid(rho_.grid(), j_.grid(), "DensityPair");
    std::vector<double> clamped(rho_.values().begin(), rho_.values().end());
    for (std::size_t i = 0; i < clamped.size(); ++i) {
        if (clamped[i] < -kNegativeRhoTol) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "DensityPair: rho[%zu] = %.6g is below -1e-12", i, clamped[i]);
            throw DensityError(buf);
        }
        if (clamped[i] < 0.0) clamped[i] = 0.0;
    }
    rho_ = ScalarField(rho_.grid(), std::move(clamped));
    const double total = integrate(rho_);
    if (std::abs(total - 1.0) > kNormalizationTol) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "DensityPair: integral of rho is %.10g, expected 1", total);
        throw DensityError(buf);
    }
}

ScalarField particle_density(const ComplexField& psi) { return modulus_squared(psi); }

VectorField paramagnetic_current(const ComplexField& psi, StencilOrder order) {
    const ComplexField dx = partial_x(psi, order);
    const ComplexField dy = partial_y(psi, order);
    const std::size_t size = psi.grid().size();
    std::vector<double> jx(size);
    std::vector<double> jy(size);
    for (std::size_t i = 0; i < size; ++i) {
        const Complex c = std::conj(psi[i]);
        jx[i] = (c * dx[i]).imag();
        jy[i] = (c * dy[i]).imag();
    }
    return VectorField(psi.grid(), std::move(jx), std::move(jy));
}

VectorField total_current(const ComplexField& psi, const VectorField& A, StencilOrder order) {
    require_same_grid(psi.grid(), A.grid(), "total_current");
    return paramagnetic_current(psi, order) + particle_density(psi) * A;
}

double continuity_residual(const VectorField& j, StencilOrder order) {
    const ScalarField d = divergence(j, order);
    const Grid2D& g = j.grid();
    const double h2 = g.spacing() * g.spacing();
    double sum = 0.0;
    for (std::size_t iy = 1; iy + 1 < g.n(); ++iy) {
        for (std::size_t ix = 1; ix + 1 < g.n(); ++ix) {
            const double v = d.at(ix, iy);
            sum += v * v;
        }
    }
    return std::sqrt(sum * h2);
}

DensityPair densities_of(const ComplexField& psi, const VectorField& A, std::string provenance) {
    return DensityPair(particle_density(psi), total_current(psi, A), std::move(provenance));
}

} // namespace cdft
