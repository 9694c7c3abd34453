#pragma once

#include "cdft/grid.hpp"

#include <stdexcept>
#include <string>

namespace cdft {

/// A density pair that violates rho >= -1e-12 or the unit normalization.
class DensityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr double kNegativeRhoTol = 1e-12;
inline constexpr double kNormalizationTol = 1e-6;

/**
 * Particle density and total current density of a one-electron state.
 *
 * Construction checks the invariants and clamps round-off negatives of rho
 * (down to -1e-12) to zero, so j/rho is well posed wherever rho > 0.
 */
class DensityPair {
public:
    DensityPair(ScalarField rho, VectorField j, std::string provenance = {});

    [[nodiscard]] const ScalarField& rho() const noexcept { return rho_; }
    [[nodiscard]] const VectorField& j() const noexcept { return j_; }
    [[nodiscard]] const std::string& provenance() const noexcept { return provenance_; }
    [[nodiscard]] const Grid2D& grid() const noexcept { return rho_.grid(); }

private:
    ScalarField rho_;
    VectorField j_;
    std::string provenance_;
};

/// |psi|^2.
ScalarField particle_density(const ComplexField& psi);

/// Im(conj(psi) grad psi).
VectorField paramagnetic_current(const ComplexField& psi,
                                 StencilOrder order = kDefaultStencil);

/// j_p + rho A.
VectorField total_current(const ComplexField& psi, const VectorField& A,
                          StencilOrder order = kDefaultStencil);

/// L2 norm of div j over the nodes off the outer ring.
double continuity_residual(const VectorField& j, StencilOrder order = kDefaultStencil);

/// (|psi|^2, j_p + |psi|^2 A) with a provenance string.
DensityPair densities_of(const ComplexField& psi, const VectorField& A,
                         std::string provenance = {});

} // namespace cdft
