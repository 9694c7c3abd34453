#pragma once

#include "cdft/grid.hpp"

#include <string>

namespace cdft {

/// Scalar potential V and vector potential A defining H(V, A).
struct PotentialPair {
    ScalarField V;
    VectorField A;
    std::string label;

    PotentialPair(ScalarField v, VectorField a, std::string lbl = {});

    [[nodiscard]] const Grid2D& grid() const noexcept { return V.grid(); }
};

/// V = 0, A = 0 on the grid.
PotentialPair free_potentials(const Grid2D& grid);

/**
 * Matrix-free magnetic Schrodinger operator
 *
 *   H psi = -Lap psi - i [div(A psi) + A . grad psi] + (|A|^2 + V) psi
 *
 * with the five-point Laplacian and second-order central first differences.
 * Dirichlet truncation: values on the outer ring of nodes are treated as zero
 * on input and set to zero on output, which makes the operator exactly
 * Hermitian in the quadrature inner product.
 */
class Hamiltonian {
public:
    explicit Hamiltonian(PotentialPair potentials);

    [[nodiscard]] ComplexField apply(const ComplexField& psi) const;
    [[nodiscard]] const Grid2D& grid() const noexcept { return pair_.grid(); }
    [[nodiscard]] const PotentialPair& potentials() const noexcept { return pair_; }
    /// Gershgorin bound on the spectral radius.
    [[nodiscard]] double norm_estimate() const noexcept { return norm_estimate_; }

private:
    PotentialPair pair_;
    std::vector<double> diagonal_; // |A|^2 + V
    double norm_estimate_{0.0};
};

Hamiltonian hamiltonian(const PotentialPair& p);

/// Projects a field onto the Dirichlet subspace (zeroes the outer ring).
ComplexField dirichlet_projection(const ComplexField& psi);

struct ExpectationValue {
    double value{0.0};
    double imag{0.0}; // diagnostic; round-off for Hermitian H
};

/// Unnormalized form <psi, H psi>.
Complex quadratic_form(const Hamiltonian& H, const ComplexField& psi);

/// <psi, H psi> for normalized psi; throws std::invalid_argument if
/// |integrate(|psi|^2) - 1| > 1e-8.
ExpectationValue expectation(const Hamiltonian& H, const ComplexField& psi);

/// <psi, -Lap psi> with the same Dirichlet discretization.
double kinetic_free_expectation(const ComplexField& psi);

} // namespace cdft
