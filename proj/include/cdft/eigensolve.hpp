#pragma once

#include "cdft/operators.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cdft {

struct SolverOptions {
    double tol = 1e-8;            // residual bound ||H phi - e phi|| per pair
    std::size_t max_iter = 500;
    std::uint64_t seed = 20250611;
};

struct EigenResult {
    std::vector<double> eigenvalues;        // ascending
    std::vector<ComplexField> eigenvectors; // quadrature-orthonormal
    std::vector<double> residuals;          // measured by direct application
    std::size_t iterations{0};

    /// eigenvalues[1] - eigenvalues[0]; NaN when fewer than two pairs.
    [[nodiscard]] double gap() const;
};

/// Raised when the residual bound is not met within max_iter.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> best_residuals)
        : std::runtime_error(what), best_residuals_(std::move(best_residuals)) {}
    [[nodiscard]] const std::vector<double>& best_residuals() const noexcept {
        return best_residuals_;
    }

private:
    std::vector<double> best_residuals_;
};

inline constexpr std::size_t kMaxEigenpairs = 8;

/**
 * Lowest k eigenpairs of a Hermitian operator by block LOBPCG.
 *
 * The search basis [X, W, P] is re-orthonormalized from scratch every
 * iteration (two passes of modified Gram-Schmidt) before the Rayleigh-Ritz
 * step. Residuals are preconditioned with the exact inverse of the shifted
 * Dirichlet five-point Laplacian, applied through a type-I discrete sine
 * transform. Start vectors come from a seeded generator, so the result is
 * reproducible for a fixed (H, k, tol, seed).
 */
EigenResult lowest_eigenpairs(const Hamiltonian& H, std::size_t k, double tol,
                              std::size_t max_iter, std::uint64_t seed);

inline EigenResult lowest_eigenpairs(const Hamiltonian& H, std::size_t k,
                                     const SolverOptions& opt) {
    return lowest_eigenpairs(H, k, opt.tol, opt.max_iter, opt.seed);
}

struct GroundStateCheck {
    bool is_ground{false};
    bool possibly_degenerate{false};
    double energy{0.0};  // Rayleigh quotient of the tested state
    double gap{0.0};
    double overlap{0.0}; // |<psi, phi_0>|
    /// Solver ground state, phase-aligned so that <psi, phi_0> is real positive.
    ComplexField ground_state;
    EigenResult spectrum;
};

inline constexpr double kGroundOverlapTol = 1e-4;

/// Certifies psi as the non-degenerate ground state of H(p): two lowest
/// pairs are computed; psi must overlap phi_0 to 1 - 1e-4 and the gap must
/// exceed 10*tol, otherwise the result is flagged possibly degenerate.
GroundStateCheck verify_ground_state(const ComplexField& psi, const PotentialPair& p,
                                     const SolverOptions& opt = {});

} // namespace cdft
