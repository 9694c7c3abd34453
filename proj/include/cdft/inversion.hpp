#pragma once

#include "cdft/densities.hpp"
#include "cdft/eigensolve.hpp"
#include "cdft/operators.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdft {

/// Harmonic trap of width alpha in a uniform field B (symmetric gauge).
struct FockDarwinSpec {
    double alpha{1.0};
    double B{0.0};
};

struct FockDarwinFamily {
    ComplexField psi0; // normalized Gaussian exp(-alpha r^2 / 2)
    PotentialPair pair; // V = (alpha^2 - B^2/4) r^2, A = (B/2)(-y, x)
    double e0{0.0};     // 2 alpha
};

/// Throws std::invalid_argument unless alpha > 0 and |B| < 2 alpha.
FockDarwinFamily fock_darwin_family(const Grid2D& grid, const FockDarwinSpec& spec);

/// Symmetric gauge (B/2)(-y, x).
VectorField symmetric_gauge(const Grid2D& grid, double B);

/// r^2 = x^2 + y^2 at every node.
ScalarField radius_squared(const Grid2D& grid);

inline constexpr double kTrustedRelative = 1e-12;

/**
 * Nodes off the outer ring where rho >= 1e-12 * max(rho). Quotients such as
 * j/rho and H psi / psi are only formed here.
 */
class TrustedRegion {
public:
    explicit TrustedRegion(const ScalarField& rho, double relative = kTrustedRelative);

    [[nodiscard]] const Grid2D& grid() const noexcept { return grid_; }
    [[nodiscard]] bool contains(std::size_t i) const noexcept { return mask_[i] != 0; }
    [[nodiscard]] const std::vector<char>& mask() const noexcept { return mask_; }
    [[nodiscard]] std::size_t count() const noexcept { return count_; }
    [[nodiscard]] double fraction() const noexcept;
    /// Drops every node within `layers` steps (max-norm) of an untrusted node.
    [[nodiscard]] TrustedRegion eroded(std::size_t layers) const;

    /// Replaces values outside the region by the value of the nearest
    /// trusted node (breadth-first over the 4-neighbour graph).
    [[nodiscard]] ScalarField extend(const ScalarField& f) const;
    [[nodiscard]] VectorField extend(const VectorField& v) const;

private:
    TrustedRegion(Grid2D grid, std::vector<char> mask);
    [[nodiscard]] std::vector<std::size_t> nearest_source() const;

    Grid2D grid_;
    std::vector<char> mask_;
    std::size_t count_{0};
};

/// (rho, j) has too little trusted support to define psi(rho, j).
class RepresentationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fewer trusted nodes than this fraction of the grid is a representation failure.
inline constexpr double kMinTrustedFraction = 0.01;

struct RepresentingState {
    ComplexField psi;             // sqrt(rho), real and non-negative
    VectorField calA;             // j / rho, extended outside the trusted region
    std::optional<double> energy; // set once a potential has been inverted
    double rho_residual{0.0};     // max | |psi|^2 - rho |
    double current_residual{0.0}; // L2 of j_p + |psi|^2 calA - j on the trusted region
    TrustedRegion region;
};

/// Canonical-gauge representative: psi = sqrt(rho), calA = j / rho.
RepresentingState representing_state(const DensityPair& d);

/// A state that is not an eigenstate of H(V, A) for any real V.
class InconsistentInversion : public std::runtime_error {
public:
    InconsistentInversion(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    double residual_;
};

struct InversionResult {
    ScalarField V;
    double energy{0.0};
    /// || Im(conj(psi) H(0,A) psi) / |psi| || over the trusted region, divided by ||psi||.
    double imag_residual{0.0};
    double threshold{0.0};
    [[nodiscard]] bool consistent() const noexcept { return imag_residual <= threshold; }
};

/// h^2 * max(1, |e|): the size of the imaginary residual that the second-order
/// Hamiltonian leaves on an exact continuum eigenstate.
double default_inversion_threshold(const Grid2D& grid, double energy);

/**
 * Solves H(V, A) psi = e psi for V: V = e - Re(H(0, A) psi / psi) on the
 * trusted region of |psi|^2, nearest-value extension elsewhere. Without an
 * energy, e is the Rayleigh quotient <psi, H(0, A) psi>, which fixes the
 * additive constant by integrate(|psi|^2 V) = 0.
 *
 * Never throws on inconsistency; see invert_scalar_potential.
 */
InversionResult compute_inversion(const ComplexField& psi, const VectorField& A,
                                  std::optional<double> energy = std::nullopt,
                                  std::optional<double> threshold = std::nullopt);

/// compute_inversion, throwing InconsistentInversion when the residual
/// exceeds the threshold.
InversionResult invert_scalar_potential(const ComplexField& psi, const VectorField& A,
                                        std::optional<double> energy = std::nullopt,
                                        std::optional<double> threshold = std::nullopt);

struct MembershipResult {
    bool in_A1{false};
    PotentialPair pair;   // (V inverted, calA)
    double e0{0.0};       // certified lowest eigenvalue of H(pair); NaN if not solved
    InversionResult inversion;
    RepresentingState representation;
    std::optional<GroundStateCheck> check; // absent when the inversion is inconsistent
    std::string reason;                    // empty when in_A1
};

/**
 * Decides whether (rho, j) is the density pair of a non-degenerate ground
 * state: canonical representative, scalar-potential inversion, then
 * certification by the eigensolver.
 */
MembershipResult membership_check(const DensityPair& d, const SolverOptions& opt = {});

} // namespace cdft
