#pragma once

#include "cdft/inversion.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace cdft {

inline constexpr double kBracketTol = 1e-6;

struct BracketResult {
    bool zero{false};
    /// Curl norm within a factor 10 of the threshold on either side.
    bool near_threshold{false};
    double curl_norm{0.0};
    double threshold{0.0};
};

/**
 * Gauge bracket test: D = calA - A0 is a gradient iff curl_z(D) vanishes
 * (the rectangle is simply connected). Zero iff
 * ||curl_z D|| <= tol * (1 + ||D||), both L2 norms taken over `region` when
 * given and over the whole grid otherwise.
 */
BracketResult classify_bracket(const VectorField& calA, const VectorField& A0,
                               double tol = kBracketTol,
                               const TrustedRegion* region = nullptr);

bool bracket_is_zero(const VectorField& calA, const VectorField& A0, double tol = kBracketTol);

/// Region on which the bracket of a representing state is decided: the
/// trusted region minus the nodes whose curl stencil reaches outside it.
TrustedRegion bracket_region(const RepresentingState& rep);

/// <psi(rho,j), -Lap psi(rho,j)>; in the canonical gauge this is the
/// Dirichlet form of sqrt(rho).
double f_hk(const DensityPair& d);
double f_hk(const RepresentingState& rep);

/// F_HK + 2 int j.A0 + int rho (V0 - |A0|^2).
double e_tilde(const DensityPair& d, const PotentialPair& p0);

/// 0 if the bracket vanishes, else -2 int rho A0.(calA - A0).
double correction_term(const DensityPair& d, const PotentialPair& p0);

struct FunctionalReport {
    double f_hk{0.0};
    double e_tilde{0.0};
    double correction{0.0};
    double e_full{0.0};
    bool bracket_zero{false};
    bool bracket_near_threshold{false};
    double curl_norm{0.0};
    double curl_threshold{0.0};
    /// <psi, H(V0, A0) psi> for the representing state, in the gauge of A0.
    double cross_check{0.0};
    double discrepancy{0.0};
    /// "certified" when psi is the eigensolver ground state of the inverted
    /// pair, "canonical" when it is sqrt(rho) itself.
    std::string cross_check_state;
    std::optional<bool> in_A1;
    std::string provenance;
};

/**
 * E = E~ + correction, with the identity check against the direct
 * expectation of H(V0, A0). Runs membership_check to obtain the certified
 * representing state.
 */
FunctionalReport e_full(const DensityPair& d, const PotentialPair& p0,
                        const SolverOptions& opt = {});

/// As above, reusing a finished membership check of d.
FunctionalReport e_full(const DensityPair& d, const PotentialPair& p0,
                        const MembershipResult& membership);

/// Phase chi with grad chi = D, integrated by the trapezoid rule along the
/// centre row and then along every column. Exact for gradients of
/// quadratics up to round-off.
ScalarField integrate_gradient(const VectorField& D);

nlohmann::json to_json(const FunctionalReport& r);

} // namespace cdft
