#pragma once

#include "cdft/functionals.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace cdft {

/// Functional tolerance at the default grid.
inline constexpr double kFunctionalTol = 5e-3;
inline constexpr double kFlatnessTol = 1e-8;

/// One density rho0 shared by the ground states of two uniform fields.
struct Family {
    double alpha{1.0};
    double B{-1.0};
    double Btilde{-0.5};
    ComplexField psi0;
    PotentialPair p0;      // field B: the fixed external potentials
    PotentialPair p_tilde; // field Btilde
    GroundStateCheck cert0;
    GroundStateCheck cert_tilde;
    double e0{0.0}; // lowest eigenvalue of H(p0)
    ScalarField rho0;
    VectorField j0;
    double eps_max{0.0};
};

/// Rejected family parameters or a failed ground-state certification.
class FamilyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Checks B < 0, 0 < |Btilde| < |B|, |B| < 2 alpha. Throws FamilyError.
void check_family_parameters(double alpha, double B, double Btilde);

/// Builds and certifies both Hamiltonians; throws FamilyError when either
/// certification fails.
Family build_family(const Grid2D& grid, double alpha, double B, double Btilde,
                    const SolverOptions& opt = {});

/// j0 + eps rho0 (-y, x).
VectorField make_j_eps(const ScalarField& rho0, const VectorField& j0, double eps);

/// `count` evenly spaced values eps_max/count, ..., eps_max.
std::vector<double> default_eps_values(double eps_max, std::size_t count = 5);

struct SweepRow {
    double eps{0.0};
    double f_hk{0.0};
    double e_tilde{0.0};
    double e_full{0.0};
    double correction{0.0};
    bool in_A1{false};
    double discrepancy{0.0};
    double cross_check{0.0};
    bool bracket_zero{false};
    bool bracket_near_threshold{false};
    std::string membership_note;
};

struct Verdicts {
    bool e_tilde_strictly_decreasing{false};
    bool e_full_constant_at_e0{false};
    bool f_hk_constant{false};
    [[nodiscard]] bool all() const noexcept {
        return e_tilde_strictly_decreasing && e_full_constant_at_e0 && f_hk_constant;
    }
};

struct CounterexampleReport {
    double alpha{0.0};
    double B{0.0};
    double Btilde{0.0};
    double eps_max{0.0};
    double e0{0.0};
    std::size_t n{0};
    double L{0.0};
    /// integrate(rho0 r^2): sets the expected E~ slope B * m2 per unit eps.
    double second_moment{0.0};
    double e_tilde_base{0.0}; // E~ at eps = 0
    std::vector<SweepRow> rows;
    Verdicts verdicts;
    bool all_in_A1{false};
    double max_discrepancy{0.0};
    double f_hk_spread{0.0};
    double max_e_full_deviation{0.0};
    double max_e_tilde_step_error{0.0};
    /// True when every row is certified and every verdict holds.
    [[nodiscard]] bool conforming() const noexcept { return all_in_A1 && verdicts.all(); }
};

/**
 * Evaluates every functional for (rho0, j_eps) against the fixed potentials
 * of field B. Each eps must lie in [0, eps_max]; rows come back sorted.
 */
CounterexampleReport epsilon_sweep(const Family& family, std::vector<double> eps_values,
                                   const SolverOptions& opt = {});

struct RefinementStudy {
    CounterexampleReport coarse;
    CounterexampleReport fine; // n_fine = 2 n - 1, so h halves
    double ratio{0.0};         // worst discrepancy, coarse over fine
    double order{0.0};         // log2(ratio)
};

RefinementStudy refinement_study(double alpha, double B, double Btilde, double L, std::size_t n,
                                 const std::vector<double>& eps_values,
                                 const SolverOptions& opt = {});

nlohmann::json to_json(const CounterexampleReport& r);
nlohmann::json to_json(const RefinementStudy& s);

inline constexpr const char* kSweepCsvHeader =
    "eps,f_hk,e_tilde,e_full,correction,in_A1,discrepancy";
std::string sweep_csv(const CounterexampleReport& r);

/// Fixed-width verdict table for the terminal.
std::string verdict_table(const CounterexampleReport& r);

} // namespace cdft
