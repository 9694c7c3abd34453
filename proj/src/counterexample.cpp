#include "cdft/counterexample.hpp"

#include "cdft/field_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace cdft {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[240];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

} // namespace

void check_family_parameters(double alpha, double B, double Btilde) {
    if (!(alpha > 0.0)) throw FamilyError(fmt("alpha must be positive, got %g", alpha));
    if (!(B < 0.0)) throw FamilyError(fmt("B must be negative, got %g", B));
    if (!(Btilde != 0.0 && std::abs(Btilde) < std::abs(B))) {
        throw FamilyError(fmt("need 0 < |Btilde| < |B|, got Btilde = %g, B = %g", Btilde, B));
    }
    if (!(std::abs(B) < 2.0 * alpha)) {
        throw FamilyError(fmt("need |B| < 2 alpha, got B = %g, alpha = %g", B, alpha));
    }
}

Family build_family(const Grid2D& grid, double alpha, double B, double Btilde,
                    const SolverOptions& opt) {
    check_family_parameters(alpha, B, Btilde);
    FockDarwinFamily fam = fock_darwin_family(grid, {.alpha = alpha, .B = B});
    FockDarwinFamily fam_tilde = fock_darwin_family(grid, {.alpha = alpha, .B = Btilde});
    GroundStateCheck cert0 = verify_ground_state(fam.psi0, fam.pair, opt);
    GroundStateCheck cert_tilde = verify_ground_state(fam.psi0, fam_tilde.pair, opt);
    if (!cert0.is_ground) {
        throw FamilyError(fmt("psi0 is not certified as the ground state for B = %g "
                              "(overlap %.8f, gap %.3e)",
                              B, cert0.overlap, cert0.gap));
    }
    if (!cert_tilde.is_ground) {
        throw FamilyError(fmt("psi0 is not certified as the ground state for Btilde = %g "
                              "(overlap %.8f, gap %.3e)",
                              Btilde, cert_tilde.overlap, cert_tilde.gap));
    }
    const double e0 = cert0.spectrum.eigenvalues[0];
    ScalarField rho0 = particle_density(fam.psi0);
    VectorField j0 = total_current(fam.psi0, fam.pair.A);
    return Family{.alpha = alpha,
                  .B = B,
                  .Btilde = Btilde,
                  .psi0 = std::move(fam.psi0),
                  .p0 = std::move(fam.pair),
                  .p_tilde = std::move(fam_tilde.pair),
                  .cert0 = std::move(cert0),
                  .cert_tilde = std::move(cert_tilde),
                  .e0 = e0,
                  .rho0 = std::move(rho0),
                  .j0 = std::move(j0),
                  .eps_max = 0.5 * (Btilde - B)};
}

VectorField make_j_eps(const ScalarField& rho0, const VectorField& j0, double eps) {
    if (!(eps >= 0.0)) throw std::invalid_argument(fmt("make_j_eps: eps must be >= 0, got %g", eps));
    require_same_grid(rho0.grid(), j0.grid(), "make_j_eps");
    const Grid2D& g = rho0.grid();
    std::vector<double> jx(g.size());
    std::vector<double> jy(g.size());
    for (std::size_t iy = 0; iy < g.n(); ++iy) {
        for (std::size_t ix = 0; ix < g.n(); ++ix) {
            const std::size_t i = g.index(ix, iy);
            jx[i] = j0.x()[i] - eps * rho0[i] * g.coord(iy);
            jy[i] = j0.y()[i] + eps * rho0[i] * g.coord(ix);
        }
    }
    return VectorField(g, std::move(jx), std::move(jy));
}

std::vector<double> default_eps_values(double eps_max, std::size_t count) {
    std::vector<double> out;
    for (std::size_t k = 1; k <= count; ++k) {
        out.push_back(eps_max * static_cast<double>(k) / static_cast<double>(count));
    }
    return out;
}

CounterexampleReport epsilon_sweep(const Family& family, std::vector<double> eps_values,
                                   const SolverOptions& opt) {
    if (eps_values.empty()) throw std::invalid_argument("epsilon_sweep: no eps values");
    for (double e : eps_values) {
        if (!(e >= 0.0 && e <= family.eps_max * (1.0 + 1e-12))) {
            throw std::invalid_argument(
                fmt("epsilon_sweep: eps = %g outside [0, eps_max = %g]", e, family.eps_max));
        }
    }
    std::sort(eps_values.begin(), eps_values.end());

    const Grid2D& g = family.rho0.grid();
    CounterexampleReport rep;
    rep.alpha = family.alpha;
    rep.B = family.B;
    rep.Btilde = family.Btilde;
    rep.eps_max = family.eps_max;
    rep.e0 = family.e0;
    rep.n = g.n();
    rep.L = g.half_extent();
    rep.second_moment = integrate(family.rho0 * radius_squared(g));
    rep.e_tilde_base = e_tilde(DensityPair(family.rho0, family.j0, "rho0, j0"), family.p0);

    for (double eps : eps_values) {
        const DensityPair d(family.rho0, make_j_eps(family.rho0, family.j0, eps),
                            "rho0, j_eps with eps=" + format_g17(eps));
        const MembershipResult m = membership_check(d, opt);
        const FunctionalReport fr = e_full(d, family.p0, m);
        rep.rows.push_back(SweepRow{.eps = eps,
                                    .f_hk = fr.f_hk,
                                    .e_tilde = fr.e_tilde,
                                    .e_full = fr.e_full,
                                    .correction = fr.correction,
                                    .in_A1 = m.in_A1,
                                    .discrepancy = fr.discrepancy,
                                    .cross_check = fr.cross_check,
                                    .bracket_zero = fr.bracket_zero,
                                    .bracket_near_threshold = fr.bracket_near_threshold,
                                    .membership_note = m.reason});
    }

    const auto& rows = rep.rows;
    rep.all_in_A1 = std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.in_A1; });
    double fmin = rows.front().f_hk;
    double fmax = rows.front().f_hk;
    for (const SweepRow& r : rows) {
        fmin = std::min(fmin, r.f_hk);
        fmax = std::max(fmax, r.f_hk);
        rep.max_discrepancy = std::max(rep.max_discrepancy, r.discrepancy);
        rep.max_e_full_deviation = std::max(rep.max_e_full_deviation, std::abs(r.e_full - rep.e0));
        const double predicted = rep.e_tilde_base + r.eps * rep.B * rep.second_moment;
        rep.max_e_tilde_step_error =
            std::max(rep.max_e_tilde_step_error, std::abs(r.e_tilde - predicted));
    }
    rep.f_hk_spread = fmax - fmin;

    bool decreasing = rep.max_e_tilde_step_error <= kFunctionalTol;
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
        const double drop = rows[k].e_tilde - rows[k + 1].e_tilde;
        const double expected =
            (rows[k + 1].eps - rows[k].eps) * std::abs(rep.B) * rep.second_moment;
        if (!(drop > 0.0 && drop >= 0.9 * expected)) decreasing = false;
    }
    rep.verdicts.e_tilde_strictly_decreasing = decreasing;
    rep.verdicts.e_full_constant_at_e0 = rep.max_e_full_deviation <= kFunctionalTol;
    rep.verdicts.f_hk_constant = rep.f_hk_spread <= kFlatnessTol;
    return rep;
}

RefinementStudy refinement_study(double alpha, double B, double Btilde, double L, std::size_t n,
                                 const std::vector<double>& eps_values, const SolverOptions& opt) {
    const Family coarse = build_family(make_grid(L, n), alpha, B, Btilde, opt);
    CounterexampleReport rc = epsilon_sweep(coarse, eps_values, opt);
    const Family fine = build_family(make_grid(L, 2 * n - 1), alpha, B, Btilde, opt);
    CounterexampleReport rf = epsilon_sweep(fine, eps_values, opt);
    const double ratio = rc.max_discrepancy / rf.max_discrepancy;
    return RefinementStudy{.coarse = std::move(rc),
                           .fine = std::move(rf),
                           .ratio = ratio,
                           .order = std::log2(ratio)};
}

nlohmann::json to_json(const CounterexampleReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const SweepRow& row : r.rows) {
        rows.push_back({{"eps", row.eps},
                        {"f_hk", row.f_hk},
                        {"e_tilde", row.e_tilde},
                        {"e_full", row.e_full},
                        {"correction", row.correction},
                        {"in_A1", row.in_A1},
                        {"discrepancy", row.discrepancy},
                        {"cross_check", row.cross_check},
                        {"bracket_zero", row.bracket_zero},
                        {"bracket_near_threshold", row.bracket_near_threshold},
                        {"membership_note", row.membership_note}});
    }
    return {{"alpha", r.alpha},
            {"B", r.B},
            {"Btilde", r.Btilde},
            {"eps_max", r.eps_max},
            {"e0", r.e0},
            {"grid", {{"n", r.n}, {"L", r.L}}},
            {"second_moment", r.second_moment},
            {"e_tilde_base", r.e_tilde_base},
            {"rows", rows},
            {"verdicts",
             {{"e_tilde_strictly_decreasing", r.verdicts.e_tilde_strictly_decreasing},
              {"e_full_constant_at_e0", r.verdicts.e_full_constant_at_e0},
              {"f_hk_constant", r.verdicts.f_hk_constant}}},
            {"all_in_A1", r.all_in_A1},
            {"max_discrepancy", r.max_discrepancy},
            {"f_hk_spread", r.f_hk_spread},
            {"max_e_full_deviation", r.max_e_full_deviation},
            {"max_e_tilde_step_error", r.max_e_tilde_step_error}};
}

nlohmann::json to_json(const RefinementStudy& s) {
    return {{"coarse", to_json(s.coarse)},
            {"fine", to_json(s.fine)},
            {"ratio", s.ratio},
            {"order", s.order}};
}

std::string sweep_csv(const CounterexampleReport& r) {
    std::string out = std::string(kSweepCsvHeader) + "\n";
    for (const SweepRow& row : r.rows) {
        out += format_g17(row.eps) + "," + format_g17(row.f_hk) + "," + format_g17(row.e_tilde) +
               "," + format_g17(row.e_full) + "," + format_g17(row.correction) + "," +
               (row.in_A1 ? "true" : "false") + "," + format_g17(row.discrepancy) + "\n";
    }
    return out;
}

std::string verdict_table(const CounterexampleReport& r) {
    std::ostringstream os;
    char line[200];
    std::snprintf(line, sizeof line,
                  "alpha=%g B=%g Btilde=%g n=%zu L=%g  e0=%.6f  eps_max=%g\n", r.alpha, r.B,
                  r.Btilde, r.n, r.L, r.e0, r.eps_max);
    os << line;
    os << "     eps       F_HK      E~        E         corr      A1  discrepancy\n";
    for (const SweepRow& row : r.rows) {
        std::snprintf(line, sizeof line, "  %7.4f  %8.5f  %8.5f  %8.5f  %8.5f  %s  %.3e\n",
                      row.eps, row.f_hk, row.e_tilde, row.e_full, row.correction,
                      row.in_A1 ? "yes" : "NO ", row.discrepancy);
        os << line;
    }
    const auto mark = [](bool ok) { return ok ? "PASS" : "FAIL"; };
    std::snprintf(line, sizeof line, "  [%s] E~ strictly decreasing (max deviation %.2e)\n",
                  mark(r.verdicts.e_tilde_strictly_decreasing), r.max_e_tilde_step_error);
    os << line;
    std::snprintf(line, sizeof line, "  [%s] E constant at e0 (max |E - e0| %.2e)\n",
                  mark(r.verdicts.e_full_constant_at_e0), r.max_e_full_deviation);
    os << line;
    std::snprintf(line, sizeof line, "  [%s] F_HK constant (spread %.2e)\n",
                  mark(r.verdicts.f_hk_constant), r.f_hk_spread);
    os << line;
    std::snprintf(line, sizeof line, "  [%s] every pair certified in A1\n", mark(r.all_in_A1));
    os << line;
    return os.str();
}

} // namespace cdft
