#include "cdft/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>

namespace cdft {

namespace {

constexpr std::size_t kNoSource = std::numeric_limits<std::size_t>::max();

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[200];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

} // namespace

ScalarField radius_squared(const Grid2D& grid) {
    return ScalarField::from_function(grid, [](double x, double y) { return x * x + y * y; });
}

VectorField symmetric_gauge(const Grid2D& grid, double B) {
    return VectorField::from_function(grid, [B](double x, double y) {
        return std::pair{-0.5 * B * y, 0.5 * B * x};
    });
}

FockDarwinFamily fock_darwin_family(const Grid2D& grid, const FockDarwinSpec& spec) {
    if (!(spec.alpha > 0.0)) {
        throw std::invalid_argument(fmt("fock_darwin_family: alpha must be positive, got %g",
                                        spec.alpha));
    }
    if (!(std::abs(spec.B) < 2.0 * spec.alpha)) {
        throw std::invalid_argument(fmt("fock_darwin_family: need |B| < 2 alpha, got B = %g, "
                                        "alpha = %g",
                                        spec.B, spec.alpha));
    }
    const double a = spec.alpha;
    const ComplexField gauss = ComplexField::from_function(grid, [a](double x, double y) {
        return Complex(std::exp(-0.5 * a * (x * x + y * y)), 0.0);
    });
    const double w0sq = a * a - 0.25 * spec.B * spec.B;
    char label[96];
    std::snprintf(label, sizeof label, "fock-darwin alpha=%.17g B=%.17g", a, spec.B);
    return FockDarwinFamily{
        .psi0 = normalized(gauss),
        .pair = PotentialPair(w0sq * radius_squared(grid), symmetric_gauge(grid, spec.B), label),
        .e0 = 2.0 * a,
    };
}

// ---------------------------------------------------------------------------

TrustedRegion::TrustedRegion(const ScalarField& rho, double relative)
    : grid_(rho.grid()), mask_(rho.grid().size(), 0) {
    const double peak = rho.max();
    if (peak > 0.0) {
        const double floor = relative * peak;
        const std::size_t n = grid_.n();
        for (std::size_t iy = 1; iy + 1 < n; ++iy) {
            for (std::size_t ix = 1; ix + 1 < n; ++ix) {
                const std::size_t i = grid_.index(ix, iy);
                if (rho[i] >= floor && rho[i] > 0.0) {
                    mask_[i] = 1;
                    ++count_;
                }
            }
        }
    }
}

TrustedRegion::TrustedRegion(Grid2D grid, std::vector<char> mask)
    : grid_(std::move(grid)), mask_(std::move(mask)) {
    count_ = static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), char{1}));
}

double TrustedRegion::fraction() const noexcept {
    return static_cast<double>(count_) / static_cast<double>(grid_.size());
}

TrustedRegion TrustedRegion::eroded(std::size_t layers) const {
    const std::size_t n = grid_.n();
    std::vector<char> cur = mask_;
    for (std::size_t step = 0; step < layers; ++step) {
        std::vector<char> next = cur;
        for (std::size_t iy = 0; iy < n; ++iy) {
            for (std::size_t ix = 0; ix < n; ++ix) {
                const std::size_t i = grid_.index(ix, iy);
                if (!cur[i]) continue;
                if (ix == 0 || iy == 0 || ix + 1 == n || iy + 1 == n) {
                    next[i] = 0;
                    continue;
                }
                for (std::size_t jy = iy - 1; jy <= iy + 1 && next[i]; ++jy) {
                    for (std::size_t jx = ix - 1; jx <= ix + 1; ++jx) {
                        if (!cur[grid_.index(jx, jy)]) {
                            next[i] = 0;
                            break;
                        }
                    }
                }
            }
        }
        cur.swap(next);
    }
    return TrustedRegion(grid_, std::move(cur));
}

std::vector<std::size_t> TrustedRegion::nearest_source() const {
    const std::size_t n = grid_.n();
    std::vector<std::size_t> source(grid_.size(), kNoSource);
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (mask_[i]) {
            source[i] = i;
            queue.push_back(i);
        }
    }
    while (!queue.empty()) {
        const std::size_t i = queue.front();
        queue.pop_front();
        const std::size_t ix = i % n;
        const std::size_t iy = i / n;
        const auto visit = [&](std::size_t j) {
            if (source[j] == kNoSource) {
                source[j] = source[i];
                queue.push_back(j);
            }
        };
        if (ix > 0) visit(i - 1);
        if (ix + 1 < n) visit(i + 1);
        if (iy > 0) visit(i - n);
        if (iy + 1 < n) visit(i + n);
    }
    return source;
}

ScalarField TrustedRegion::extend(const ScalarField& f) const {
    require_same_grid(f.grid(), grid_, "TrustedRegion::extend");
    if (count_ == 0) return f;
    const auto src = nearest_source();
    std::vector<double> out(grid_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f[src[i]];
    return ScalarField(grid_, std::move(out));
}

VectorField TrustedRegion::extend(const VectorField& v) const {
    require_same_grid(v.grid(), grid_, "TrustedRegion::extend");
    if (count_ == 0) return v;
    const auto src = nearest_source();
    std::vector<double> ox(grid_.size());
    std::vector<double> oy(grid_.size());
    for (std::size_t i = 0; i < ox.size(); ++i) {
        ox[i] = v.x()[src[i]];
        oy[i] = v.y()[src[i]];
    }
    return VectorField(grid_, std::move(ox), std::move(oy));
}

// ---------------------------------------------------------------------------

RepresentingState representing_state(const DensityPair& d) {
    const Grid2D& g = d.grid();
    const ScalarField& rho = d.rho();
    if (!(rho.max() > 0.0)) throw RepresentationError("representing_state: rho vanishes everywhere");
    TrustedRegion region(rho);
    if (region.fraction() < kMinTrustedFraction) {
        throw RepresentationError(fmt("representing_state: trusted region covers %.3g%% of the "
                                      "grid, below the %.3g%% minimum",
                                      100.0 * region.fraction(), 100.0 * kMinTrustedFraction));
    }

    const std::size_t size = g.size();
    std::vector<Complex> psi(size);
    std::vector<double> ax(size, 0.0);
    std::vector<double> ay(size, 0.0);
    for (std::size_t i = 0; i < size; ++i) {
        psi[i] = Complex(std::sqrt(rho[i]), 0.0);
        if (region.contains(i)) {
            ax[i] = d.j().x()[i] / rho[i];
            ay[i] = d.j().y()[i] / rho[i];
        }
    }
    ComplexField psi_field(g, std::move(psi));
    VectorField calA = region.extend(VectorField(g, std::move(ax), std::move(ay)));

    double rho_res = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
        rho_res = std::max(rho_res, std::abs(std::norm(psi_field[i]) - rho[i]));
    }
    const VectorField rebuilt = total_current(psi_field, calA) - d.j();
    double cur = 0.0;
    for (std::size_t iy = 0; iy < g.n(); ++iy) {
        for (std::size_t ix = 0; ix < g.n(); ++ix) {
            const std::size_t i = g.index(ix, iy);
            if (!region.contains(i)) continue;
            cur += g.weight(ix, iy) *
                   (rebuilt.x()[i] * rebuilt.x()[i] + rebuilt.y()[i] * rebuilt.y()[i]);
        }
    }
    return RepresentingState{.psi = std::move(psi_field),
                             .calA = std::move(calA),
                             .energy = std::nullopt,
                             .rho_residual = rho_res,
                             .current_residual = std::sqrt(cur),
                             .region = std::move(region)};
}

// ---------------------------------------------------------------------------

double default_inversion_threshold(const Grid2D& grid, double energy) {
    const double h = grid.spacing();
    return h * h * std::max(1.0, std::abs(energy));
}

InversionResult compute_inversion(const ComplexField& psi, const VectorField& A,
                                  std::optional<double> energy, std::optional<double> threshold) {
    require_same_grid(psi.grid(), A.grid(), "compute_inversion");
    const Grid2D& g = psi.grid();
    const Hamiltonian H0(PotentialPair(ScalarField(g), A, "inversion"));
    const ComplexField hpsi = H0.apply(psi);
    const double mass = integrate(modulus_squared(psi));
    if (!(mass > 0.0)) throw RepresentationError("compute_inversion: psi vanishes everywhere");
    const double e = energy ? *energy : inner(psi, hpsi).real() / mass;

    const TrustedRegion region(modulus_squared(psi));
    if (region.count() == 0) throw RepresentationError("compute_inversion: empty trusted region");
    std::vector<double> v(g.size(), 0.0);
    double imag2 = 0.0;
    for (std::size_t iy = 0; iy < g.n(); ++iy) {
        for (std::size_t ix = 0; ix < g.n(); ++ix) {
            const std::size_t i = g.index(ix, iy);
            if (!region.contains(i)) continue;
            const Complex q = hpsi[i] / psi[i];
            v[i] = e - q.real();
            const double s = (std::conj(psi[i]) * hpsi[i]).imag();
            imag2 += g.weight(ix, iy) * s * s / std::norm(psi[i]);
        }
    }
    return InversionResult{.V = region.extend(ScalarField(g, std::move(v))),
                           .energy = e,
                           .imag_residual = std::sqrt(imag2 / mass),
                           .threshold = threshold ? *threshold
                                                  : default_inversion_threshold(g, e)};
}

InversionResult invert_scalar_potential(const ComplexField& psi, const VectorField& A,
                                        std::optional<double> energy,
                                        std::optional<double> threshold) {
    InversionResult r = compute_inversion(psi, A, energy, threshold);
    if (!r.consistent()) {
        throw InconsistentInversion(
            fmt("invert_scalar_potential: imaginary residual %.3e exceeds %.3e; no real "
                "potential makes psi an eigenstate for this A",
                r.imag_residual, r.threshold),
            r.imag_residual);
    }
    return r;
}

MembershipResult membership_check(const DensityPair& d, const SolverOptions& opt) {
    RepresentingState rep = representing_state(d);
    InversionResult inv = compute_inversion(rep.psi, rep.calA);
    rep.energy = inv.energy;
    PotentialPair pair(inv.V, rep.calA,
                       "inverted from " + (d.provenance().empty() ? std::string("density pair")
                                                                   : d.provenance()));
    MembershipResult out{.in_A1 = false,
                         .pair = std::move(pair),
                         .e0 = std::numeric_limits<double>::quiet_NaN(),
                         .inversion = std::move(inv),
                         .representation = std::move(rep),
                         .check = std::nullopt,
                         .reason = {}};
    if (!out.inversion.consistent()) {
        out.reason = fmt("inconsistent inversion: imaginary residual %.3e > %.3e",
                         out.inversion.imag_residual, out.inversion.threshold);
        return out;
    }
    out.check = verify_ground_state(normalized(out.representation.psi), out.pair, opt);
    out.e0 = out.check->spectrum.eigenvalues[0];
    if (out.check->possibly_degenerate) {
        out.reason = fmt("possibly degenerate: gap %.3e", out.check->gap);
    } else if (!out.check->is_ground) {
        out.reason = fmt("not the ground state: overlap %.8f", out.check->overlap);
    } else {
        out.in_A1 = true;
    }
    return out;
}

} // namespace cdft
