#include "besovlab/parabolic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

#include "besovlab/approx.hpp"
#include "besovlab/error.hpp"
#include "besovlab/wavelet.hpp"

namespace besovlab {

namespace {

using Vec = std::vector<double>;
using Series = std::vector<Vec>;

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Masked 5-point operator A = -Laplace and the Crank-Nicolson pair
// B = I + dt/2 A, C = I - dt/2 A on the inside cells.
class HeatOperator {
public:
    HeatOperator(const SolverConfig& cfg) : grid_(rasterize(cfg.geom, cfg.level)), dt_(cfg.dt), tol_(cfg.cg_tol) {
        const std::size_t n = grid_.n();
        cell_of_.clear();
        unknown_of_.assign(grid_.size(), -1);
        for (std::size_t iy = 0; iy < n; ++iy) {
            for (std::size_t ix = 0; ix < n; ++ix) {
                if (!grid_.inside(ix, iy)) continue;
                unknown_of_[grid_.index(ix, iy)] = static_cast<long>(cell_of_.size());
                cell_of_.push_back(grid_.index(ix, iy));
            }
        }
        const double inv_h2 = 1.0 / (grid_.h() * grid_.h());
        nb_.resize(cell_of_.size());
        diag_.resize(cell_of_.size());
        for (std::size_t u = 0; u < cell_of_.size(); ++u) {
            const std::size_t c = cell_of_[u];
            const long ix = static_cast<long>(c % n);
            const long iy = static_cast<long>(c / n);
            const long offs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
            int missing = 0;
            for (int k = 0; k < 4; ++k) {
                const long jx = ix + offs[k][0];
                const long jy = iy + offs[k][1];
                long nbr = -1;
                if (jx >= 0 && jy >= 0 && jx < static_cast<long>(n) && jy < static_cast<long>(n)) {
                    nbr = unknown_of_[static_cast<std::size_t>(jy) * n + static_cast<std::size_t>(jx)];
                }
                nb_[u][static_cast<std::size_t>(k)] = nbr;
                if (nbr < 0) ++missing;
            }
            diag_[u] = (4.0 + missing) * inv_h2;
        }
        inv_h2_ = inv_h2;
    }

    std::size_t size() const { return cell_of_.size(); }
    const SampledField& grid() const { return grid_; }
    double dt() const { return dt_; }

    void apply_a(const Vec& x, Vec& y) const {
        y.resize(x.size());
        for (std::size_t u = 0; u < x.size(); ++u) {
            double s = diag_[u] * x[u];
            for (long nbr : nb_[u]) {
                if (nbr >= 0) s -= inv_h2_ * x[static_cast<std::size_t>(nbr)];
            }
            y[u] = s;
        }
    }

    void apply_b(const Vec& x, Vec& y) const {
        apply_a(x, y);
        for (std::size_t u = 0; u < x.size(); ++u) y[u] = x[u] + 0.5 * dt_ * y[u];
    }

    void apply_c(const Vec& x, Vec& y) const {
        apply_a(x, y);
        for (std::size_t u = 0; u < x.size(); ++u) y[u] = x[u] - 0.5 * dt_ * y[u];
    }

    // Jacobi-preconditioned CG for B x = b, warm-started from x.
    std::size_t solve_b(const Vec& b, Vec& x) const {
        const std::size_t n = b.size();
        x.resize(n, 0.0);
        const double bnorm = std::sqrt(dot(b, b));
        if (bnorm == 0.0) {
            std::fill(x.begin(), x.end(), 0.0);
            return 0;
        }
        Vec r(n), z(n), p(n), q(n);
        apply_b(x, q);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
        double rnorm = std::sqrt(dot(r, r));
        if (rnorm <= tol_ * bnorm) return 0;
        for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / (1.0 + 0.5 * dt_ * diag_[i]);
        p = z;
        double rz = dot(r, z);
        const std::size_t max_it = 10 * n + 100;
        for (std::size_t it = 1; it <= max_it; ++it) {
            apply_b(p, q);
            const double alpha = rz / dot(p, q);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * q[i];
            }
            rnorm = std::sqrt(dot(r, r));
            if (!std::isfinite(rnorm)) break;
            if (rnorm <= tol_ * bnorm) return it;
            for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / (1.0 + 0.5 * dt_ * diag_[i]);
            const double rz_new = dot(r, z);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        }
        throw Error("solver-failed", "conjugate gradients did not reach relative residual " + std::to_string(tol_));
    }

    Vec gather(const SampledField& f) const {
        Vec v(size());
        for (std::size_t u = 0; u < size(); ++u) v[u] = f.values()[cell_of_[u]];
        return v;
    }

    SampledField scatter(const Vec& v) const {
        SampledField f = grid_;
        auto vals = f.values();
        std::fill(vals.begin(), vals.end(), 0.0);
        for (std::size_t u = 0; u < size(); ++u) vals[cell_of_[u]] = v[u];
        return f;
    }

    Point center(std::size_t u) const {
        const std::size_t n = grid_.n();
        return grid_.center(cell_of_[u] % n, cell_of_[u] / n);
    }

private:
    SampledField grid_;
    double dt_;
    double tol_;
    double inv_h2_ = 0.0;
    std::vector<std::size_t> cell_of_;
    std::vector<long> unknown_of_;
    std::vector<std::array<long, 4>> nb_;
    Vec diag_;
};

int step_count(const SolverConfig& cfg) {
    if (!(cfg.dt > 0.0) || !(cfg.T > 0.0)) throw Error("bad-params", "time step and horizon must be positive");
    const double steps = cfg.T / cfg.dt;
    const long n = std::lround(steps);
    if (n < 1 || std::abs(steps - static_cast<double>(n)) > 1e-9 * steps) {
        throw Error("bad-params", "horizon must be an integer multiple of the time step");
    }
    return static_cast<int>(n);
}

// Sampled, possibly ramped forcing on every time level; records warnings.
Series sample_forcing(const SolverConfig& cfg, const HeatOperator& op, std::vector<std::string>* warnings) {
    const int N = step_count(cfg);
    bool ramp = cfg.ramp == RampMode::kOn;
    if (cfg.ramp == RampMode::kAuto) {
        for (std::size_t u = 0; u < op.size(); ++u) {
            const Point c = op.center(u);
            if (cfg.forcing(c.x, c.y, 0.0) != 0.0) {
                ramp = true;
                break;
            }
        }
        if (ramp && warnings) {
            warnings->push_back("incompatible-data: f(., 0) != 0; forcing ramped by min(t / t_ramp, 1)^2");
        }
    }
    const double t_ramp = cfg.t_ramp > 0.0 ? cfg.t_ramp : cfg.T / 10.0;
    Series g(static_cast<std::size_t>(N + 1), Vec(op.size()));
    for (int n = 0; n <= N; ++n) {
        const double t = n * cfg.dt;
        const double w = ramp ? std::pow(std::min(t / t_ramp, 1.0), 2) : 1.0;
        for (std::size_t u = 0; u < op.size(); ++u) {
            const Point c = op.center(u);
            g[static_cast<std::size_t>(n)][u] = w * cfg.forcing(c.x, c.y, t);
        }
    }
    return g;
}

// u_0 = 0, B u_{n+1} = C u_n + dt/2 (g_n + g_{n+1}). Warm starts from `warm`
// (same shape) when given, else from u_n.
Series forward(const HeatOperator& op, const Series& g, const Series* warm, std::size_t* cg_total) {
    const std::size_t N = g.size() - 1;
    Series u(N + 1, Vec(op.size(), 0.0));
    Vec rhs(op.size());
    for (std::size_t n = 0; n < N; ++n) {
        op.apply_c(u[n], rhs);
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += 0.5 * op.dt() * (g[n][i] + g[n + 1][i]);
        u[n + 1] = warm ? (*warm)[n + 1] : u[n];
        const std::size_t it = op.solve_b(rhs, u[n + 1]);
        if (cg_total) *cg_total += it;
    }
    return u;
}

// Adjoint of g -> (u_1..u_N) with respect to plain Euclidean sums.
Series adjoint(const HeatOperator& op, const Series& w) {
    const std::size_t N = w.size() - 1;  // w[0] unused
    Series mu(N + 2, Vec(op.size(), 0.0));
    Vec tmp(op.size());
    for (std::size_t k = N; k >= 1; --k) {
        // mu_k = w_k + B^{-1} C mu_{k+1}
        Vec m(op.size(), 0.0);
        if (k < N) {
            op.apply_c(mu[k + 1], tmp);
            m = mu[k + 1];
            op.solve_b(tmp, m);
        }
        for (std::size_t i = 0; i < tmp.size(); ++i) mu[k][i] = w[k][i] + m[i];
    }
    Series out(N + 1, Vec(op.size(), 0.0));
    for (std::size_t j = 0; j <= N; ++j) {
        Vec s(op.size());
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = 0.5 * op.dt() * (mu[j][i] + mu[j + 1][i]);
        Vec x(op.size(), 0.0);
        op.solve_b(s, x);
        out[j] = std::move(x);
    }
    return out;
}

double series_norm_sq(const Series& s, std::size_t from) {
    double acc = 0.0;
    for (std::size_t n = from; n < s.size(); ++n) acc += dot(s[n], s[n]);
    return acc;
}

Trajectory to_trajectory(const HeatOperator& op, const Series& u, double dt, int stride) {
    Trajectory t;
    stride = std::max(stride, 1);
    const std::size_t N = u.size() - 1;
    for (std::size_t n = 0; n <= N; ++n) {
        if (n % static_cast<std::size_t>(stride) != 0 && n != N) continue;
        t.times.push_back(static_cast<double>(n) * dt);
        t.states.push_back(op.scatter(u[n]));
    }
    return t;
}

Series from_trajectory(const HeatOperator& op, const Trajectory& t, std::size_t levels) {
    if (t.states.size() != levels) {
        throw Error("invalid-argument", "start trajectory must store every time level");
    }
    Series s;
    s.reserve(levels);
    for (const auto& f : t.states) s.push_back(op.gather(f));
    return s;
}

void accuracy_warning(const SolverConfig& cfg, const HeatOperator& op, std::vector<std::string>& w) {
    if (cfg.dt > 4.0 * op.grid().h()) {
        w.push_back("accuracy: time step exceeds 4h; Crank-Nicolson stays stable but loses accuracy");
    }
}

Series nonlinear_rhs(const Series& f, const Series& u, double eps, int M) {
    Series g = f;
    if (eps == 0.0) return g;
    for (std::size_t n = 0; n < g.size(); ++n) {
        for (std::size_t i = 0; i < g[n].size(); ++i) g[n][i] -= eps * std::pow(u[n][i], M);
    }
    return g;
}

double defect_of(const HeatOperator& op, const Series& f, const Series& u, double eps, int M, double dt) {
    Vec a0, a1;
    double acc = 0.0;
    for (std::size_t n = 0; n + 1 < u.size(); ++n) {
        op.apply_a(u[n], a0);
        op.apply_a(u[n + 1], a1);
        for (std::size_t i = 0; i < a0.size(); ++i) {
            double r = (u[n + 1][i] - u[n][i]) / dt + 0.5 * (a0[i] + a1[i]) - 0.5 * (f[n][i] + f[n + 1][i]);
            if (eps != 0.0) r += 0.5 * eps * (std::pow(u[n][i], M) + std::pow(u[n + 1][i], M));
            acc += r * r;
        }
    }
    const double cell = op.grid().h() * op.grid().h();
    return std::sqrt(dt * cell * acc);
}

}  // namespace

const SampledField& Trajectory::at(double t) const {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (std::abs(times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return states[i];
    }
    throw Error("invalid-argument", "time " + std::to_string(t) + " is not a stored time level");
}

Trajectory linear_solve(const SolverConfig& cfg) {
    const HeatOperator op(cfg);
    std::vector<std::string> warnings;
    accuracy_warning(cfg, op, warnings);
    const Series g = sample_forcing(cfg, op, &warnings);
    std::size_t cg = 0;
    const Series u = forward(op, g, nullptr, &cg);
    Trajectory t = to_trajectory(op, u, cfg.dt, cfg.store_stride);
    t.warnings = std::move(warnings);
    t.cg_iterations = cg;
    return t;
}

double forcing_norm(const SolverConfig& cfg) {
    const HeatOperator op(cfg);
    const Series g = sample_forcing(cfg, op, nullptr);
    double acc = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) {
        const double w = (n == 0 || n + 1 == g.size()) ? 0.5 : 1.0;
        acc += w * dot(g[n], g[n]);
    }
    return std::sqrt(cfg.dt * op.grid().h() * op.grid().h() * acc);
}

double estimate_inverse_norm(const SolverConfig& cfg, int iterations) {
    if (iterations < 1) throw Error("invalid-argument", "power iteration needs at least one step");
    const HeatOperator op(cfg);
    const std::size_t N = static_cast<std::size_t>(step_count(cfg));
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Series x(N + 1, Vec(op.size()));
    for (auto& v : x) {
        for (double& e : v) e = normal(rng);
    }
    double best = 0.0;
    for (int it = 0; it < iterations; ++it) {
        const double xn = std::sqrt(series_norm_sq(x, 0));
        if (xn == 0.0) break;
        for (auto& v : x) {
            for (double& e : v) e /= xn;
        }
        const Series u = forward(op, x, nullptr, nullptr);
        best = std::max(best, series_norm_sq(u, 1));
        x = adjoint(op, u);
    }
    return std::sqrt(best);
}

EpsilonBound max_epsilon(double eta, double invnorm, int M, double r0, double c) {
    if (!(eta > 0.0) || !(invnorm > 0.0) || !(c > 0.0)) throw Error("invalid-argument", "eta, invnorm and c must be positive");
    if (!(r0 > 1.0)) throw Error("invalid-argument", "ball parameter r0 must exceed 1");
    if (M < 1) throw Error("invalid-argument", "power M must be >= 1");
    EpsilonBound b;
    if (r0 * invnorm * eta > 1.0) {
        b.branch = 1;
        b.value = (r0 - 1.0) * std::pow(1.0 / r0, 2 * M - 1) /
                  (c * M * std::pow(eta, 2 * (M - 1)) * std::pow(invnorm, 2 * M - 1));
    } else {
        b.branch = 2;
        b.value = (r0 - 1.0) / (r0 * c * M * invnorm);
    }
    return b;
}

std::string_view to_string(PicardStatus s) noexcept {
    switch (s) {
        case PicardStatus::kConverged: return "converged";
        case PicardStatus::kContractionFailed: return "contraction-failed";
        case PicardStatus::kMaxIterations: return "max-iterations";
    }
    return "?";
}

PicardResult picard_semilinear(const SolverConfig& cfg, const PicardOptions& opt) {
    if (cfg.eps < 0.0) throw Error("bad-params", "eps must be >= 0");
    if (cfg.M < 1) throw Error("bad-params", "power M must be >= 1");
    const HeatOperator op(cfg);
    std::vector<std::string> warnings;
    accuracy_warning(cfg, op, warnings);
    const Series f = sample_forcing(cfg, op, &warnings);
    const double cell = op.grid().h() * op.grid().h();

    PicardResult res;
    PicardTrace& tr = res.trace;
    tr.invnorm = opt.invnorm > 0.0 ? opt.invnorm : estimate_inverse_norm(cfg);
    tr.eta = forcing_norm(cfg);
    if (tr.eta > 0.0) {
        tr.eps_bound = max_epsilon(tr.eta, tr.invnorm, cfg.M, cfg.r0, cfg.c);
    }
    tr.radius = (cfg.r0 - 1.0) * tr.eta * tr.invnorm;

    std::size_t cg = 0;
    const Series linear = forward(op, f, nullptr, &cg);
    Series u = opt.start ? from_trajectory(op, *opt.start, f.size()) : linear;
    auto dist = [&](const Series& a, const Series& b) {
        double acc = 0.0;
        for (std::size_t n = 1; n < a.size(); ++n) {
            for (std::size_t i = 0; i < a[n].size(); ++i) acc += (a[n][i] - b[n][i]) * (a[n][i] - b[n][i]);
        }
        return std::sqrt(cfg.dt * cell * acc);
    };
    tr.max_distance = dist(u, linear);

    int above_one = 0;
    tr.status = PicardStatus::kMaxIterations;
    for (int k = 1; k <= cfg.picard_max_iterations; ++k) {
        const Series g = nonlinear_rhs(f, u, cfg.eps, cfg.M);
        Series next = forward(op, g, &u, &cg);
        const double r = dist(next, u);
        tr.iterations = k;
        tr.residuals.push_back(r);
        u = std::move(next);
        if (!std::isfinite(r)) {
            tr.q = kInf;
            tr.status = PicardStatus::kContractionFailed;
            break;
        }
        tr.max_distance = std::max(tr.max_distance, dist(u, linear));
        if (tr.residuals.size() >= 2) {
            const double prev = tr.residuals[tr.residuals.size() - 2];
            const double ratio = prev > 0.0 ? r / prev : 0.0;
            tr.ratios.push_back(ratio);
            tr.q = ratio;
            above_one = ratio > 1.0 ? above_one + 1 : 0;
        }
        if (r <= cfg.picard_tol) {
            tr.converged = true;
            tr.status = PicardStatus::kConverged;
            break;
        }
        if (above_one >= 5) {
            tr.status = PicardStatus::kContractionFailed;
            break;
        }
    }
    if (tr.status == PicardStatus::kContractionFailed) {
        warnings.push_back("contraction-failed: residual ratio q = " + std::to_string(tr.q));
    }
    tr.defect = defect_of(op, f, u, cfg.eps, cfg.M, cfg.dt);
    res.trajectory = to_trajectory(op, u, cfg.dt, 1);
    res.trajectory.warnings = std::move(warnings);
    res.trajectory.cg_iterations = cg;
    return res;
}

double trajectory_distance(const Trajectory& a, const Trajectory& b, double dt) {
    if (a.states.size() != b.states.size()) throw Error("invalid-argument", "trajectories differ in length");
    double acc = 0.0;
    for (std::size_t n = 1; n < a.states.size(); ++n) {
        const auto va = a.states[n].values();
        const auto vb = b.states[n].values();
        if (va.size() != vb.size()) throw Error("invalid-argument", "trajectories differ in grid");
        for (std::size_t i = 0; i < va.size(); ++i) acc += (va[i] - vb[i]) * (va[i] - vb[i]);
    }
    const double cell = a.states.empty() ? 0.0 : a.states.front().cell_measure();
    return std::sqrt(dt * cell * acc);
}

double cn_defect(const SolverConfig& cfg, const Trajectory& traj) {
    const HeatOperator op(cfg);
    const Series f = sample_forcing(cfg, op, nullptr);
    const Series u = from_trajectory(op, traj, f.size());
    return defect_of(op, f, u, cfg.eps, cfg.M, cfg.dt);
}

SampledField apply_cutoff(const SampledField& field, const DomainGeometry& geom) {
    SampledField out = field;
    const std::size_t n = field.n();
    for (std::size_t iy = 0; iy < n; ++iy) {
        for (std::size_t ix = 0; ix < n; ++ix) {
            out(ix, iy) = field(ix, iy) * cutoff_eval(geom.cutoff(), field.center(ix, iy));
        }
    }
    out.apply_zero_extension();
    return out;
}

SnapshotReport snapshot_analysis(const SampledField& snapshot, double t, const DomainGeometry& geom,
                                 const SnapshotOptions& opt) {
    SnapshotReport rep;
    rep.t = t;
    const SampledField phi_u = apply_cutoff(snapshot, geom);
    const WaveletSystem sys(opt.order);
    const CoeffTree tree = dwt_forward(phi_u, sys);
    const int d = snapshot.dim();
    std::vector<double> sob_slopes, ada_slopes;
    for (double s = opt.s_min; s <= opt.s_max + 1e-9 && s < opt.order; s += opt.s_step) {
        rep.s_grid.push_back(s);
        rep.sobolev.push_back(besov_norm_wavelet(tree, {s, 2.0, 2.0, d}, opt.stability));
        const double tau = adaptivity_tau(s, d, 2.0);
        rep.adaptivity.push_back(besov_norm_wavelet(tree, {s, tau, tau, d}, opt.stability));
        sob_slopes.push_back(rep.sobolev.back().growth_exponent);
        ada_slopes.push_back(rep.adaptivity.back().growth_exponent);
    }
    rep.s_hat = stability_crossing(rep.s_grid, sob_slopes);
    rep.eta_hat = stability_crossing(rep.s_grid, ada_slopes);
    if (!opt.a_grid.empty()) {
        std::vector<double> k_slopes;
        for (double a : opt.a_grid) {
            rep.kondratiev.push_back(kondratiev_norm(phi_u, geom, {opt.kondratiev_m, 2.0, a}));
            k_slopes.push_back(rep.kondratiev.back().growth_exponent);
        }
        rep.a_hat = stability_crossing(opt.a_grid, k_slopes);
    }
    return rep;
}

double holder_quotient(const Trajectory& traj, const DomainGeometry& geom, const BesovSpec& spec, int order,
                       int max_snapshots) {
    const std::size_t n = traj.states.size();
    if (n < 2) return 0.0;
    const std::size_t k = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(max_snapshots, 2)));
    std::vector<std::size_t> pick;
    for (std::size_t i = 0; i < k; ++i) pick.push_back(i * (n - 1) / (k - 1));
    const WaveletSystem sys(order);
    double best = 0.0;
    for (std::size_t a = 0; a < pick.size(); ++a) {
        for (std::size_t b = a + 1; b < pick.size(); ++b) {
            const auto& ua = traj.states[pick[a]];
            const auto& ub = traj.states[pick[b]];
            SampledField diff = ua;
            for (std::size_t i = 0; i < diff.size(); ++i) diff.values()[i] = ub.values()[i] - ua.values()[i];
            const double norm = besov_norm_wavelet(dwt_forward(apply_cutoff(diff, geom), sys), spec).value;
            const double dt = std::abs(traj.times[pick[b]] - traj.times[pick[a]]);
            if (dt > 0.0) best = std::max(best, norm / std::sqrt(dt));
        }
    }
    return best;
}

double radial_gradient_exponent(const SampledField& field, Point center, double rmin, double rmax) {
    if (!(rmin > 0.0) || !(rmax > rmin)) throw Error("invalid-argument", "need 0 < rmin < rmax");
    const SampledField gx = fd_derivative(field, 1, 0);
    const SampledField gy = fd_derivative(field, 0, 1);
    constexpr int kBins = 10;
    std::array<double, kBins> sum_g{}, sum_r{};
    std::array<int, kBins> count{};
    const double lr0 = std::log(rmin);
    const double lr1 = std::log(rmax);
    const std::size_t n = field.n();
    for (std::size_t iy = 0; iy < n; ++iy) {
        for (std::size_t ix = 0; ix < n; ++ix) {
            if (!field.inside(ix, iy)) continue;
            const Point c = field.center(ix, iy);
            const double r = std::hypot(c.x - center.x, c.y - center.y);
            if (r < rmin || r > rmax) continue;
            const int b = std::min(kBins - 1, static_cast<int>((std::log(r) - lr0) / (lr1 - lr0) * kBins));
            sum_g[static_cast<std::size_t>(b)] += std::hypot(gx(ix, iy), gy(ix, iy));
            sum_r[static_cast<std::size_t>(b)] += r;
            ++count[static_cast<std::size_t>(b)];
        }
    }
    std::vector<std::pair<double, double>> pts;
    for (int b = 0; b < kBins; ++b) {
        const auto i = static_cast<std::size_t>(b);
        if (count[i] > 0 && sum_g[i] > 0.0) pts.emplace_back(sum_r[i] / count[i], sum_g[i] / count[i]);
    }
    if (pts.size() < 4) throw Error("insufficient-resolution", "too few radial bins for a gradient fit");
    return -fit_rate(pts).alpha;
}

}  // namespace besovlab
