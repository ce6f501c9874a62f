#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "besovlab/field.hpp"
#include "besovlab/geometry.hpp"
#include "besovlab/norms.hpp"

namespace besovlab {

using Forcing = std::function<double(double x, double y, double t)>;

enum class RampMode {
    kAuto,  // ramp only when f(., 0) does not vanish
    kOff,
    kOn,
};

/// Heat equation u_t - Laplace u + eps u^M = f on a masked grid, zero
/// initial and boundary data, Crank-Nicolson in time.
struct SolverConfig {
    DomainGeometry geom = DomainGeometry::l_shape();
    int level = 7;
    double dt = 1.0 / 64.0;
    double T = 0.25;
    Forcing forcing = [](double, double, double) { return 0.0; };

    double eps = 0.0;
    int M = 2;
    double picard_tol = 1e-10;
    int picard_max_iterations = 100;
    double r0 = 2.0;
    double c = 1.0;

    RampMode ramp = RampMode::kAuto;
    /// Ramp length; non-positive means T / 10.
    double t_ramp = 0.0;
    double cg_tol = 1e-12;
    std::uint64_t seed = 12345;
    /// Keep every k-th time level in the returned trajectory (the last is always kept).
    int store_stride = 1;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<SampledField> states;
    std::vector<std::string> warnings;
    /// Total conjugate-gradient iterations.
    std::size_t cg_iterations = 0;

    /// State at the stored time closest to t; throws if t is not on the grid.
    const SampledField& at(double t) const;
};

/// Crank-Nicolson trajectory with a 5-point Laplacian; cells outside the mask
/// act as mirrored ghosts so the boundary sits on cell faces.
/// Throws Error("solver-failed") when conjugate gradients stall.
Trajectory linear_solve(const SolverConfig& cfg);

/// Power-iteration estimate (20 steps, seeded) of the discrete
/// L2(K_T) -> L2(K_T) norm of the solution operator f -> u.
double estimate_inverse_norm(const SolverConfig& cfg, int iterations = 20);

/// Discrete L2(K_T) norm of the forcing (trapezoid in time).
double forcing_norm(const SolverConfig& cfg);

struct EpsilonBound {
    double value = 0.0;
    /// 1 when r0 * invnorm * eta > 1, else 2.
    int branch = 2;
};

/// Largest eps satisfying the contraction conditions for the given data.
EpsilonBound max_epsilon(double eta, double invnorm, int M, double r0, double c = 1.0);

enum class PicardStatus { kConverged, kContractionFailed, kMaxIterations };
std::string_view to_string(PicardStatus s) noexcept;

struct PicardTrace {
    std::vector<double> residuals;  // ||u_{k+1} - u_k|| per iteration
    std::vector<double> ratios;     // residual_k / residual_{k-1}
    double q = 0.0;                 // contraction estimate (last ratio, 0 if none)
    double invnorm = 0.0;
    double eta = 0.0;
    EpsilonBound eps_bound;
    double radius = 0.0;          // (r0 - 1) eta invnorm
    double max_distance = 0.0;    // max over iterates of ||u_k - L^{-1} f||
    double defect = 0.0;          // CN residual norm of the final iterate
    int iterations = 0;
    bool converged = false;
    PicardStatus status = PicardStatus::kMaxIterations;
};

struct PicardResult {
    Trajectory trajectory;
    PicardTrace trace;
};

struct PicardOptions {
    /// Start iterate (full trajectory on the same grid); default L^{-1} f.
    const Trajectory* start = nullptr;
    /// Skip the norm estimate and reuse this value when positive.
    double invnorm = 0.0;
};

/// Fixed-point iteration u <- L^{-1}(f - eps u^M).
PicardResult picard_semilinear(const SolverConfig& cfg, const PicardOptions& opt = {});

/// Discrete L2(K_T) distance between two trajectories on the same grid.
double trajectory_distance(const Trajectory& a, const Trajectory& b, double dt);

/// Crank-Nicolson defect ||D_t u + A u + eps u^M - f|| of a full trajectory.
double cn_defect(const SolverConfig& cfg, const Trajectory& traj);

struct SnapshotOptions {
    int order = 4;
    double s_min = 0.5;
    double s_max = 3.5;
    double s_step = 0.1;
    std::vector<double> a_grid{0.5, 1.0, 1.3, 1.5, 1.65, 1.8, 2.0};
    int kondratiev_m = 1;
    StabilityOptions stability{0.05, 3, 4};
};

struct SnapshotReport {
    double t = 0.0;
    std::vector<double> s_grid;
    std::vector<NormReport> sobolev;     // B^s_{2,2}
    std::vector<NormReport> adaptivity;  // B^s_{tau,tau}, 1/tau = s/2 + 1/2
    std::vector<NormReport> kondratiev;  // K^m_{2,a}
    double s_hat = 0.0;
    double eta_hat = 0.0;
    double a_hat = 0.0;
};

/// Applies the cut-off, then sweeps Sobolev-scale and adaptivity-scale Besov
/// norms and Kondratiev norms; s_hat, eta_hat, a_hat are the stability edges.
SnapshotReport snapshot_analysis(const SampledField& snapshot, double t, const DomainGeometry& geom,
                                 const SnapshotOptions& opt = {});

/// Multiplies by the geometry's cut-off.
SampledField apply_cutoff(const SampledField& field, const DomainGeometry& geom);

/// sup over pairs of stored snapshots of ||phi (u(t) - u(s))||_B / |t - s|^{1/2}
/// using at most `max_snapshots` evenly spaced states.
double holder_quotient(const Trajectory& traj, const DomainGeometry& geom, const BesovSpec& spec,
                       int order = 4, int max_snapshots = 12);

/// Log-log slope of the mean gradient magnitude against the distance to
/// `center`, over inside cells with rmin <= r <= rmax.
double radial_gradient_exponent(const SampledField& field, Point center, double rmin, double rmax);

}  // namespace besovlab
