#pragma once

#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "besovlab/field.hpp"
#include "besovlab/geometry.hpp"
#include "besovlab/wavelet.hpp"

namespace besovlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// B^s_{p,q} in dimension d. q may be kInf.
struct BesovSpec {
    double s = 1.0;
    double p = 2.0;
    double q = 2.0;
    int d = 2;
};

/// K^m_{p,a}.
struct KondratievSpec {
    int m = 1;
    double p = 2.0;
    double a = 0.0;
};

/// Point r on the adaptivity scale 1/tau = r/d + 1/p.
struct AdaptivityPoint {
    double r = 0.0;
    int d = 2;
    double p = 2.0;
    double tau() const;
};

double adaptivity_tau(double r, int d, double p);

enum class NormMethod { kWavelet, kModulus, kQuadrature };
std::string_view to_string(NormMethod m) noexcept;

/// Fit and flag for a sequence that should settle under refinement.
struct StabilityVerdict {
    /// Least-squares slope of log2(value) against the sequence index.
    double growth_exponent = -kInf;
    /// True when the relative growth exceeds `tolerance` for `run` consecutive steps.
    bool divergent = false;
};

struct StabilityOptions {
    double tolerance = 0.05;
    int run = 3;
    /// Number of entries used for the slope fit (0 = all).
    int window = 4;
    /// Finest entries left out of both tests. Detail coefficients computed
    /// from point samples are damped on the last levels (about 0.3x on the
    /// finest, 0.8x on the next for a kink), which biases the slope.
    /// Shrinks when the sequence is too short to keep it.
    int guard = 2;
};

StabilityVerdict assess_stability(std::span<const double> values, const StabilityOptions& opt = {});

struct NormReport {
    double value = 0.0;
    NormMethod method = NormMethod::kWavelet;
    /// s (Besov) or m (Sobolev, Kondratiev).
    double s_or_m = 0.0;
    double p = 2.0;
    /// q (Besov) or a (Kondratiev).
    double q_or_a = 0.0;
    int level = 0;

    /// Wavelet: |father| term. Other methods: L_p part where applicable.
    double base_part = 0.0;
    /// Wavelet: 2^{j(s + d(1/2 - 1/p))} (sum_{level j} |c|^p)^{1/p} per level j.
    /// Modulus: t^{-s} omega_r(f, t) at t = 2^{-j}. Kondratiev: p-th power
    /// contribution of the dyadic ring 2^{-k-1} <= rho < 2^{-k}.
    std::vector<double> breakdown;

    double growth_exponent = -kInf;
    bool divergent = false;
};

/// Father l_p block plus the weighted level sum over stored coefficients.
/// Throws Error("insufficient-vanishing-moments") when order <= s.
NormReport besov_norm_wavelet(const CoeffTree& tree, const BesovSpec& spec,
                              const StabilityOptions& opt = {});

/// r-th modulus of smoothness of the zero-extended field: sup over 8 grid
/// directions and dyadic multiples (plus the largest step <= t) of the L_p
/// norm of the r-th difference. Stencils leaving the box are dropped.
/// p = kInf gives the sup norm.
double modulus_of_smoothness(const SampledField& field, int r, double t, double p);

/// ||f||_p + dyadic sum of (t^{-s} omega_r(f,t)_p)^q ln 2 over t = 2^{-j} >= h,
/// with r = floor(s) + 1 unless given.
NormReport besov_norm_modulus(const SampledField& field, const BesovSpec& spec, int r = 0);

/// Discrete W^m_p norm over inside cells; derivatives by finite differences.
double sobolev_norm(const SampledField& field, int m, double p);

/// Discrete K^m_{p,a} norm: sum over |alpha| <= m of the rho^{p(|alpha|-a)}
/// weighted integrals of |D^alpha u|^p. Cells touching a singular vertex use
/// a graded quadtree (four levels, factor 1/2). Supports m <= 4.
NormReport kondratiev_norm(const SampledField& field, const DomainGeometry& geom,
                           const KondratievSpec& spec, WeightMode mode = WeightMode::kSingularSet);

/// Finite-difference partial derivative D_x^ax D_y^ay over inside cells.
/// Central stencils where possible, second-order one-sided at the mask edge,
/// zero where the inside run is too short.
SampledField fd_derivative(const SampledField& field, int ax, int ay);

namespace debug {
/// Deliberate defects for exercising the verification suites.
/// Recognised: "" (none), "mis-scaled-weight".
void set_fault(std::string_view name);
std::string_view fault();
}  // namespace debug

}  // namespace besovlab
