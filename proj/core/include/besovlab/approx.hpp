#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "besovlab/field.hpp"
#include "besovlab/geometry.hpp"
#include "besovlab/norms.hpp"
#include "besovlab/wavelet.hpp"

namespace besovlab {

enum class RateMethod { kNonlinear, kUniform };
std::string_view to_string(RateMethod m) noexcept;

struct RateFit {
    double alpha = 0.0;
    /// Root-mean-square residual of the log-log fit.
    double residual = 0.0;
};

/// Least-squares slope of log(error) against log(N), negated. Needs at least
/// four pairs with positive N and error; throws Error("invalid-argument").
RateFit fit_rate(std::span<const std::pair<double, double>> pairs);

struct RateReport {
    RateMethod method = RateMethod::kNonlinear;
    std::vector<std::pair<double, double>> pairs;  // (N, error)
    std::size_t window_begin = 0;                  // fit uses pairs[window_begin, window_end)
    std::size_t window_end = 0;
    double alpha = 0.0;
    double residual = 0.0;
};

/// Coefficient magnitudes in decreasing order with ties broken by level,
/// then k lexicographically (k2, k1), then type. The father comes first
/// among equal magnitudes.
struct RankedCoeff {
    double magnitude = 0.0;
    WaveletIndex index;
};
std::vector<RankedCoeff> rank_coefficients(const CoeffTree& tree);

/// Best N-term error. p = 2: l2 tail of the coefficients outside the N
/// largest, squares summed in increasing order. Other p: L_p grid norm of
/// the synthesized difference between the full and the N-term expansion.
double sigma_n(const CoeffTree& tree, std::size_t N, double p = 2.0);

/// sigma_n for several N at once (p = 2 only).
std::vector<double> sigma_n_curve(const CoeffTree& tree, std::span<const std::size_t> Ns);

struct UniformError {
    std::size_t n = 0;
    double error = 0.0;
};

/// Error of keeping every coefficient below level j (and the father).
/// N counts all kept slots, so N_j = 2^{jd}.
UniformError uniform_error(const CoeffTree& tree, int j, double p = 2.0);

/// Dyadic windows: drop `trim` points at each end, reduced until at least
/// `min_points` remain.
std::pair<std::size_t, std::size_t> trimmed_window(std::size_t count, std::size_t trim = 8,
                                                   std::size_t min_points = 5);

/// sigma_N at N = 2^k, k = 0..log2(total), fitted on the trimmed window.
/// A zero error inside the window yields alpha = +inf.
RateReport nonlinear_rate(const CoeffTree& tree, double p = 2.0);

/// Level truncation at j = j_min..J-2 (N_j = 2^{jd}), fitted over all points.
RateReport uniform_rate(const CoeffTree& tree, double p = 2.0, int j_min = 3);

struct DjpReport {
    double m = 0.0;
    double tau = 0.0;
    double norm_value = 0.0;
    double growth_exponent = 0.0;
    bool norm_finite = false;
    double alpha = 0.0;
    double target = 0.0;  // m / d
    bool consistent = false;
};

/// Compares finiteness of the B^m_{tau,tau} norm (1/tau = m/d + 1/p) with
/// the fitted best N-term exponent against m/d.
DjpReport djp_consistency(const CoeffTree& tree, double m, double p = 2.0, double tolerance = 0.1);

/// Per-index bucket label: ring k >= 0, or one of the negative tags.
inline constexpr std::int32_t kBoundaryBucket = -1;
inline constexpr std::int32_t kExteriorBucket = -2;

struct RingDecomposition {
    int max_level = 0;
    /// labels[j][slot]; slots follow CoeffTree::slot_of.
    std::vector<std::vector<std::int32_t>> labels;
    /// counts[j][k] = #Lambda_{j,k} for k = 0..2^j.
    std::vector<std::vector<std::size_t>> counts;
    std::vector<std::size_t> boundary;
    /// Indices whose cube misses the domain; not part of Lambda_j.
    std::vector<std::size_t> exterior;
    /// #Lambda_j (all indices whose cube meets the domain).
    std::vector<std::size_t> total;
};

/// Buckets each mother index by rho_I = inf of rho over Q(I), evaluated
/// exactly from the distance of Q(I) to the singular set. Precedence:
/// exterior, ring 0 (rho_I < 2^-j), boundary (Q(I) crosses the domain
/// boundary), then interior rings floor(rho_I 2^j).
RingDecomposition ring_decompose(const CoeffTree& tree, const DomainGeometry& geom);

struct WhitneyReport {
    std::vector<int> levels;
    std::vector<double> max_ratio;  // per level
    std::vector<std::size_t> checked;
    std::size_t flagged = 0;  // mu_I = 0 with nonzero coefficient
    double variation = 0.0;   // max / min of max_ratio over levels with data
};

/// Ratio |<u, psi_I>| / (|I|^{m/d + 1/2 - 1/p} rho_I^{a-m} mu_I) over interior
/// buckets (k >= 1), with mu_I the local weighted seminorm
/// (sum_{|alpha| = m} int_{Q(I)} |rho^{m-a} D^alpha u|^p)^{1/p}.
/// Levels without interior indices are skipped.
WhitneyReport whitney_ring_check(const CoeffTree& tree, const SampledField& field, const DomainGeometry& geom,
                                 int m, double a, double p = 2.0, int level_lo = 0, int level_hi = -1);

enum class EmbeddingMode { kPolyhedral, kLipschitz };

struct EmbeddingRow {
    std::size_t member = 0;
    double tau = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

struct EmbeddingReport {
    EmbeddingMode mode = EmbeddingMode::kPolyhedral;
    std::vector<EmbeddingRow> rows;
    /// Polyhedral: per tau, max / min of the ratio over the family.
    std::vector<double> taus;
    std::vector<double> spread;
    double max_spread = 0.0;
    /// Lipschitz: alpha grid, fitted slopes, predicted and observed flip.
    std::vector<double> alphas;
    std::vector<double> slopes;
    double predicted_flip = 0.0;
    double observed_flip = 0.0;
};

struct EmbeddingParams {
    int gamma = 2;
    double a = 1.0;
    double s = 1.4;
    double p = 2.0;
    int order = 4;
    /// Number of tau sample points strictly inside (tau*, p).
    int tau_samples = 5;
    /// Lipschitz mode: sweep half-width and step around the predicted flip.
    double sweep_half_width = 0.6;
    double sweep_step = 0.1;
};

/// Polyhedral mode: LHS = B^gamma_{tau,inf} wavelet norm, RHS = K^gamma_{p,a}
/// + B^s_{p,inf} for each field and tau in (tau*, p). Requires
/// min(s, a) > (delta / d) gamma (delta = 0 for vertices).
/// Lipschitz mode: for a single field, sweeps alpha on the adaptivity scale
/// and locates where the level contributions stop decaying; `a` is the
/// boundary-weight exponent. Throws Error("hypothesis-violated").
EmbeddingReport embedding_check(std::span<const SampledField> fields, const DomainGeometry& geom,
                                const EmbeddingParams& params, EmbeddingMode mode);

/// Largest grid value where slopes are negative, refined to the zero crossing
/// of the slope by linear interpolation. Returns grid.front() if none are.
double stability_crossing(std::span<const double> grid, std::span<const double> slopes);

}  // namespace besovlab
