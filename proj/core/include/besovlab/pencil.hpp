#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace besovlab {

/// delta_+ = delta_- = pi / theta for the heat operator on a wedge of
/// opening theta in (0, 2 pi].
double wedge_delta(double theta);

/// Legendre function P_nu(cos theta0) for real nu >= 0, via the
/// hypergeometric series 2F1(-nu, nu + 1; 1; sin^2(theta0 / 2)).
long double legendre_p(long double nu, long double theta0);

/// First `count` zonal Dirichlet eigenvalues Lambda = nu (nu + 1) of the
/// Laplace-Beltrami operator on a spherical cap of half-angle theta0, where
/// P_nu(cos theta0) = 0. Throws Error("bracketing-failed") when fewer roots
/// are located in nu in [0.01, 400].
std::vector<double> cap_lb_eigenvalues(double theta0, int count);

struct PencilPair {
    double minus = 0.0;
    double plus = 0.0;
};

/// lambda_pm = -1/2 pm sqrt(Lambda + 1/4).
PencilPair pencil_eigenvalues_from_lb(double lambda_lb);

struct PencilSpec {
    enum class Kind { kWedge, kCap };

    Kind kind = Kind::kWedge;
    std::vector<double> thetas;  // wedge openings
    double theta0 = 0.0;         // cap half-angle
    int m = 1;
    std::vector<double> lb_eigenvalues;  // caps only
    std::vector<double> deltas;          // per wedge edge
    /// Sorted real pencil eigenvalues (cap: all lambda_pm; wedge: +-k delta, k = 1..count).
    std::vector<double> eigenvalues;
    bool time_independent = true;

    static PencilSpec cap(double theta0, int count = 5);
    static PencilSpec wedge(std::vector<double> thetas, int count = 5);
};

/// True iff no stored eigenvalue lies in the closed strip lo <= Re lambda <= hi.
bool strip_free(const PencilSpec& spec, double lo, double hi);

/// True when an eigenvalue lies within `tol` of either strip edge.
bool strip_borderline(const PencilSpec& spec, double lo, double hi, double tol = 1e-8);

/// Strip between Re lambda = b + 2m - 3/2 and b' + 2m - 3/2.
bool strip_free_weights(const PencilSpec& spec, double b, double b_prime);

/// floor((gamma - 1) / (2m)); requires gamma >= 2m >= 2.
int gamma_m(int gamma, int m);

struct WeightRange {
    double lower = 0.0;
    double upper = 0.0;
    bool lower_closed = true;
    bool upper_closed = true;
    bool feasible = false;
    /// Constraint fixing the tighter endpoint: "edge-strip", "a-box" or "vertex-strip".
    std::string binding;

    std::string to_string() const;
};

/// Open interval of admissible a from a vertex pencil, if any.
struct VertexStrip {
    double lower = 0.0;
    double upper = 0.0;
};

/// Intersection of the a-box -m < a < m with the open edge strips
/// -delta - m - 2m(gamma_m - i) < a < delta - m - 2m(gamma_m - i) for
/// i = 0..gamma_m and every edge, plus an optional vertex strip. Every
/// bound is strict, so the result is an open interval or infeasible.
WeightRange admissible_weight_range(int m, int gamma_m, std::span<const double> thetas,
                                    std::optional<VertexStrip> vertex = std::nullopt);

/// min(gamma, 3m); requires gamma >= 2m.
double besov_eta_bound(int gamma, int m);

}  // namespace besovlab
