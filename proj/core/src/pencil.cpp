#include "besovlab/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "besovlab/error.hpp"

namespace besovlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNuMin = 0.01;
constexpr double kNuMax = 400.0;
constexpr double kNuStep = 0.05;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

long double legendre_checked(long double nu, long double theta0) {
    const long double x = std::sin(theta0 / 2) * std::sin(theta0 / 2);
    long double term = 1.0L;
    long double sum = 1.0L;
    long double biggest = 1.0L;
    for (long k = 0; k < 4'000'000; ++k) {
        const long double kk = static_cast<long double>(k);
        term *= (kk - nu) * (kk + nu + 1.0L) / ((kk + 1.0L) * (kk + 1.0L)) * x;
        sum += term;
        biggest = std::max(biggest, std::abs(term));
        if (term == 0.0L) break;
        if (std::abs(term) < 1e-14L * std::max(1.0L, std::abs(sum)) && kk > nu) break;
    }
    // Cancellation leaves about 19 - log10(biggest) digits.
    if (biggest > 1e12L) {
        throw Error("bracketing-failed", "Legendre series loses precision at nu = " +
                                             fmt(static_cast<double>(nu)));
    }
    return sum;
}

}  // namespace

double wedge_delta(double theta) {
    if (!(theta > 0.0) || theta > 2.0 * kPi * (1 + 1e-15)) {
        throw Error("invalid-argument", "wedge opening must lie in (0, 2pi], got " + fmt(theta));
    }
    return kPi / theta;
}

long double legendre_p(long double nu, long double theta0) { return legendre_checked(nu, theta0); }

std::vector<double> cap_lb_eigenvalues(double theta0, int count) {
    if (!(theta0 > 0.0) || !(theta0 < kPi)) throw Error("invalid-argument", "cap half-angle must lie in (0, pi)");
    if (count < 1) throw Error("invalid-argument", "eigenvalue count must be >= 1");
    const long double th = theta0;
    auto f = [&](long double nu) { return legendre_checked(nu, th); };

    std::vector<double> out;
    long double a = kNuMin;
    long double fa = f(a);
    try {
        while (static_cast<int>(out.size()) < count && a < kNuMax) {
            const long double b = std::min<long double>(a + kNuStep, kNuMax);
            const long double fb = f(b);
            long double root = -1.0L;
            if (fb == 0.0L) {
                root = b;
            } else if ((fa < 0) != (fb < 0)) {
                long double lo = a, hi = b, flo = fa;
                for (int it = 0; it < 200 && hi - lo > 1e-15L * hi; ++it) {
                    const long double mid = 0.5L * (lo + hi);
                    const long double fm = f(mid);
                    if (fm == 0.0L) {
                        lo = hi = mid;
                        break;
                    }
                    if ((fm < 0) == (flo < 0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                // Secant polish from the final bracket.
                long double x0 = lo, x1 = hi;
                long double f0 = f(x0), f1 = f(x1);
                for (int it = 0; it < 4 && f1 != f0 && f1 != 0.0L; ++it) {
                    const long double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
                    if (!(x2 >= a && x2 <= b)) break;
                    x0 = x1;
                    f0 = f1;
                    x1 = x2;
                    f1 = f(x1);
                }
                root = std::abs(f1) <= std::abs(f0) ? x1 : x0;
            }
            if (root >= 0.0L) {
                const double nu = static_cast<double>(root);
                out.push_back(nu * (nu + 1.0));
            }
            a = b;
            fa = fb;
        }
    } catch (const Error& e) {
        throw Error("bracketing-failed", "found " + std::to_string(out.size()) + " of " + std::to_string(count) +
                                             " roots before nu = " + fmt(static_cast<double>(a)) + " (" +
                                             e.what() + ")");
    }
    if (static_cast<int>(out.size()) < count) {
        throw Error("bracketing-failed", "found " + std::to_string(out.size()) + " of " + std::to_string(count) +
                                             " roots in nu in [" + fmt(kNuMin) + ", " + fmt(kNuMax) + "]");
    }
    return out;
}

PencilPair pencil_eigenvalues_from_lb(double lambda_lb) {
    if (!(lambda_lb >= 0.0)) throw Error("invalid-argument", "Laplace-Beltrami eigenvalue must be >= 0");
    const double root = std::sqrt(lambda_lb + 0.25);
    return {-0.5 - root, -0.5 + root};
}

PencilSpec PencilSpec::cap(double theta0, int count) {
    PencilSpec s;
    s.kind = Kind::kCap;
    s.theta0 = theta0;
    s.lb_eigenvalues = cap_lb_eigenvalues(theta0, count);
    for (double lam : s.lb_eigenvalues) {
        const PencilPair pr = pencil_eigenvalues_from_lb(lam);
        s.eigenvalues.push_back(pr.minus);
        s.eigenvalues.push_back(pr.plus);
    }
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
    return s;
}

PencilSpec PencilSpec::wedge(std::vector<double> thetas, int count) {
    PencilSpec s;
    s.kind = Kind::kWedge;
    s.thetas = std::move(thetas);
    for (double th : s.thetas) {
        const double d = wedge_delta(th);
        s.deltas.push_back(d);
        for (int k = 1; k <= count; ++k) {
            s.eigenvalues.push_back(-k * d);
            s.eigenvalues.push_back(k * d);
        }
    }
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
    return s;
}

bool strip_free(const PencilSpec& spec, double lo, double hi) {
    if (lo > hi) throw Error("invalid-argument", "strip needs lo <= hi");
    return std::none_of(spec.eigenvalues.begin(), spec.eigenvalues.end(),
                        [&](double ev) { return ev >= lo && ev <= hi; });
}

bool strip_borderline(const PencilSpec& spec, double lo, double hi, double tol) {
    return std::any_of(spec.eigenvalues.begin(), spec.eigenvalues.end(), [&](double ev) {
        return std::abs(ev - lo) <= tol || std::abs(ev - hi) <= tol;
    });
}

bool strip_free_weights(const PencilSpec& spec, double b, double b_prime) {
    const double shift = 2.0 * spec.m - 1.5;
    return strip_free(spec, std::min(b, b_prime) + shift, std::max(b, b_prime) + shift);
}

int gamma_m(int gamma, int m) {
    if (m < 1 || gamma < 2 * m) throw Error("invalid-argument", "gamma_m requires gamma >= 2m >= 2");
    return (gamma - 1) / (2 * m);
}

std::string WeightRange::to_string() const {
    if (!feasible) return "infeasible";
    return std::string(lower_closed ? "[" : "(") + fmt(lower) + ", " + fmt(upper) + (upper_closed ? "]" : ")");
}

WeightRange admissible_weight_range(int m, int gamma_m_value, std::span<const double> thetas,
                                    std::optional<VertexStrip> vertex) {
    if (m < 1) throw Error("invalid-argument", "operator order m must be >= 1");
    if (gamma_m_value < 0) throw Error("invalid-argument", "gamma_m must be >= 0");

    struct Bound {
        double value;
        bool closed;
        const char* tag;
    };
    Bound lo{-static_cast<double>(m), false, "a-box"};
    Bound hi{static_cast<double>(m), false, "a-box"};
    auto tighten_lo = [&](double v, bool closed, const char* tag) {
        if (v > lo.value || (v == lo.value && !closed && lo.closed)) lo = {v, closed, tag};
    };
    auto tighten_hi = [&](double v, bool closed, const char* tag) {
        if (v < hi.value || (v == hi.value && !closed && hi.closed)) hi = {v, closed, tag};
    };

    for (double th : thetas) {
        const double delta = wedge_delta(th);
        for (int i = 0; i <= gamma_m_value; ++i) {
            const double shift = static_cast<double>(m) + 2.0 * m * (gamma_m_value - i);
            tighten_lo(-delta - shift, false, "edge-strip");
            tighten_hi(delta - shift, false, "edge-strip");
        }
    }
    if (vertex) {
        tighten_lo(vertex->lower, false, "vertex-strip");
        tighten_hi(vertex->upper, false, "vertex-strip");
    }

    WeightRange r;
    r.lower = lo.value;
    r.upper = hi.value;
    r.lower_closed = lo.closed;
    r.upper_closed = hi.closed;
    r.feasible = lo.value < hi.value || (lo.value == hi.value && lo.closed && hi.closed);
    // Report the constraint that is not the a-box when one of them binds.
    r.binding = std::string(hi.tag) != "a-box" ? hi.tag : lo.tag;
    return r;
}

double besov_eta_bound(int gamma, int m) {
    if (m < 1 || gamma < 2 * m) throw Error("invalid-argument", "eta bound requires gamma >= 2m >= 2");
    return std::min(static_cast<double>(gamma), 3.0 * m);
}

}  // namespace besovlab
