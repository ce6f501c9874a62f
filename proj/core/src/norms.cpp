#include "besovlab/norms.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "besovlab/error.hpp"
#include "besovlab/parallel.hpp"

namespace besovlab {

namespace {

std::atomic<int> g_fault{0};

constexpr double kLn2 = std::numbers::ln2;

double powp(double x, double p) { return p == 2.0 ? x * x : std::pow(x, p); }

// Fornberg's recursion: weights of the `order`-th derivative at 0 on `nodes`.
std::vector<double> fd_weights(int order, const std::vector<double>& nodes) {
    const int n = static_cast<int>(nodes.size());
    std::vector<std::vector<double>> c(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(order + 1), 0.0));
    double c1 = 1.0;
    double c4 = nodes[0];
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[static_cast<std::size_t>(i)];
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(j)];
            c2 *= c3;
            auto& ci = c[static_cast<std::size_t>(i)];
            auto& cj = c[static_cast<std::size_t>(j)];
            if (j == i - 1) {
                const auto& cprev = c[static_cast<std::size_t>(i - 1)];
                for (int k = mn; k >= 1; --k) {
                    ci[static_cast<std::size_t>(k)] =
                        c1 * (k * cprev[static_cast<std::size_t>(k - 1)] - c5 * cprev[static_cast<std::size_t>(k)]) / c2;
                }
                ci[0] = -c1 * c5 * cprev[0] / c2;
            }
            for (int k = mn; k >= 1; --k) {
                cj[static_cast<std::size_t>(k)] =
                    (c4 * cj[static_cast<std::size_t>(k)] - k * cj[static_cast<std::size_t>(k - 1)]) / c3;
            }
            cj[0] = c4 * cj[0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(order)];
    return w;
}

// Stencil table for one derivative order: central stencil plus one-sided
// windows of k+2 (or k+1) points keyed by the start offset.
struct StencilTable {
    int k = 0;
    int central_half = 0;
    std::vector<double> central;
    std::map<std::pair<int, int>, std::vector<double>> shifted;  // (npts, start) -> weights

    explicit StencilTable(int order) : k(order) {
        central_half = (order + 1) / 2;
        std::vector<double> nodes;
        for (int o = -central_half; o <= central_half; ++o) nodes.push_back(o);
        central = fd_weights(order, nodes);
        for (int npts = order + 1; npts <= order + 2; ++npts) {
            for (int start = -(npts - 1); start <= 0; ++start) {
                std::vector<double> sn;
                for (int o = 0; o < npts; ++o) sn.push_back(start + o);
                shifted[{npts, start}] = fd_weights(order, sn);
            }
        }
    }
};

const StencilTable& stencil_table(int k) {
    static const std::array<StencilTable, 5> tables{StencilTable(0), StencilTable(1), StencilTable(2),
                                                    StencilTable(3), StencilTable(4)};
    return tables[static_cast<std::size_t>(k)];
}

// k-th derivative along one line of `len` samples at stride `stride`.
void derivative_line(const double* in, const std::uint8_t* mask, std::size_t stride, std::size_t len, int k,
                     double inv_hk, double* out) {
    const StencilTable& tab = stencil_table(k);
    std::size_t i = 0;
    while (i < len) {
        if (!mask[i * stride]) {
            out[i * stride] = 0.0;
            ++i;
            continue;
        }
        std::size_t hi = i;
        while (hi + 1 < len && mask[(hi + 1) * stride]) ++hi;
        const auto lo = static_cast<long>(i);
        const auto run_end = static_cast<long>(hi);
        const long run = run_end - lo + 1;
        for (long c = lo; c <= run_end; ++c) {
            double acc = 0.0;
            if (c - tab.central_half >= lo && c + tab.central_half <= run_end) {
                for (int o = -tab.central_half; o <= tab.central_half; ++o) {
                    acc += tab.central[static_cast<std::size_t>(o + tab.central_half)] *
                           in[static_cast<std::size_t>(c + o) * stride];
                }
            } else {
                const long npts = std::min<long>(k + 2, run);
                if (npts < k + 1) {
                    out[static_cast<std::size_t>(c) * stride] = 0.0;
                    continue;
                }
                const long first = std::clamp(c - npts / 2, lo, run_end - npts + 1);
                const auto& w = tab.shifted.at({static_cast<int>(npts), static_cast<int>(first - c)});
                for (long o = 0; o < npts; ++o) acc += w[static_cast<std::size_t>(o)] * in[static_cast<std::size_t>(first + o) * stride];
            }
            out[static_cast<std::size_t>(c) * stride] = acc * inv_hk;
        }
        i = hi + 1;
    }
}

double slope_log2(std::span<const double> y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] > 0.0) || !std::isfinite(y[i])) continue;
        const double x = static_cast<double>(i);
        const double v = std::log2(y[i]);
        sx += x;
        sy += v;
        sxx += x * x;
        sxy += x * v;
        ++n;
    }
    if (n < 2) return -kInf;
    const double den = n * sxx - sx * sx;
    return den == 0.0 ? -kInf : (n * sxy - sx * sy) / den;
}

// Integral of rho^e over the square centred at c with half-width `half`,
// refining towards vertex v for `depth` more levels.
double graded_weight(const DomainGeometry& geom, WeightMode mode, Point c, double half, Point v, double e,
                     int depth, double scale) {
    double total = 0.0;
    const double q = 0.5 * half;
    for (int sy = -1; sy <= 1; sy += 2) {
        for (int sx = -1; sx <= 1; sx += 2) {
            const Point qc{c.x + sx * q, c.y + sy * q};
            const bool touches = std::abs(qc.x - v.x) <= q * (1 + 1e-9) && std::abs(qc.y - v.y) <= q * (1 + 1e-9);
            if (touches && depth > 1) {
                total += graded_weight(geom, mode, qc, q, v, e, depth - 1, scale);
            } else {
                const double rho = scale * distance_weight_unchecked(geom, qc, mode);
                total += 4.0 * q * q * std::pow(rho, e);
            }
        }
    }
    return total;
}

double field_sup(const SampledField& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.mask()[i]) m = std::max(m, std::abs(f.values()[i]));
    }
    return m;
}

}  // namespace

namespace debug {

void set_fault(std::string_view name) {
    if (name.empty() || name == "none") {
        g_fault = 0;
    } else if (name == "mis-scaled-weight") {
        g_fault = 1;
    } else {
        throw Error("invalid-argument", "unknown fault '" + std::string(name) + "'");
    }
}

std::string_view fault() { return g_fault.load() == 1 ? "mis-scaled-weight" : ""; }

}  // namespace debug

double AdaptivityPoint::tau() const { return adaptivity_tau(r, d, p); }

double adaptivity_tau(double r, int d, double p) {
    if (d < 1 || !(p > 0.0) || r < 0.0) throw Error("invalid-argument", "adaptivity scale needs r >= 0, d >= 1, p > 0");
    if (std::isinf(p)) return r == 0.0 ? kInf : static_cast<double>(d) / r;
    return 1.0 / (r / static_cast<double>(d) + 1.0 / p);
}

std::string_view to_string(NormMethod m) noexcept {
    switch (m) {
        case NormMethod::kWavelet: return "wavelet";
        case NormMethod::kModulus: return "modulus";
        case NormMethod::kQuadrature: return "quadrature";
    }
    return "?";
}

StabilityVerdict assess_stability(std::span<const double> values, const StabilityOptions& opt) {
    StabilityVerdict v;
    const std::size_t need = std::max<std::size_t>(
        {opt.window > 0 ? static_cast<std::size_t>(opt.window) : 2, static_cast<std::size_t>(std::max(opt.run, 0)) + 1, 2});
    const std::size_t guard = opt.guard > 0 && values.size() > need
                                  ? std::min<std::size_t>(static_cast<std::size_t>(opt.guard), values.size() - need)
                                  : 0;
    values = values.first(values.size() - guard);
    const std::size_t w = opt.window > 0 ? std::min<std::size_t>(static_cast<std::size_t>(opt.window), values.size())
                                         : values.size();
    v.growth_exponent = slope_log2(values.subspan(values.size() - w));
    if (opt.run > 0 && values.size() > static_cast<std::size_t>(opt.run)) {
        bool all = true;
        for (std::size_t i = values.size() - static_cast<std::size_t>(opt.run); i < values.size(); ++i) {
            const double prev = values[i - 1];
            const double cur = values[i];
            if (!(cur > (1.0 + opt.tolerance) * prev)) all = false;
        }
        v.divergent = all;
    }
    return v;
}

NormReport besov_norm_wavelet(const CoeffTree& tree, const BesovSpec& spec, const StabilityOptions& opt) {
    if (!(spec.p > 0.0) || !(spec.q > 0.0) || !(spec.s > 0.0)) {
        throw Error("invalid-argument", "Besov norm needs s, p, q > 0");
    }
    if (static_cast<double>(tree.order()) <= spec.s) {
        throw Error("insufficient-vanishing-moments", "wavelet order " + std::to_string(tree.order()) +
                                                          " must exceed s = " + std::to_string(spec.s));
    }
    const int d = tree.dim();
    const double p = spec.p;
    const double expo = spec.s + d * (0.5 - 1.0 / p);

    NormReport rep;
    rep.method = NormMethod::kWavelet;
    rep.s_or_m = spec.s;
    rep.p = p;
    rep.q_or_a = spec.q;
    rep.level = tree.max_level();
    rep.base_part = std::abs(tree.father());

    const int J = tree.max_level();
    rep.breakdown.assign(static_cast<std::size_t>(J), 0.0);
    parallel_for(static_cast<std::size_t>(J), [&](std::size_t j) {
        double acc = 0.0;
        if (std::isinf(p)) {
            tree.for_each_in_level(static_cast<int>(j), [&](const WaveletIndex&, double c) { acc = std::max(acc, std::abs(c)); });
        } else {
            tree.for_each_in_level(static_cast<int>(j), [&](const WaveletIndex&, double c) {
                if (c != 0.0) acc += powp(std::abs(c), p);
            });
            acc = std::pow(acc, 1.0 / p);
        }
        rep.breakdown[j] = std::exp2(static_cast<double>(j) * expo) * acc;
    });

    std::vector<double> partial(static_cast<std::size_t>(J), 0.0);
    double acc = 0.0;
    for (int j = 0; j < J; ++j) {
        const double b = rep.breakdown[static_cast<std::size_t>(j)];
        if (std::isinf(spec.q)) {
            acc = std::max(acc, b);
            partial[static_cast<std::size_t>(j)] = acc;
        } else {
            acc += std::pow(b, spec.q);
            partial[static_cast<std::size_t>(j)] = std::pow(acc, 1.0 / spec.q);
        }
    }
    const double level_part = J > 0 ? partial.back() : 0.0;
    rep.value = rep.base_part + level_part;
    rep.growth_exponent = assess_stability(rep.breakdown, opt).growth_exponent;
    rep.divergent = assess_stability(partial, opt).divergent;
    return rep;
}

double modulus_of_smoothness(const SampledField& field, int r, double t, double p) {
    if (r < 1) throw Error("invalid-argument", "modulus order must be >= 1");
    if (!(t > 0.0)) throw Error("invalid-argument", "modulus step bound must be positive");
    const long n = static_cast<long>(field.n());
    const double h = field.h();
    const int dim = field.dim();
    const double cell = dim == 1 ? h : h * h;

    std::vector<std::array<int, 2>> dirs;
    if (dim == 1) {
        dirs = {{1, 0}};
    } else {
        dirs = {{1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 1}, {1, 2}, {2, -1}, {1, -2}};
    }
    std::vector<std::array<long, 2>> steps;
    for (const auto& dv : dirs) {
        const double len = std::hypot(dv[0], dv[1]) * h;
        const long mmax = static_cast<long>(std::floor(t / len + 1e-9));
        std::vector<long> ms;
        for (long m = 1; m <= mmax; m *= 2) ms.push_back(m);
        if (mmax >= 1 && ms.back() != mmax) ms.push_back(mmax);
        for (long m : ms) steps.push_back({m * dv[0], m * dv[1]});
    }
    if (steps.empty()) return 0.0;

    std::vector<double> binom(static_cast<std::size_t>(r + 1));
    for (int k = 0; k <= r; ++k) {
        binom[static_cast<std::size_t>(k)] = ((r - k) % 2 == 0 ? 1.0 : -1.0) * std::round(std::tgamma(r + 1.0) /
                                              (std::tgamma(k + 1.0) * std::tgamma(r - k + 1.0)));
    }
    const auto vals = field.values();
    const auto mask = field.mask();
    auto value_at = [&](long ix, long iy) {
        const auto idx = static_cast<std::size_t>(iy * n + ix);
        return mask[idx] ? vals[idx] : 0.0;
    };

    std::vector<double> norms(steps.size(), 0.0);
    parallel_for(steps.size(), [&](std::size_t si) {
        const long sx = steps[si][0];
        const long sy = dim == 1 ? 0 : steps[si][1];
        const long x_lo = std::max(0L, -r * sx);
        const long x_hi = std::min(n, n - r * sx);
        const long ny = dim == 1 ? 1 : n;
        const long y_lo = std::max(0L, -r * sy);
        const long y_hi = std::min(ny, ny - r * sy);
        double acc = 0.0;
        for (long iy = y_lo; iy < y_hi; ++iy) {
            for (long ix = x_lo; ix < x_hi; ++ix) {
                double d = 0.0;
                for (int k = 0; k <= r; ++k) d += binom[static_cast<std::size_t>(k)] * value_at(ix + k * sx, iy + k * sy);
                d = std::abs(d);
                if (std::isinf(p)) {
                    acc = std::max(acc, d);
                } else if (d != 0.0) {
                    acc += powp(d, p);
                }
            }
        }
        norms[si] = std::isinf(p) ? acc : std::pow(cell * acc, 1.0 / p);
    });
    return *std::max_element(norms.begin(), norms.end());
}

NormReport besov_norm_modulus(const SampledField& field, const BesovSpec& spec, int r) {
    if (!(spec.p > 0.0) || !(spec.q > 0.0) || !(spec.s > 0.0)) {
        throw Error("invalid-argument", "Besov norm needs s, p, q > 0");
    }
    if (r == 0) r = static_cast<int>(std::floor(spec.s)) + 1;
    if (static_cast<double>(r) <= spec.s) {
        throw Error("insufficient-vanishing-moments", "difference order must exceed s");
    }
    NormReport rep;
    rep.method = NormMethod::kModulus;
    rep.s_or_m = spec.s;
    rep.p = spec.p;
    rep.q_or_a = spec.q;
    rep.level = field.level();

    const double cell = field.dim() == 1 ? field.h() : field.h() * field.h();
    double lp = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) {
        if (!field.mask()[i]) continue;
        const double v = std::abs(field.values()[i]);
        if (std::isinf(spec.p)) {
            lp = std::max(lp, v);
        } else if (v != 0.0) {
            lp += powp(v, spec.p);
        }
    }
    rep.base_part = std::isinf(spec.p) ? lp : std::pow(cell * lp, 1.0 / spec.p);

    double acc = 0.0;
    for (int j = 0;; ++j) {
        const double t = std::ldexp(1.0, -j);
        if (t < field.h() * (1 - 1e-12)) break;
        const double term = std::exp2(j * spec.s) * modulus_of_smoothness(field, r, t, spec.p);
        rep.breakdown.push_back(term);
        if (std::isinf(spec.q)) {
            acc = std::max(acc, term);
        } else {
            acc += kLn2 * std::pow(term, spec.q);
        }
    }
    const double integral = std::isinf(spec.q) ? acc : std::pow(acc, 1.0 / spec.q);
    rep.value = rep.base_part + integral;
    rep.growth_exponent = slope_log2(rep.breakdown);
    return rep;
}

SampledField fd_derivative(const SampledField& field, int ax, int ay) {
    if (ax < 0 || ay < 0 || ax > 4 || ay > 4) throw Error("invalid-argument", "derivative order must lie in 0..4");
    if (field.dim() == 1 && ay != 0) throw Error("invalid-argument", "1D field has no y derivative");
    const std::size_t n = field.n();
    const std::size_t ny = field.dim() == 1 ? 1 : n;
    const double h = field.h();
    SampledField out = field;
    std::vector<double> tmp(field.size());
    auto vals = out.values();
    const auto mask = field.mask();
    if (ay > 0) {
        const double inv = std::pow(h, -ay);
        parallel_for(n, [&](std::size_t ix) {
            derivative_line(vals.data() + ix, mask.data() + ix, n, n, ay, inv, tmp.data() + ix);
        });
        std::copy(tmp.begin(), tmp.end(), vals.begin());
    }
    if (ax > 0) {
        const double inv = std::pow(h, -ax);
        parallel_for(ny, [&](std::size_t iy) {
            derivative_line(vals.data() + iy * n, mask.data() + iy * n, 1, n, ax, inv, tmp.data() + iy * n);
        });
        std::copy(tmp.begin(), tmp.end(), vals.begin());
    }
    out.apply_zero_extension();
    return out;
}

double sobolev_norm(const SampledField& field, int m, double p) {
    if (m < 0 || m > 4) throw Error("invalid-argument", "Sobolev order must lie in 0..4");
    if (!(p > 0.0) || std::isinf(p)) throw Error("invalid-argument", "Sobolev norm needs finite p > 0");
    const double cell = field.cell_measure();
    double total = 0.0;
    for (int order = 0; order <= m; ++order) {
        for (int ay = 0; ay <= (field.dim() == 1 ? 0 : order); ++ay) {
            const SampledField der = fd_derivative(field, order - ay, ay);
            double acc = 0.0;
            for (std::size_t i = 0; i < der.size(); ++i) {
                if (der.mask()[i] && der.values()[i] != 0.0) acc += powp(std::abs(der.values()[i]), p);
            }
            total += cell * acc;
        }
    }
    return std::pow(total, 1.0 / p);
}

NormReport kondratiev_norm(const SampledField& field, const DomainGeometry& geom, const KondratievSpec& spec,
                           WeightMode mode) {
    if (spec.m < 0 || spec.m > 4) throw Error("invalid-argument", "Kondratiev order must lie in 0..4");
    if (!(spec.p > 0.0) || std::isinf(spec.p)) throw Error("invalid-argument", "Kondratiev norm needs finite p > 0");
    if (field.dim() != 2) throw Error("invalid-argument", "Kondratiev norm is defined for 2D fields");
    const std::size_t n = field.n();
    const double h = field.h();
    const double p = spec.p;
    const double scale = g_fault.load() == 1 ? std::max(field_sup(field), 1e-300) : 1.0;

    // |D^alpha u|^p summed over alpha of each order, per cell.
    std::vector<std::vector<double>> order_terms(static_cast<std::size_t>(spec.m + 1),
                                                 std::vector<double>(field.size(), 0.0));
    for (int order = 0; order <= spec.m; ++order) {
        auto& dst = order_terms[static_cast<std::size_t>(order)];
        for (int ay = 0; ay <= order; ++ay) {
            const SampledField der = order == 0 ? field : fd_derivative(field, order - ay, ay);
            for (std::size_t i = 0; i < der.size(); ++i) {
                if (der.mask()[i]) dst[i] += powp(std::abs(der.values()[i]), p);
            }
        }
    }

    constexpr int kRings = 48;
    constexpr int kGradedDepth = 4;
    std::vector<std::array<double, kRings>> row_rings(n);
    parallel_for(n, [&](std::size_t iy) {
        auto& rings = row_rings[iy];
        rings.fill(0.0);
        for (std::size_t ix = 0; ix < n; ++ix) {
            const std::size_t idx = field.index(ix, iy);
            if (!field.inside(ix, iy)) continue;
            const Point c = field.center(ix, iy);
            const double rho = scale * distance_weight_unchecked(geom, c, mode);
            const Point* vertex = nullptr;
            if (mode == WeightMode::kSingularSet) {
                for (const Point& v : geom.singular_set()) {
                    if (std::abs(c.x - v.x) <= 0.5 * h * (1 + 1e-9) && std::abs(c.y - v.y) <= 0.5 * h * (1 + 1e-9)) {
                        vertex = &v;
                        break;
                    }
                }
            }
            double cell_total = 0.0;
            for (int order = 0; order <= spec.m; ++order) {
                const double term = order_terms[static_cast<std::size_t>(order)][idx];
                if (term == 0.0) continue;
                const double e = p * (order - spec.a);
                const double w = vertex ? graded_weight(geom, mode, c, 0.5 * h, *vertex, e, kGradedDepth, scale)
                                        : h * h * std::pow(rho, e);
                cell_total += w * term;
            }
            int ring = 0;
            if (rho < 1.0) {
                ring = rho > 0.0 ? static_cast<int>(std::floor(-std::log2(rho))) : kRings - 1;
                ring = std::clamp(ring, 0, kRings - 1);
            }
            rings[static_cast<std::size_t>(ring)] += cell_total;
        }
    });

    NormReport rep;
    rep.method = NormMethod::kQuadrature;
    rep.s_or_m = spec.m;
    rep.p = p;
    rep.q_or_a = spec.a;
    rep.level = field.level();
    rep.breakdown.assign(kRings, 0.0);
    for (std::size_t iy = 0; iy < n; ++iy) {
        for (int k = 0; k < kRings; ++k) rep.breakdown[static_cast<std::size_t>(k)] += row_rings[iy][static_cast<std::size_t>(k)];
    }
    double total = 0.0;
    for (double b : rep.breakdown) total += b;
    rep.value = std::pow(total, 1.0 / p);

    // Ring trend: innermost two occupied rings are resolution-limited and skipped.
    int last = kRings - 1;
    while (last >= 0 && rep.breakdown[static_cast<std::size_t>(last)] == 0.0) --last;
    const int hi = last - 2;
    const int lo = std::max(1, hi - 3);
    if (hi > lo) {
        rep.growth_exponent =
            slope_log2(std::span<const double>(rep.breakdown).subspan(static_cast<std::size_t>(lo), static_cast<std::size_t>(hi - lo + 1)));
        rep.divergent = rep.growth_exponent > 0.0;
    }
    return rep;
}

}  // namespace besovlab
