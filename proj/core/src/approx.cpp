#include "besovlab/approx.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "besovlab/error.hpp"
#include "besovlab/parallel.hpp"

namespace besovlab {

namespace {

bool rank_before(const RankedCoeff& a, const RankedCoeff& b) {
    if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
    const bool af = a.index.is_father();
    const bool bf = b.index.is_father();
    if (af != bf) return af;
    if (a.index.level != b.index.level) return a.index.level < b.index.level;
    if (a.index.k[1] != b.index.k[1]) return a.index.k[1] < b.index.k[1];
    if (a.index.k[0] != b.index.k[0]) return a.index.k[0] < b.index.k[0];
    return a.index.type < b.index.type;
}

// sqrt of the sum of squares, accumulated in increasing order.
double ascending_l2(std::vector<double> mags) {
    for (double& m : mags) m = m * m;
    std::sort(mags.begin(), mags.end());
    double acc = 0.0;
    for (double v : mags) acc += v;
    return std::sqrt(acc);
}

double lp_difference(const SampledField& a, const SampledField& b, double p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = std::abs(a.values()[i] - b.values()[i]);
        if (std::isinf(p)) {
            acc = std::max(acc, d);
        } else if (d != 0.0) {
            acc += std::pow(d, p);
        }
    }
    return std::isinf(p) ? acc : std::pow(a.cell_measure() * acc, 1.0 / p);
}

// Summed-area table with one row/column of zero padding.
struct Sat {
    std::size_t n = 0;
    std::vector<double> s;

    template <typename F>
    Sat(std::size_t size, F value) : n(size), s((size + 1) * (size + 1), 0.0) {
        for (std::size_t y = 0; y < n; ++y) {
            double row = 0.0;
            for (std::size_t x = 0; x < n; ++x) {
                row += value(x, y);
                s[(y + 1) * (n + 1) + x + 1] = s[y * (n + 1) + x + 1] + row;
            }
        }
    }

    // Sum over cells [x0, x1) x [y0, y1), clipped to the grid.
    double sum(long x0, long x1, long y0, long y1) const {
        const long N = static_cast<long>(n);
        x0 = std::clamp(x0, 0L, N);
        x1 = std::clamp(x1, 0L, N);
        y0 = std::clamp(y0, 0L, N);
        y1 = std::clamp(y1, 0L, N);
        if (x1 <= x0 || y1 <= y0) return 0.0;
        const auto at = [&](long x, long y) { return s[static_cast<std::size_t>(y) * (n + 1) + static_cast<std::size_t>(x)]; };
        return at(x1, y1) - at(x0, y1) - at(x1, y0) + at(x0, y0);
    }
};

struct CellRange {
    long x0, x1, y0, y1;
    long full;  // cells covered by the unclipped cube
};

CellRange cube_cells(const Cube& q, const Box& box, double h) {
    CellRange r;
    r.x0 = std::lround((q.lo.x - box.x0) / h);
    r.y0 = std::lround((q.lo.y - box.y0) / h);
    const long w = std::max(1L, std::lround(q.side / h));
    r.x1 = r.x0 + w;
    r.y1 = r.y0 + w;
    r.full = w * w;
    return r;
}

}  // namespace

std::string_view to_string(RateMethod m) noexcept {
    return m == RateMethod::kNonlinear ? "nonlinear" : "uniform";
}

RateFit fit_rate(std::span<const std::pair<double, double>> pairs) {
    if (pairs.size() < 4) throw Error("invalid-argument", "rate fit needs at least 4 pairs");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [N, e] : pairs) {
        if (!(N > 0.0) || !(e > 0.0) || !std::isfinite(e)) {
            throw Error("invalid-argument", "rate fit needs positive N and errors in the window");
        }
        const double x = std::log(N);
        const double y = std::log(e);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pairs.size());
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw Error("invalid-argument", "rate fit needs distinct N values");
    const double slope = (n * sxy - sx * sy) / den;
    const double icept = (sy - slope * sx) / n;
    double ss = 0.0;
    for (const auto& [N, e] : pairs) {
        const double r = std::log(e) - (icept + slope * std::log(N));
        ss += r * r;
    }
    return {-slope, std::sqrt(ss / n)};
}

std::vector<RankedCoeff> rank_coefficients(const CoeffTree& tree) {
    std::vector<RankedCoeff> out;
    out.reserve(tree.slot_count());
    tree.for_each([&](const WaveletIndex& idx, double c) { out.push_back({std::abs(c), idx}); });
    std::stable_sort(out.begin(), out.end(), rank_before);
    return out;
}

std::vector<double> sigma_n_curve(const CoeffTree& tree, std::span<const std::size_t> Ns) {
    const auto ranked = rank_coefficients(tree);
    // tail[i] = sum of squares of ranked[i..], built from the smallest upward.
    std::vector<double> tail(ranked.size() + 1, 0.0);
    for (std::size_t i = ranked.size(); i-- > 0;) {
        tail[i] = tail[i + 1] + ranked[i].magnitude * ranked[i].magnitude;
    }
    std::vector<double> out;
    out.reserve(Ns.size());
    for (std::size_t N : Ns) out.push_back(std::sqrt(tail[std::min(N, ranked.size())]));
    return out;
}

double sigma_n(const CoeffTree& tree, std::size_t N, double p) {
    if (p == 2.0) {
        const std::size_t Ns[1] = {N};
        return sigma_n_curve(tree, Ns).front();
    }
    if (!(p > 0.0)) throw Error("invalid-argument", "sigma_n needs p > 0");
    const auto ranked = rank_coefficients(tree);
    const WaveletSystem sys(tree.order());
    CoeffTree kept(tree.dim(), tree.max_level(), tree.order(), tree.box());
    for (std::size_t i = 0; i < std::min(N, ranked.size()); ++i) {
        kept.set(ranked[i].index, tree.get(ranked[i].index));
    }
    return lp_difference(dwt_inverse(tree, sys), dwt_inverse(kept, sys), p);
}

UniformError uniform_error(const CoeffTree& tree, int j, double p) {
    if (j < 0 || j > tree.max_level()) throw Error("invalid-argument", "truncation level out of range");
    UniformError out;
    out.n = 1;
    for (int l = 0; l < j; ++l) out.n += tree.level_capacity(l);
    if (p == 2.0) {
        std::vector<double> mags;
        for (int l = j; l < tree.max_level(); ++l) {
            tree.for_each_in_level(l, [&](const WaveletIndex&, double c) { mags.push_back(std::abs(c)); });
        }
        out.error = ascending_l2(std::move(mags));
        return out;
    }
    const WaveletSystem sys(tree.order());
    CoeffTree kept(tree.dim(), tree.max_level(), tree.order(), tree.box());
    kept.set_father(tree.father());
    for (int l = 0; l < j; ++l) {
        tree.for_each_in_level(l, [&](const WaveletIndex& idx, double c) { kept.set(idx, c); });
    }
    out.error = lp_difference(dwt_inverse(tree, sys), dwt_inverse(kept, sys), p);
    return out;
}

std::pair<std::size_t, std::size_t> trimmed_window(std::size_t count, std::size_t trim, std::size_t min_points) {
    while (trim > 0 && count < 2 * trim + min_points) --trim;
    if (count < 2 * trim) return {0, count};
    return {trim, count - trim};
}

RateReport nonlinear_rate(const CoeffTree& tree, double p) {
    RateReport rep;
    rep.method = RateMethod::kNonlinear;
    const std::size_t total = tree.slot_count();
    std::vector<std::size_t> Ns;
    for (std::size_t N = 1; N <= total; N *= 2) Ns.push_back(N);
    std::vector<double> errs;
    if (p == 2.0) {
        errs = sigma_n_curve(tree, Ns);
    } else {
        for (std::size_t N : Ns) errs.push_back(sigma_n(tree, N, p));
    }
    for (std::size_t i = 0; i < Ns.size(); ++i) rep.pairs.emplace_back(static_cast<double>(Ns[i]), errs[i]);
    std::tie(rep.window_begin, rep.window_end) = trimmed_window(rep.pairs.size());
    const auto window = std::span(rep.pairs).subspan(rep.window_begin, rep.window_end - rep.window_begin);
    if (std::any_of(window.begin(), window.end(), [](const auto& pr) { return pr.second == 0.0; })) {
        rep.alpha = kInf;
        rep.residual = 0.0;
        return rep;
    }
    const RateFit fit = fit_rate(window);
    rep.alpha = fit.alpha;
    rep.residual = fit.residual;
    return rep;
}

RateReport uniform_rate(const CoeffTree& tree, double p, int j_min) {
    RateReport rep;
    rep.method = RateMethod::kUniform;
    for (int j = j_min; j <= tree.max_level() - 2; ++j) {
        const UniformError u = uniform_error(tree, j, p);
        rep.pairs.emplace_back(static_cast<double>(u.n), u.error);
    }
    rep.window_begin = 0;
    rep.window_end = rep.pairs.size();
    if (std::any_of(rep.pairs.begin(), rep.pairs.end(), [](const auto& pr) { return pr.second == 0.0; })) {
        rep.alpha = kInf;
        return rep;
    }
    const RateFit fit = fit_rate(rep.pairs);
    rep.alpha = fit.alpha;
    rep.residual = fit.residual;
    return rep;
}

DjpReport djp_consistency(const CoeffTree& tree, double m, double p, double tolerance) {
    if (!(m > 0.0) || m >= static_cast<double>(tree.order())) {
        throw Error("invalid-argument", "smoothness must lie in (0, wavelet order)");
    }
    DjpReport rep;
    rep.m = m;
    rep.tau = adaptivity_tau(m, tree.dim(), p);
    rep.target = m / tree.dim();
    const NormReport norm = besov_norm_wavelet(tree, {m, rep.tau, rep.tau, tree.dim()});
    rep.norm_value = norm.value;
    rep.growth_exponent = norm.growth_exponent;
    rep.norm_finite = norm.growth_exponent < 0.0;
    rep.alpha = nonlinear_rate(tree, p).alpha;
    const bool rate_ok = rep.alpha >= rep.target - tolerance;
    rep.consistent = rep.norm_finite == rate_ok;
    return rep;
}

RingDecomposition ring_decompose(const CoeffTree& tree, const DomainGeometry& geom) {
    if (tree.dim() != 2) throw Error("invalid-argument", "ring decomposition needs a 2D tree");
    const WaveletSystem sys(tree.order());
    const Box& box = tree.box();
    const int raster_level = std::clamp(tree.max_level(), 1, 11);
    const SampledField mask = rasterize(geom, raster_level);
    const double hr = mask.h();
    const Sat sat(mask.n(), [&](std::size_t x, std::size_t y) { return mask.inside(x, y) ? 1.0 : 0.0; });

    RingDecomposition rd;
    rd.max_level = tree.max_level();
    const int J = tree.max_level();
    rd.labels.resize(static_cast<std::size_t>(J));
    rd.counts.resize(static_cast<std::size_t>(J));
    rd.boundary.assign(static_cast<std::size_t>(J), 0);
    rd.exterior.assign(static_cast<std::size_t>(J), 0);
    rd.total.assign(static_cast<std::size_t>(J), 0);
    for (int j = 0; j < J; ++j) {
        const std::size_t cap = tree.level_capacity(j);
        auto& labels = rd.labels[static_cast<std::size_t>(j)];
        labels.assign(cap, 0);
        const double ring_width = std::ldexp(1.0, -j);
        parallel_for(cap, [&](std::size_t slot) {
            const WaveletIndex idx = tree.index_of(j, slot);
            const Cube q = support_cube(idx, sys, box, 2);
            const CellRange cr = cube_cells(q, box, hr);
            const double inside = sat.sum(cr.x0, cr.x1, cr.y0, cr.y1);
            std::int32_t label;
            if (inside == 0.0) {
                label = kExteriorBucket;
            } else {
                const double rho = smoothed_distance(geom.rect_distance_to_singular_set(q.lo, q.side));
                if (rho < ring_width) {
                    label = 0;
                } else if (inside < static_cast<double>(cr.full)) {
                    label = kBoundaryBucket;
                } else {
                    label = static_cast<std::int32_t>(std::floor(rho / ring_width));
                }
            }
            labels[slot] = label;
        });
        auto& counts = rd.counts[static_cast<std::size_t>(j)];
        counts.assign((std::size_t{1} << j) + 1, 0);
        for (std::int32_t label : labels) {
            if (label == kExteriorBucket) {
                ++rd.exterior[static_cast<std::size_t>(j)];
                continue;
            }
            ++rd.total[static_cast<std::size_t>(j)];
            if (label == kBoundaryBucket) {
                ++rd.boundary[static_cast<std::size_t>(j)];
            } else {
                ++counts[std::min<std::size_t>(static_cast<std::size_t>(label), counts.size() - 1)];
            }
        }
    }
    return rd;
}

WhitneyReport whitney_ring_check(const CoeffTree& tree, const SampledField& field, const DomainGeometry& geom,
                                 int m, double a, double p, int level_lo, int level_hi) {
    if (m < 0 || m > 4) throw Error("invalid-argument", "Whitney check order must lie in 0..4");
    if (tree.order() < m) throw Error("insufficient-vanishing-moments", "wavelet order must be >= m");
    if (field.dim() != 2 || tree.dim() != 2) throw Error("invalid-argument", "Whitney check needs 2D data");
    if (level_hi < 0) level_hi = tree.max_level() - 1;
    const WaveletSystem sys(tree.order());
    const RingDecomposition rd = ring_decompose(tree, geom);
    const std::size_t n = field.n();
    const double h = field.h();

    std::vector<double> cell(field.size(), 0.0);
    for (int ay = 0; ay <= m; ++ay) {
        const SampledField der = m == 0 ? field : fd_derivative(field, m - ay, ay);
        for (std::size_t iy = 0; iy < n; ++iy) {
            for (std::size_t ix = 0; ix < n; ++ix) {
                const std::size_t i = field.index(ix, iy);
                if (!field.inside(ix, iy) || der.values()[i] == 0.0) continue;
                const double rho = distance_weight_unchecked(geom, field.center(ix, iy));
                cell[i] += std::pow(std::pow(rho, m - a) * std::abs(der.values()[i]), p);
            }
        }
    }
    const double cell_area = h * h;
    const Sat sat(n, [&](std::size_t x, std::size_t y) { return cell_area * cell[y * n + x]; });

    double cmax = 0.0;
    tree.for_each([&](const WaveletIndex&, double c) { cmax = std::max(cmax, std::abs(c)); });

    WhitneyReport rep;
    for (int j = std::max(level_lo, 0); j <= std::min(level_hi, tree.max_level() - 1); ++j) {
        const auto& labels = rd.labels[static_cast<std::size_t>(j)];
        const double side = tree.box().side * std::ldexp(1.0, -j);
        const double vol_factor = std::pow(side * side, m / 2.0 + 0.5 - 1.0 / p);
        double best = 0.0;
        std::size_t checked = 0;
        for (std::size_t slot = 0; slot < labels.size(); ++slot) {
            if (labels[slot] < 1) continue;
            const WaveletIndex idx = tree.index_of(j, slot);
            const double c = std::abs(tree.get(idx));
            const Cube q = support_cube(idx, sys, tree.box(), 2);
            const CellRange cr = cube_cells(q, tree.box(), h);
            const double mu = std::pow(sat.sum(cr.x0, cr.x1, cr.y0, cr.y1), 1.0 / p);
            const double rho_i = smoothed_distance(geom.rect_distance_to_singular_set(q.lo, q.side));
            ++checked;
            if (mu == 0.0) {
                if (c > 1e-12 * cmax) ++rep.flagged;
                continue;
            }
            best = std::max(best, c / (vol_factor * std::pow(rho_i, a - m) * mu));
        }
        if (checked == 0) continue;
        rep.levels.push_back(j);
        rep.max_ratio.push_back(best);
        rep.checked.push_back(checked);
    }
    if (!rep.max_ratio.empty()) {
        const auto [lo, hi] = std::minmax_element(rep.max_ratio.begin(), rep.max_ratio.end());
        rep.variation = *lo > 0.0 ? *hi / *lo : (*hi > 0.0 ? kInf : 1.0);
    }
    return rep;
}

double stability_crossing(std::span<const double> grid, std::span<const double> slopes) {
    if (grid.empty() || grid.size() != slopes.size()) throw Error("invalid-argument", "grid and slopes must match");
    if (!(slopes[0] < 0.0)) return grid.front();
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(slopes[i] < 0.0)) {
            const double s0 = slopes[i - 1];
            const double s1 = slopes[i];
            if (!std::isfinite(s1)) return grid[i - 1];
            return grid[i - 1] + (grid[i] - grid[i - 1]) * (-s0) / (s1 - s0);
        }
    }
    return grid.back();
}

EmbeddingReport embedding_check(std::span<const SampledField> fields, const DomainGeometry& geom,
                                const EmbeddingParams& prm, EmbeddingMode mode) {
    if (fields.empty()) throw Error("invalid-argument", "embedding check needs at least one field");
    EmbeddingReport rep;
    rep.mode = mode;
    const int d = 2;
    const WaveletSystem sys(prm.order);

    if (mode == EmbeddingMode::kPolyhedral) {
        // delta = 0 for a vertex singular set in 2D.
        const double delta = 0.0;
        if (!(std::min(prm.s, prm.a) > delta / d * prm.gamma)) {
            throw Error("hypothesis-violated", "polyhedral embedding needs min(s, a) > (delta/d) gamma");
        }
        if (prm.order <= prm.gamma || prm.order <= prm.s) {
            throw Error("hypothesis-violated", "wavelet order must exceed gamma and s");
        }
        const double tau_star = adaptivity_tau(prm.gamma, d, prm.p);
        for (int i = 1; i <= prm.tau_samples; ++i) {
            rep.taus.push_back(tau_star + (prm.p - tau_star) * i / (prm.tau_samples + 1.0));
        }
        std::vector<std::vector<double>> ratios(rep.taus.size());
        for (std::size_t f = 0; f < fields.size(); ++f) {
            const CoeffTree tree = dwt_forward(fields[f], sys);
            const double rhs = kondratiev_norm(fields[f], geom, {prm.gamma, prm.p, prm.a}).value +
                               besov_norm_wavelet(tree, {prm.s, prm.p, kInf, d}).value;
            for (std::size_t t = 0; t < rep.taus.size(); ++t) {
                const double lhs = besov_norm_wavelet(tree, {static_cast<double>(prm.gamma), rep.taus[t], kInf, d}).value;
                const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? kInf : 0.0);
                rep.rows.push_back({f, rep.taus[t], lhs, rhs, ratio});
                ratios[t].push_back(ratio);
            }
        }
        for (const auto& rs : ratios) {
            const auto [lo, hi] = std::minmax_element(rs.begin(), rs.end());
            const double spread = *lo > 0.0 ? *hi / *lo : (*hi > 0.0 ? kInf : 1.0);
            rep.spread.push_back(spread);
            rep.max_spread = std::max(rep.max_spread, spread);
        }
        return rep;
    }

    if (!(prm.a > 0.0) || prm.gamma < 1) {
        throw Error("hypothesis-violated", "Lipschitz embedding needs a > 0 and gamma >= 1");
    }
    rep.predicted_flip = std::min(static_cast<double>(prm.gamma), prm.a * d / (d - 1.0));
    const CoeffTree tree = dwt_forward(fields.front(), sys);
    const int steps = static_cast<int>(std::lround(prm.sweep_half_width / prm.sweep_step));
    for (int i = -steps; i <= steps; ++i) {
        const double alpha = rep.predicted_flip + i * prm.sweep_step;
        if (!(alpha > 0.0)) continue;
        if (alpha >= prm.order) {
            throw Error("hypothesis-violated", "sweep exceeds the wavelet order");
        }
        const double tau = adaptivity_tau(alpha, d, prm.p);
        const NormReport nr = besov_norm_wavelet(tree, {alpha, tau, tau, d});
        rep.alphas.push_back(alpha);
        rep.slopes.push_back(nr.growth_exponent);
        rep.rows.push_back({0, tau, nr.value, 0.0, nr.growth_exponent});
    }
    rep.observed_flip = stability_crossing(rep.alphas, rep.slopes);
    return rep;
}

}  // namespace besovlab
