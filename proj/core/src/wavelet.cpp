#include "besovlab/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "besovlab/error.hpp"
#include "besovlab/parallel.hpp"

namespace besovlab {

namespace {

// Daubechies low-pass filters, normalised to sum sqrt(2), orders 2..10.
const std::vector<std::vector<double>>& daubechies_table() {
    static const std::vector<std::vector<double>> table = {
        {0.48296291314453414337, 0.83651630373780790558, 0.22414386804201338103,
         -0.12940952255126038117},
        {0.33267055295008261600, 0.80689150931109257649, 0.45987750211849157010,
         -0.13501102001025458870, -0.085441273882026661693, 0.035226291885709536603},
        {0.23037781330889650086, 0.71484657055291564709, 0.63088076792985890788,
         -0.027983769416859854211, -0.18703481171909308408, 0.030841381835560763627,
         0.032883011666885199735, -0.010597401785069032105},
        {0.16010239797419291448, 0.60382926979718967054, 0.72430852843777292773,
         0.13842814590132073151, -0.24229488706638203186, -0.032244869584638374648,
         0.077571493840045713523, -0.0062414902127982742742, -0.012580751999081999469,
         0.0033357252854737712780},
        {0.11154074335010946362, 0.49462389039845308568, 0.75113390802109535068,
         0.31525035170919762909, -0.22626469396543982008, -0.12976686756726193556,
         0.097501605587323049102, 0.027522865530305728626, -0.031582039317486029565,
         0.00055384220116149613925, 0.0047772575109455106396, -0.0010773010853084795649},
        {0.077852054085009179020, 0.39653931948191730654, 0.72913209084623511992,
         0.46978228740519312247, -0.14390600392856497541, -0.22403618499387498264,
         0.071309219266830264751, 0.080612609151083071913, -0.038029936935014413580,
         -0.016574541630666880654, 0.012550998556099840613, 0.00042957797292136652113,
         -0.0018016407040474909153, 0.00035371379997452024845},
        {0.054415842243104009955, 0.31287159091429997066, 0.67563073629728980681,
         0.58535468365420671277, -0.015829105256349305667, -0.28401554296154692652,
         0.00047248457391328277036, 0.12874742662047845886, -0.017369301001807546170,
         -0.044088253930794751507, 0.013981027917398281649, 0.0087460940474057767164,
         -0.0048703529934515743104, -0.00039174037337694704630, 0.00067544940645056936637,
         -0.00011747678412476953373},
        {0.038077947363878346589, 0.24383467461259035373, 0.60482312369011111190,
         0.65728807805130053808, 0.13319738582500757619, -0.29327378327917490881,
         -0.096840783222976460514, 0.14854074933810638014, 0.030725681479333379212,
         -0.067632829061329973676, 0.00025094711483145195759, 0.022361662123679097205,
         -0.0047232047577513972779, -0.0042815036824634298345, 0.0018476468830562264766,
         0.00023038576352319596721, -0.00025196318894271013697, 0.000039347320316271599481},
        {0.026670057900555553587, 0.18817680007769148902, 0.52720118893172558648,
         0.68845903945360356574, 0.28117234366057746075, -0.24984642432731537942,
         -0.19594627437737704350, 0.12736934033579326008, 0.093057364603572351160,
         -0.071394147166397087145, -0.029457536821875812858, 0.033212674059341001740,
         0.0036065535669561696554, -0.010733175483330575044, 0.0013953517470529011658,
         0.0019924052951850561172, -0.00068585669495971162656, -0.00011646685512928545095,
         0.000093588670320069591334, -0.000013264202894521244812},
    };
    return table;
}

// Periodic one-level analysis of n samples read with the given stride.
void analyze_1d(const double* src, std::size_t stride, std::size_t n, std::span<const double> lo,
                std::span<const double> hi, double* low_out, double* high_out, std::size_t out_stride) {
    const std::size_t half = n / 2;
    const std::size_t len = lo.size();
    for (std::size_t k = 0; k < half; ++k) {
        double a = 0.0;
        double d = 0.0;
        for (std::size_t m = 0; m < len; ++m) {
            const double v = src[((2 * k + m) % n) * stride];
            a += lo[m] * v;
            d += hi[m] * v;
        }
        low_out[k * out_stride] = a;
        high_out[k * out_stride] = d;
    }
}

// Inverse of analyze_1d: dst (n samples, stride) from low/high halves.
void synthesize_1d(const double* low_in, const double* high_in, std::size_t in_stride, std::size_t n,
                   std::span<const double> lo, std::span<const double> hi, double* dst,
                   std::size_t stride) {
    const std::size_t half = n / 2;
    const std::size_t len = lo.size();
    for (std::size_t i = 0; i < n; ++i) dst[i * stride] = 0.0;
    for (std::size_t k = 0; k < half; ++k) {
        const double a = low_in[k * in_stride];
        const double d = high_in[k * in_stride];
        for (std::size_t m = 0; m < len; ++m) {
            dst[((2 * k + m) % n) * stride] += lo[m] * a + hi[m] * d;
        }
    }
}

// One 2D analysis step on the top-left n x n block of a row-major buffer with
// row length `ld`. Leaves LL in [0,n/2)^2 and the three detail quadrants.
void analyze_2d_step(std::vector<double>& buf, std::size_t ld, std::size_t n, const WaveletSystem& sys) {
    const std::size_t half = n / 2;
    std::vector<double> tmp(n * n);
    parallel_for(n, [&](std::size_t y) {
        analyze_1d(&buf[y * ld], 1, n, sys.lowpass(), sys.highpass(), &tmp[y * n], &tmp[y * n + half], 1);
    });
    parallel_for(n, [&](std::size_t x) {
        analyze_1d(&tmp[x], n, n, sys.lowpass(), sys.highpass(), &buf[x], &buf[half * ld + x], ld);
    });
}

void synthesize_2d_step(std::vector<double>& buf, std::size_t ld, std::size_t n, const WaveletSystem& sys) {
    const std::size_t half = n / 2;
    std::vector<double> tmp(n * n);
    parallel_for(n, [&](std::size_t x) {
        synthesize_1d(&buf[x], &buf[half * ld + x], ld, n, sys.lowpass(), sys.highpass(), &tmp[x], n);
    });
    parallel_for(n, [&](std::size_t y) {
        synthesize_1d(&tmp[y * n], &tmp[y * n + half], 1, n, sys.lowpass(), sys.highpass(), &buf[y * ld], 1);
    });
}

}  // namespace

WaveletSystem::WaveletSystem(int order) : order_(order) {
    if (order < 2 || order > 10) {
        throw Error("invalid-argument", "wavelet order must lie in 2..10, got " + std::to_string(order));
    }
    lowpass_ = daubechies_table()[static_cast<std::size_t>(order - 2)];
    const std::size_t len = lowpass_.size();
    highpass_.resize(len);
    for (std::size_t m = 0; m < len; ++m) {
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        highpass_[m] = sign * lowpass_[len - 1 - m];
    }
}

CoeffTree::CoeffTree(int dim, int max_level, int order, Box box)
    : dim_(dim), max_level_(max_level), order_(order), box_(box) {
    if (dim != 1 && dim != 2) throw Error("invalid-argument", "coefficient tree dimension must be 1 or 2");
    if (max_level < 0 || max_level > 16) throw Error("invalid-argument", "coefficient tree level out of range");
    dense_.resize(static_cast<std::size_t>(max_level));
    sparse_.resize(static_cast<std::size_t>(max_level));
    for (int j = 0; j < max_level; ++j) {
        if (level_is_dense(j)) dense_[static_cast<std::size_t>(j)].assign(level_capacity(j), 0.0);
    }
}

std::size_t CoeffTree::level_capacity(int level) const noexcept {
    const std::size_t per = per_axis(level);
    return static_cast<std::size_t>(types()) * (dim_ == 1 ? per : per * per);
}

bool CoeffTree::level_is_dense(int level) const noexcept { return level_capacity(level) <= kDenseLimit; }

void CoeffTree::check(const WaveletIndex& idx) const {
    if (idx.type == 0) {
        if (idx.level != 0 || idx.k[0] != 0 || idx.k[1] != 0) {
            throw Error("invalid-argument", "scaling coefficients live at level 0, k = 0 only");
        }
        return;
    }
    if (idx.level < 0 || idx.level >= max_level_) throw Error("invalid-argument", "wavelet level out of range");
    if (idx.type < 0 || idx.type > types()) throw Error("invalid-argument", "wavelet type out of range");
    const auto per = static_cast<std::int64_t>(per_axis(idx.level));
    if (idx.k[0] < 0 || idx.k[0] >= per) throw Error("invalid-argument", "translation out of range");
    if (dim_ == 2 && (idx.k[1] < 0 || idx.k[1] >= per)) {
        throw Error("invalid-argument", "translation out of range");
    }
    if (dim_ == 1 && idx.k[1] != 0) throw Error("invalid-argument", "1D index with nonzero k2");
}

std::size_t CoeffTree::slot_of(const WaveletIndex& idx) const {
    check(idx);
    const std::size_t per = per_axis(idx.level);
    const std::size_t cell = dim_ == 1 ? static_cast<std::size_t>(idx.k[0])
                                       : static_cast<std::size_t>(idx.k[1]) * per + static_cast<std::size_t>(idx.k[0]);
    return cell * static_cast<std::size_t>(types()) + static_cast<std::size_t>(idx.type - 1);
}

WaveletIndex CoeffTree::index_of(int level, std::size_t slot) const noexcept {
    const std::size_t t = static_cast<std::size_t>(types());
    const std::size_t cell = slot / t;
    const std::size_t per = per_axis(level);
    WaveletIndex idx;
    idx.level = level;
    idx.type = static_cast<int>(slot % t) + 1;
    if (dim_ == 1) {
        idx.k = {static_cast<std::int32_t>(cell), 0};
    } else {
        idx.k = {static_cast<std::int32_t>(cell % per), static_cast<std::int32_t>(cell / per)};
    }
    return idx;
}

double CoeffTree::get(const WaveletIndex& idx) const {
    if (idx.type == 0) {
        check(idx);
        return father_;
    }
    const std::size_t slot = slot_of(idx);
    const auto j = static_cast<std::size_t>(idx.level);
    if (level_is_dense(idx.level)) return dense_[j][slot];
    const auto it = sparse_[j].find(slot);
    return it == sparse_[j].end() ? 0.0 : it->second;
}

void CoeffTree::set(const WaveletIndex& idx, double value) {
    if (idx.type == 0) {
        check(idx);
        father_ = value;
        return;
    }
    const std::size_t slot = slot_of(idx);
    const auto j = static_cast<std::size_t>(idx.level);
    if (level_is_dense(idx.level)) {
        dense_[j][slot] = value;
    } else if (value == 0.0) {
        sparse_[j].erase(slot);
    } else {
        sparse_[j][slot] = value;
    }
}

std::span<const double> CoeffTree::dense_level(int level) const {
    if (level < 0 || level >= max_level_) throw Error("invalid-argument", "wavelet level out of range");
    return dense_[static_cast<std::size_t>(level)];
}

std::span<double> CoeffTree::dense_level(int level) {
    if (level < 0 || level >= max_level_) throw Error("invalid-argument", "wavelet level out of range");
    return dense_[static_cast<std::size_t>(level)];
}

void CoeffTree::for_each_in_level(int level, const std::function<void(const WaveletIndex&, double)>& fn) const {
    const auto j = static_cast<std::size_t>(level);
    if (level_is_dense(level)) {
        const auto& v = dense_[j];
        for (std::size_t s = 0; s < v.size(); ++s) fn(index_of(level, s), v[s]);
        return;
    }
    std::vector<std::pair<std::uint64_t, double>> entries(sparse_[j].begin(), sparse_[j].end());
    std::sort(entries.begin(), entries.end());
    for (const auto& [slot, value] : entries) fn(index_of(level, slot), value);
}

void CoeffTree::for_each(const std::function<void(const WaveletIndex&, double)>& fn) const {
    fn(WaveletIndex{0, {0, 0}, 0}, father_);
    for (int j = 0; j < max_level_; ++j) for_each_in_level(j, fn);
}

std::size_t CoeffTree::slot_count() const noexcept {
    std::size_t total = 1;
    for (int j = 0; j < max_level_; ++j) total += level_capacity(j);
    return total;
}

double CoeffTree::sum_squares() const {
    double total = father_ * father_;
    for (int j = 0; j < max_level_; ++j) {
        for_each_in_level(j, [&](const WaveletIndex&, double c) { total += c * c; });
    }
    return total;
}

CoeffTree dwt_forward(const SampledField& field, const WaveletSystem& sys) {
    return dwt_forward(field, sys, field.level());
}

CoeffTree dwt_forward(const SampledField& field, const WaveletSystem& sys, int J) {
    if (J < 0) throw Error("invalid-argument", "analysis depth must be nonnegative");
    if (J > field.level()) {
        throw Error("insufficient-resolution", "requested level " + std::to_string(J) +
                                                   " exceeds field level " + std::to_string(field.level()));
    }
    const int dim = field.dim();
    const std::size_t n_full = field.n();
    const double scale = dim == 1 ? std::sqrt(field.h()) : field.h();

    std::vector<double> buf(field.size());
    for (std::size_t i = 0; i < buf.size(); ++i) {
        buf[i] = field.mask()[i] ? scale * field.values()[i] : 0.0;
    }

    CoeffTree tree(dim, J, sys.order(), field.box());
    std::size_t n = n_full;
    if (dim == 1) {
        std::vector<double> tmp(n_full);
        for (int level = field.level(); level > 0; --level) {
            const std::size_t half = n / 2;
            analyze_1d(buf.data(), 1, n, sys.lowpass(), sys.highpass(), tmp.data(), tmp.data() + half, 1);
            std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(n), buf.begin());
            const int j = level - 1;
            if (j < J) {
                for (std::size_t k = 0; k < half; ++k) {
                    tree.set(WaveletIndex{j, {static_cast<std::int32_t>(k), 0}, 1}, buf[half + k]);
                }
            }
            n = half;
        }
        tree.set_father(buf[0]);
        return tree;
    }

    for (int level = field.level(); level > 0; --level) {
        analyze_2d_step(buf, n_full, n, sys);
        const std::size_t half = n / 2;
        const int j = level - 1;
        if (j < J) {
            if (tree.level_is_dense(j)) {
                auto dst = tree.dense_level(j);
                for (std::size_t ky = 0; ky < half; ++ky) {
                    for (std::size_t kx = 0; kx < half; ++kx) {
                        const std::size_t base = (ky * half + kx) * 3;
                        dst[base + 0] = buf[ky * n_full + half + kx];
                        dst[base + 1] = buf[(half + ky) * n_full + kx];
                        dst[base + 2] = buf[(half + ky) * n_full + half + kx];
                    }
                }
            } else {
                for (std::size_t ky = 0; ky < half; ++ky) {
                    for (std::size_t kx = 0; kx < half; ++kx) {
                        const std::array<std::int32_t, 2> k{static_cast<std::int32_t>(kx),
                                                            static_cast<std::int32_t>(ky)};
                        tree.set({j, k, 1}, buf[ky * n_full + half + kx]);
                        tree.set({j, k, 2}, buf[(half + ky) * n_full + kx]);
                        tree.set({j, k, 3}, buf[(half + ky) * n_full + half + kx]);
                    }
                }
            }
        }
        n = half;
    }
    tree.set_father(buf[0]);
    return tree;
}

SampledField dwt_inverse(const CoeffTree& tree, const WaveletSystem& sys) {
    if (tree.order() != sys.order()) {
        throw Error("invalid-argument", "tree order does not match the wavelet system");
    }
    const int dim = tree.dim();
    const int J = tree.max_level();
    SampledField out(dim, J, tree.box());
    const std::size_t n_full = out.n();
    std::vector<double> buf(out.size(), 0.0);
    buf[0] = tree.father();

    if (dim == 1) {
        std::vector<double> tmp(n_full);
        for (int j = 0; j < J; ++j) {
            const std::size_t half = std::size_t{1} << j;
            std::vector<double> high(half);
            for (std::size_t k = 0; k < half; ++k) {
                high[k] = tree.get(WaveletIndex{j, {static_cast<std::int32_t>(k), 0}, 1});
            }
            synthesize_1d(buf.data(), high.data(), 1, 2 * half, sys.lowpass(), sys.highpass(), tmp.data(), 1);
            std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(2 * half), buf.begin());
        }
    } else {
        for (int j = 0; j < J; ++j) {
            const std::size_t half = std::size_t{1} << j;
            tree.for_each_in_level(j, [&](const WaveletIndex& idx, double c) {
                const auto kx = static_cast<std::size_t>(idx.k[0]);
                const auto ky = static_cast<std::size_t>(idx.k[1]);
                switch (idx.type) {
                    case 1: buf[ky * n_full + half + kx] = c; break;
                    case 2: buf[(half + ky) * n_full + kx] = c; break;
                    default: buf[(half + ky) * n_full + half + kx] = c; break;
                }
            });
            synthesize_2d_step(buf, n_full, 2 * half, sys);
        }
    }

    const double scale = dim == 1 ? std::sqrt(out.h()) : out.h();
    auto values = out.values();
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = buf[i] / scale;
    return out;
}

Cube support_cube(const WaveletIndex& idx, const WaveletSystem& sys, const Box& box, int dim) {
    const double cell = box.side * std::ldexp(1.0, -idx.level);
    const int N = sys.support_radius();
    Cube q;
    q.dim = dim;
    q.side = cell * (2 * N + 1);
    q.lo = {box.x0 + cell * (idx.k[0] - 1), dim == 1 ? 0.0 : box.y0 + cell * (idx.k[1] - 1)};
    return q;
}

SampledField synthesize_atom(const WaveletIndex& idx, const WaveletSystem& sys, int level, const Box& box,
                             int dim) {
    CoeffTree tree(dim, level, sys.order(), box);
    tree.set(idx, 1.0);
    return dwt_inverse(tree, sys);
}

}  // namespace besovlab
