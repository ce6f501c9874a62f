#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include <besovlab/error.hpp>
#include <besovlab/generators.hpp>
#include <besovlab/wavelet.hpp>

using namespace besovlab;

namespace {

SampledField random_field(int level, std::uint64_t seed, int dim = 2) {
    SampledField f(dim, level, {});
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    for (double& v : f.values()) v = n(rng);
    return f;
}

double max_abs_diff(const SampledField& a, const SampledField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

bool cube_inside_unit(const Cube& q) {
    return q.lo.x >= 0.0 && q.lo.y >= 0.0 && q.lo.x + q.side <= 1.0 && q.lo.y + q.side <= 1.0;
}

}  // namespace

TEST(WaveletSystem, FiltersAreOrthonormal) {
    for (int r = 2; r <= 10; ++r) {
        const WaveletSystem sys(r);
        const auto h = sys.lowpass();
        const auto g = sys.highpass();
        ASSERT_EQ(h.size(), static_cast<std::size_t>(2 * r));
        for (std::size_t shift = 0; shift < h.size(); shift += 2) {
            double hh = 0.0, gg = 0.0, hg = 0.0;
            for (std::size_t k = 0; k + shift < h.size(); ++k) {
                hh += h[k] * h[k + shift];
                gg += g[k] * g[k + shift];
                hg += h[k] * g[k + shift] + (shift ? g[k] * h[k + shift] : 0.0);
            }
            EXPECT_NEAR(hh, shift == 0 ? 1.0 : 0.0, 1e-12) << "order " << r;
            EXPECT_NEAR(gg, shift == 0 ? 1.0 : 0.0, 1e-12) << "order " << r;
            EXPECT_NEAR(hg, 0.0, 1e-12) << "order " << r;
        }
    }
}

TEST(WaveletSystem, HighpassHasVanishingMoments) {
    for (int r = 2; r <= 10; ++r) {
        const WaveletSystem sys(r);
        const auto g = sys.highpass();
        const double c = 0.5 * static_cast<double>(g.size() - 1);
        for (int a = 0; a < r; ++a) {
            double mom = 0.0;
            for (std::size_t k = 0; k < g.size(); ++k) mom += std::pow((k - c) / g.size(), a) * g[k];
            EXPECT_LE(std::abs(mom), 1e-10) << "order " << r << " moment " << a;
        }
    }
}

TEST(WaveletSystem, RejectsUnsupportedOrder) {
    EXPECT_THROW(WaveletSystem(1), Error);
    EXPECT_THROW(WaveletSystem(11), Error);
}

TEST(DwtForward, ZeroFieldGivesZeroTree) {
    const SampledField f(2, 6, {});
    const CoeffTree t = dwt_forward(f, WaveletSystem(4));
    EXPECT_EQ(t.sum_squares(), 0.0);
    t.for_each([](const WaveletIndex&, double c) { EXPECT_EQ(c, 0.0); });
}

TEST(DwtForward, SynthesizedAtomAnalyzesToUnitCoefficient) {
    const WaveletSystem sys(4);
    for (const WaveletIndex idx : {WaveletIndex{4, {3, 9}, 1}, WaveletIndex{2, {0, 3}, 3}, WaveletIndex{6, {40, 17}, 2}}) {
        const SampledField f = synthesize_atom(idx, sys, 8);
        const CoeffTree t = dwt_forward(f, sys);
        t.for_each([&](const WaveletIndex& i, double c) {
            if (i == idx) {
                EXPECT_NEAR(c, 1.0, 1e-10);
            } else {
                EXPECT_LE(std::abs(c), 1e-8);
            }
        });
    }
}

TEST(DwtForward, PolynomialGivesZeroInteriorDetails) {
    const WaveletSystem sys(4);
    SampledField f(2, 8, {});
    for (std::size_t iy = 0; iy < f.n(); ++iy) {
        for (std::size_t ix = 0; ix < f.n(); ++ix) {
            const Point c = f.center(ix, iy);
            f(ix, iy) = 1.0 - 2.0 * c.x + 3.0 * c.x * c.y - c.y * c.y * c.y + 0.5 * c.x * c.x * c.y;
        }
    }
    const CoeffTree t = dwt_forward(f, sys);
    std::size_t checked = 0;
    for (int j = 2; j < t.max_level(); ++j) {
        t.for_each_in_level(j, [&](const WaveletIndex& i, double c) {
            if (!cube_inside_unit(support_cube(i, sys))) return;
            EXPECT_LE(std::abs(c), 1e-8);
            ++checked;
        });
    }
    EXPECT_GT(checked, 1000u);
}

TEST(DwtForward, InsufficientResolution) {
    const SampledField f(2, 4, {});
    try {
        dwt_forward(f, WaveletSystem(4), 5);
        FAIL() << "expected insufficient-resolution";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "insufficient-resolution");
    }
}

TEST(DwtInverse, EmptyTreeGivesZeroField) {
    const CoeffTree t(2, 5, 4);
    const SampledField f = dwt_inverse(t, WaveletSystem(4));
    EXPECT_EQ(f.level(), 5);
    for (double v : f.values()) EXPECT_EQ(v, 0.0);
}

TEST(DwtInverse, FatherCoefficientIsConstantOnPeriodicBox) {
    CoeffTree t(2, 5, 4);
    t.set_father(2.5);
    const SampledField f = dwt_inverse(t, WaveletSystem(4));
    for (double v : f.values()) EXPECT_NEAR(v, 2.5, 1e-12);
}

TEST(DwtInverse, RandomRoundTrip) {
    for (int r : {2, 4, 7, 10}) {
        const WaveletSystem sys(r);
        const SampledField f = random_field(7, 100 + r);
        EXPECT_LE(max_abs_diff(dwt_inverse(dwt_forward(f, sys), sys), f), 1e-10) << "order " << r;
    }
    const WaveletSystem sys(4);
    const SampledField f1 = random_field(10, 5, 1);
    EXPECT_LE(max_abs_diff(dwt_inverse(dwt_forward(f1, sys), sys), f1), 1e-10);
}

TEST(SupportCube, DyadicScaling) {
    const WaveletSystem sys(4);
    const int N = sys.support_radius();
    const Cube q0 = support_cube({0, {0, 0}, 1}, sys);
    EXPECT_DOUBLE_EQ(q0.side, 2 * N + 1);
    EXPECT_DOUBLE_EQ(q0.lo.x, -1.0);
    const Cube q3 = support_cube({3, {2, 5}, 2}, sys);
    EXPECT_DOUBLE_EQ(q3.side, (2 * N + 1) / 8.0);
    EXPECT_DOUBLE_EQ(q3.lo.x, 1.0 / 8.0);
    EXPECT_DOUBLE_EQ(q3.lo.y, 4.0 / 8.0);
}

TEST(SupportCube, ContainsSampledSupport) {
    for (int r : {2, 4, 6}) {
        const WaveletSystem sys(r);
        const WaveletIndex idx{5, {4, 9}, 3};
        const Cube q = support_cube(idx, sys);
        ASSERT_TRUE(cube_inside_unit(q));
        const SampledField f = synthesize_atom(idx, sys, 9);
        for (std::size_t iy = 0; iy < f.n(); ++iy) {
            for (std::size_t ix = 0; ix < f.n(); ++ix) {
                if (std::abs(f(ix, iy)) <= 1e-12) continue;
                const Point c = f.center(ix, iy);
                EXPECT_GE(c.x, q.lo.x);
                EXPECT_LE(c.x, q.lo.x + q.side);
                EXPECT_GE(c.y, q.lo.y);
                EXPECT_LE(c.y, q.lo.y + q.side);
            }
        }
    }
}

TEST(CoeffTree, DenseAndSparseStorage) {
    CoeffTree t(2, 11, 4);
    EXPECT_TRUE(t.level_is_dense(9));
    EXPECT_FALSE(t.level_is_dense(10));
    const WaveletIndex a{10, {1000, 3}, 2};
    t.set(a, -4.0);
    EXPECT_EQ(t.get(a), -4.0);
    EXPECT_EQ(t.get({10, {1000, 3}, 1}), 0.0);
    EXPECT_EQ(t.index_of(10, t.slot_of(a)), a);
    EXPECT_THROW(t.set({11, {0, 0}, 1}, 1.0), Error);
    EXPECT_THROW(t.set({3, {8, 0}, 1}, 1.0), Error);
    EXPECT_THROW(t.set({3, {0, 0}, 4}, 1.0), Error);
    EXPECT_THROW(t.set({3, {0, 0}, 0}, 1.0), Error);
    // father + sum_j 3 * 4^j = 4^11
    EXPECT_EQ(t.slot_count(), std::size_t{1} << 22);
}

// properties

TEST(WaveletProperty, ParsevalOnRandomFields) {
    const WaveletSystem sys(4);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const SampledField f = random_field(6 + static_cast<int>(seed % 3), seed);
        const double l2 = f.l2_norm();
        const CoeffTree t = dwt_forward(f, sys);
        EXPECT_NEAR(t.sum_squares(), l2 * l2, 1e-8 * l2 * l2);
    }
}

TEST(WaveletProperty, GramMatrixOfRandomAtomsIsIdentity) {
    const WaveletSystem sys(3);
    const int level = 7;
    std::mt19937_64 rng(21);
    std::vector<WaveletIndex> idx;
    std::set<std::tuple<int, int, int, int>> seen;
    while (idx.size() < 50) {
        const int j = std::uniform_int_distribution<int>(0, level - 1)(rng);
        std::uniform_int_distribution<int> k(0, (1 << j) - 1);
        const WaveletIndex i{j, {k(rng), k(rng)}, std::uniform_int_distribution<int>(1, 3)(rng)};
        if (seen.insert({i.level, i.k[0], i.k[1], i.type}).second) idx.push_back(i);
    }
    std::vector<SampledField> atoms;
    for (const auto& i : idx) atoms.push_back(synthesize_atom(i, sys, level));
    const double w = atoms[0].cell_measure();
    for (std::size_t a = 0; a < atoms.size(); ++a) {
        for (std::size_t b = a; b < atoms.size(); ++b) {
            double ip = 0.0;
            for (std::size_t n = 0; n < atoms[a].size(); ++n) ip += atoms[a].values()[n] * atoms[b].values()[n];
            EXPECT_NEAR(ip * w, a == b ? 1.0 : 0.0, 1e-8);
        }
    }
}

TEST(WaveletProperty, ScaleCovarianceShiftsOneLevel) {
    // g(x) = f(2x) sampled on a grid twice as fine: <g, psi_{j+1,k}> = 2^{-d/2} <f, psi_{j,k}>
    const WaveletSystem sys(4);
    const SampledField f = bump_field({}, 7, {0.5, 0.5}, 0.4);
    SampledField g(2, 8, {});
    for (std::size_t iy = 0; iy < f.n(); ++iy) {
        for (std::size_t ix = 0; ix < f.n(); ++ix) g(ix, iy) = f(ix, iy);
    }
    const CoeffTree tf = dwt_forward(f, sys);
    const CoeffTree tg = dwt_forward(g, sys);
    double scale = 0.0;
    std::size_t compared = 0;
    for (int j = 2; j < tf.max_level(); ++j) {
        tf.for_each_in_level(j, [&](const WaveletIndex& i, double c) {
            if (!cube_inside_unit(support_cube(i, sys))) return;
            const double cg = tg.get({j + 1, i.k, i.type});
            scale = std::max(scale, std::abs(c));
            EXPECT_NEAR(cg, 0.5 * c, 1e-12);
            ++compared;
        });
    }
    EXPECT_GT(scale, 1e-4);
    EXPECT_GT(compared, 100u);
}

TEST(WaveletProperty, ForwardIsLinear) {
    const WaveletSystem sys(5);
    const SampledField a = random_field(6, 1), b = random_field(6, 2);
    SampledField c(2, 6, {});
    for (std::size_t i = 0; i < c.size(); ++i) c.values()[i] = 2.0 * a.values()[i] - 3.0 * b.values()[i];
    const CoeffTree ta = dwt_forward(a, sys), tb = dwt_forward(b, sys), tc = dwt_forward(c, sys);
    EXPECT_NEAR(tc.father(), 2.0 * ta.father() - 3.0 * tb.father(), 1e-12);
    for (int j = 0; j < 6; ++j) {
        tc.for_each_in_level(j, [&](const WaveletIndex& i, double v) {
            EXPECT_NEAR(v, 2.0 * ta.get(i) - 3.0 * tb.get(i), 1e-11);
        });
    }
}
