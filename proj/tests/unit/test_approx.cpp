#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <besovlab/approx.hpp>
#include <besovlab/error.hpp>
#include <besovlab/generators.hpp>
#include <besovlab/parabolic.hpp>

using namespace besovlab;

namespace {

constexpr double kPi = std::numbers::pi;

CoeffTree random_tree(int levels, std::uint64_t seed) {
    SampledField f(2, levels, {});
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    for (double& v : f.values()) v = n(rng);
    return dwt_forward(f, WaveletSystem(4));
}

// level-10 cut-off singular field on the L-shape, shared by the rate tests
const CoeffTree& corner_tree() {
    static const CoeffTree t = dwt_forward(singular_field(DomainGeometry::l_shape(), 10), WaveletSystem(4));
    return t;
}

}  // namespace

TEST(SigmaN, Examples) {
    CoeffTree t(2, 4, 4);
    t.set({1, {0, 1}, 1}, 3.0);
    t.set({2, {3, 1}, 2}, -2.0);
    t.set({3, {7, 7}, 3}, 1.0);
    EXPECT_NEAR(sigma_n(t, 1), std::sqrt(5.0), 1e-15);
    EXPECT_NEAR(sigma_n(t, 0), std::sqrt(14.0), 1e-15);
    EXPECT_EQ(sigma_n(t, 3), 0.0);
    EXPECT_EQ(sigma_n(t, t.slot_count()), 0.0);
    EXPECT_EQ(sigma_n(t, t.slot_count() + 10), 0.0);
}

TEST(SigmaN, NonQuadraticPUsesSynthesis) {
    CoeffTree t(2, 5, 4);
    t.set({2, {1, 1}, 1}, 1.0);
    t.set({3, {2, 5}, 3}, 0.5);
    EXPECT_NEAR(sigma_n(t, 1, 2.0), 0.5, 1e-12);
    const double e1 = sigma_n(t, 1, 1.0);
    EXPECT_GT(e1, 0.0);
    EXPECT_LT(e1, 0.5);  // ||psi||_1 < ||psi||_2 on the unit square
    EXPECT_EQ(sigma_n(t, 2, 1.0), 0.0);
}

TEST(SigmaN, CornerSingularityBeatsOrderOverDimension) {
    // order 4 in 2D: r / d = 2. The default window drops the first eight
    // dyadic points, where the smooth cut-off part still dominates.
    const RateReport r = nonlinear_rate(corner_tree());
    EXPECT_EQ(r.pairs[r.window_begin].first, 256.0);
    EXPECT_LE(r.pairs[r.window_end - 1].first, 4096.0);
    EXPECT_GE(r.alpha, 2.0);
    for (std::size_t i = 1; i < r.pairs.size(); ++i) EXPECT_LE(r.pairs[i].second, r.pairs[i - 1].second);
}

TEST(RankCoefficients, DeterministicTieBreak) {
    CoeffTree t(2, 4, 4);
    t.set({2, {1, 0}, 1}, 1.0);
    t.set({1, {1, 1}, 2}, -1.0);
    t.set({1, {0, 1}, 2}, 1.0);
    t.set({1, {0, 1}, 1}, 1.0);
    t.set_father(1.0);
    const auto r = rank_coefficients(t);
    ASSERT_GE(r.size(), 5u);
    EXPECT_TRUE(r[0].index.is_father());
    EXPECT_EQ(r[1].index, (WaveletIndex{1, {0, 1}, 1}));
    EXPECT_EQ(r[2].index, (WaveletIndex{1, {0, 1}, 2}));
    EXPECT_EQ(r[3].index, (WaveletIndex{1, {1, 1}, 2}));
    EXPECT_EQ(r[4].index, (WaveletIndex{2, {1, 0}, 1}));
}

TEST(UniformError, Examples) {
    CoeffTree t(2, 8, 4);
    t.set({5, {3, 4}, 2}, -0.75);
    EXPECT_EQ(uniform_error(t, 8).error, 0.0);
    EXPECT_EQ(uniform_error(t, 6).error, 0.0);
    EXPECT_EQ(uniform_error(t, 5).error, 0.75);
    EXPECT_EQ(uniform_error(t, 5).n, std::size_t{1} << 10);
    EXPECT_THROW(uniform_error(t, 9), Error);
}

TEST(UniformRate, BelowNonlinearRateOnCornerSingularity) {
    const RateReport nl = nonlinear_rate(corner_tree());
    const RateReport un = uniform_rate(corner_tree());
    EXPECT_NEAR(un.alpha, 5.0 / 6.0, 0.15);
    EXPECT_GE(nl.alpha - un.alpha, 0.3);
}

TEST(FitRate, Examples) {
    std::vector<std::pair<double, double>> exact, scaled, noisy;
    for (int N = 2; N <= 64; ++N) {
        exact.push_back({double(N), 1.0 / N});
        scaled.push_back({double(N), 5.0 * std::pow(N, -2.0 / 3.0)});
        noisy.push_back({double(N), (1.0 + 0.05 * std::sin(N)) / N});
    }
    EXPECT_NEAR(fit_rate(exact).alpha, 1.0, 1e-10);
    EXPECT_NEAR(fit_rate(exact).residual, 0.0, 1e-10);
    EXPECT_NEAR(fit_rate(scaled).alpha, 2.0 / 3.0, 1e-10);
    const double a = fit_rate(noisy).alpha;
    EXPECT_GE(a, 0.9);
    EXPECT_LE(a, 1.1);
}

TEST(FitRate, Errors) {
    const std::vector<std::pair<double, double>> few{{1, 1}, {2, 0.5}, {4, 0.25}};
    EXPECT_THROW(fit_rate(few), Error);
    const std::vector<std::pair<double, double>> zero{{1, 1}, {2, 0.5}, {4, 0.0}, {8, 0.1}};
    EXPECT_THROW(fit_rate(zero), Error);
}

TEST(TrimmedWindow, ShrinksForShortSequences) {
    EXPECT_EQ(trimmed_window(30), (std::pair<std::size_t, std::size_t>{8, 22}));
    const auto w = trimmed_window(10);
    EXPECT_GE(w.second - w.first, 5u);
    EXPECT_LE(w.second, 10u);
}

TEST(Djp, SingleWaveletIsConsistent) {
    CoeffTree t(2, 6, 4);
    t.set({3, {2, 2}, 1}, 1.0);
    const DjpReport r = djp_consistency(t, 2.0);
    EXPECT_TRUE(r.norm_finite);
    EXPECT_TRUE(r.consistent);
    EXPECT_EQ(sigma_n(t, 1), 0.0);
}

TEST(Djp, CornerSingularityIsConsistent) {
    const DjpReport r = djp_consistency(corner_tree(), 2.0);
    EXPECT_NEAR(r.tau, 2.0 / 3.0, 1e-15);
    EXPECT_TRUE(r.norm_finite);
    EXPECT_GE(r.alpha, 1.0 - 0.1);
    EXPECT_TRUE(r.consistent);
}

TEST(Djp, SlowDecayIsConsistentNegativeCase) {
    const int J = 9;
    CoeffTree t(2, J, 4);
    for (int j = 0; j < J; ++j) {
        const double c = std::pow(2.0, -0.1 * j);
        for (std::size_t s = 0; s < t.level_capacity(j); ++s) t.set(t.index_of(j, s), c);
    }
    const DjpReport r = djp_consistency(t, 2.0);
    EXPECT_FALSE(r.norm_finite);
    EXPECT_LT(r.alpha, r.target);
    EXPECT_TRUE(r.consistent);
}

TEST(RingDecompose, FarIndexBucket) {
    const auto l = DomainGeometry::l_shape();
    const WaveletSystem sys(2);
    CoeffTree t(2, 7, 2);
    const WaveletIndex idx{6, {4, 50}, 1};
    t.set(idx, 1.0);
    const RingDecomposition rd = ring_decompose(t, l);
    const Cube q = support_cube(idx, sys);
    const double rho = l.rect_distance_to_singular_set(q.lo, q.side);
    const std::int32_t k = rd.labels[6][t.slot_of(idx)];
    EXPECT_EQ(k, static_cast<std::int32_t>(std::floor(rho * 64)));
}

TEST(RingDecompose, InnerRingCountBounded) {
    const auto l = DomainGeometry::l_shape();
    const CoeffTree t(2, 10, 4);
    const RingDecomposition rd = ring_decompose(t, l);
    std::size_t bound = 0;
    for (int j = 3; j <= 5; ++j) bound = std::max(bound, rd.counts[j][0] + rd.counts[j][1]);
    for (int j = 3; j < 10; ++j) {
        EXPECT_LE(rd.counts[j][0], bound) << j;
        EXPECT_LE(rd.counts[j].size(), (std::size_t{1} << j) + 1);
    }
}

TEST(Whitney, ZeroFieldAndPolynomial) {
    const auto l = DomainGeometry::l_shape();
    const SampledField z = rasterize(l, 7);
    const WhitneyReport r0 = whitney_ring_check(dwt_forward(z, WaveletSystem(4)), z, l, 2, 1.0);
    for (double v : r0.max_ratio) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(r0.flagged, 0u);

    SampledField lin = rasterize(l, 7);
    for (std::size_t iy = 0; iy < lin.n(); ++iy) {
        for (std::size_t ix = 0; ix < lin.n(); ++ix) {
            if (lin.inside(ix, iy)) lin(ix, iy) = 1.0 + lin.center(ix, iy).x - 2.0 * lin.center(ix, iy).y;
        }
    }
    const WhitneyReport r1 = whitney_ring_check(dwt_forward(lin, WaveletSystem(4)), lin, l, 2, 1.0, 2.0, 3);
    EXPECT_EQ(r1.flagged, 0u);
    for (double v : r1.max_ratio) EXPECT_LE(v, 1e-6);
}

TEST(Whitney, CornerSingularityRatioLevelIndependent) {
    const auto l = DomainGeometry::l_shape();
    const SampledField u = singular_field(l, 9, 0.0, false);
    const WhitneyReport r = whitney_ring_check(dwt_forward(u, WaveletSystem(4)), u, l, 2, 1.0, 2.0, 3, 8);
    EXPECT_GE(r.levels.size(), 3u);
    EXPECT_LT(r.variation, 2.0);
    EXPECT_EQ(r.flagged, 0u);
}

TEST(Embedding, ConstantFieldFinite) {
    const auto w = DomainGeometry::wedge(1.5 * kPi);
    SampledField c = rasterize(w, 7);
    for (std::size_t i = 0; i < c.size(); ++i) c.values()[i] = c.mask()[i] ? 1.0 : 0.0;
    const SampledField fields[] = {apply_cutoff(c, w)};
    const EmbeddingReport r = embedding_check(fields, w, {}, EmbeddingMode::kPolyhedral);
    ASSERT_FALSE(r.rows.empty());
    for (const auto& row : r.rows) EXPECT_TRUE(std::isfinite(row.ratio) && row.ratio > 0.0);
}

TEST(Embedding, AmplitudeScaledFamilyRatioWithinFactorTwo) {
    const auto w = DomainGeometry::wedge(1.5 * kPi);
    std::vector<SampledField> fam;
    for (int l = 0; l <= 3; ++l) {
        SampledField f = singular_field(w, 7);
        for (double& v : f.values()) v *= std::ldexp(1.0, -l);
        fam.push_back(std::move(f));
    }
    const EmbeddingReport r = embedding_check(fam, w, {}, EmbeddingMode::kPolyhedral);
    EXPECT_LE(r.max_spread, 2.0);
}

TEST(Embedding, HypothesisViolated) {
    const auto w = DomainGeometry::wedge(1.5 * kPi);
    const SampledField fields[] = {singular_field(w, 6)};
    EmbeddingParams p;
    p.s = 5.0;  // beyond the wavelet order
    try {
        embedding_check(fields, w, p, EmbeddingMode::kPolyhedral);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "hypothesis-violated");
    }
}

TEST(Embedding, LipschitzFlipNearPrediction) {
    const auto sq = DomainGeometry::unit_square();
    const SampledField fields[] = {boundary_layer_field(sq, 9, 0.4)};
    EmbeddingParams p;
    p.a = 0.9;
    const EmbeddingReport r = embedding_check(fields, sq, p, EmbeddingMode::kLipschitz);
    EXPECT_NEAR(r.predicted_flip, 1.8, 1e-12);
    EXPECT_NEAR(r.observed_flip, r.predicted_flip, 0.15);
}

TEST(StabilityCrossing, Interpolates) {
    const double g[] = {1.0, 2.0, 3.0, 4.0};
    const double s[] = {-2.0, -1.0, 1.0, 2.0};
    EXPECT_NEAR(stability_crossing(g, s), 2.5, 1e-15);
    const double pos[] = {1.0, 1.0, 1.0, 1.0};
    EXPECT_EQ(stability_crossing(g, pos), 1.0);
}

// properties

TEST(ApproxProperty, SigmaNonincreasingAndStartsAtNorm) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const CoeffTree t = random_tree(6, seed);
        double prev = sigma_n(t, 0);
        EXPECT_NEAR(prev, std::sqrt(t.sum_squares()), 1e-12 * prev);
        for (std::size_t N = 1; N <= t.slot_count(); N += 37) {
            const double e = sigma_n(t, N);
            EXPECT_LE(e, prev);
            prev = e;
        }
    }
}

TEST(ApproxProperty, NonlinearNeverWorseThanUniform) {
    std::vector<CoeffTree> trees;
    for (std::uint64_t seed = 0; seed < 3; ++seed) trees.push_back(random_tree(7, seed));
    trees.push_back(dwt_forward(singular_field(DomainGeometry::l_shape(), 8), WaveletSystem(4)));
    trees.push_back(dwt_forward(bump_field({}, 8, {0.4, 0.6}, 0.3), WaveletSystem(4)));
    for (const auto& t : trees) {
        for (int j = 0; j <= t.max_level(); ++j) {
            const UniformError u = uniform_error(t, j);
            EXPECT_LE(sigma_n(t, u.n), u.error * (1.0 + 1e-12) + 1e-300);
        }
    }
}

TEST(ApproxProperty, RingBucketsPartitionEachLevel) {
    for (const auto& g : {DomainGeometry::l_shape(), DomainGeometry::wedge(1.5 * kPi), DomainGeometry::wedge(0.5 * kPi)}) {
        const CoeffTree t(2, 8, 4);
        const RingDecomposition rd = ring_decompose(t, g);
        for (int j = 0; j < 8; ++j) {
            std::size_t sum = rd.boundary[j];
            for (std::size_t c : rd.counts[j]) sum += c;
            EXPECT_EQ(sum, rd.total[j]);
            EXPECT_EQ(rd.total[j] + rd.exterior[j], t.level_capacity(j));
            for (std::int32_t k : rd.labels[j]) EXPECT_LE(k, 1 << j);
        }
    }
}

TEST(ApproxProperty, FitRateScaleInvariant) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    std::vector<std::pair<double, double>> base;
    for (int N = 1; N <= 40; ++N) base.push_back({double(N), std::pow(N, -0.7) * (1.0 + 0.1 * std::cos(3.0 * N))});
    const double a0 = fit_rate(base).alpha;
    for (int i = 0; i < 10; ++i) {
        const double sn = u(rng), se = u(rng);
        auto v = base;
        for (auto& [n, e] : v) {
            n *= sn;
            e *= se;
        }
        EXPECT_NEAR(fit_rate(v).alpha, a0, 1e-10);
    }
}

TEST(ApproxProperty, DjpCalibrationSuite) {
    const DjpReport bump = djp_consistency(dwt_forward(bump_field({}, 9, {0.5, 0.5}, 0.3), WaveletSystem(4)), 2.0);
    EXPECT_GE(bump.alpha, bump.target);
    EXPECT_TRUE(bump.consistent);
    const DjpReport corner = djp_consistency(corner_tree(), 2.0);
    EXPECT_GE(corner.alpha, corner.target - 0.1);
    EXPECT_TRUE(corner.consistent);
}
