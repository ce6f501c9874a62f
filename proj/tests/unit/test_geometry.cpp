#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <besovlab/error.hpp>
#include <besovlab/geometry.hpp>

using namespace besovlab;

namespace {

constexpr double kPi = std::numbers::pi;

std::string error_code(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

}  // namespace

TEST(DistanceWeight, ZeroAtWedgeVertex) {
    const auto g = DomainGeometry::wedge(1.5 * kPi);
    EXPECT_EQ(distance_weight(g, {0.0, 0.0}), 0.0);
}

TEST(DistanceWeight, CappedAtOneFarFromVertex) {
    const auto g = DomainGeometry::wedge(1.5 * kPi);
    EXPECT_EQ(distance_weight(g, {0.9, 0.9}), 1.0);
    EXPECT_EQ(distance_weight(g, {-1.0, -0.1}), 1.0);
}

TEST(DistanceWeight, WithinFactorTwoOfRawDistance) {
    const auto g = DomainGeometry::wedge(1.5 * kPi);
    const double rho = distance_weight(g, {0.25, 0.0});
    EXPECT_GE(rho, 0.125);
    EXPECT_LE(rho, 0.5);
    // raw distance oracle on a ray
    for (double r = 0.01; r < 1.0; r += 0.01) {
        const double w = distance_weight(g, {-r / std::sqrt(2.0), r / std::sqrt(2.0)});
        EXPECT_GE(w, r / 2.0 - 1e-15);
        EXPECT_LE(w, 2.0 * r + 1e-15);
    }
}

TEST(DistanceWeight, OutsideDomainThrows) {
    const auto g = DomainGeometry::wedge(1.5 * kPi);
    EXPECT_EQ(error_code([&] { distance_weight(g, {0.5, -0.5}); }), "outside-domain");
    const auto l = DomainGeometry::l_shape();
    EXPECT_EQ(error_code([&] { distance_weight(l, {0.75, 0.75}); }), "outside-domain");
}

TEST(DistanceWeight, FullBoundaryMode) {
    const auto sq = DomainGeometry::unit_square();
    EXPECT_NEAR(distance_weight(sq, {0.5, 0.1}, WeightMode::kFullBoundary), 0.1, 1e-15);
    EXPECT_NEAR(distance_weight(sq, {0.3, 0.5}, WeightMode::kFullBoundary), 0.3, 1e-15);
}

TEST(SmoothedDistance, IdentityBelowHalfAndCapped) {
    EXPECT_EQ(smoothed_distance(0.0), 0.0);
    EXPECT_EQ(smoothed_distance(0.3), 0.3);
    EXPECT_EQ(smoothed_distance(1.0), 1.0);
    EXPECT_EQ(smoothed_distance(7.0), 1.0);
    double prev = 0.0;
    for (double d = 0.0; d <= 1.2; d += 0.001) {
        const double v = smoothed_distance(d);
        EXPECT_GE(v, prev);
        EXPECT_LE(v, 1.0);
        prev = v;
    }
}

TEST(Cutoff, PlateauAndZeroRegions) {
    const CutoffProfile c{{0.0, 0.0}, 0.9, 0.4, 5};
    EXPECT_EQ(cutoff_eval(c, {0.0, 0.0}), 1.0);
    EXPECT_EQ(cutoff_eval(c, {0.49, 0.0}), 1.0);
    EXPECT_EQ(cutoff_eval(c, {0.9, 0.0}), 0.0);
    EXPECT_EQ(cutoff_eval(c, {0.0, 0.7}), 0.0);
}

TEST(Cutoff, TransitionIsMonotone) {
    const CutoffProfile c{{0.5, 0.5}, 0.5, 0.45, 5};
    const double mid = 0.5 * ((c.r0 - c.eps) + (c.r0 - c.eps / 2));
    const double v = cutoff_eval(c, {0.5 + mid, 0.5});
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
    double prev = 1.0;
    for (double r = 0.0; r < 0.4; r += 1e-3) {
        const double w = cutoff_eval(c, {0.5, 0.5 - r});
        EXPECT_LE(w, prev);
        EXPECT_GE(w, 0.0);
        prev = w;
    }
}

TEST(Rasterize, UnitSquareCounts) {
    const auto sq = DomainGeometry::unit_square();
    EXPECT_EQ(rasterize(sq, 0).inside_count(), 1u);
    EXPECT_EQ(rasterize(sq, 3).inside_count(), 64u);
}

TEST(Rasterize, LShapeCountMatchesPointInPolygon) {
    // upper-right quarter removed
    const auto l = DomainGeometry::l_shape();
    const auto f = rasterize(l, 4);
    EXPECT_EQ(f.inside_count(), 192u);
    for (std::size_t iy = 0; iy < f.n(); ++iy) {
        for (std::size_t ix = 0; ix < f.n(); ++ix) {
            const Point c = f.center(ix, iy);
            const bool oracle = !(c.x > 0.5 && c.y > 0.5);
            EXPECT_EQ(f.inside(ix, iy), oracle);
        }
    }
}

TEST(Rasterize, TooLargeAndNegative) {
    const auto sq = DomainGeometry::unit_square();
    EXPECT_EQ(error_code([&] { rasterize(sq, kMaxRasterLevel + 1); }), "grid-too-large");
    EXPECT_EQ(error_code([&] { rasterize(sq, -1); }), "invalid-argument");
}

TEST(Geometry, ValidationRejectsBadInput) {
    EXPECT_EQ(error_code([] { DomainGeometry::wedge(0.0); }), "invalid-argument");
    EXPECT_EQ(error_code([] { DomainGeometry::wedge(7.0); }), "invalid-argument");
    EXPECT_EQ(error_code([] { DomainGeometry::wedge(1.0, {-1, -1, 2}, 0.5, 0.5); }), "invalid-argument");
    EXPECT_EQ(error_code([] { DomainGeometry::cap_cone(kPi); }), "invalid-argument");
    // bow tie
    EXPECT_EQ(error_code([] { DomainGeometry::polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}); }), "invalid-argument");
    EXPECT_EQ(error_code([] { rasterize(DomainGeometry::cap_cone(1.0), 3); }), "invalid-argument");
}

TEST(Geometry, LShapeSingularVertex) {
    const auto l = DomainGeometry::l_shape();
    ASSERT_EQ(l.singular_set().size(), 1u);
    EXPECT_EQ(l.singular_set()[0].x, 0.5);
    EXPECT_EQ(l.singular_set()[0].y, 0.5);
    EXPECT_TRUE(l.contains({0.5, 0.5}));
    EXPECT_TRUE(l.contains({0.25, 0.25}));
    EXPECT_TRUE(l.contains({0.75, 0.25}));
    EXPECT_FALSE(l.contains({0.75, 0.75}));
}

TEST(ParseGeometry, WedgeAndPolygon) {
    const auto w = parse_geometry("kind=wedge2d\ntheta=270deg\nr0=0.9\neps=0.4\n");
    EXPECT_EQ(w.kind(), DomainKind::kWedge2d);
    EXPECT_NEAR(w.theta(), 1.5 * kPi, 1e-15);
    EXPECT_EQ(w.cutoff().r0, 0.9);

    const auto p = parse_geometry(
        "# L-shape\nkind = polygon2d\nvertices = 0,0; 0.5,0; 0.5,0.5; 1,0.5; 1,1; 0,1\nsingular = 2\n");
    EXPECT_EQ(p.vertices().size(), 6u);
    ASSERT_EQ(p.singular_set().size(), 1u);
    EXPECT_EQ(rasterize(p, 4).inside_count(), 64u * 4u - 64u);

    EXPECT_EQ(error_code([] { parse_geometry("kind=wedge2d\n"); }), "bad-params");
    EXPECT_EQ(error_code([] { parse_geometry("kind=sphere\ntheta=1\n"); }), "bad-params");
    EXPECT_EQ(error_code([] { parse_geometry("vertices=0,0;1\n"); }), "bad-params");
}

TEST(ParseAngle, Units) {
    EXPECT_NEAR(parse_angle("270deg"), 1.5 * kPi, 1e-15);
    EXPECT_NEAR(parse_angle("1.5pi"), 1.5 * kPi, 1e-15);
    EXPECT_EQ(parse_angle("0.25"), 0.25);
    EXPECT_THROW(parse_angle("abc"), Error);
}

// properties

TEST(GeometryProperty, DistanceWeightLipschitzAndBounded) {
    const auto l = DomainGeometry::l_shape();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int pairs = 0;
    while (pairs < 2000) {
        const Point a{u(rng), u(rng)};
        const Point b{u(rng), u(rng)};
        if (!l.contains(a) || !l.contains(b)) continue;
        const double ra = distance_weight(l, a);
        const double rb = distance_weight(l, b);
        EXPECT_LE(std::abs(ra - rb), 2.0 * std::hypot(a.x - b.x, a.y - b.y) + 1e-14);
        EXPECT_GE(ra, 0.0);
        EXPECT_LE(ra, 1.0);
        ++pairs;
    }
}

TEST(GeometryProperty, MasksNestAcrossLevels) {
    for (const auto& g : {DomainGeometry::l_shape(), DomainGeometry::wedge(1.5 * kPi),
                          DomainGeometry::wedge(0.4 * kPi)}) {
        for (int j = 1; j <= 7; ++j) {
            const auto fine = rasterize(g, j);
            const auto coarse = rasterize(g, j - 1);
            for (std::size_t iy = 0; iy < fine.n(); ++iy) {
                for (std::size_t ix = 0; ix < fine.n(); ++ix) {
                    if (!fine.inside(ix, iy)) continue;
                    // the parent cell meets the domain: its centre or one of its
                    // children is inside
                    const std::size_t px = ix / 2, py = iy / 2;
                    bool meets = coarse.inside(px, py);
                    for (std::size_t c = 0; c < 4 && !meets; ++c) {
                        meets = fine.inside(2 * px + c % 2, 2 * py + c / 2);
                    }
                    EXPECT_TRUE(meets);
                }
            }
        }
    }
}

TEST(GeometryProperty, CutoffPreservesPlateauBitExactly) {
    const auto l = DomainGeometry::l_shape();
    const CutoffProfile& c = l.cutoff();
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n(0.0, 10.0);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi), rad(0.0, c.r0 - c.eps);
    for (int i = 0; i < 1000; ++i) {
        const double r = rad(rng), a = ang(rng);
        const double v = n(rng);
        const Point x{c.center.x + r * std::cos(a), c.center.y + r * std::sin(a)};
        if (std::hypot(x.x - c.center.x, x.y - c.center.y) >= c.r0 - c.eps) continue;
        EXPECT_EQ(v * cutoff_eval(c, x), v);
    }
}

TEST(GeometryProperty, CutoffRangeAndRadialMonotone) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double r0 = u(rng);
        const double eps = r0 * u(rng) * 0.95;
        const CutoffProfile c{{0.0, 0.0}, r0, eps, 5};
        double prev = 1.0;
        for (double r = 0.0; r <= r0 * 1.1; r += r0 / 200) {
            const double v = cutoff_eval(c, {r, 0.0});
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
            EXPECT_LE(v, prev);
            prev = v;
        }
    }
}
