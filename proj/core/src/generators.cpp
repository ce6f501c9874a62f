#include "besovlab/generators.hpp"

#include <cmath>
#include <numbers>

#include "besovlab/error.hpp"

namespace besovlab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double a) {
    a = std::fmod(a, kTwoPi);
    return a < 0.0 ? a + kTwoPi : a;
}
}  // namespace

CornerFrame corner_frame(const DomainGeometry& geom) {
    if (geom.kind() == DomainKind::kCapCone3dMeta) throw Error("invalid-argument", "cap-cone has no planar corner");
    if (geom.singular_set().empty()) throw Error("invalid-argument", "geometry has no singular vertex");
    CornerFrame f;
    f.vertex = geom.singular_set().front();
    if (geom.kind() == DomainKind::kWedge2d) {
        f.start = 0.0;
        f.opening = geom.theta();
        return f;
    }
    const auto& vs = geom.vertices();
    std::size_t i = 0;
    while (i < vs.size() && (vs[i].x != f.vertex.x || vs[i].y != f.vertex.y)) ++i;
    const Point prev = vs[(i + vs.size() - 1) % vs.size()];
    const Point next = vs[(i + 1) % vs.size()];
    const double a_next = wrap(std::atan2(next.y - f.vertex.y, next.x - f.vertex.x));
    const double a_prev = wrap(std::atan2(prev.y - f.vertex.y, prev.x - f.vertex.x));
    // Sector from a_next counter-clockwise to a_prev, or its complement.
    const double span = wrap(a_prev - a_next);
    const double mid = a_next + 0.5 * span;
    const double probe = 1e-6 * geom.bounding_box().side;
    const Point p{f.vertex.x + probe * std::cos(mid), f.vertex.y + probe * std::sin(mid)};
    if (geom.contains(p)) {
        f.start = a_next;
        f.opening = span;
    } else {
        f.start = a_prev;
        f.opening = kTwoPi - span;
    }
    return f;
}

SampledField singular_field(const DomainGeometry& geom, int level, double lambda, bool with_cutoff) {
    const CornerFrame cf = corner_frame(geom);
    if (lambda <= 0.0) lambda = std::numbers::pi / cf.opening;
    SampledField f = rasterize(geom, level);
    const std::size_t n = f.n();
    for (std::size_t iy = 0; iy < n; ++iy) {
        for (std::size_t ix = 0; ix < n; ++ix) {
            if (!f.inside(ix, iy)) continue;
            const Point c = f.center(ix, iy);
            const double r = std::hypot(c.x - cf.vertex.x, c.y - cf.vertex.y);
            const double phi = wrap(std::atan2(c.y - cf.vertex.y, c.x - cf.vertex.x) - cf.start);
            double v = std::pow(r, lambda) * std::sin(lambda * std::min(phi, cf.opening));
            if (with_cutoff) v *= cutoff_eval(geom.cutoff(), c);
            f(ix, iy) = v;
        }
    }
    return f;
}

SampledField bump_field(Box box, int level, Point center, double radius, int dim) {
    if (!(radius > 0.0)) throw Error("bad-params", "bump radius must be positive");
    SampledField f(dim, level, box);
    const std::size_t n = f.n();
    const std::size_t ny = dim == 1 ? 1 : n;
    for (std::size_t iy = 0; iy < ny; ++iy) {
        for (std::size_t ix = 0; ix < n; ++ix) {
            const Point c = f.center(ix, iy);
            const double r = dim == 1 ? std::abs(c.x - center.x) : std::hypot(c.x - center.x, c.y - center.y);
            const double q = r / radius;
            f(ix, iy) = q < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - q * q)) : 0.0;
        }
    }
    return f;
}

SampledField boundary_layer_field(const DomainGeometry& geom, int level, double beta) {
    SampledField f = rasterize(geom, level);
    const std::size_t n = f.n();
    for (std::size_t iy = 0; iy < n; ++iy) {
        for (std::size_t ix = 0; ix < n; ++ix) {
            if (f.inside(ix, iy)) f(ix, iy) = std::pow(geom.distance_to_boundary(f.center(ix, iy)), beta);
        }
    }
    return f;
}

double manufactured_profile(Point x, Point center, double R) {
    const double r2 = (x.x - center.x) * (x.x - center.x) + (x.y - center.y) * (x.y - center.y);
    const double q = 1.0 - r2 / (R * R);
    return q > 0.0 ? std::pow(q, 5) : 0.0;
}

double manufactured_laplacian(Point x, Point center, double R) {
    const double r2 = (x.x - center.x) * (x.x - center.x) + (x.y - center.y) * (x.y - center.y);
    const double q = 1.0 - r2 / (R * R);
    if (q <= 0.0) return 0.0;
    const double R2 = R * R;
    return 80.0 * q * q * q * r2 / (R2 * R2) - 20.0 * q * q * q * q / R2;
}

}  // namespace besovlab
