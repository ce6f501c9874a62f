#include "besovlab/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <limits>
#include <numbers>
#include <sstream>

#include "besovlab/error.hpp"

namespace besovlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGeomTol = 1e-12;

double segment_distance(Point p, Point a, Point b) noexcept {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

double cross(Point o, Point a, Point b) noexcept {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool segments_intersect(Point a, Point b, Point c, Point d) noexcept {
    const double d1 = cross(c, d, a);
    const double d2 = cross(c, d, b);
    const double d3 = cross(a, b, c);
    const double d4 = cross(a, b, d);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
           ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool point_in_polygon(const std::vector<Point>& poly, Point p) noexcept {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (segment_distance(p, poly[i], poly[(i + 1) % n]) <= kGeomTol) return true;
    }
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point& a = poly[i];
        const Point& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xcross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
            if (p.x < xcross) inside = !inside;
        }
    }
    return inside;
}

// Point where the ray from the box centre at angle phi leaves the box.
Point ray_exit(const Box& box, double phi) noexcept {
    const double r = 0.5 * box.side;
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double t = r / std::max(std::abs(c), std::abs(s));
    return {box.x0 + r + t * c, box.y0 + r + t * s};
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

double parse_double(std::string_view text, const char* what) {
    const std::string t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw Error("bad-params", std::string("cannot parse ") + what + " from '" + t + "'");
    }
    if (used != t.size()) throw Error("bad-params", std::string("trailing characters in ") + what);
    return v;
}

std::vector<double> parse_list(std::string_view text, char sep, const char* what) {
    std::vector<double> out;
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, sep)) {
        if (!trim(item).empty()) out.push_back(parse_double(item, what));
    }
    return out;
}

}  // namespace

double parse_angle(std::string_view text) {
    std::string t = trim(text);
    if (t.size() > 3 && t.compare(t.size() - 3, 3, "deg") == 0) {
        return parse_double(std::string_view(t).substr(0, t.size() - 3), "angle") * kPi / 180.0;
    }
    if (t.size() > 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
        return parse_double(std::string_view(t).substr(0, t.size() - 2), "angle") * kPi;
    }
    return parse_double(t, "angle");
}

DomainGeometry DomainGeometry::wedge(double theta, Box box, double r0, double eps) {
    DomainGeometry g;
    g.kind_ = DomainKind::kWedge2d;
    g.theta_ = theta;
    g.box_ = box;
    g.cutoff_ = {{box.x0 + 0.5 * box.side, box.y0 + 0.5 * box.side}, r0, eps, 5};
    g.validate();

    const Point apex = g.cutoff_.center;
    g.vertices_.push_back(apex);
    g.vertices_.push_back(ray_exit(box, 0.0));
    for (int q = 0; q < 4; ++q) {
        const double corner = kPi / 4.0 + q * kPi / 2.0;
        if (corner < theta - kGeomTol) g.vertices_.push_back(ray_exit(box, corner));
    }
    g.vertices_.push_back(ray_exit(box, theta));
    g.singular_ = {apex};
    return g;
}

DomainGeometry DomainGeometry::polygon(std::vector<Point> vertices, std::vector<std::size_t> singular,
                                       std::optional<Box> box, std::optional<CutoffProfile> cutoff) {
    DomainGeometry g;
    g.kind_ = DomainKind::kPolygon2d;
    if (vertices.size() < 3) throw Error("invalid-argument", "polygon needs at least 3 vertices");
    g.vertices_ = std::move(vertices);
    if (singular.empty()) {
        g.singular_ = g.vertices_;
    } else {
        for (std::size_t idx : singular) {
            if (idx >= g.vertices_.size()) throw Error("invalid-argument", "singular vertex index out of range");
            g.singular_.push_back(g.vertices_[idx]);
        }
    }
    if (box) {
        g.box_ = *box;
    } else {
        double xmin = g.vertices_[0].x, xmax = xmin, ymin = g.vertices_[0].y, ymax = ymin;
        for (const Point& p : g.vertices_) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
        g.box_ = {xmin, ymin, std::max(xmax - xmin, ymax - ymin)};
    }
    if (cutoff) {
        g.cutoff_ = *cutoff;
    } else {
        g.cutoff_ = {g.singular_.front(), 0.45 * g.box_.side, 0.2 * g.box_.side, 5};
    }
    g.validate();
    return g;
}

DomainGeometry DomainGeometry::cap_cone(double theta0, double r0, double eps) {
    DomainGeometry g;
    g.kind_ = DomainKind::kCapCone3dMeta;
    g.theta_ = theta0;
    g.box_ = {-1.0, -1.0, 2.0};
    g.cutoff_ = {{0.0, 0.0}, r0, eps, 5};
    g.singular_ = {{0.0, 0.0}};
    g.validate();
    return g;
}

DomainGeometry DomainGeometry::unit_square() {
    return polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

DomainGeometry DomainGeometry::l_shape() {
    return polygon({{0, 0}, {1, 0}, {1, 0.5}, {0.5, 0.5}, {0.5, 1}, {0, 1}}, {3}, Box{0, 0, 1},
                   CutoffProfile{{0.5, 0.5}, 0.5, 0.45, 5});
}

void DomainGeometry::validate() const {
    if (!(cutoff_.r0 > 0.0) || !(cutoff_.eps > 0.0) || !(cutoff_.eps < cutoff_.r0)) {
        throw Error("invalid-argument", "cut-off requires 0 < eps < r0");
    }
    if (!(box_.side > 0.0)) throw Error("invalid-argument", "bounding box side must be positive");
    switch (kind_) {
        case DomainKind::kWedge2d:
            if (!(theta_ > 0.0) || theta_ > kTwoPi + kGeomTol) {
                throw Error("invalid-argument", "wedge opening angle must lie in (0, 2pi]");
            }
            break;
        case DomainKind::kCapCone3dMeta:
            if (!(theta_ > 0.0) || !(theta_ < kPi)) {
                throw Error("invalid-argument", "cap half-angle must lie in (0, pi)");
            }
            break;
        case DomainKind::kPolygon2d: {
            const std::size_t n = vertices_.size();
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 2; j < n; ++j) {
                    if (i == 0 && j == n - 1) continue;
                    if (segments_intersect(vertices_[i], vertices_[(i + 1) % n], vertices_[j],
                                           vertices_[(j + 1) % n])) {
                        throw Error("invalid-argument", "polygon is not simple");
                    }
                }
            }
            for (const Point& s : singular_) {
                bool on_boundary = false;
                for (std::size_t i = 0; i < n; ++i) {
                    on_boundary = on_boundary ||
                                  segment_distance(s, vertices_[i], vertices_[(i + 1) % n]) <= 1e-9;
                }
                if (!on_boundary) throw Error("invalid-argument", "singular vertex is not on the boundary");
            }
            break;
        }
    }
}

bool DomainGeometry::contains(Point p) const {
    switch (kind_) {
        case DomainKind::kCapCone3dMeta:
            throw Error("invalid-argument", "cap-cone geometry carries metadata only");
        case DomainKind::kWedge2d: {
            if (p.x < box_.x0 - kGeomTol || p.x > box_.x0 + box_.side + kGeomTol ||
                p.y < box_.y0 - kGeomTol || p.y > box_.y0 + box_.side + kGeomTol) {
                return false;
            }
            const double dx = p.x - cutoff_.center.x;
            const double dy = p.y - cutoff_.center.y;
            if (std::hypot(dx, dy) <= kGeomTol) return true;
            double phi = std::atan2(dy, dx);
            if (phi < 0.0) phi += kTwoPi;
            if (phi <= theta_ + kGeomTol) return true;
            // points on the edge at angle 0 approached from below
            return std::abs(dy) <= kGeomTol && dx > 0.0;
        }
        case DomainKind::kPolygon2d:
            return point_in_polygon(vertices_, p);
    }
    return false;
}

double DomainGeometry::distance_to_singular_set(Point p) const noexcept {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& v : singular_) best = std::min(best, std::hypot(p.x - v.x, p.y - v.y));
    return best;
}

double DomainGeometry::distance_to_boundary(Point p) const noexcept {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        best = std::min(best, segment_distance(p, vertices_[i], vertices_[(i + 1) % n]));
    }
    return best;
}

double DomainGeometry::rect_distance_to_singular_set(Point lo, double w) const noexcept {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& v : singular_) {
        const double cx = std::clamp(v.x, lo.x, lo.x + w);
        const double cy = std::clamp(v.y, lo.y, lo.y + w);
        best = std::min(best, std::hypot(v.x - cx, v.y - cy));
    }
    return best;
}

double smoothed_distance(double d) noexcept {
    if (d <= 0.5) return std::max(d, 0.0);
    if (d >= 1.0) return 1.0;
    // Hermite cubic from (1/2, value 1/2, slope 1) to (1, value 1, slope 0).
    const double t = (d - 0.5) / 0.5;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    return h00 * 0.5 + h10 * 0.5 + h01 * 1.0;
}

double distance_weight_unchecked(const DomainGeometry& geom, Point x, WeightMode mode) noexcept {
    const double d = mode == WeightMode::kSingularSet ? geom.distance_to_singular_set(x)
                                                      : geom.distance_to_boundary(x);
    return smoothed_distance(d);
}

double distance_weight(const DomainGeometry& geom, Point x, WeightMode mode) {
    if (!geom.contains(x)) {
        throw Error("outside-domain", "point (" + std::to_string(x.x) + ", " + std::to_string(x.y) +
                                          ") is outside the domain");
    }
    return distance_weight_unchecked(geom, x, mode);
}

double cutoff_eval(const CutoffProfile& profile, Point x) noexcept {
    const double r = std::hypot(x.x - profile.center.x, x.y - profile.center.y);
    const double inner = profile.r0 - profile.eps;
    const double outer = profile.r0 - 0.5 * profile.eps;
    if (r <= inner) return 1.0;
    if (r >= outer) return 0.0;
    const double t = (r - inner) / (outer - inner);
    const double smooth = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    return 1.0 - smooth;
}

SampledField rasterize(const DomainGeometry& geom, int level) {
    if (level < 0) throw Error("invalid-argument", "level must be nonnegative");
    if (level > kMaxRasterLevel) {
        throw Error("grid-too-large", "level " + std::to_string(level) + " exceeds the limit of " +
                                          std::to_string(kMaxRasterLevel));
    }
    if (geom.kind() == DomainKind::kCapCone3dMeta) {
        throw Error("invalid-argument", "cap-cone geometry has no planar grid");
    }
    SampledField field(2, level, geom.bounding_box());
    const std::size_t n = field.n();
    for (std::size_t iy = 0; iy < n; ++iy) {
        for (std::size_t ix = 0; ix < n; ++ix) {
            field.set_inside(ix, iy, geom.contains(field.center(ix, iy)));
        }
    }
    return field;
}

DomainGeometry parse_geometry(std::string_view text) {
    std::map<std::string, std::string> kv;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error("bad-params", "geometry line without '=': " + line);
        kv[trim(std::string_view(line).substr(0, eq))] = trim(std::string_view(line).substr(eq + 1));
    }
    auto get = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };
    const std::string kind = get("kind").value_or("polygon2d");
    std::optional<Box> box;
    if (auto b = get("box")) {
        const auto v = parse_list(*b, ',', "box");
        if (v.size() != 3) throw Error("bad-params", "box must be x0,y0,side");
        box = Box{v[0], v[1], v[2]};
    }
    if (kind == "wedge2d") {
        const auto th = get("theta");
        if (!th) throw Error("bad-params", "wedge2d requires theta");
        const Box bb = box.value_or(Box{-1.0, -1.0, 2.0});
        const double r0 = get("r0") ? parse_double(*get("r0"), "r0") : 0.45 * bb.side;
        const double eps = get("eps") ? parse_double(*get("eps"), "eps") : 0.2 * bb.side;
        return DomainGeometry::wedge(parse_angle(*th), bb, r0, eps);
    }
    if (kind == "cap-cone3d-meta") {
        const auto th = get("theta");
        if (!th) throw Error("bad-params", "cap-cone3d-meta requires theta");
        const double r0 = get("r0") ? parse_double(*get("r0"), "r0") : 0.9;
        const double eps = get("eps") ? parse_double(*get("eps"), "eps") : 0.4;
        return DomainGeometry::cap_cone(parse_angle(*th), r0, eps);
    }
    if (kind != "polygon2d") throw Error("bad-params", "unknown geometry kind '" + kind + "'");
    const auto verts = get("vertices");
    if (!verts) throw Error("bad-params", "polygon2d requires vertices");
    std::vector<Point> points;
    std::string pair;
    std::istringstream vin(*verts);
    while (std::getline(vin, pair, ';')) {
        if (trim(pair).empty()) continue;
        const auto xy = parse_list(pair, ',', "vertex");
        if (xy.size() != 2) throw Error("bad-params", "vertex must be x,y");
        points.push_back({xy[0], xy[1]});
    }
    std::vector<std::size_t> singular;
    if (auto s = get("singular")) {
        for (double v : parse_list(*s, ',', "singular index")) singular.push_back(static_cast<std::size_t>(v));
    }
    std::optional<CutoffProfile> cutoff;
    if (get("r0") || get("eps") || get("center")) {
        DomainGeometry tmp = DomainGeometry::polygon(points, singular, box);
        CutoffProfile c = tmp.cutoff();
        if (auto r0 = get("r0")) c.r0 = parse_double(*r0, "r0");
        if (auto eps = get("eps")) c.eps = parse_double(*eps, "eps");
        if (auto ctr = get("center")) {
            const auto xy = parse_list(*ctr, ',', "center");
            if (xy.size() != 2) throw Error("bad-params", "center must be x,y");
            c.center = {xy[0], xy[1]};
        }
        cutoff = c;
    }
    return DomainGeometry::polygon(std::move(points), std::move(singular), box, cutoff);
}

DomainGeometry load_geometry(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("io", "cannot open geometry file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_geometry(ss.str());
}

}  // namespace besovlab
