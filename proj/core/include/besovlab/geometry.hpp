#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "besovlab/field.hpp"

namespace besovlab {

enum class DomainKind { kWedge2d, kPolygon2d, kCapCone3dMeta };

/// Radial cut-off: 1 on |x - center| < r0 - eps, 0 on |x - center| > r0 - eps/2,
/// quintic smoothstep in between.
struct CutoffProfile {
    Point center{};
    double r0 = 0.9;
    double eps = 0.4;
    int blend_degree = 5;
};

/// Which set the Kondratiev weight measures distance to.
enum class WeightMode {
    kSingularSet,   // singular vertices (polyhedral setting)
    kFullBoundary,  // the whole boundary (Lipschitz setting)
};

/// A desk-scale domain: a planar wedge or simple polygon clipped to a square
/// bounding box, or spherical-cap cone metadata (no grid representation).
///
/// Wedges have their apex at the centre of the bounding box, one edge along
/// the positive x axis and opening angle theta measured counter-clockwise.
class DomainGeometry {
public:
    static DomainGeometry wedge(double theta, Box box = {-1.0, -1.0, 2.0},
                                double r0 = 0.9, double eps = 0.4);
    /// Polygon with counter-clockwise or clockwise vertices. When `singular`
    /// is empty every vertex is singular.
    static DomainGeometry polygon(std::vector<Point> vertices,
                                  std::vector<std::size_t> singular = {},
                                  std::optional<Box> box = std::nullopt,
                                  std::optional<CutoffProfile> cutoff = std::nullopt);
    static DomainGeometry cap_cone(double theta0, double r0 = 0.9, double eps = 0.4);

    /// Unit square [0,1]^2.
    static DomainGeometry unit_square();
    /// Unit square minus its upper-right quarter; re-entrant corner (1/2, 1/2)
    /// is the only singular vertex and the cut-off is centred there.
    static DomainGeometry l_shape();

    DomainKind kind() const noexcept { return kind_; }
    double theta() const noexcept { return theta_; }
    const std::vector<Point>& vertices() const noexcept { return vertices_; }
    const std::vector<Point>& singular_set() const noexcept { return singular_; }
    const Box& bounding_box() const noexcept { return box_; }
    const CutoffProfile& cutoff() const noexcept { return cutoff_; }

    /// Closed containment test (boundary points count as inside).
    bool contains(Point p) const;

    double distance_to_singular_set(Point p) const noexcept;
    double distance_to_boundary(Point p) const noexcept;

    /// Smallest distance from any point of the axis-aligned rectangle
    /// [lo.x, lo.x+w] x [lo.y, lo.y+w] to the singular set.
    double rect_distance_to_singular_set(Point lo, double w) const noexcept;

private:
    DomainGeometry() = default;
    void validate() const;

    DomainKind kind_ = DomainKind::kPolygon2d;
    double theta_ = 0.0;
    std::vector<Point> vertices_;
    std::vector<Point> singular_;
    Box box_{};
    CutoffProfile cutoff_{};
};

/// Maps a raw distance d >= 0 to the capped, smoothed weight in [0, 1]:
/// identity below 1/2, cubic Hermite blend to 1 on [1/2, 1], 1 beyond.
double smoothed_distance(double d) noexcept;

/// Smooth distance weight rho(x). Throws Error("outside-domain").
double distance_weight(const DomainGeometry& geom, Point x,
                       WeightMode mode = WeightMode::kSingularSet);

/// Same as distance_weight but defined everywhere (no containment check).
double distance_weight_unchecked(const DomainGeometry& geom, Point x,
                                 WeightMode mode = WeightMode::kSingularSet) noexcept;

double cutoff_eval(const CutoffProfile& profile, Point x) noexcept;

/// Largest supported rasterization level (2^24 cells).
inline constexpr int kMaxRasterLevel = 12;

/// Inside/outside mask of cell centres on the level-j grid over the bounding
/// box; values are zero. Throws Error("grid-too-large") above kMaxRasterLevel.
SampledField rasterize(const DomainGeometry& geom, int level);

/// Parses the key=value geometry format (kind, theta, vertices, singular,
/// box, r0, eps). Angles accept a "deg" suffix; vertices are "x,y;x,y;...".
DomainGeometry parse_geometry(std::string_view text);
DomainGeometry load_geometry(const std::string& path);

/// Parses "270deg", "1.5pi" or a plain radian value.
double parse_angle(std::string_view text);

}  // namespace besovlab
