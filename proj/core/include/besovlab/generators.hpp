#pragma once

#include "besovlab/field.hpp"
#include "besovlab/geometry.hpp"
#include "besovlab/wavelet.hpp"

namespace besovlab {

/// Opening angle and the direction of the edge the interior sector starts
/// from (counter-clockwise), at a singular vertex.
struct CornerFrame {
    Point vertex{};
    double start = 0.0;
    double opening = 0.0;
};

/// Corner frame at the first singular vertex of a wedge or polygon.
CornerFrame corner_frame(const DomainGeometry& geom);

/// r^lambda sin(lambda phi) in the corner frame, optionally times the cut-off,
/// rasterized and zero-extended. lambda <= 0 selects pi / opening.
SampledField singular_field(const DomainGeometry& geom, int level, double lambda = 0.0, bool with_cutoff = true);

/// C-infinity bump exp(1 - 1 / (1 - (r / radius)^2)) with maximum 1 at `center`.
SampledField bump_field(Box box, int level, Point center, double radius, int dim = 2);

/// dist(x, boundary)^beta on the inside cells.
SampledField boundary_layer_field(const DomainGeometry& geom, int level, double beta);

/// Compactly supported w = (1 - r^2 / R^2)^5 (zero for r >= R) and its Laplacian.
double manufactured_profile(Point x, Point center, double R);
double manufactured_laplacian(Point x, Point center, double R);

}  // namespace besovlab
