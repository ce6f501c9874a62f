#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace besovlab {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Axis-aligned square (or interval, in 1D) with lower corner (x0, y0).
struct Box {
    double x0 = 0.0;
    double y0 = 0.0;
    double side = 1.0;
};

/// Function values at the cell centres of a dyadic grid over a box.
///
/// A level-j field has n = 2^j cells per axis, spacing h = side / n, and
/// stores values row-major (index = iy * n + ix). Cells outside the domain
/// are marked in `mask` and hold zero (zero extension).
class SampledField {
public:
    SampledField() = default;
    SampledField(int dim, int level, Box box);

    int dim() const noexcept { return dim_; }
    int level() const noexcept { return level_; }
    const Box& box() const noexcept { return box_; }
    std::size_t n() const noexcept { return std::size_t{1} << level_; }
    std::size_t size() const noexcept { return values_.size(); }
    double h() const noexcept { return box_.side / static_cast<double>(n()); }
    double cell_measure() const noexcept;

    std::size_t index(std::size_t ix, std::size_t iy) const noexcept { return iy * n() + ix; }
    Point center(std::size_t ix, std::size_t iy = 0) const noexcept;

    double& operator()(std::size_t ix, std::size_t iy = 0) noexcept { return values_[index(ix, iy)]; }
    double operator()(std::size_t ix, std::size_t iy = 0) const noexcept { return values_[index(ix, iy)]; }

    bool inside(std::size_t ix, std::size_t iy = 0) const noexcept { return mask_[index(ix, iy)] != 0; }
    void set_inside(std::size_t ix, std::size_t iy, bool v) noexcept { mask_[index(ix, iy)] = v ? 1 : 0; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<std::uint8_t> mask() noexcept { return mask_; }
    std::span<const std::uint8_t> mask() const noexcept { return mask_; }

    std::size_t inside_count() const noexcept;

    /// Zeroes every value outside the mask.
    void apply_zero_extension() noexcept;

    /// Discrete L2 norm over the whole box: sqrt(h^d * sum f^2).
    double l2_norm() const noexcept;

private:
    int dim_ = 2;
    int level_ = 0;
    Box box_{};
    std::vector<double> values_;
    std::vector<std::uint8_t> mask_;
};

}  // namespace besovlab
