#include "besovlab/field.hpp"

#include <algorithm>
#include <cmath>

#include "besovlab/error.hpp"

namespace besovlab {

SampledField::SampledField(int dim, int level, Box box) : dim_(dim), level_(level), box_(box) {
    if (dim != 1 && dim != 2) throw Error("invalid-argument", "field dimension must be 1 or 2");
    if (level < 0 || level > 14) throw Error("invalid-argument", "field level out of range");
    if (!(box.side > 0.0)) throw Error("invalid-argument", "box side must be positive");
    const std::size_t count = dim == 1 ? n() : n() * n();
    values_.assign(count, 0.0);
    mask_.assign(count, 1);
}

double SampledField::cell_measure() const noexcept {
    return dim_ == 1 ? h() : h() * h();
}

Point SampledField::center(std::size_t ix, std::size_t iy) const noexcept {
    const double hh = h();
    return {box_.x0 + (static_cast<double>(ix) + 0.5) * hh,
            dim_ == 1 ? 0.0 : box_.y0 + (static_cast<double>(iy) + 0.5) * hh};
}

std::size_t SampledField::inside_count() const noexcept {
    return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

void SampledField::apply_zero_extension() noexcept {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (mask_[i] == 0) values_[i] = 0.0;
    }
}

double SampledField::l2_norm() const noexcept {
    double sum = 0.0;
    for (double v : values_) sum += v * v;
    return std::sqrt(sum * cell_measure());
}

}  // namespace besovlab
