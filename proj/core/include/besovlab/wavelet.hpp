#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "besovlab/field.hpp"

namespace besovlab {

/// Orthonormal Daubechies wavelet with `order` vanishing moments
/// (filter length 2 * order), supported for order 2..10.
class WaveletSystem {
public:
    explicit WaveletSystem(int order = 4);

    int order() const noexcept { return order_; }
    std::size_t filter_length() const noexcept { return lowpass_.size(); }
    /// Half-width N of the reference cube [-N, N]^d containing the
    /// (centred) mother wavelet support.
    int support_radius() const noexcept { return order_; }

    std::span<const double> lowpass() const noexcept { return lowpass_; }
    std::span<const double> highpass() const noexcept { return highpass_; }

private:
    int order_;
    std::vector<double> lowpass_;
    std::vector<double> highpass_;
};

/// Dyadic index (level j, translation k, type). Type 0 is the scaling
/// function and only appears at level 0; types 1..(2^d - 1) are mothers.
/// In 2D, type 1 is high-pass in x, type 2 high-pass in y, type 3 both.
struct WaveletIndex {
    int level = 0;
    std::array<std::int32_t, 2> k{0, 0};
    int type = 1;

    bool is_father() const noexcept { return type == 0; }
    friend bool operator==(const WaveletIndex&, const WaveletIndex&) = default;
};

struct Cube {
    Point lo{};
    double side = 0.0;
    int dim = 2;
};

/// Wavelet coefficients for levels 0..max_level-1 plus the level-0 scaling
/// coefficient, stored densely per level up to kDenseLimit entries and in a
/// hash map above it.
class CoeffTree {
public:
    static constexpr std::size_t kDenseLimit = std::size_t{1} << 20;

    CoeffTree() = default;
    CoeffTree(int dim, int max_level, int order, Box box = {});

    int dim() const noexcept { return dim_; }
    int max_level() const noexcept { return max_level_; }
    int order() const noexcept { return order_; }
    const Box& box() const noexcept { return box_; }
    int types() const noexcept { return dim_ == 1 ? 1 : 3; }

    std::size_t per_axis(int level) const noexcept { return std::size_t{1} << level; }
    /// Number of mother-wavelet slots at `level`.
    std::size_t level_capacity(int level) const noexcept;
    bool level_is_dense(int level) const noexcept;

    double get(const WaveletIndex& idx) const;
    void set(const WaveletIndex& idx, double value);

    double father() const noexcept { return father_; }
    void set_father(double v) noexcept { father_ = v; }

    /// Dense view of a level (empty span for sparse levels).
    std::span<const double> dense_level(int level) const;
    std::span<double> dense_level(int level);

    /// Visits the coefficients of `level` in slot order. Sparse levels only
    /// visit explicitly stored entries.
    void for_each_in_level(int level, const std::function<void(const WaveletIndex&, double)>& fn) const;
    /// Father first, then levels in increasing order.
    void for_each(const std::function<void(const WaveletIndex&, double)>& fn) const;

    /// Total number of index slots (father + all mother slots).
    std::size_t slot_count() const noexcept;
    double sum_squares() const;

    /// Slot <-> index conversion (slot = (k2 * 2^j + k1) * types + type - 1).
    WaveletIndex index_of(int level, std::size_t slot) const noexcept;
    std::size_t slot_of(const WaveletIndex& idx) const;

private:
    void check(const WaveletIndex& idx) const;

    int dim_ = 2;
    int max_level_ = 0;
    int order_ = 4;
    Box box_{};
    double father_ = 0.0;
    std::vector<std::vector<double>> dense_;
    std::vector<std::unordered_map<std::uint64_t, double>> sparse_;
};

/// Analysis of a zero-extended field. Coefficients are physical L2 inner
/// products: finest-level scaling coefficients are h^{d/2} f. When the field
/// level exceeds J the field is first projected onto the level-J space.
/// Throws Error("insufficient-resolution") when J exceeds the field level.
CoeffTree dwt_forward(const SampledField& field, const WaveletSystem& sys, int J);
CoeffTree dwt_forward(const SampledField& field, const WaveletSystem& sys);

/// Synthesis on the level-max_level grid over the tree's box (mask all inside).
SampledField dwt_inverse(const CoeffTree& tree, const WaveletSystem& sys);

/// Cube Q(I) = box origin + side * 2^-j (k + [-1, 2N]) with side (2N+1) 2^-j,
/// containing the support of psi_I (before periodic wrapping).
Cube support_cube(const WaveletIndex& idx, const WaveletSystem& sys, const Box& box = {}, int dim = 2);

/// Synthesizes a single basis function on a level-`level` grid.
SampledField synthesize_atom(const WaveletIndex& idx, const WaveletSystem& sys, int level,
                             const Box& box = {}, int dim = 2);

}  // namespace besovlab
