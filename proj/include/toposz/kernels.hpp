#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "toposz/field.hpp"

// Data-parallel inner loops of the pipeline. Every kernel has an OpenMP
// primary (toposz::kernels) and a serial reference twin
// (toposz::kernels::serial); tests assert bit-equality between the two and the
// bench target times them against each other.
//
// Sum reductions accumulate fixed-size chunk partials that are combined in
// chunk order, so the result is bit-identical for any thread count.

namespace toposz::kernels {

inline constexpr std::size_t reduction_chunk = 4096;

namespace serial {

void evaluate_mixture(int rank, const std::array<std::size_t, 3> &dims,
                      std::span<const GaussianComponent> components, std::span<double> out);

std::pair<double, double> min_max(std::span<const double> values);

// out[i] = f32((in[i] - lo) / (hi - lo)); all zeros when hi == lo.
void normalize_values(std::span<const double> in, double lo, double hi, std::span<double> out);

double sum_squared_diff(std::span<const double> a, std::span<const double> b);

double max_abs_diff(std::span<const double> a, std::span<const double> b);

// One Moore-neighborhood growth step of a vertex mask.
void dilate_once(int rank, const std::array<std::size_t, 3> &dims,
                 const std::vector<std::uint8_t> &in, std::vector<std::uint8_t> &out);

// Per-vertex bound fill from a segmentation: critical vertices pin to their
// value, regular vertices take their arc's span widened to contain the value.
void fill_bounds(std::span<const double> values, std::span<const std::uint32_t> vertex_arc,
                 std::span<const std::uint32_t> vertex_node, std::span<const double> arc_lo,
                 std::span<const double> arc_hi, std::span<double> lower, std::span<double> upper);

}  // namespace serial

void evaluate_mixture(int rank, const std::array<std::size_t, 3> &dims,
                      std::span<const GaussianComponent> components, std::span<double> out);
std::pair<double, double> min_max(std::span<const double> values);
void normalize_values(std::span<const double> in, double lo, double hi, std::span<double> out);
double sum_squared_diff(std::span<const double> a, std::span<const double> b);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
void dilate_once(int rank, const std::array<std::size_t, 3> &dims,
                 const std::vector<std::uint8_t> &in, std::vector<std::uint8_t> &out);
void fill_bounds(std::span<const double> values, std::span<const std::uint32_t> vertex_arc,
                 std::span<const std::uint32_t> vertex_node, std::span<const double> arc_lo,
                 std::span<const double> arc_hi, std::span<double> lower, std::span<double> upper);

}  // namespace toposz::kernels
