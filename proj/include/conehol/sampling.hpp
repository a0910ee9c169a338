#pragma once

#include <cstdint>
#include <vector>

#include "conehol/geometry.hpp"

namespace conehol {

/// Radical-inverse Halton points in the box [lo, hi], skipping the first
/// `skip` indices.
std::vector<Point> halton_points(const Vector& lo, const Vector& hi, int count, int skip = 1);

/// Uniform tensor grid with `per_axis` nodes per coordinate, endpoints excluded.
std::vector<Point> tensor_grid(const Vector& lo, const Vector& hi, int per_axis);

/// Seeded uniform samples in the box.
std::vector<Point> random_points(const Vector& lo, const Vector& hi, int count, std::uint64_t seed);

/// Keep only points inside the metric's domain.
std::vector<Point> in_domain(const MetricField& m, const std::vector<Point>& pts);

}  // namespace conehol
