#include "conehol/sampling.hpp"

#include <algorithm>
#include <iterator>

#include "conehol/errors.hpp"
#include "conehol/random.hpp"

namespace conehol {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double radical_inverse(long index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

void check_box(const Vector& lo, const Vector& hi) {
  if (lo.size() != hi.size()) throw DimensionError("box bounds differ in length");
  if (lo.size() > std::size(kPrimes)) throw DimensionError("box dimension too large for sampling");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i])) throw ConfigError("empty sampling box in coordinate " + std::to_string(i));
}

}  // namespace

std::vector<Point> halton_points(const Vector& lo, const Vector& hi, int count, int skip) {
  check_box(lo, hi);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) {
    Point p(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i)
      p[i] = lo[i] + (hi[i] - lo[i]) * radical_inverse(k + skip, kPrimes[i]);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Point> tensor_grid(const Vector& lo, const Vector& hi, int per_axis) {
  check_box(lo, hi);
  if (per_axis < 1) throw ConfigError("grid needs at least one node per axis");
  std::vector<Point> out{Point{}};
  for (std::size_t i = 0; i < lo.size(); ++i) {
    std::vector<Point> next;
    next.reserve(out.size() * static_cast<std::size_t>(per_axis));
    for (const auto& p : out)
      for (int k = 0; k < per_axis; ++k) {
        Point q = p;
        q.push_back(lo[i] + (hi[i] - lo[i]) * (k + 1.0) / (per_axis + 1.0));
        next.push_back(std::move(q));
      }
    out = std::move(next);
  }
  return out;
}

std::vector<Point> random_points(const Vector& lo, const Vector& hi, int count, std::uint64_t seed) {
  check_box(lo, hi);
  Rng rng(seed);
  std::vector<Point> out;
  for (int k = 0; k < count; ++k) {
    Point p(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) p[i] = rng.uniform(lo[i], hi[i]);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Point> in_domain(const MetricField& m, const std::vector<Point>& pts) {
  std::vector<Point> out;
  for (const auto& p : pts)
    if (m.in_domain(p)) out.push_back(p);
  return out;
}

}  // namespace conehol
