#pragma once

#include <cstdint>
#include <vector>

#include "fcm/rng.hpp"
#include "fcm/types.hpp"

namespace fcm::fmc {

//! A line-segment sample: |end - start| equals the batch fiber length.
template <int D>
struct Fiber {
  Vec<D> start;
  Vec<D> end;
};

//! A seeded set of fibers over an axis-aligned sampling domain. Start
//! points are uniform over the domain; directions are isotropic, so end
//! points may fall in the shell of one fiber length around it.
template <int D>
struct FiberBatch {
  std::vector<Fiber<D>> fibers;
  Box<D> domain;
  double length = 0.0;
  std::uint64_t seed = 0;

  std::int64_t size() const { return static_cast<std::int64_t>(fibers.size()); }
};

//! Draws `count` fibers: start uniform over `domain`, direction from a
//! normalized standard-Gaussian draw, end = start + length * direction.
//! Deterministic for fixed (domain, count, length, seed).
template <int D>
FiberBatch<D> sample_fibers(const Box<D>& domain, std::int64_t count,
                            double length, std::uint64_t seed) {
  if (!(length > 0.0)) throw ConfigError("fiber length must be positive");
  if (count < 0) throw ConfigError("fiber count must be non-negative");
  if (domain.empty() || !(domain.measure() > 0.0))
    throw ConfigError("sampling domain is degenerate");

  FiberBatch<D> batch;
  batch.domain = domain;
  batch.length = length;
  batch.seed = seed;
  batch.fibers.reserve(static_cast<std::size_t>(count));

  Rng rng(seed);
  const Vec<D> ext = domain.extent();
  for (std::int64_t i = 0; i < count; ++i) {
    Fiber<D> f;
    for (int k = 0; k < D; ++k)
      f.start[k] = domain.lo[k] + rng.uniform01() * ext[k];
    Vec<D> q = rng.template gaussian_vec<D>();
    double n = q.norm();
    if (n == 0.0) {  // vanishing draw: any fixed direction keeps determinism
      q = Vec<D>::Unit(0);
      n = 1.0;
    }
    f.end = f.start + (length / n) * q;
    batch.fibers.push_back(f);
  }
  return batch;
}

}  // namespace fcm::fmc
