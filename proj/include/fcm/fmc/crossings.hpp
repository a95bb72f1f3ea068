#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "fcm/fmc/fiber.hpp"

namespace fcm::fmc {

struct CrossingOptions {
  int subdivisions = 16;      // uniform sign-scan samples per fiber
  double h_tol = 1e-15;       // root bracket width target on h in [0,1]
  int max_refine_iter = 100;  // per-root refinement budget
  double eps_tangent_rel = 1e-8;  // tangency guard on |grad phi . (xe-xs)| / l
  // Signed distance fields are 1-Lipschitz, so a same-sign scan interval can
  // be split or pruned by the envelope bound; this catches grazing chords
  // the uniform scan would miss, down to min_feature_rel of the fiber.
  bool lipschitz_refine = true;
  double min_feature_rel = 1.0 / 256.0;
};

//! One boundary crossing along a fiber, at parameter h in (0,1).
//! orientation: +1 if the inside interval lies below h (increasing h grows
//! the inside length), -1 if above, 0 for a degenerate graze.
struct Crossing {
  double h;
  int orientation;
};

struct FiberCrossings {
  std::vector<Crossing> crossings;
  double inside_fraction = 0.0;  // sum of inside interval widths in [0,1]
  bool refine_fallback = false;  // a root hit the iteration budget
};

namespace detail {

//! Brent root refinement on [a,b] with f(a), f(b) of opposite (weak) sign.
//! Drives the bracket to machine-level width so roots vary smoothly under
//! small parameter perturbations.
template <class F>
double brent_root(const F& f, double a, double b, double fa, double fb,
                  double tol, int max_iter, bool& hit_budget) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() *
                            std::abs(b) +
                        0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q),
                             std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  hit_budget = true;
  return b;
}

}  // namespace detail

//! Scans the field along the fiber, refines every sign change to a root,
//! and decomposes [0,1] into inside/outside intervals classified by the
//! field sign at interval midpoints. Features thinner than
//! length/subdivisions are below the scan resolution.
template <int D, class Field>
FiberCrossings find_crossings(const Fiber<D>& fiber, const Field& field,
                              const CrossingOptions& opts = {}) {
  const Vec<D> dir = fiber.end - fiber.start;
  const auto phi = [&](double h) {
    return field(Vec<D>(fiber.start + h * dir));
  };

  FiberCrossings out;
  const int n = std::max(1, opts.subdivisions);
  const double fiber_len = dir.norm();
  std::vector<double> roots;

  const auto refine = [&](double a, double b, double fa, double fb) {
    bool budget = false;
    roots.push_back(detail::brent_root(phi, a, b, fa, fb, opts.h_tol,
                                       opts.max_refine_iter, budget));
    out.refine_fallback = out.refine_fallback || budget;
  };

  // Depth-first interval scan. Same-sign intervals are split while the
  // 1-Lipschitz envelope admits a hidden zero, pruned otherwise.
  const std::function<void(double, double, double, double)> scan =
      [&](double a, double b, double fa, double fb) {
        if ((fa < 0.0) != (fb < 0.0)) {
          refine(a, b, fa, fb);
          return;
        }
        if (!opts.lipschitz_refine) return;
        if (b - a < opts.min_feature_rel) return;
        const double reach = 0.5 * (b - a) * fiber_len;
        if (fa >= 0.0 && fb >= 0.0 && 0.5 * (fa + fb) >= reach) return;
        if (fa < 0.0 && fb < 0.0 && -0.5 * (fa + fb) >= reach) return;
        const double m = 0.5 * (a + b);
        const double fm = phi(m);
        scan(a, m, fa, fm);
        scan(m, b, fm, fb);
      };

  double prev_h = 0.0;
  double prev_f = phi(0.0);
  for (int i = 1; i <= n; ++i) {
    const double h = static_cast<double>(i) / n;
    const double fh = phi(h);
    scan(prev_h, h, prev_f, fh);
    prev_h = h;
    prev_f = fh;
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return b - a < 1e-13; }),
              roots.end());

  // Interval classification at midpoints.
  std::vector<double> bounds;
  bounds.push_back(0.0);
  for (double r : roots)
    if (r > 0.0 && r < 1.0) bounds.push_back(r);
  bounds.push_back(1.0);
  std::vector<bool> inside(bounds.size() - 1);
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    inside[i] = phi(0.5 * (bounds[i] + bounds[i + 1])) < 0.0;
    if (inside[i]) out.inside_fraction += bounds[i + 1] - bounds[i];
  }
  for (std::size_t i = 1; i + 1 < bounds.size(); ++i) {
    int orient = 0;
    if (inside[i - 1] && !inside[i]) orient = +1;
    if (!inside[i - 1] && inside[i]) orient = -1;
    out.crossings.push_back({bounds[i], orient});
  }
  return out;
}

}  // namespace fcm::fmc
