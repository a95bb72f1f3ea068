#pragma once

#include <functional>
#include <vector>

#include "fcm/types.hpp"

namespace fcm::harness {

//! Shoelace area of a simple polygon (positive when counterclockwise).
double polygon_area(const std::vector<Vec2>& poly);

//! Sutherland-Hodgman clip of a polygon against a convex clip polygon
//! (counterclockwise). Exact up to floating point.
std::vector<Vec2> convex_clip(const std::vector<Vec2>& subject,
                              const std::vector<Vec2>& clip);

//! Axis-aligned rectangle as a counterclockwise polygon.
std::vector<Vec2> rectangle(const Vec2& center, const Vec2& half);

//! Square of side `side` centered at the origin, rotated by `angle`.
std::vector<Vec2> rotated_square(double side, double angle);

//! Area of a disk of radius r centered in a square of half-side s
//! (closed form).
double disk_in_square_area(double r, double s);

//! Adaptive Simpson quadrature.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol);

}  // namespace fcm::harness
