#pragma once

// Sign-exact planar orientation and in-circle tests. A floating-point filter
// with Shewchuk's static error bounds answers almost every query; ambiguous
// ones are re-evaluated in exact rational arithmetic.

#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

namespace roughkit::predicates {

namespace detail {

using Exact = boost::multiprecision::cpp_rational;

inline constexpr double kEps = 0x1p-53;
inline constexpr double kCcwBound = (3.0 + 16.0 * kEps) * kEps;
inline constexpr double kIccBound = (10.0 + 96.0 * kEps) * kEps;

inline int sign_of(const Exact& v) { return v.sign(); }

inline int orient_exact(double ax, double ay, double bx, double by, double cx, double cy) {
  const Exact acx = Exact(ax) - Exact(cx), bcx = Exact(bx) - Exact(cx);
  const Exact acy = Exact(ay) - Exact(cy), bcy = Exact(by) - Exact(cy);
  return sign_of(acx * bcy - acy * bcx);
}

inline int incircle_exact(double ax, double ay, double bx, double by, double cx, double cy,
                          double dx, double dy) {
  const Exact adx = Exact(ax) - Exact(dx), ady = Exact(ay) - Exact(dy);
  const Exact bdx = Exact(bx) - Exact(dx), bdy = Exact(by) - Exact(dy);
  const Exact cdx = Exact(cx) - Exact(dx), cdy = Exact(cy) - Exact(dy);
  const Exact alift = adx * adx + ady * ady;
  const Exact blift = bdx * bdx + bdy * bdy;
  const Exact clift = cdx * cdx + cdy * cdy;
  return sign_of(alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                 clift * (adx * bdy - bdx * ady));
}

}  // namespace detail

/// +1 if (a, b, c) turn counter-clockwise, -1 if clockwise, 0 if collinear.
inline int orient(double ax, double ay, double bx, double by, double cx, double cy) {
  const double detleft = (ax - cx) * (by - cy);
  const double detright = (ay - cy) * (bx - cx);
  const double det = detleft - detright;
  double detsum = 0.0;
  if (detleft > 0.0) {
    if (detright <= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    detsum = -detleft - detright;
  } else {
    return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
  }
  const double bound = detail::kCcwBound * detsum;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return detail::orient_exact(ax, ay, bx, by, cx, cy);
}

/// Same arithmetic as orient() but returns the raw double determinant
/// (twice the signed area). Not sign-exact.
inline double orient_value(double ax, double ay, double bx, double by, double cx,
                           double cy) {
  return (ax - cx) * (by - cy) - (ay - cy) * (bx - cx);
}

/// +1 if d lies strictly inside the circle through counter-clockwise
/// (a, b, c), -1 if strictly outside, 0 if cocircular.
inline int incircle(double ax, double ay, double bx, double by, double cx, double cy,
                    double dx, double dy) {
  const double adx = ax - dx, bdx = bx - dx, cdx = cx - dx;
  const double ady = ay - dy, bdy = by - dy, cdy = cy - dy;

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                     clift * (adxbdy - bdxady);
  const double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                           (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                           (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
  const double bound = detail::kIccBound * permanent;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return detail::incircle_exact(ax, ay, bx, by, cx, cy, dx, dy);
}

}  // namespace roughkit::predicates
