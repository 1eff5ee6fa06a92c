#pragma once

namespace zenosplit::special {

/// Bessel function of the first kind J_n(x) for integer order.
///
/// Evaluated by the ascending power series, which is exact to a few ulp for
/// the small arguments a weak phase grating produces (x well below 1).
/// Negative orders use J_{-n}(x) = (-1)^n J_n(x). Values whose leading series
/// term falls below the smallest normal double are returned as exactly 0.
///
/// Throws ValidationError for non-finite or negative x.
double bessel_j(int n, double x);

}  // namespace zenosplit::special
