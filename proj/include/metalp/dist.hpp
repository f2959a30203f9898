#pragma once

namespace metalp {

// standard normal CDF
double normal_cdf(double x);

// standard normal quantile, p in (0,1); Acklam's rational approximation
// with one Halley refinement (|error| < 1e-14 over the full range)
double normal_quantile(double p);

}  // namespace metalp
