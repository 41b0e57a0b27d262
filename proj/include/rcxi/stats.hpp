#pragma once

#include <span>

namespace rcxi {

double mean(std::span<const double> v);
/// Population variance.
double variance(std::span<const double> v);
/// Linear-interpolation quantile (the "type 7" rule), q in [0, 1].
double quantile(std::span<const double> v, double q);
double median(std::span<const double> v);

}  // namespace rcxi
