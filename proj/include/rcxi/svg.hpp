#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rcxi/state.hpp"

namespace rcxi::svg {

inline constexpr std::size_t kMaxPlotPoints = 4000;

/// PC1-PC2 trajectory (columns 0 and 1 of `points`) as a polyline with
/// markers at `centroids` (each a PC1/PC2 pair).
std::string trajectory_plot(const Matrix& points, const std::vector<std::vector<double>>& centroids,
                            const std::string& title);

/// Time series with an optional horizontal reference line.
std::string series_plot(std::span<const double> values, std::optional<double> reference,
                        const std::string& title, const std::string& y_label,
                        const std::string& reference_label);

}  // namespace rcxi::svg
