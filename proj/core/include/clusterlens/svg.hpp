#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace clusterlens {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;  // (layer index, metric value)
};

/// Standalone SVG line chart: axes with ticks, one polyline per series,
/// point markers, legend. Output bytes are a pure function of the input.
/// Throws EmptySeries when there are no series or a series has no points,
/// NonFiniteValue on non-finite coordinates.
std::string render_linechart(std::span<const Series> series);

/// render_linechart written to a file. Throws IoFailure.
void emit_linechart(std::span<const Series> series, const std::string& path);

}  // namespace clusterlens
