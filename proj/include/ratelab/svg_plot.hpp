#pragma once

#include <string>

#include "ratelab/engine.hpp"

namespace ratelab {

struct PlotOptions {
  std::string title;
  int width = 960;
  int height = 540;
};

// Static SVG: utilization on the left axis, every strategy's rate on the
// right axis, shared step axis. Output bytes depend only on the inputs.
// Throws ValidationError for a trace without rows.
std::string render_svg(const SimTrace& trace, const PlotOptions& options = {});

}  // namespace ratelab
