#pragma once

#include <string>

#include "treid/model.hpp"

namespace treid {

struct PlotOptions {
  int width = 860;
  int height = 540;
  std::string title;
};

// Self-contained SVG charts; data curves are <polyline> elements, one per
// series, so downstream checks can count them. Time axes are in minutes.
std::string rpc_svg(const RpcTable& table, const PlotOptions& options = {});
std::string cmc_svg(const CmcTable& table, const PlotOptions& options = {});
std::string flow_svg(const FlowDensityProfile& profile, const PlotOptions& options = {});

}  // namespace treid
