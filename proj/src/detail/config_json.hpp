#pragma once

#include "ovcyst/config.hpp"

#include <json.hpp>

namespace ovcyst::detail {

nlohmann::json config_echo(const PipelineConfig& config);

}  // namespace ovcyst::detail
