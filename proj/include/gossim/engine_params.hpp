#pragma once

#include <cstdint>

#include "gossim/core.hpp"

namespace gossim {

struct EngineParams {
  Millis beacon_period = 100;
  Millis delivery_latency = 1;
  Millis duration = 50'000;
  Millis injection_time = 1'000;
  Version injected_version{1};
  double corruption_probability = 0.0;
  std::uint32_t payload_bytes = 1024;  // reporting and digest input only

  friend bool operator==(const EngineParams&, const EngineParams&) = default;
};

}  // namespace gossim
