#include "korn/geometry.hpp"

namespace korn {

TraceSet trace_conditions(SpaceTag tag) {
  TraceSet t;
  auto pin = [&](int comp, bool at0, bool atL) {
    t.pinned[comp] = {at0, atL};
  };
  switch (tag) {
    case SpaceTag::V0:
      pin(0, true, true);
      pin(1, true, true);
      pin(2, true, true);
      break;
    case SpaceTag::V1:
      pin(0, true, true);
      pin(1, true, true);
      pin(2, true, false);
      break;
    case SpaceTag::V2:
      pin(0, false, false);
      pin(1, true, true);
      pin(2, true, true);
      break;
    case SpaceTag::Vstar:
      pin(0, false, false);
      pin(1, true, true);
      pin(2, true, false);
      break;
    case SpaceTag::ParityOdd:
      pin(0, true, true);
      pin(1, true, true);
      pin(2, false, false);
      break;
    case SpaceTag::ParityEven:
      pin(0, false, false);
      pin(1, false, false);
      pin(2, true, true);
      break;
    case SpaceTag::Free:
      break;
  }
  return t;
}

std::string to_string(SpaceTag tag) {
  switch (tag) {
    case SpaceTag::V0: return "v0";
    case SpaceTag::V1: return "v1";
    case SpaceTag::V2: return "v2";
    case SpaceTag::Vstar: return "vstar";
    case SpaceTag::ParityOdd: return "parity-odd";
    case SpaceTag::ParityEven: return "parity-even";
    case SpaceTag::Free: return "free";
  }
  return "?";
}

SpaceTag space_from_string(const std::string& name) {
  if (name == "v0") return SpaceTag::V0;
  if (name == "v1") return SpaceTag::V1;
  if (name == "v2") return SpaceTag::V2;
  if (name == "vstar") return SpaceTag::Vstar;
  if (name == "parity-odd") return SpaceTag::ParityOdd;
  if (name == "parity-even") return SpaceTag::ParityEven;
  if (name == "free") return SpaceTag::Free;
  throw ConfigError("unknown space '" + name + "'");
}

}  // namespace korn
