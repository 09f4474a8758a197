#include "mrchialvo/types.hpp"

#include <array>
#include <utility>

namespace mrchialvo {

namespace {

constexpr std::array<std::pair<std::string_view, Param>, 6> kNames{{
    {"k0", Param::k0},
    {"k1", Param::k1},
    {"k2", Param::k2},
    {"k", Param::k},
    {"r", Param::r},
    {"h", Param::h},
}};

}  // namespace

Param parse_param(std::string_view name) {
  for (const auto& [n, p] : kNames) {
    if (n == name) return p;
  }
  throw InvalidArgument("unknown map parameter '" + std::string(name) + "'");
}

std::string_view param_name(Param p) {
  for (const auto& [n, q] : kNames) {
    if (q == p) return n;
  }
  return "?";
}

double get(const MapParams& p, Param which) {
  switch (which) {
    case Param::k0: return p.k0;
    case Param::k1: return p.k1;
    case Param::k2: return p.k2;
    case Param::k: return p.k;
    case Param::r: return p.r;
    case Param::h: return p.h;
  }
  return 0.0;
}

void set(MapParams& p, Param which, double value) {
  switch (which) {
    case Param::k0: p.k0 = value; break;
    case Param::k1: p.k1 = value; break;
    case Param::k2: p.k2 = value; break;
    case Param::k: p.k = value; break;
    case Param::r: p.r = value; break;
    case Param::h: p.h = value; break;
  }
}

void validate(const MapParams& p) {
  for (const auto& [n, q] : kNames) {
    if (!std::isfinite(get(p, q))) {
      throw InvalidArgument("map parameter " + std::string(n) + " is not finite");
    }
  }
}

}  // namespace mrchialvo
