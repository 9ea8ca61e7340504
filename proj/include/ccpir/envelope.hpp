#pragma once

#include <string>
#include <vector>

#include "ccpir/rational.hpp"

namespace ccpir {

/// One achievable (memory, load) operating point, with the subpacketization
/// its construction needs.
struct TradeoffPoint {
  Rational memory;
  Rational load;
  BigInt subpacketization = 1;

  bool operator==(const TradeoffPoint&) const = default;
};

/// Vertices of the lower convex hull, increasing memory. Exact rational hull
/// test; points sharing a memory value keep only the lowest load. Collinear
/// interior points are dropped, endpoints kept.
std::vector<TradeoffPoint> lower_convex_envelope(std::vector<TradeoffPoint> points);

/// Piecewise-linear evaluation of an envelope at a given memory. Constant to
/// the right of the last vertex; memory below the first vertex is an error.
Rational envelope_value_at(const std::vector<TradeoffPoint>& envelope, const Rational& memory);

}  // namespace ccpir
