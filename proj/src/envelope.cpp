#include "ccpir/envelope.hpp"

#include <algorithm>
#include <stdexcept>

namespace ccpir {

std::vector<TradeoffPoint> lower_convex_envelope(std::vector<TradeoffPoint> points) {
  if (points.empty()) throw std::invalid_argument("envelope of empty point set");

  std::sort(points.begin(), points.end(), [](const TradeoffPoint& a, const TradeoffPoint& b) {
    if (a.memory != b.memory) return a.memory < b.memory;
    if (a.load != b.load) return a.load < b.load;
    return a.subpacketization < b.subpacketization;
  });
  // Dedup by memory, keeping the lowest load (then lowest subpacketization).
  std::vector<TradeoffPoint> pts;
  for (auto& p : points) {
    if (!pts.empty() && pts.back().memory == p.memory) continue;
    pts.push_back(p);
  }

  // Monotone-chain lower hull. A non-left turn drops the middle point, so
  // interior collinear points go away and endpoints stay.
  std::vector<TradeoffPoint> hull;
  for (auto& p : pts) {
    while (hull.size() >= 2) {
      const TradeoffPoint& a = hull[hull.size() - 2];
      const TradeoffPoint& b = hull[hull.size() - 1];
      Rational cross = (b.memory - a.memory) * (p.load - a.load) -
                       (b.load - a.load) * (p.memory - a.memory);
      if (cross <= 0) hull.pop_back();
      else break;
    }
    hull.push_back(p);
  }
  return hull;
}

Rational envelope_value_at(const std::vector<TradeoffPoint>& envelope, const Rational& memory) {
  if (envelope.empty()) throw std::invalid_argument("empty envelope");
  if (memory < envelope.front().memory)
    throw std::invalid_argument("memory below the envelope's leftmost vertex");
  if (memory >= envelope.back().memory) {
    // Load never increases with memory; past the last vertex the best known
    // point still applies.
    return envelope.back().load;
  }
  for (size_t i = 0; i + 1 < envelope.size(); ++i) {
    const TradeoffPoint& a = envelope[i];
    const TradeoffPoint& b = envelope[i + 1];
    if (memory >= a.memory && memory <= b.memory) {
      Rational t = (memory - a.memory) / (b.memory - a.memory);
      return a.load + t * (b.load - a.load);
    }
  }
  return envelope.back().load;
}

}  // namespace ccpir
