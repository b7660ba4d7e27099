#include "bihyp/fd.hpp"

#include <cmath>
#include <limits>

namespace bihyp::fd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Exponents balance O(h^2) truncation (O(h^4) after Richardson) against
// round-off eps / h^order for the deepest stencil in use at that order.
const double kBase[5] = {
    0.0,
    std::pow(kEps, 1.0 / 3.0),
    std::pow(kEps, 1.0 / 6.0),
    std::pow(kEps, 1.0 / 7.0),
    std::pow(kEps, 1.0 / 8.0),
};

}  // namespace

double base_step(int order) {
  if (order < 1 || order > 4) throw Error("fd: derivative order out of range");
  return kBase[order];
}

double axis_step(int order, double coord) {
  return base_step(order) * std::max(1.0, std::abs(coord));
}

const std::vector<Tap>& stencil(int k) {
  static const std::vector<Tap> s0 = {{0, 1.0}};
  static const std::vector<Tap> s1 = {{-1, -0.5}, {1, 0.5}};
  static const std::vector<Tap> s2 = {{-1, 1.0}, {0, -2.0}, {1, 1.0}};
  static const std::vector<Tap> s3 = {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}};
  static const std::vector<Tap> s4 = {
      {-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}};
  switch (k) {
    case 0: return s0;
    case 1: return s1;
    case 2: return s2;
    case 3: return s3;
    case 4: return s4;
    default: throw Error("fd: stencil order out of range");
  }
}

double reach(int order, double coord) {
  int width = order <= 2 ? 1 : 2;
  return width * axis_step(order, coord);
}

}  // namespace bihyp::fd
