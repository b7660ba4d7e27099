#pragma once

#include <algorithm>
#include <array>
#include <utility>
#include <vector>

#include "bihyp/types.hpp"

namespace bihyp::fd {

// Central differences on tensor-product stencils, second order in h, plus one
// Richardson level ((4 S(h/2) - S(h)) / 3) which lifts smooth fields to O(h^4).
// Steps are chosen per derivative order to balance truncation against
// round-off, and scaled per axis by max(1, |x_i|).

/// Base step for total derivative order 1..4 (before per-axis scaling).
double base_step(int order);

/// Step along one axis: base_step(order) * max(1, |coord|).
double axis_step(int order, double coord);

/// One tap of a 1D central stencil: node offset (in units of h) and weight.
struct Tap {
  int offset;
  double weight;
};

/// Second-order central stencil for the k-th derivative, k in 0..4.
const std::vector<Tap>& stencil(int k);

namespace detail {

/// Tensor-product stencil sum at shrink factor s: all per-axis steps are
/// multiplied by s. counts[a] = derivative order along axis a.
template <class Field>
auto stencil_sum(const Field& f, const Vec& x, const std::vector<int>& counts,
                 double s) -> std::decay_t<decltype(f(x))> {
  using Value = std::decay_t<decltype(f(x))>;
  const int n = static_cast<int>(x.size());
  int order = 0;
  for (int a = 0; a < n; ++a) order += counts[a];

  std::vector<int> axes;
  std::vector<double> steps;
  for (int a = 0; a < n; ++a) {
    if (counts[a] > 0) {
      axes.push_back(a);
      steps.push_back(axis_step(order, x[a]) * s);
    }
  }

  double scale = 1.0;
  for (std::size_t q = 0; q < axes.size(); ++q)
    for (int k = 0; k < counts[axes[q]]; ++k) scale *= steps[q];

  bool first = true;
  Value acc{};
  Vec y = x;
  // Walk the cartesian product of the per-axis stencils.
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    double w = 1.0;
    for (std::size_t q = 0; q < axes.size(); ++q) {
      const Tap& tap = stencil(counts[axes[q]])[idx[q]];
      w *= tap.weight;
      y[axes[q]] = x[axes[q]] + tap.offset * steps[q];
    }
    if (first) {
      acc = Value(w * f(y));
      first = false;
    } else {
      acc += w * f(y);
    }
    std::size_t q = 0;
    for (; q < axes.size(); ++q) {
      if (++idx[q] < stencil(counts[axes[q]]).size()) break;
      idx[q] = 0;
      y[axes[q]] = x[axes[q]];
    }
    if (q == axes.size()) break;
  }
  if (first) return Value(f(x));  // order zero
  return Value(acc / scale);
}

}  // namespace detail

/// Mixed partial of f at x; counts[a] = order along axis a, total in 1..4.
template <class Field>
auto partial_multi(const Field& f, const Vec& x, const std::vector<int>& counts)
    -> std::decay_t<decltype(f(x))> {
  using Value = std::decay_t<decltype(f(x))>;
  Value coarse = detail::stencil_sum(f, x, counts, 1.0);
  Value fine = detail::stencil_sum(f, x, counts, 0.5);
  return Value((4.0 * fine - coarse) / 3.0);
}

template <class Field>
auto partial(const Field& f, const Vec& x, int axis) {
  std::vector<int> counts(x.size(), 0);
  counts[axis] = 1;
  return partial_multi(f, x, counts);
}

template <class Field>
auto partial2(const Field& f, const Vec& x, int a, int b) {
  std::vector<int> counts(x.size(), 0);
  counts[a] += 1;
  counts[b] += 1;
  return partial_multi(f, x, counts);
}

template <class Field>
auto partial3(const Field& f, const Vec& x, int a, int b, int c) {
  std::vector<int> counts(x.size(), 0);
  counts[a] += 1;
  counts[b] += 1;
  counts[c] += 1;
  return partial_multi(f, x, counts);
}

/// Derivative of t -> f(x + t d) at t = 0, i.e. the derivative along the
/// (not necessarily unit) direction d.
template <class Field>
auto directional(const Field& f, const Vec& x, const Vec& d)
    -> std::decay_t<decltype(f(x))> {
  using Value = std::decay_t<decltype(f(x))>;
  double dn = d.template lpNorm<Eigen::Infinity>();
  if (dn == 0.0) return Value(0.0 * f(x));
  double h = base_step(1) *
             std::max(1.0, x.template lpNorm<Eigen::Infinity>()) / dn;
  auto along = [&](double t) { return f(Vec(x + t * d)); };
  auto sum = [&](double s) {
    return Value((along(s * h) - along(-s * h)) / (2.0 * s * h));
  };
  Value coarse = sum(1.0);
  Value fine = sum(0.5);
  return Value((4.0 * fine - coarse) / 3.0);
}

/// Largest stencil half-width (in coordinate units) any partial of the given
/// order may reach from x along axis a. Used for domain margin checks.
double reach(int order, double coord);

}  // namespace bihyp::fd
