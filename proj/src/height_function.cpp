#include "bihyp/height_function.hpp"

#include <cmath>

#include "bihyp/fd.hpp"

namespace bihyp {

HeightFunction::HeightFunction(int dim, bool analytic)
    : dim_(dim), analytic_(analytic) {
  if (dim < 1) throw ConfigError("height dimension must be positive");
}

namespace {

std::vector<int> counts_of(int dim, const int* axes, int order) {
  std::vector<int> counts(dim, 0);
  for (int q = 0; q < order; ++q) counts[axes[q]] += 1;
  return counts;
}

}  // namespace

double HeightFunction::d1(const Vec& x, int i) const {
  auto f = [this](const Vec& y) { return value(y); };
  return fd::partial(f, x, i);
}

double HeightFunction::d2(const Vec& x, int i, int j) const {
  auto f = [this](const Vec& y) { return value(y); };
  return fd::partial2(f, x, i, j);
}

double HeightFunction::d3(const Vec& x, int i, int j, int k) const {
  auto f = [this](const Vec& y) { return value(y); };
  return fd::partial3(f, x, i, j, k);
}

double HeightFunction::d4(const Vec& x, int i, int j, int k, int l) const {
  auto f = [this](const Vec& y) { return value(y); };
  int axes[4] = {i, j, k, l};
  return fd::partial_multi(f, x, counts_of(dim(), axes, 4));
}

Vec HeightFunction::gradient(const Vec& x) const {
  Vec g(dim());
  for (int i = 0; i < dim(); ++i) g[i] = d1(x, i);
  return g;
}

Mat HeightFunction::hessian(const Vec& x) const {
  Mat h(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    for (int j = i; j < dim(); ++j) {
      h(i, j) = d2(x, i, j);
      h(j, i) = h(i, j);
    }
  return h;
}

PolynomialHeight::PolynomialHeight(int dim, std::vector<Term> terms)
    : HeightFunction(dim, true), terms_(std::move(terms)) {
  for (const Term& t : terms_)
    if (static_cast<int>(t.powers.size()) != dim)
      throw ConfigError("polynomial term has wrong arity");
}

double PolynomialHeight::partial(const Vec& x,
                                 const std::vector<int>& counts) const {
  double total = 0.0;
  for (const Term& t : terms_) {
    double coef = t.coef;
    double prod = 1.0;
    bool dead = false;
    for (int i = 0; i < dim() && !dead; ++i) {
      int p = t.powers[i];
      int k = counts[i];
      if (k > p) {
        dead = true;
        break;
      }
      for (int q = 0; q < k; ++q) coef *= p - q;
      prod *= std::pow(x[i], p - k);
    }
    if (!dead) total += coef * prod;
  }
  return total;
}

double PolynomialHeight::value(const Vec& x) const {
  return partial(x, std::vector<int>(dim(), 0));
}

double PolynomialHeight::d1(const Vec& x, int i) const {
  int axes[1] = {i};
  return partial(x, counts_of(dim(), axes, 1));
}

double PolynomialHeight::d2(const Vec& x, int i, int j) const {
  int axes[2] = {i, j};
  return partial(x, counts_of(dim(), axes, 2));
}

double PolynomialHeight::d3(const Vec& x, int i, int j, int k) const {
  int axes[3] = {i, j, k};
  return partial(x, counts_of(dim(), axes, 3));
}

double PolynomialHeight::d4(const Vec& x, int i, int j, int k, int l) const {
  int axes[4] = {i, j, k, l};
  return partial(x, counts_of(dim(), axes, 4));
}

PolynomialHeight PolynomialHeight::constant(int dim, double c) {
  return PolynomialHeight(dim, {Term{c, std::vector<int>(dim, 0)}});
}

PolynomialHeight PolynomialHeight::affine(const Vec& slope, double c) {
  const int dim = static_cast<int>(slope.size());
  std::vector<Term> terms;
  terms.push_back(Term{c, std::vector<int>(dim, 0)});
  for (int i = 0; i < dim; ++i) {
    std::vector<int> powers(dim, 0);
    powers[i] = 1;
    terms.push_back(Term{slope[i], powers});
  }
  return PolynomialHeight(dim, std::move(terms));
}

PolynomialHeight PolynomialHeight::quadratic(const Mat& q, const Vec& b,
                                             double c) {
  const int dim = static_cast<int>(b.size());
  if (q.rows() != dim || q.cols() != dim)
    throw ConfigError("quadratic form has wrong shape");
  std::vector<Term> terms;
  terms.push_back(Term{c, std::vector<int>(dim, 0)});
  for (int i = 0; i < dim; ++i) {
    std::vector<int> powers(dim, 0);
    powers[i] = 1;
    terms.push_back(Term{b[i], powers});
  }
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      std::vector<int> powers(dim, 0);
      powers[i] += 1;
      powers[j] += 1;
      double coef = i == j ? 0.5 * q(i, i) : 0.5 * (q(i, j) + q(j, i));
      if (coef != 0.0) terms.push_back(Term{coef, powers});
    }
  return PolynomialHeight(dim, std::move(terms));
}

PlaneWaveHeight::PlaneWaveHeight(int dim, std::vector<Wave> waves)
    : HeightFunction(dim, true), waves_(std::move(waves)) {
  for (const Wave& w : waves_)
    if (static_cast<int>(w.wavevec.size()) != dim)
      throw ConfigError("plane wave has wrong arity");
}

double PlaneWaveHeight::partial(const Vec& x, const int* axes,
                                int order) const {
  double total = 0.0;
  for (const Wave& w : waves_) {
    double coef = w.amplitude;
    for (int q = 0; q < order; ++q) coef *= w.wavevec[axes[q]];
    double arg = w.wavevec.dot(x) + w.phase;
    // d^r sin cycles through sin, cos, -sin, -cos.
    double osc = 0.0;
    switch (order % 4) {
      case 0: osc = std::sin(arg); break;
      case 1: osc = std::cos(arg); break;
      case 2: osc = -std::sin(arg); break;
      case 3: osc = -std::cos(arg); break;
    }
    total += coef * osc;
  }
  return total;
}

double PlaneWaveHeight::value(const Vec& x) const {
  return partial(x, nullptr, 0);
}

double PlaneWaveHeight::d1(const Vec& x, int i) const {
  int axes[1] = {i};
  return partial(x, axes, 1);
}

double PlaneWaveHeight::d2(const Vec& x, int i, int j) const {
  int axes[2] = {i, j};
  return partial(x, axes, 2);
}

double PlaneWaveHeight::d3(const Vec& x, int i, int j, int k) const {
  int axes[3] = {i, j, k};
  return partial(x, axes, 3);
}

double PlaneWaveHeight::d4(const Vec& x, int i, int j, int k, int l) const {
  int axes[4] = {i, j, k, l};
  return partial(x, axes, 4);
}

SumHeight::SumHeight(std::shared_ptr<const HeightFunction> a,
                     std::shared_ptr<const HeightFunction> b)
    : HeightFunction(a ? a->dim() : 0,
                     a && b && a->analytic_jets() && b->analytic_jets()),
      a_(std::move(a)),
      b_(std::move(b)) {
  if (!a_ || !b_ || a_->dim() != b_->dim())
    throw ConfigError("sum of heights with mismatched domains");
}

double SumHeight::value(const Vec& x) const {
  return a_->value(x) + b_->value(x);
}

double SumHeight::d1(const Vec& x, int i) const {
  return a_->d1(x, i) + b_->d1(x, i);
}

double SumHeight::d2(const Vec& x, int i, int j) const {
  return a_->d2(x, i, j) + b_->d2(x, i, j);
}

double SumHeight::d3(const Vec& x, int i, int j, int k) const {
  return a_->d3(x, i, j, k) + b_->d3(x, i, j, k);
}

double SumHeight::d4(const Vec& x, int i, int j, int k, int l) const {
  return a_->d4(x, i, j, k, l) + b_->d4(x, i, j, k, l);
}

}  // namespace bihyp
