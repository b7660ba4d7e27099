#pragma once

#include <memory>
#include <vector>

#include "bihyp/types.hpp"

namespace bihyp {

/// Graph height F: Omega subset R^m -> R. The base class synthesizes partial
/// derivatives by finite differences of value(); subclasses with closed forms
/// override d1..d4 and report analytic_jets() = true so callers can skip
/// stencil margin checks for the height itself.
class HeightFunction {
 public:
  explicit HeightFunction(int dim, bool analytic = false);
  virtual ~HeightFunction() = default;

  int dim() const noexcept { return dim_; }
  bool analytic_jets() const noexcept { return analytic_; }

  virtual double value(const Vec& x) const = 0;
  virtual double d1(const Vec& x, int i) const;
  virtual double d2(const Vec& x, int i, int j) const;
  virtual double d3(const Vec& x, int i, int j, int k) const;
  virtual double d4(const Vec& x, int i, int j, int k, int l) const;

  Vec gradient(const Vec& x) const;
  Mat hessian(const Vec& x) const;

 private:
  int dim_;
  bool analytic_;
};

/// Sum of monomial terms coef * prod_i x_i^powers[i]. All jets closed form.
class PolynomialHeight final : public HeightFunction {
 public:
  struct Term {
    double coef;
    std::vector<int> powers;
  };

  PolynomialHeight(int dim, std::vector<Term> terms);

  double value(const Vec& x) const override;
  double d1(const Vec& x, int i) const override;
  double d2(const Vec& x, int i, int j) const override;
  double d3(const Vec& x, int i, int j, int k) const override;
  double d4(const Vec& x, int i, int j, int k, int l) const override;

  static PolynomialHeight constant(int dim, double c);
  static PolynomialHeight affine(const Vec& slope, double c);
  /// x^T q x / 2 + b . x + c.
  static PolynomialHeight quadratic(const Mat& q, const Vec& b, double c);

 private:
  double partial(const Vec& x, const std::vector<int>& counts) const;
  std::vector<Term> terms_;
};

/// F(x) = sum_j amplitude_j * sin(wavevec_j . x + phase_j).
class PlaneWaveHeight final : public HeightFunction {
 public:
  struct Wave {
    double amplitude;
    Vec wavevec;
    double phase;
  };

  PlaneWaveHeight(int dim, std::vector<Wave> waves);

  double value(const Vec& x) const override;
  double d1(const Vec& x, int i) const override;
  double d2(const Vec& x, int i, int j) const override;
  double d3(const Vec& x, int i, int j, int k) const override;
  double d4(const Vec& x, int i, int j, int k, int l) const override;

 private:
  double partial(const Vec& x, const int* axes, int order) const;
  std::vector<Wave> waves_;
};

/// Pointwise sum of two heights; analytic only if both parts are.
class SumHeight final : public HeightFunction {
 public:
  SumHeight(std::shared_ptr<const HeightFunction> a,
            std::shared_ptr<const HeightFunction> b);

  double value(const Vec& x) const override;
  double d1(const Vec& x, int i) const override;
  double d2(const Vec& x, int i, int j) const override;
  double d3(const Vec& x, int i, int j, int k) const override;
  double d4(const Vec& x, int i, int j, int k, int l) const override;

 private:
  std::shared_ptr<const HeightFunction> a_, b_;
};

}  // namespace bihyp
