#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bihyp/hypersurface.hpp"
#include "bihyp/model_space.hpp"
#include "bihyp/report.hpp"
#include "bihyp/torse_forming.hpp"
#include "bihyp/types.hpp"

namespace bihyp {

/// Tolerance tiers by numerical depth: closed-form/analytic comparisons, one
/// finite-difference layer, and operators that difference derived fields.
struct ToleranceTiers {
  double closed_form = 1e-7;
  double fd1 = 1e-5;
  double fd2 = 1e-4;
};

struct RunConfig {
  double u = 1.0;
  double v = 1.0;
  int m = 2;
  Interval t_interval = Interval::all();
  bool flat_limit = false;

  int grid = 10;
  double domain_lo = -1.0;
  double domain_hi = 1.0;
  std::uint64_t seed = 42;

  /// Single override applied to all three tiers when set.
  std::optional<double> tol_override;

  /// Test hook: perturb the analytic metric jets to make curvature
  /// identities fail.
  bool corrupt_jets = false;

  int immersions = 25;
  int points_per_immersion = 4;

  double c_lo = 0.05;
  double c_hi = 2.0;
  int c_samples = 64;

  std::string family;
  std::vector<double> family_params;

  std::string out;  // report path stem; .json/.csv are appended

  ToleranceTiers tiers() const;
  ModelParams model() const;
  Box domain_box() const { return Box::cube(m, domain_lo, domain_hi); }
  nlohmann::json to_json() const;
};

ResidualReport run_check_metric(const RunConfig& cfg);
ResidualReport run_scan_hyperplane(const RunConfig& cfg);
ResidualReport run_verify_lemmas(const RunConfig& cfg);

/// Deterministic uniform double in [lo, hi) from the top 53 generator bits.
double uniform(std::mt19937_64& rng, double lo, double hi);
Vec uniform_vec(std::mt19937_64& rng, int n, double lo, double hi);
/// Random direction of unit length in the inner product with Gram matrix g.
Vec random_unit(std::mt19937_64& rng, const Mat& g);

/// Seeded graph families: kind 0 quadratic, 1 plane waves, 2 quadratic plus
/// cubic terms. All have closed-form jets.
std::shared_ptr<const HeightFunction> random_height(std::mt19937_64& rng,
                                                    int m, int kind);

/// Named families for the command line; throws ConfigError on bad params.
std::shared_ptr<const HeightFunction> named_height(const std::string& family,
                                                   const std::vector<double>& params,
                                                   int m);

std::shared_ptr<const MetricField> make_ambient(const RunConfig& cfg);

GraphImmersion hyperplane_immersion(std::shared_ptr<const MetricField> ambient,
                                    const Box& box, double c,
                                    bool flip = false);

int cli_main(int argc, const char* const* argv);

}  // namespace bihyp
