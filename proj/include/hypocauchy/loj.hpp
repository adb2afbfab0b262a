#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hypocauchy/charset.hpp"
#include "hypocauchy/structures.hpp"

namespace hypocauchy {

/// max over sampled pairs in `box` of (s-a)^2 + constant*(t-b)^(2k) - |Z(s,t) - Z(a,b)|^2
/// for Z = s + i t^k. Any k >= 1 is accepted so that failures can be searched for.
double check_inequality_arc(int k, std::size_t n_samples, std::uint64_t seed,
                            const Region& box = Region::rectangle(-1, 1, -1, 1), double constant = 1.0);

struct LadderRow {
  int j = 0;
  double t = 0.0;
  double dz = 0.0;           // |Z(p + t e_y) - Z(p)|
  double local_slope = 0.0;  // against the previous row; NaN on the first
};

struct LojEstimate {
  double mu_hat = 0.0;        // axis-ladder slope
  double c_hat = 0.0;         // smallest F / |t-b|^(2 mu_hat) over the sampled pairs
  double mu_pair = 0.0;       // lower-envelope slope of the pair estimator
  std::size_t n_samples = 0;
  double max_violation = 0.0; // scaled inequality with M = min(1/2, c_hat); <= 0 expected
  double fit_residual = 0.0;  // RMS residual of the ladder fit
  double intercept = 0.0;     // ladder intercept: |dZ| ~ exp(intercept) t^mu_hat
  std::vector<LadderRow> ladder;
};

/// Empirical exponent of |Z(X) - Z(A)|^2 >~ (s-a)^2 + |t-b|^(2 mu) around p within radius rho.
LojEstimate estimate_mu(const FirstIntegral& z, Point p, double rho, std::size_t n_samples,
                        std::uint64_t seed);

struct LojRegionNumber {
  double mu = 0.0;
  std::vector<std::pair<std::string, double>> per_chart;
  std::string argmax;
};

LojRegionNumber loj_number_region(const std::vector<std::pair<std::string, double>>& charts);

/// One entry per stratum of a decomposition (points and arcs), each with its exact order.
std::vector<std::pair<std::string, double>> strata_exponents(const SigmaDecomposition& d);

}  // namespace hypocauchy
