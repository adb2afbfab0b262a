#include "hypocauchy/loj.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "hypocauchy/error.hpp"
#include "hypocauchy/rng.hpp"

namespace hypocauchy {

namespace {

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

std::size_t chunk_count(std::size_t n) { return (n + kSampleChunk - 1) / kSampleChunk; }

struct Fit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (n < 2 || !(sxx > 0)) throw Error(ErrorCode::FitFailed, "degenerate regression data");
  Fit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / static_cast<double>(n));
  return f;
}

}  // namespace

double check_inequality_arc(int k, std::size_t n_samples, std::uint64_t seed, const Region& box,
                            double constant) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be positive");
  if (n_samples == 0) throw Error(ErrorCode::InvalidArgument, "n_samples must be positive");
  const std::size_t chunks = chunk_count(n_samples);
  double worst = -std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (std::size_t c = 0; c < chunks; ++c) {
    auto rng = make_stream(seed, c);
    std::uniform_real_distribution<double> ux(box.x_lo(), box.x_hi());
    std::uniform_real_distribution<double> uy(box.y_lo(), box.y_hi());
    const std::size_t end = std::min(n_samples, (c + 1) * kSampleChunk);
    for (std::size_t i = c * kSampleChunk; i < end; ++i) {
      const double s = ux(rng), t = uy(rng), a = ux(rng), b = uy(rng);
      const double ds = s - a;
      const double dq = ipow(t, k) - ipow(b, k);
      const double lhs = ds * ds + constant * ipow(t - b, 2 * k);
      worst = std::max(worst, lhs - (ds * ds + dq * dq));
    }
  }
  return worst;
}

LojEstimate estimate_mu(const FirstIntegral& z, Point p, double rho, std::size_t n_samples,
                        std::uint64_t seed) {
  if (!(rho > 0)) throw Error(ErrorCode::InvalidArgument, "rho must be positive");
  if (n_samples < 100) throw Error(ErrorCode::InvalidArgument, "at least 100 pair samples required");
  if (!z.in_domain(p)) throw Error(ErrorCode::OutOfDomain, "estimate_mu: point outside the domain");
  for (const Point q : {Point{p.x + rho, p.y}, Point{p.x - rho, p.y}, Point{p.x, p.y + rho}, Point{p.x, p.y - rho}}) {
    if (!z.in_domain(q)) throw Error(ErrorCode::OutOfDomain, "estimate_mu: D(p, rho) leaves the domain");
  }
  const DeltaFunction delta = z.delta_at(p);
  LojEstimate out;

  // Axis ladder t = rho 2^-j.
  constexpr int kLadder = 20;
  constexpr double kMinStep = 1e-8;
  constexpr double kMinDiff = 1e-290;
  std::vector<double> lx, ly;
  for (int j = 1; j <= kLadder; ++j) {
    const double t = rho * std::ldexp(1.0, -j);
    if (t < kMinStep) break;
    const double dz = std::abs(delta(0.0, t));
    if (!(dz > kMinDiff)) break;
    LadderRow row{j, t, dz, std::numeric_limits<double>::quiet_NaN()};
    if (!out.ladder.empty()) {
      const auto& prev = out.ladder.back();
      row.local_slope = std::log(dz / prev.dz) / std::log(t / prev.t);
    }
    out.ladder.push_back(row);
    lx.push_back(std::log(t));
    ly.push_back(std::log(dz));
  }
  if (lx.size() < 3) throw Error(ErrorCode::FitFailed, "ladder too short for a slope");
  const Fit axis = least_squares(lx, ly);
  out.mu_hat = axis.slope;
  out.intercept = axis.intercept;
  out.fit_residual = axis.rms;

  // Pair samples with log-uniform offsets so that near-degenerate pairs are represented.
  struct Sample {
    double ds, dt, dz2, f;
  };
  std::vector<Sample> samples(n_samples);
  const std::size_t chunks = chunk_count(n_samples);
  const double q = 0.25 * rho;
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < chunks; ++c) {
    auto rng = make_stream(seed, c);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto signed_log = [&](double decades) {
      const double mag = q * std::pow(10.0, -decades * unit(rng));
      return unit(rng) < 0.5 ? -mag : mag;
    };
    const std::size_t end = std::min(n_samples, (c + 1) * kSampleChunk);
    for (std::size_t i = c * kSampleChunk; i < end; ++i) {
      const double a = q * (2.0 * unit(rng) - 1.0);
      const double b = signed_log(6.0);
      const double dt = signed_log(6.0);
      const double ds = signed_log(40.0);
      const Complex d = delta(a + ds, b + dt) - delta(a, b);
      samples[i] = {ds, dt, std::norm(d), 0.5 * d.real() * d.real() + d.imag() * d.imag()};
    }
  }
  out.n_samples = n_samples;

  // Lower envelope: lowest decile of log F in bins of 2 log|t-b|.
  constexpr int kBins = 12;
  std::vector<double> gx(n_samples), gy(n_samples);
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  for (std::size_t i = 0; i < n_samples; ++i) {
    gx[i] = 2.0 * std::log(std::abs(samples[i].dt));
    gy[i] = std::log(std::max(samples[i].f, std::numeric_limits<double>::min()));
    xmin = std::min(xmin, gx[i]);
    xmax = std::max(xmax, gx[i]);
  }
  if (!(xmax > xmin)) throw Error(ErrorCode::FitFailed, "all pair samples identical");
  std::vector<std::vector<std::pair<double, double>>> bins(kBins);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const int b = std::min(kBins - 1, static_cast<int>((gx[i] - xmin) / (xmax - xmin) * kBins));
    bins[b].emplace_back(gy[i], gx[i]);
  }
  std::vector<double> ex, ey;
  for (auto& bin : bins) {
    if (bin.size() < 20) continue;
    const std::size_t k = bin.size() / 10;
    std::nth_element(bin.begin(), bin.begin() + static_cast<std::ptrdiff_t>(k), bin.end());
    ey.push_back(bin[k].first);
    double mean_x = 0;
    for (const auto& e : bin) mean_x += e.second;
    ex.push_back(mean_x / static_cast<double>(bin.size()));
  }
  out.mu_pair = least_squares(ex, ey).slope;

  // Empirical constant of F >= C |t-b|^(2 mu) and the scaled inequality with M = min(1/2, C).
  double c_min = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    const double g = std::pow(std::abs(s.dt), 2.0 * out.mu_hat);
    if (g > 0) c_min = std::min(c_min, s.f / g);
  }
  out.c_hat = c_min;
  const double m = std::min(0.5, c_min);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    // The real-part difference stands in for (s - a) so that a rescaled Z is handled alike.
    const double re2 = 2.0 * (s.dz2 - s.f);
    const double lhs = m * (re2 + std::pow(std::abs(s.dt), 2.0 * out.mu_hat));
    worst = std::max(worst, lhs - s.dz2);
  }
  out.max_violation = worst;
  return out;
}

LojRegionNumber loj_number_region(const std::vector<std::pair<std::string, double>>& charts) {
  if (charts.empty()) throw Error(ErrorCode::InvalidArgument, "no charts given");
  LojRegionNumber out;
  out.per_chart = charts;
  out.mu = -std::numeric_limits<double>::infinity();
  for (const auto& [id, mu] : charts) {
    if (!(mu > 0)) throw Error(ErrorCode::InvalidArgument, "chart exponent must be positive");
    if (mu > out.mu) {
      out.mu = mu;
      out.argmax = id;
    }
  }
  return out;
}

std::vector<std::pair<std::string, double>> strata_exponents(const SigmaDecomposition& d) {
  std::vector<std::pair<std::string, double>> out;
  auto label = [](const char* kind, const StratumPoint& p) {
    std::ostringstream os;
    os << kind << " (" << p.exact_point.x.get_str() << "," << p.exact_point.y.get_str() << ")";
    return os.str();
  };
  for (const auto& p : d.isolated_points) out.emplace_back(label("isolated", p), p.order);
  for (const auto& p : d.singular_points) out.emplace_back(label("singular", p), p.order);
  for (const auto& c : d.regular_components) out.emplace_back("arc " + c.description, c.order);
  return out;
}

}  // namespace hypocauchy
