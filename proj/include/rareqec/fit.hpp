// Copyright 2026 The rareqec Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "rareqec/ansatz.hpp"
#include "rareqec/sampling.hpp"

namespace rareqec {

namespace detail {

// Plain Nelder-Mead simplex minimizer; good enough for the handful of
// smooth, low-dimensional objectives used here.
inline std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> start, double step,
                                       int max_iterations, double* best_value = nullptr) {
  const std::size_t n = start.size();
  std::vector<std::vector<double>> simplex(n + 1, start);
  std::vector<double> value(n + 1);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
  for (std::size_t i = 0; i <= n; ++i) value[i] = f(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  for (int iter = 0; iter < max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
    const std::size_t best = order[0], worst = order[n], second = order[n - 1];
    if (std::abs(value[worst] - value[best]) <=
        1e-12 * (1.0 + std::abs(value[best])))
      break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[i][d] / static_cast<double>(n);

    const auto blend = [&](double t) {
      std::vector<double> x(n);
      for (std::size_t d = 0; d < n; ++d)
        x[d] = centroid[d] + t * (simplex[worst][d] - centroid[d]);
      return x;
    };
    auto reflected = blend(-1.0);
    const double fr = f(reflected);
    if (fr < value[order[0]]) {
      auto expanded = blend(-2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        simplex[worst] = std::move(expanded);
        value[worst] = fe;
      } else {
        simplex[worst] = std::move(reflected);
        value[worst] = fr;
      }
    } else if (fr < value[second]) {
      simplex[worst] = std::move(reflected);
      value[worst] = fr;
    } else {
      const bool outside = fr < value[worst];
      auto contracted = blend(outside ? -0.5 : 0.5);
      const double fc = f(contracted);
      if (fc < std::min(fr, value[worst])) {
        simplex[worst] = std::move(contracted);
        value[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t d = 0; d < n; ++d)
            simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
          value[i] = f(simplex[i]);
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (value[i] < value[best]) best = i;
  if (best_value) *best_value = value[best];
  return simplex[best];
}

}  // namespace detail

enum class AnsatzFamily {
  power_law = 2,     // onset weight and fraction only
  single_slope = 3,  // adds a free log-log slope
  crossover = 5,     // two slopes joined at a crossover weight
  general = 6,       // crossover sharpness free as well
};

struct RatePoint {
  double q = 0;          // per-mechanism rate
  double rate = 0;       // observed failure rate
  double std_error = 0;
};

struct WeightPoint {
  std::int64_t weight = 0;
  double fraction = 0;   // observed failing fraction at this weight
  double std_error = 0;
};

// Fit-ready points from sampled spectrum counts; zero-failure points keep a
// one-count uncertainty floor so they still constrain the fit.
inline std::vector<WeightPoint> to_weight_points(const std::vector<SpectrumPoint>& pts) {
  std::vector<WeightPoint> out;
  out.reserve(pts.size());
  for (const auto& pt : pts) {
    double sigma = pt.std_error();
    if (pt.trials > 0) sigma = std::max(sigma, 1.0 / static_cast<double>(pt.trials));
    out.push_back({pt.weight, pt.fraction(), sigma});
  }
  return out;
}

struct SpectrumFitOptions {
  AnsatzFamily family = AnsatzFamily::crossover;
  std::int64_t onset_weight = 1;
  bool fit_onset_fraction = true;
  double onset_fraction = 0;  // used as a fixed value when not fitting it
  int restarts = 16;
  int max_iterations = 600;
  std::uint64_t seed = 1;
};

struct SpectrumFit {
  FailureSpectrumAnsatz ansatz;
  double chi_square = std::numeric_limits<double>::infinity();
  std::size_t num_points = 0;
};

namespace detail {

struct AnsatzPacking {
  AnsatzFamily family;
  bool fit_f0;
  double fixed_f0;
  double asymptote;
  std::int64_t w0;

  std::size_t dim() const {
    std::size_t d = fit_f0 ? 1 : 0;
    switch (family) {
      case AnsatzFamily::power_law: return d;
      case AnsatzFamily::single_slope: return d + 1;
      case AnsatzFamily::crossover: return d + 3;
      case AnsatzFamily::general: return d + 4;
    }
    return d;
  }

  FailureSpectrumAnsatz unpack(const std::vector<double>& x) const {
    FailureSpectrumAnsatz a;
    a.asymptote = asymptote;
    a.onset_weight = w0;
    std::size_t i = 0;
    a.onset_fraction = fit_f0 ? std::exp(x[i++]) : fixed_f0;
    const double dw0 = static_cast<double>(w0);
    a.gamma1 = a.gamma2 = dw0;
    a.crossover_weight = dw0;
    a.sharpness = 2.0;
    if (family != AnsatzFamily::power_law) a.gamma1 = a.gamma2 = x[i++];
    if (family == AnsatzFamily::crossover || family == AnsatzFamily::general) {
      a.gamma2 = x[i++];
      a.crossover_weight = std::exp(x[i++]);
    }
    if (family == AnsatzFamily::general) a.sharpness = std::exp(x[i++]);
    return a;
  }

  std::vector<double> pack_start(double f0_guess, Rng& rng, bool jitter) const {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto j = [&](double v, double scale) { return jitter ? v + scale * u(rng) : v; };
    std::vector<double> x;
    const double dw0 = static_cast<double>(w0);
    if (fit_f0) x.push_back(j(std::log(f0_guess), 1.5));
    if (family != AnsatzFamily::power_law) x.push_back(j(dw0, 0.5 * dw0));
    if (family == AnsatzFamily::crossover || family == AnsatzFamily::general) {
      x.push_back(j(dw0, 0.5 * dw0));
      x.push_back(j(std::log(4.0 * dw0), 1.0));
    }
    if (family == AnsatzFamily::general) x.push_back(j(std::log(2.0), 0.7));
    return x;
  }
};

}  // namespace detail

// Weighted least squares over failure-spectrum points and, optionally,
// failure-rate points, with multi-start simplex minimization.  The asymptote
// is fixed by the action count; the onset weight is fixed by the caller
// (see fit_with_onset_scan to choose it from data).
inline SpectrumFit fit_failure_spectrum(std::int64_t expanded_size, std::size_t num_actions,
                                        const std::vector<WeightPoint>& spectrum,
                                        const std::vector<RatePoint>& rates,
                                        const SpectrumFitOptions& opts) {
  if (spectrum.empty() && rates.empty()) throw std::invalid_argument("no data to fit");
  if (opts.onset_weight < 1) throw std::invalid_argument("onset weight must be positive");
  for (const auto& pt : spectrum)
    if (pt.std_error <= 0)
      throw std::invalid_argument("spectrum point needs a positive uncertainty");
  for (const auto& pt : rates)
    if (pt.std_error <= 0) throw std::invalid_argument("rate point needs a positive uncertainty");

  detail::AnsatzPacking packing{opts.family, opts.fit_onset_fraction, opts.onset_fraction,
                                FailureSpectrumAnsatz::saturation_for_actions(num_actions),
                                opts.onset_weight};

  const auto objective = [&](const std::vector<double>& x) {
    FailureSpectrumAnsatz a = packing.unpack(x);
    if (!a.valid()) return 1e30;
    double chi = 0;
    for (const auto& pt : spectrum) {
      const double r = (a(pt.weight) - pt.fraction) / pt.std_error;
      chi += r * r;
    }
    for (const auto& pt : rates) {
      const double r = (predicted_failure_rate(a, expanded_size, pt.q) - pt.rate) / pt.std_error;
      chi += r * r;
    }
    return std::isfinite(chi) ? chi : 1e30;
  };

  double f0_guess = opts.onset_fraction;
  if (opts.fit_onset_fraction) {
    const WeightPoint* lowest = nullptr;
    for (const auto& pt : spectrum)
      if (pt.fraction > 0 && (!lowest || pt.weight < lowest->weight)) lowest = &pt;
    f0_guess = lowest ? lowest->fraction : 1e-6;
  }

  SpectrumFit best;
  best.num_points = spectrum.size() + rates.size();
  Rng rng(opts.seed);
  if (packing.dim() == 0) {
    best.ansatz = packing.unpack({});
    best.chi_square = objective({});
    return best;
  }
  for (int r = 0; r < std::max(1, opts.restarts); ++r) {
    auto start = packing.pack_start(f0_guess, rng, r > 0);
    double value = 0;
    auto x = detail::nelder_mead(objective, std::move(start), 0.3, opts.max_iterations, &value);
    if (value < best.chi_square) {
      best.chi_square = value;
      best.ansatz = packing.unpack(x);
    }
  }
  return best;
}

// Repeats the fit over a range of onset weights and keeps the best fit;
// useful when the onset is not known from min-weight analysis.
inline SpectrumFit fit_with_onset_scan(std::int64_t expanded_size, std::size_t num_actions,
                                       const std::vector<WeightPoint>& spectrum,
                                       const std::vector<RatePoint>& rates,
                                       SpectrumFitOptions opts, std::int64_t w0_min,
                                       std::int64_t w0_max) {
  SpectrumFit best;
  for (std::int64_t w0 = w0_min; w0 <= w0_max; ++w0) {
    opts.onset_weight = w0;
    auto fit = fit_failure_spectrum(expanded_size, num_actions, spectrum, rates, opts);
    if (fit.chi_square < best.chi_square) best = fit;
  }
  return best;
}

}  // namespace rareqec
