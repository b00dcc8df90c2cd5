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

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "rareqec/binomial.hpp"

namespace rareqec {

namespace detail {

inline double softplus(double x) { return x > 36.0 ? x : std::log1p(std::exp(x)); }

}  // namespace detail

// Saturating failure-spectrum curve: zero below the onset weight, then a
// power law in w that can bend once from slope gamma1 to slope gamma2 around
// the crossover weight, saturating at the asymptote for large w.  Collapsing
// the parameters recovers the simpler family members: gamma1 == gamma2
// removes the bend, and gamma == onset_weight gives the two-parameter curve.
struct FailureSpectrumAnsatz {
  double asymptote = 1.0;      // large-w limit, 1 - 2^-k for k action bits
  std::int64_t onset_weight = 1;
  double onset_fraction = 0.0;  // failing fraction scale at the onset
  double gamma1 = 1.0;          // log-log slope just above the onset
  double gamma2 = 1.0;          // log-log slope far above the crossover
  double crossover_weight = 1.0;
  double sharpness = 2.0;       // how abruptly the slope changes

  static double saturation_for_actions(std::size_t num_actions) {
    return 1.0 - std::exp2(-static_cast<double>(num_actions));
  }

  static FailureSpectrumAnsatz power_law(double asymptote, std::int64_t w0, double f0) {
    return single_slope(asymptote, w0, f0, static_cast<double>(w0));
  }

  static FailureSpectrumAnsatz single_slope(double asymptote, std::int64_t w0, double f0,
                                            double gamma) {
    return {asymptote, w0, f0, gamma, gamma, static_cast<double>(w0), 2.0};
  }

  static FailureSpectrumAnsatz crossover(double asymptote, std::int64_t w0, double f0,
                                         double gamma1, double gamma2, double wc) {
    return {asymptote, w0, f0, gamma1, gamma2, wc, 2.0};
  }

  // log of the growth factor multiplying onset_fraction at weight w.
  double log_growth(double w) const {
    const double w0 = static_cast<double>(onset_weight);
    double lg = gamma1 * std::log(w / w0);
    if (gamma2 != gamma1) {
      const double bend = detail::softplus(sharpness * std::log(w / crossover_weight)) -
                          detail::softplus(sharpness * std::log(w0 / crossover_weight));
      lg += (gamma2 - gamma1) / sharpness * bend;
    }
    return lg;
  }

  double operator()(double w) const {
    if (w < static_cast<double>(onset_weight)) return 0.0;
    const double arg = onset_fraction * std::exp(log_growth(w));
    return asymptote * -std::expm1(-arg / asymptote);
  }

  bool valid() const {
    return asymptote > 0 && asymptote <= 1 && onset_weight >= 1 && onset_fraction > 0 &&
           onset_fraction < 1 && crossover_weight > 0 && sharpness > 0 &&
           std::isfinite(gamma1) && std::isfinite(gamma2);
  }
};

// Failure rate at per-mechanism rate q implied by a failure spectrum.
inline double predicted_failure_rate(const FailureSpectrumAnsatz& ansatz,
                                     std::int64_t expanded_size, double q) {
  if (!ansatz.valid()) throw std::invalid_argument("invalid ansatz");
  return binomial_transform(
      expanded_size, q, [&](std::int64_t w) { return ansatz(static_cast<double>(w)); },
      ansatz.onset_weight);
}

}  // namespace rareqec
