// Copyright 2026 The zeno-lab authors
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

#include "zeno/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "zeno/kernels.hpp"

namespace zeno {

namespace {

constexpr double kClampWindow = 1e-12;

double norm_squared(const State& s) {
  return quadrature_weight(s) * kernels::sum_abs2(coords(s));
}

}  // namespace

double fs_distance(const State& a, const State& b) {
  const State na = normalize(a);  // ZeroNormError on degenerate input
  const State nb = normalize(b);
  const Complex overlap = inner_product(na, nb);
  const double r = 1.0 - std::norm(overlap);
  if (r < -kClampWindow) {
    throw NumericsError("fs_distance: |overlap| exceeds 1 beyond roundoff");
  }
  if (std::abs(r) <= kClampWindow) return 0.0;
  return 2.0 * std::sqrt(r);
}

double fs_speed(const State& psi, const State& psi_dot) {
  if (!same_shape(psi, psi_dot)) {
    throw DimensionError("fs_speed: psi and psi_dot have different shapes");
  }
  const double n2 = norm_squared(psi);
  const double thr = zero_norm_threshold(psi);
  if (n2 <= thr * thr) throw ZeroNormError("fs_speed: state norm below zero threshold");

  const double d2 = norm_squared(psi_dot) / n2;
  const Complex c = inner_product(psi, psi_dot);
  const double radicand = d2 - std::norm(c) / (n2 * n2);

  const double window = kClampWindow * std::max(1.0, d2);
  if (radicand < -window) {
    throw NumericsError("fs_speed: negative radicand beyond roundoff (broken derivative?)");
  }
  if (std::abs(radicand) <= window) return 0.0;
  return 2.0 * std::sqrt(radicand);
}

GeometryReport path_length(std::span<const TimedState> trajectory, const EvolutionModel& model) {
  if (trajectory.size() < 2) {
    throw std::invalid_argument("path_length: need at least 2 trajectory samples");
  }
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    if (!(trajectory[i].t > trajectory[i - 1].t)) {
      throw std::invalid_argument("path_length: sample times must be strictly increasing");
    }
  }

  GeometryReport report;
  report.times.reserve(trajectory.size());
  report.speeds.reserve(trajectory.size());
  for (const TimedState& ts : trajectory) {
    report.times.push_back(ts.t);
    report.speeds.push_back(fs_speed(ts.state, model.derivative(ts.t, ts.state)));
  }

  double s = 0.0;
  for (std::size_t i = 1; i < report.times.size(); ++i) {
    const double h = report.times[i] - report.times[i - 1];
    s += 0.5 * h * (report.speeds[i] + report.speeds[i - 1]);
  }
  report.total_length = s;
  return report;
}

}  // namespace zeno
