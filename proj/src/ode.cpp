// Copyright 2026 The liact Authors.
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

#include "liact/ode.hpp"

#include <algorithm>
#include <cmath>

#include "liact/errors.hpp"

namespace liact {

const char* to_string(OdeStatus s) {
  switch (s) {
    case OdeStatus::completed: return "completed";
    case OdeStatus::escaped: return "escaped";
    case OdeStatus::blow_up: return "blow_up";
    case OdeStatus::step_underflow: return "step_underflow";
    case OdeStatus::max_steps: return "max_steps";
  }
  return "?";
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI step-size controller.
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - 0.75 * kBeta;
constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 10.0;

class Stepper {
 public:
  Stepper(const OdeProblem& p, const OdeOptions& o, std::size_t n)
      : p_(p), o_(o), k2_(n), k3_(n), k4_(n), k5_(n), k6_(n), k7_(n), tmp_(n) {
    if (p.control.empty()) {
      for (std::size_t i = 0; i < n; ++i) control_.push_back(i);
    } else {
      control_ = p.control;
    }
  }

  const std::vector<std::size_t>& control() const { return control_; }

  double norm(const State& v, const State& y) const {
    if (control_.empty()) return 0.0;
    double s = 0.0;
    for (std::size_t i : control_) {
      const double sk = o_.atol + o_.rtol * std::abs(y[i]);
      s += (v[i] / sk) * (v[i] / sk);
    }
    return std::sqrt(s / static_cast<double>(control_.size()));
  }

  bool finite(const State& v) const {
    return std::all_of(control_.begin(), control_.end(),
                       [&](std::size_t i) { return std::isfinite(v[i]); });
  }

  // One trial step; returns false when the right-hand side is undefined.
  // On success ynew holds the 5th-order solution, k7 its derivative, and err
  // the scaled error norm.
  bool step(double t, double h, const State& y, const State& k1, State& ynew, double& err) {
    const std::size_t n = y.size();
    try {
      for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a21 * k1[i]);
      p_.rhs(t + c2 * h, tmp_, k2_);
      for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a31 * k1[i] + a32 * k2_[i]);
      p_.rhs(t + c3 * h, tmp_, k3_);
      for (std::size_t i = 0; i < n; ++i) {
        tmp_[i] = y[i] + h * (a41 * k1[i] + a42 * k2_[i] + a43 * k3_[i]);
      }
      p_.rhs(t + c4 * h, tmp_, k4_);
      for (std::size_t i = 0; i < n; ++i) {
        tmp_[i] = y[i] + h * (a51 * k1[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
      }
      p_.rhs(t + c5 * h, tmp_, k5_);
      for (std::size_t i = 0; i < n; ++i) {
        tmp_[i] = y[i] + h * (a61 * k1[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] +
                              a65 * k5_[i]);
      }
      p_.rhs(t + h, tmp_, k6_);
      for (std::size_t i = 0; i < n; ++i) {
        ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] +
                              a76 * k6_[i]);
      }
      p_.rhs(t + h, ynew, k7_);
    } catch (const DomainError&) {
      return false;
    }
    if (!finite(ynew) || !finite(k7_)) return false;
    for (std::size_t i = 0; i < n; ++i) {
      tmp_[i] = h * (e1 * k1[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] +
                     e7 * k7_[i]);
    }
    double s = 0.0;
    for (std::size_t i : control_) {
      const double sk = o_.atol + o_.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      s += (tmp_[i] / sk) * (tmp_[i] / sk);
    }
    err = control_.empty() ? 0.0 : std::sqrt(s / static_cast<double>(control_.size()));
    return std::isfinite(err);
  }

  const State& k7() const { return k7_; }

 private:
  const OdeProblem& p_;
  const OdeOptions& o_;
  std::vector<std::size_t> control_;
  State k2_, k3_, k4_, k5_, k6_, k7_, tmp_;
};

}  // namespace

OdeResult integrate(const OdeProblem& problem, double t0, double t1, State y0,
                    const OdeOptions& options,
                    const std::function<void(const OdeStep&)>& on_step) {
  const std::size_t n = y0.size();
  OdeResult r;
  r.t = t0;
  r.winding.assign(problem.periodic.size(), 0);
  const double span = std::abs(t1 - t0);
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  const auto margin = [&](const State& y) {
    return problem.margin ? problem.margin(y) : std::numeric_limits<double>::infinity();
  };
  if (margin(y0) <= 0.0) throw DomainError("initial point outside the domain");
  auto wrap = [&](State& y) {
    for (std::size_t k = 0; k < problem.periodic.size(); ++k) {
      const std::size_t i = problem.periodic[k];
      const double f = std::floor(y[i]);
      if (f != 0.0) {
        y[i] -= f;
        r.winding[k] += static_cast<long>(f);
      }
    }
  };
  wrap(y0);
  r.y = y0;
  if (span == 0.0 || n == 0) {
    r.t = t1;
    return r;
  }

  Stepper stepper(problem, options, n);
  State k1(n);
  problem.rhs(t0, y0, k1);
  State y = std::move(y0);
  State ynew(n);

  // Initial step from the scaled sizes of y and y'.
  double h;
  {
    const double d0 = stepper.norm(y, y);
    const double d1 = stepper.norm(k1, y);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min({h, span, options.max_step});
  }

  const double min_step = options.min_step_ratio * std::max(span, std::abs(t0));
  double facold = 1e-4;
  bool last_rejected = false;
  bool domain_rejected = false;
  double t = t0;

  if (on_step) on_step(OdeStep{t, y, k1, r.winding});
  while (true) {
    if (r.accepted >= options.max_steps) {
      r.status = OdeStatus::max_steps;
      r.message = "step budget exhausted";
      break;
    }
    if (h < min_step) {
      r.status = domain_rejected ? OdeStatus::escaped : OdeStatus::step_underflow;
      r.message = domain_rejected ? "reached the chart boundary" : "step size underflow";
      break;
    }
    bool last = false;
    if (h >= std::abs(t1 - t)) {
      h = std::abs(t1 - t);
      last = true;
    }
    double err = 0.0;
    if (!stepper.step(t, dir * h, y, k1, ynew, err)) {
      ++r.rejected;
      h *= 0.5;
      last_rejected = true;
      continue;
    }
    const double fac11 = std::pow(err, kExpo);
    if (err <= 1.0) {
      const double m = margin(ynew);
      if (m <= 0.0) {
        ++r.rejected;
        h *= 0.5;
        last_rejected = true;
        domain_rejected = true;
        continue;
      }
      domain_rejected = false;
      t = last ? t1 : t + dir * h;
      y.swap(ynew);
      k1 = stepper.k7();
      wrap(y);
      ++r.accepted;
      if (on_step) on_step(OdeStep{t, y, k1, r.winding});
      const bool blown = std::any_of(stepper.control().begin(), stepper.control().end(),
                                     [&](std::size_t i) { return std::abs(y[i]) > options.blow_up; });
      if (blown) {
        r.status = OdeStatus::blow_up;
        r.message = "solution left every bounded set";
        break;
      }
      if (m <= options.boundary_tol) {
        r.status = OdeStatus::escaped;
        r.message = "reached the chart boundary";
        break;
      }
      if (last) {
        r.status = OdeStatus::completed;
        break;
      }
      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::clamp(fac / kSafety, 1.0 / kFacMax, 1.0 / kFacMin);
      double hnew = h / fac;
      if (last_rejected) hnew = std::min(hnew, h);
      facold = std::max(err, 1e-4);
      last_rejected = false;
      h = std::min(hnew, options.max_step);
    } else {
      ++r.rejected;
      h /= std::min(1.0 / kFacMin, fac11 / kSafety);
      last_rejected = true;
    }
  }
  r.t = t;
  r.y = std::move(y);
  return r;
}

State hermite(double t0, const State& y0, const State& f0, double t1, const State& y1,
              const State& f1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  State out(y0.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
  }
  return out;
}

}  // namespace liact
