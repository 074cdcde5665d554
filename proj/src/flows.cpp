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

#include "liact/flows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace liact {

const char* to_string(FlowMode m) {
  switch (m) {
    case FlowMode::real: return "real";
    case FlowMode::super_rk: return "super_rk";
    case FlowMode::exact: return "exact";
  }
  return "?";
}

namespace {

// Polynomial in t with supernumber coefficients; trailing zeros trimmed.
class TPoly {
 public:
  TPoly() = default;
  TPoly(int n, double c) : n_(n), c_{Supernumber(n, c)} { trim(); }
  explicit TPoly(Supernumber s) : n_(s.num_generators()), c_{std::move(s)} { trim(); }
  TPoly(Supernumber a, Supernumber b) : n_(a.num_generators()), c_{std::move(a), std::move(b)} {
    trim();
  }

  const std::vector<Supernumber>& coeffs() const { return c_; }
  double body() const { return c_.empty() ? 0.0 : c_[0].body(); }
  bool is_zero() const { return c_.empty(); }

  TPoly& operator+=(const TPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Supernumber(n_));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  TPoly& operator+=(double s) {
    if (c_.empty()) c_.emplace_back(n_);
    c_[0] += s;
    trim();
    return *this;
  }
  friend TPoly operator+(TPoly a, const TPoly& b) { return a += b; }
  friend TPoly operator-(TPoly a, double s) { return a += -s; }
  friend TPoly operator*(TPoly a, double s) {
    for (auto& c : a.c_) c *= s;
    a.trim();
    return a;
  }
  friend TPoly operator*(const TPoly& a, const TPoly& b) {
    TPoly r;
    r.n_ = a.n_;
    if (a.c_.empty() || b.c_.empty()) return r;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, Supernumber(a.n_));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    r.trim();
    return r;
  }
  friend bool operator==(const TPoly& a, const TPoly& b) { return a.c_ == b.c_; }

  TPoly integral() const {
    TPoly r;
    r.n_ = n_;
    if (c_.empty()) return r;
    r.c_.assign(c_.size() + 1, Supernumber(n_));
    for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k + 1] = c_[k] * (1.0 / static_cast<double>(k + 1));
    r.trim();
    return r;
  }

  Supernumber at(double t) const {
    Supernumber r(n_);
    for (std::size_t k = c_.size(); k-- > 0;) r = r * t + c_[k];
    return r;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  int n_ = 0;
  std::vector<Supernumber> c_;
};

double body_of(const TPoly& p) { return p.body(); }
bool nilpotent_is_zero(const TPoly& p) { return p.is_zero(); }

int mode_rank(FlowMode m) {
  switch (m) {
    case FlowMode::real: return 0;
    case FlowMode::exact: return 1;
    case FlowMode::super_rk: return 2;
  }
  return 0;
}

bool soulless(const Point& m) {
  return std::all_of(m.begin(), m.end(), [](const Supernumber& s) { return s.soul().is_zero(); });
}

bool zero_body(const AlgebraElement& x) {
  return std::all_of(x.coords.begin(), x.coords.end(),
                     [](const Supernumber& s) { return s.body() == 0.0; });
}

void check_inputs(const Representation& rep, const AlgebraElement& a, const AlgebraElement& b,
                  const Point& m0, int sign) {
  if (sign != 1 && sign != -1) throw Error("fundamental sign must be +1 or -1");
  const int N = rep.num_generators();
  if (a.dim() != rep.dim() || b.dim() != rep.dim()) {
    throw DimensionError("algebra element has the wrong dimension");
  }
  if (static_cast<int>(m0.size()) != rep.chart().size()) {
    throw DimensionError("point has the wrong dimension");
  }
  for (const auto* v : {&a.coords, &b.coords, &m0}) {
    for (const auto& s : *v) {
      if (s.num_generators() != N) throw DimensionError("generator count mismatch");
    }
  }
  if (!is_even_element(rep.algebra(), a) || !is_even_element(rep.algebra(), b)) {
    throw ParityError("flows need an even direction");
  }
  for (int c = 0; c < rep.chart().size(); ++c) {
    const Parity want = c < rep.chart().n0() ? Parity::even : Parity::odd;
    if (!m0[c].has_parity(want)) {
      throw ParityError("coordinate " + rep.chart().name(c) + " must be " + to_string(want));
    }
  }
  if (!rep.chart().contains(body_of(m0))) throw DomainError("start point outside the chart");
}

std::vector<std::size_t> periodic_indices(const Chart& chart, std::size_t stride) {
  std::vector<std::size_t> out;
  for (int c = 0; c < chart.n0(); ++c) {
    if (chart.periodic(c)) out.push_back(static_cast<std::size_t>(c) * stride);
  }
  return out;
}

// Maps per-index winding counts back to per-coordinate counts.
std::vector<long> coordinate_winding(const Chart& chart, const std::vector<long>& w) {
  std::vector<long> out(chart.n0(), 0);
  std::size_t k = 0;
  for (int c = 0; c < chart.n0(); ++c) {
    if (chart.periodic(c)) out[c] = w[k++];
  }
  return out;
}

Point add_winding(Point m, const std::vector<long>& winding) {
  for (std::size_t c = 0; c < winding.size(); ++c) {
    if (winding[c] != 0) m[c] += static_cast<double>(winding[c]);
  }
  return m;
}

FlowResult finish(const OdeResult& r, FlowMode mode, const Chart& chart, Point m) {
  FlowResult out;
  out.status = r.status;
  out.mode = mode;
  out.t = r.t;
  out.m = std::move(m);
  out.winding = coordinate_winding(chart, r.winding);
  out.steps = r.accepted;
  out.rejected = r.rejected;
  out.message = r.message;
  return out;
}

FlowResult flow_real(const Representation& rep, const AlgebraElement& a, const AlgebraElement& b,
                     double duration, const Point& m0, int sign, const FlowOptions& options) {
  const Chart& chart = rep.chart();
  const int n0 = chart.n0();
  const int n = chart.size();
  const int N = rep.num_generators();
  const std::vector<double> xa = a.body_values();
  const std::vector<double> xb = b.body_values();
  const double sg = static_cast<double>(sign);

  OdeProblem p;
  std::vector<double> xs(xa.size());
  std::vector<double> full(n, 0.0);
  p.rhs = [&](double s, const State& y, State& dy) {
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = xa[i] + xb[i] * s;
    std::copy(y.begin(), y.end(), full.begin());
    const std::vector<double> v = field_rhs<double>(rep, xs, full, 1.0);
    for (int c = 0; c < n0; ++c) dy[c] = sg * v[c];
  };
  p.margin = [&](const State& y) { return chart.margin(y); };
  p.periodic = periodic_indices(chart, 1);

  std::vector<FlowSample> samples;
  std::function<void(const OdeStep&)> observer;
  if (options.record) {
    observer = [&](const OdeStep& st) {
      std::vector<double> u = st.y;
      for (std::size_t k = 0; k < p.periodic.size(); ++k) {
        u[p.periodic[k]] += static_cast<double>(st.winding[k]);
      }
      samples.push_back({st.t, real_point(u, chart.n1(), N)});
    };
  }
  State y0(n0);
  for (int c = 0; c < n0; ++c) y0[c] = m0[c].body();
  const OdeResult r = integrate(p, 0.0, duration, y0, options.ode, observer);
  FlowResult out = finish(r, FlowMode::real, chart, real_point(r.y, chart.n1(), N));
  out.samples = std::move(samples);
  return out;
}

FlowResult flow_super(const Representation& rep, const AlgebraElement& a, const AlgebraElement& b,
                      double duration, const Point& m0, int sign, const FlowOptions& options) {
  const Chart& chart = rep.chart();
  const int n0 = chart.n0();
  const int n = chart.size();
  const int N = rep.num_generators();
  const std::size_t S = std::size_t{1} << N;
  const double sg = static_cast<double>(sign);

  auto unflatten = [&](const State& y, Point& m) {
    for (int c = 0; c < n; ++c) {
      for (std::size_t s = 0; s < S; ++s) m[c][static_cast<Mask>(s)] = y[c * S + s];
    }
  };

  OdeProblem p;
  Point ms(n, Supernumber(N));
  std::vector<Supernumber> xs(a.coords.size(), Supernumber(N));
  const Supernumber one(N, 1.0);
  p.rhs = [&](double s, const State& y, State& dy) {
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = a.coords[i] + b.coords[i] * s;
    unflatten(y, ms);
    const std::vector<Supernumber> v = field_rhs<Supernumber>(rep, xs, ms, one);
    for (int c = 0; c < n; ++c) {
      for (std::size_t k = 0; k < S; ++k) dy[c * S + k] = sg * v[c][static_cast<Mask>(k)];
    }
  };
  std::vector<double> bodies(n0);
  p.margin = [&](const State& y) {
    for (int c = 0; c < n0; ++c) bodies[c] = y[c * S];
    return chart.margin(bodies);
  };
  for (int c = 0; c < n0; ++c) p.control.push_back(static_cast<std::size_t>(c) * S);
  p.periodic = periodic_indices(chart, S);

  std::vector<FlowSample> samples;
  std::function<void(const OdeStep&)> observer;
  if (options.record) {
    observer = [&](const OdeStep& st) {
      Point m(n, Supernumber(N));
      unflatten(st.y, m);
      for (std::size_t k = 0; k < p.periodic.size(); ++k) {
        m[p.periodic[k] / S] += static_cast<double>(st.winding[k]);
      }
      samples.push_back({st.t, std::move(m)});
    };
  }
  State y0(n * S);
  for (int c = 0; c < n; ++c) {
    for (std::size_t s = 0; s < S; ++s) y0[c * S + s] = m0[c][static_cast<Mask>(s)];
  }
  const OdeResult r = integrate(p, 0.0, duration, y0, options.ode, observer);
  Point end(n, Supernumber(N));
  unflatten(r.y, end);
  FlowResult out = finish(r, FlowMode::super_rk, chart, std::move(end));
  out.samples = std::move(samples);
  return out;
}

FlowResult flow_exact(const Representation& rep, const AlgebraElement& a, const AlgebraElement& b,
                      double duration, const Point& m0, int sign) {
  const Chart& chart = rep.chart();
  const int n = chart.size();
  const int N = rep.num_generators();
  const double sg = static_cast<double>(sign);
  std::vector<TPoly> xs;
  for (int i = 0; i < rep.dim(); ++i) xs.emplace_back(a.coords[i], b.coords[i]);
  std::vector<TPoly> start;
  for (const auto& s : m0) start.emplace_back(s);
  std::vector<TPoly> m = start;
  const TPoly one(N, 1.0);
  // Each iteration fixes one more Grassmann degree.
  bool converged = false;
  for (int iter = 0; iter <= N + 3; ++iter) {
    const std::vector<TPoly> v = field_rhs<TPoly>(rep, xs, m, one);
    std::vector<TPoly> next(n);
    for (int c = 0; c < n; ++c) next[c] = start[c] + v[c].integral() * sg;
    if (next == m) {
      converged = true;
      break;
    }
    m = std::move(next);
  }
  if (!converged) throw Error("Picard iteration did not terminate; direction is not nilpotent");

  FlowResult out;
  out.mode = FlowMode::exact;
  out.t = duration;
  out.winding.assign(chart.n0(), 0);
  out.m.reserve(n);
  for (const auto& p : m) out.m.push_back(p.at(duration));
  // Bodies are constant along the flow; keep them bit-identical.
  for (int c = 0; c < n; ++c) out.m[c][0] = m0[c].body();
  return out;
}

}  // namespace

Point FlowResult::unwrapped() const { return add_winding(m, winding); }
Point LeafSample::unwrapped() const { return add_winding(end, winding); }

FlowResult flow(const Representation& rep, const AlgebraElement& a, const AlgebraElement& b,
                double duration, const Point& m0, int sign, const FlowOptions& options) {
  check_inputs(rep, a, b, m0, sign);
  if (!std::isfinite(duration)) throw DomainError("flow duration must be finite");
  if (a.is_real() && b.is_real() && soulless(m0)) {
    return flow_real(rep, a, b, duration, m0, sign, options);
  }
  if (zero_body(a) && zero_body(b)) {
    FlowResult r = flow_exact(rep, a, b, duration, m0, sign);
    if (options.record) {
      constexpr int kSamples = 16;
      for (int k = 0; k <= kSamples; ++k) {
        const double s = duration * k / kSamples;
        r.samples.push_back({s, flow_exact(rep, a, b, s, m0, sign).m});
      }
    }
    return r;
  }
  return flow_super(rep, a, b, duration, m0, sign, options);
}

FlowResult flow(const Representation& rep, const AlgebraElement& x, double duration,
                const Point& m0, int sign, const FlowOptions& options) {
  return flow(rep, x, AlgebraElement::zero(x.dim(), x.num_generators()), duration, m0, sign,
              options);
}

LeafSample lift_path(const Representation& rep, const GroupPath& path, const Point& m0, int sign,
                     const FlowOptions& options) {
  if (path.group().dim() != rep.dim()) {
    throw DimensionError("group and representation have different dimensions");
  }
  const Chart& chart = rep.chart();
  LeafSample out;
  out.winding.assign(chart.n0(), 0);
  Point m = m0;
  if (options.record) out.points.push_back({0.0, path.cover_values(0.0), m0});

  auto run = [&](const AlgebraElement& a, const AlgebraElement& b, double t0, double dt) {
    FlowResult r = flow(rep, a, b, dt, m, sign, options);
    out.steps += r.steps;
    if (mode_rank(r.mode) > mode_rank(out.mode)) out.mode = r.mode;
    if (options.record) {
      for (std::size_t k = 1; k < r.samples.size(); ++k) {
        const double t = std::min(t0 + r.samples[k].t, path.duration());
        out.points.push_back({t, path.cover_values(t), add_winding(r.samples[k].m, out.winding)});
      }
    }
    for (int c = 0; c < chart.n0(); ++c) out.winding[c] += r.winding[c];
    m = r.m;
    out.t = t0 + r.t;
    if (!r.completed()) {
      out.status = r.status;
      out.message = r.message;
      return false;
    }
    return true;
  };

  const auto& segs = path.segments();
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const double t0 = path.breaks()[k];
    bool ok = true;
    if (const auto* e = std::get_if<ExpSegment>(&segs[k])) {
      ok = run(e->x, AlgebraElement::zero(e->x.dim(), e->x.num_generators()), t0, e->duration);
    } else {
      const auto& s = std::get<SampledSegment>(segs[k]);
      const auto& xi = path.sampled_xi(k);
      for (std::size_t i = 0; ok && i + 1 < s.t.size(); ++i) {
        const double dt = s.t[i + 1] - s.t[i];
        const AlgebraElement slope = (xi[i + 1] - xi[i]) * (1.0 / dt);
        ok = run(xi[i], slope, t0 + (s.t[i] - s.t.front()), dt);
      }
    }
    if (!ok) break;
  }
  out.end = m;
  return out;
}

double CompletenessReport::first_escape() const {
  double t = std::numeric_limits<double>::infinity();
  for (const auto& e : escapes) t = std::min(t, std::abs(e.time));
  return t;
}

CompletenessReport completeness_probe(const Representation& rep,
                                      const std::vector<std::vector<double>>& directions,
                                      const std::vector<std::vector<double>>& points,
                                      double horizon, int sign, const FlowOptions& options) {
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  CompletenessReport report;
  report.horizon = horizon;
  const int N = rep.num_generators();
  FlowOptions quiet = options;
  quiet.record = false;
  for (const auto& d : directions) {
    const AlgebraElement x = AlgebraElement::real(d, N);
    for (const auto& p : points) {
      const Point m0 = real_point(p, rep.chart().n1(), N);
      for (const double t1 : {horizon, -horizon}) {
        const FlowResult r = flow(rep, x, t1, m0, sign, quiet);
        ++report.trajectories;
        if (r.completed()) continue;
        report.complete = false;
        report.escapes.push_back({d, p, r.t, body_of(r.unwrapped()), r.status});
      }
    }
  }
  return report;
}

HolonomyResult holonomy(const Representation& rep, const GroupPath& loop, const Point& m0,
                        int sign, const FlowOptions& options) {
  if (!loop.is_closed(1e-12)) throw DomainError("holonomy needs a closed loop");
  HolonomyResult h;
  h.leaf = lift_path(rep, loop, m0, sign, options);
  if (!h.leaf.completed()) {
    throw EscapeError("lift of the loop stopped at t = " + std::to_string(h.leaf.t) + ": " +
                          h.leaf.message,
                      h.leaf);
  }
  const Chart& chart = rep.chart();
  h.end = h.leaf.end;
  const Point u = h.leaf.unwrapped();
  h.displacement.assign(chart.n0(), 0.0);
  h.winding.assign(chart.n0(), 0);
  for (int c = 0; c < chart.n0(); ++c) {
    const double total = u[c].body() - m0[c].body();
    if (chart.periodic(c)) {
      h.winding[c] = static_cast<long>(std::floor(total + 1e-9));
      h.displacement[c] = total - static_cast<double>(h.winding[c]);
      if (std::min(std::abs(h.displacement[c]), std::abs(1.0 - h.displacement[c])) > 1e-8) {
        h.trivial = false;
      }
    } else {
      h.displacement[c] = total;
      if (std::abs(total) > 1e-8) h.trivial = false;
    }
  }
  for (int c = 0; c < chart.size(); ++c) {
    h.soul_shift = std::max(h.soul_shift, (u[c].soul() - m0[c].soul()).max_abs());
  }
  if (h.soul_shift > 1e-8) h.trivial = false;
  return h;
}

}  // namespace liact
