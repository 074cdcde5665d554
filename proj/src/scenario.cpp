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

#include "liact/scenario.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

namespace liact {

const char* to_string(TaskKind k) {
  switch (k) {
    case TaskKind::validate: return "validate";
    case TaskKind::act: return "act";
    case TaskKind::orbit: return "orbit";
    case TaskKind::diagnose: return "diagnose";
    case TaskKind::leaf: return "leaf";
    case TaskKind::holonomy: return "holonomy";
    case TaskKind::recover_rho: return "recover_rho";
    case TaskKind::group_law: return "group_law";
    case TaskKind::path_independence: return "path_independence";
    case TaskKind::sign_duality: return "sign_duality";
  }
  return "?";
}

namespace {

constexpr TaskKind kAllKinds[] = {
    TaskKind::validate,    TaskKind::act,       TaskKind::orbit,
    TaskKind::diagnose,    TaskKind::leaf,      TaskKind::holonomy,
    TaskKind::recover_rho, TaskKind::group_law, TaskKind::path_independence,
    TaskKind::sign_duality,
};

std::string child(const std::string& ptr, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') escaped += "~0";
    else if (c == '/') escaped += "~1";
    else escaped += c;
  }
  return ptr + "/" + escaped;
}
std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

const json& need(const json& j, const std::string& key, const std::string& ptr) {
  if (!j.is_object()) throw SchemaError(ptr, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(child(ptr, key), "missing");
  return *it;
}

const json* maybe(const json& j, const std::string& key) {
  const auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

double number(const json& j, const std::string& ptr) {
  if (!j.is_number()) throw SchemaError(ptr, "expected a number");
  return j.get<double>();
}

double number_or(const json& j, const std::string& key, const std::string& ptr, double dflt) {
  const json* v = maybe(j, key);
  return v ? number(*v, child(ptr, key)) : dflt;
}

long integer(const json& j, const std::string& ptr) {
  if (!j.is_number_integer()) throw SchemaError(ptr, "expected an integer");
  return j.get<long>();
}

int count_or(const json& j, const std::string& key, const std::string& ptr, int dflt, int lo) {
  const json* v = maybe(j, key);
  if (!v) return dflt;
  const long n = integer(*v, child(ptr, key));
  if (n < lo || n > 1'000'000) throw SchemaError(child(ptr, key), "out of range");
  return static_cast<int>(n);
}

const json& array(const json& j, const std::string& ptr) {
  if (!j.is_array()) throw SchemaError(ptr, "expected an array");
  return j;
}

std::string string(const json& j, const std::string& ptr) {
  if (!j.is_string()) throw SchemaError(ptr, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& ptr) {
  std::vector<double> out;
  for (std::size_t i = 0; i < array(j, ptr).size(); ++i) out.push_back(number(j[i], child(ptr, i)));
  return out;
}

std::vector<std::string> strings(const json& j, const std::string& ptr) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < array(j, ptr).size(); ++i) out.push_back(string(j[i], child(ptr, i)));
  return out;
}

void only_keys(const json& j, const std::string& ptr, std::initializer_list<const char*> keys) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw SchemaError(child(ptr, it.key()), "unknown field");
  }
}

double bound(const json& j, const std::string& ptr, double infinite) {
  return j.is_null() ? infinite : number(j, ptr);
}

json bound_json(double x) { return std::isinf(x) ? json(nullptr) : json(x); }

// Scenario-level context shared by the element parsers.
struct Ctx {
  int N = 0;
  const StructureConstants* sc = nullptr;
  const Chart* chart = nullptr;
  const Group* group = nullptr;
};

AlgebraElement element(const json& j, const Ctx& c, const std::string& ptr) {
  const int d = c.sc->dim();
  if (!j.is_array() || static_cast<int>(j.size()) != d) {
    throw SchemaError(ptr, "expected an array of " + std::to_string(d) + " coefficients");
  }
  std::vector<Supernumber> coords;
  for (int i = 0; i < d; ++i) coords.push_back(supernumber_from_json(j[i], c.N, child(ptr, i)));
  AlgebraElement x(std::move(coords));
  if (!is_even_element(*c.sc, x)) {
    throw SchemaError(ptr, "algebra element is not even (coefficient parity must match the basis)");
  }
  return x;
}

Point point(const json& j, const Ctx& c, const std::string& ptr) {
  const int n0 = c.chart->n0();
  const int n = c.chart->size();
  if (!j.is_array() || (static_cast<int>(j.size()) != n && static_cast<int>(j.size()) != n0)) {
    throw SchemaError(ptr, "expected an array of " + std::to_string(n) + " coordinates");
  }
  Point m;
  for (int k = 0; k < n; ++k) {
    if (k >= static_cast<int>(j.size())) {
      m.emplace_back(c.N);
      continue;
    }
    Supernumber s = supernumber_from_json(j[k], c.N, child(ptr, k));
    const Parity p = k < n0 ? Parity::even : Parity::odd;
    if (!s.has_parity(p)) throw SchemaError(child(ptr, k), std::string("coordinate must be ") + to_string(p));
    m.push_back(std::move(s));
  }
  if (!c.chart->contains(body_of(m))) throw SchemaError(ptr, "point lies outside the chart");
  return m;
}

GroupElement group_element(const json& j, const Ctx& c, const std::string& ptr) {
  try {
    if (j.is_array()) return c.group->from_values(numbers(j, ptr));
    if (j.is_object() && j.contains("exp")) {
      only_keys(j, ptr, {"exp"});
      return c.group->exp(element(j["exp"], c, child(ptr, "exp")));
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(ptr, e.what());
  }
  throw SchemaError(ptr, "expected a value array or {\"exp\": X}");
}

std::vector<AlgebraElement> word(const json& j, const Ctx& c, const std::string& ptr) {
  std::vector<AlgebraElement> w;
  for (std::size_t i = 0; i < array(j, ptr).size(); ++i) w.push_back(element(j[i], c, child(ptr, i)));
  return w;
}

GroupPath path(const json& j, const Ctx& c, const std::string& ptr) {
  if (!j.is_object()) throw SchemaError(ptr, "expected a path object");
  if (const json* w = maybe(j, "word")) {
    only_keys(j, ptr, {"word"});
    return GroupPath::word(*c.group, word(*w, c, child(ptr, "word")));
  }
  only_keys(j, ptr, {"start", "segments"});
  GroupPath p = j.contains("start")
                    ? GroupPath(*c.group, group_element(j["start"], c, child(ptr, "start")))
                    : GroupPath(*c.group);
  const std::string sptr = child(ptr, "segments");
  const json& segs = array(need(j, "segments", ptr), sptr);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const json& s = segs[i];
    const std::string p_i = child(sptr, i);
    if (!s.is_object()) throw SchemaError(p_i, "expected a segment object");
    try {
      if (s.contains("exp")) {
        only_keys(s, p_i, {"exp", "duration"});
        const double dur = number_or(s, "duration", p_i, 1.0);
        if (!(dur > 0.0)) throw SchemaError(child(p_i, "duration"), "must be positive");
        p.add_exp(element(s["exp"], c, child(p_i, "exp")), dur);
      } else if (s.contains("sampled")) {
        only_keys(s, p_i, {"sampled"});
        const std::string q = child(p_i, "sampled");
        const json& smp = s["sampled"];
        std::vector<double> t = numbers(need(smp, "t", q), child(q, "t"));
        const json& gs = array(need(smp, "g", q), child(q, "g"));
        std::vector<GroupElement> g;
        for (std::size_t k = 0; k < gs.size(); ++k) {
          g.push_back(group_element(gs[k], c, child(child(q, "g"), k)));
        }
        p.add_sampled(std::move(t), std::move(g));
      } else {
        throw SchemaError(p_i, "segment needs \"exp\" or \"sampled\"");
      }
    } catch (const SchemaError&) {
      throw;
    } catch (const Error& e) {
      throw SchemaError(p_i, e.what());
    }
  }
  return p;
}

StructureConstants algebra(const json& j, const std::string& ptr) {
  only_keys(j, ptr, {"dim", "parities", "brackets"});
  const long dim = integer(need(j, "dim", ptr), child(ptr, "dim"));
  if (dim < 1 || dim > 64) throw SchemaError(child(ptr, "dim"), "out of range");
  std::vector<Parity> parities(dim, Parity::even);
  if (const json* p = maybe(j, "parities")) {
    const auto names = strings(*p, child(ptr, "parities"));
    if (static_cast<long>(names.size()) != dim) {
      throw SchemaError(child(ptr, "parities"), "needs one entry per basis element");
    }
    for (long i = 0; i < dim; ++i) {
      if (names[i] == "odd") parities[i] = Parity::odd;
      else if (names[i] != "even") throw SchemaError(child(child(ptr, "parities"), i), "expected \"even\" or \"odd\"");
    }
  }
  StructureConstants sc(parities);
  if (const json* b = maybe(j, "brackets")) {
    const std::string bptr = child(ptr, "brackets");
    for (std::size_t n = 0; n < array(*b, bptr).size(); ++n) {
      const json& e = (*b)[n];
      const std::string q = child(bptr, n);
      only_keys(e, q, {"i", "j", "coeffs"});
      const long i = integer(need(e, "i", q), child(q, "i"));
      const long jj = integer(need(e, "j", q), child(q, "j"));
      if (i < 1 || i > dim) throw SchemaError(child(q, "i"), "index out of range");
      if (jj < 1 || jj > dim) throw SchemaError(child(q, "j"), "index out of range");
      const json& coeffs = need(e, "coeffs", q);
      if (!coeffs.is_object()) throw SchemaError(child(q, "coeffs"), "expected an object");
      for (auto it = coeffs.begin(); it != coeffs.end(); ++it) {
        const std::string kp = child(child(q, "coeffs"), it.key());
        long k = 0;
        try {
          std::size_t used = 0;
          k = std::stol(it.key(), &used);
          if (used != it.key().size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
          throw SchemaError(kp, "expected a 1-based index");
        }
        if (k < 1 || k > dim) throw SchemaError(kp, "index out of range");
        try {
          sc.set_bracket(static_cast<int>(i - 1), static_cast<int>(jj - 1), static_cast<int>(k - 1),
                         number(it.value(), kp));
        } catch (const SchemaError&) {
          throw;
        } catch (const Error& err) {
          throw SchemaError(kp, err.what());
        }
      }
    }
  }
  return sc;
}

json algebra_json(const StructureConstants& sc) {
  json parities = json::array();
  for (int i = 0; i < sc.dim(); ++i) parities.push_back(to_string(sc.parity(i)));
  json brackets = json::array();
  for (int i = 0; i < sc.dim(); ++i) {
    for (int j = i; j < sc.dim(); ++j) {
      json coeffs = json::object();
      for (int k = 0; k < sc.dim(); ++k) {
        if (sc(i, j, k) != 0.0) coeffs[std::to_string(k + 1)] = sc(i, j, k);
      }
      if (!coeffs.empty()) brackets.push_back({{"i", i + 1}, {"j", j + 1}, {"coeffs", coeffs}});
    }
  }
  return {{"dim", sc.dim()}, {"parities", parities}, {"brackets", brackets}};
}

Chart chart(const json& j, const std::string& ptr) {
  only_keys(j, ptr, {"even", "odd", "domain", "periodic"});
  std::vector<std::string> even = strings(need(j, "even", ptr), child(ptr, "even"));
  std::vector<std::string> odd;
  if (const json* o = maybe(j, "odd")) odd = strings(*o, child(ptr, "odd"));
  Chart ch;
  try {
    ch = Chart(even, odd);
  } catch (const Error& e) {
    throw SchemaError(ptr, e.what());
  }
  auto index_of = [&](const std::string& name, const std::string& p) {
    for (int c = 0; c < ch.n0(); ++c) {
      if (even[c] == name) return c;
    }
    throw SchemaError(p, "unknown even coordinate '" + name + "'");
  };
  if (const json* d = maybe(j, "domain")) {
    const std::string dptr = child(ptr, "domain");
    if (d->is_string()) {
      if (d->get<std::string>() != "all") throw SchemaError(dptr, "expected \"all\" or an object");
    } else if (d->is_object()) {
      for (auto it = d->begin(); it != d->end(); ++it) {
        const std::string q = child(dptr, it.key());
        const int c = index_of(it.key(), q);
        if (!it->is_array() || it->size() != 2) throw SchemaError(q, "expected [lo, hi]");
        const double inf = std::numeric_limits<double>::infinity();
        const Interval iv{bound((*it)[0], child(q, 0), -inf), bound((*it)[1], child(q, 1), inf)};
        if (!(iv.lo < iv.hi)) throw SchemaError(q, "empty interval");
        ch.set_interval(c, iv);
      }
    } else {
      throw SchemaError(dptr, "expected \"all\" or an object");
    }
  }
  if (const json* p = maybe(j, "periodic")) {
    const std::string pptr = child(ptr, "periodic");
    const auto names = strings(*p, pptr);
    for (std::size_t i = 0; i < names.size(); ++i) {
      const int c = index_of(names[i], child(pptr, i));
      if (std::isfinite(ch.interval(c).lo) || std::isfinite(ch.interval(c).hi)) {
        throw SchemaError(child(pptr, i), "a periodic coordinate cannot be bounded");
      }
      ch.set_periodic(c);
    }
  }
  return ch;
}

json chart_json(const Chart& ch) {
  json domain = json::object();
  json periodic = json::array();
  for (int c = 0; c < ch.n0(); ++c) {
    const Interval& iv = ch.interval(c);
    if (!std::isinf(iv.lo) || !std::isinf(iv.hi)) {
      domain[ch.name(c)] = json::array({bound_json(iv.lo), bound_json(iv.hi)});
    }
    if (ch.periodic(c)) periodic.push_back(ch.name(c));
  }
  return {{"even", ch.even_names()},
          {"odd", ch.odd_names()},
          {"domain", domain.empty() ? json("all") : domain},
          {"periodic", periodic}};
}

Group group(const json& j, const StructureConstants& sc, int N, const std::string& ptr) {
  only_keys(j, ptr, {"model", "class", "size", "basis"});
  const std::string mptr = child(ptr, "model");
  GroupModel model{};
  try {
    model = parse_group_model(string(need(j, "model", ptr), mptr));
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(mptr, e.what());
  }
  try {
    switch (model) {
      case GroupModel::euclidean:
        if (!sc.is_abelian()) throw SchemaError(mptr, "euclidean group needs an abelian algebra");
        if (sc.parities() != std::vector<Parity>(sc.dim(), Parity::even)) {
          throw SchemaError(mptr, "euclidean group needs an even algebra");
        }
        return Group::euclidean(sc.dim(), N);
      case GroupModel::circle:
        if (sc.dim() != 1 || sc.parity(0) != Parity::even) {
          throw SchemaError(mptr, "circle group needs a one-dimensional even algebra");
        }
        return Group::circle(N);
      case GroupModel::nilpotent_exp: {
        const int cls = count_or(j, "class", ptr, kMaxBchClass, 1);
        return Group::nilpotent_exp(sc, cls, N);
      }
      case GroupModel::matrix: {
        const long size = integer(need(j, "size", ptr), child(ptr, "size"));
        if (size < 1 || size > 64) throw SchemaError(child(ptr, "size"), "out of range");
        const std::string bptr = child(ptr, "basis");
        const json& b = array(need(j, "basis", ptr), bptr);
        if (static_cast<int>(b.size()) != sc.dim()) {
          throw SchemaError(bptr, "needs one matrix per basis element");
        }
        std::vector<Eigen::MatrixXd> basis;
        for (std::size_t e = 0; e < b.size(); ++e) {
          const std::string eptr = child(bptr, e);
          if (!b[e].is_array() || static_cast<long>(b[e].size()) != size) {
            throw SchemaError(eptr, "expected " + std::to_string(size) + " rows");
          }
          Eigen::MatrixXd m(size, size);
          for (long r = 0; r < size; ++r) {
            const auto row = numbers(b[e][r], child(eptr, r));
            if (static_cast<long>(row.size()) != size) throw SchemaError(child(eptr, r), "wrong row length");
            for (long col = 0; col < size; ++col) m(r, col) = row[col];
          }
          basis.push_back(std::move(m));
        }
        return Group::matrix(sc, std::move(basis), N);
      }
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(ptr, e.what());
  }
  throw SchemaError(mptr, "unknown model");
}

json group_json(const Group& g) {
  json j = {{"model", to_string(g.model())}};
  if (g.model() == GroupModel::nilpotent_exp) j["class"] = g.nil_class();
  if (g.model() == GroupModel::matrix) {
    j["size"] = g.size();
    json basis = json::array();
    for (const auto& m : g.basis()) {
      json rows = json::array();
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
      }
      basis.push_back(rows);
    }
    j["basis"] = basis;
  }
  return j;
}

std::vector<std::vector<double>> real_rows(const json& j, std::size_t width, const std::string& ptr) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < array(j, ptr).size(); ++i) {
    auto row = numbers(j[i], child(ptr, i));
    if (row.size() != width) throw SchemaError(child(ptr, i), "expected " + std::to_string(width) + " entries");
    out.push_back(std::move(row));
  }
  return out;
}

TaskKind task_kind(const json& t, const std::string& ptr) {
  const std::string kptr = child(ptr, "kind");
  const std::string name = string(need(t, "kind", ptr), kptr);
  for (TaskKind k : kAllKinds) {
    if (name == to_string(k)) return k;
  }
  throw SchemaError(kptr, "unknown task kind '" + name + "'");
}

TaskSpec task(const json& t, const Ctx& c, const std::string& ptr) {
  if (!t.is_object()) throw SchemaError(ptr, "expected a task object");
  TaskSpec s;
  s.kind = task_kind(t, ptr);
  s.raw = t;
  if (const json* e = maybe(t, "expect")) {
    if (!e->is_object()) throw SchemaError(child(ptr, "expect"), "expected an object");
    s.expect = *e;
  }
  auto m = [&] { s.m = point(need(t, "m", ptr), c, child(ptr, "m")); };
  auto route = [&](const char* key) {
    s.routes.push_back(path(need(t, key, ptr), c, child(ptr, key)));
  };
  switch (s.kind) {
    case TaskKind::validate:
      only_keys(t, ptr, {"kind", "expect", "samples"});
      s.samples = count_or(t, "samples", ptr, 16, 1);
      break;
    case TaskKind::act: {
      only_keys(t, ptr, {"kind", "expect", "m", "g", "word", "route"});
      m();
      const int forms = t.contains("g") + t.contains("word") + t.contains("route");
      if (forms != 1) throw SchemaError(ptr, "act needs exactly one of \"g\", \"word\", \"route\"");
      if (t.contains("g")) {
        s.g = group_element(t["g"], c, child(ptr, "g"));
      } else if (t.contains("word")) {
        s.routes.push_back(GroupPath::word(*c.group, word(t["word"], c, child(ptr, "word"))));
      } else {
        route("route");
      }
      break;
    }
    case TaskKind::orbit:
      only_keys(t, ptr, {"kind", "expect", "x", "m", "duration", "samples"});
      s.x = element(need(t, "x", ptr), c, child(ptr, "x"));
      m();
      s.duration = number_or(t, "duration", ptr, 1.0);
      s.samples = count_or(t, "samples", ptr, 16, 1);
      break;
    case TaskKind::diagnose: {
      only_keys(t, ptr, {"kind", "expect", "directions", "points", "horizon", "samples"});
      const std::size_t d = static_cast<std::size_t>(c.sc->dim());
      if (const json* v = maybe(t, "directions")) {
        s.directions = real_rows(*v, d, child(ptr, "directions"));
      } else {
        for (std::size_t i = 0; i < d; ++i) {
          if (c.sc->parity(static_cast<int>(i)) == Parity::odd) continue;
          std::vector<double> e(d, 0.0);
          e[i] = 1.0;
          s.directions.push_back(e);
        }
      }
      if (const json* v = maybe(t, "points")) {
        s.points = real_rows(*v, static_cast<std::size_t>(c.chart->n0()), child(ptr, "points"));
        for (std::size_t i = 0; i < s.points.size(); ++i) {
          if (!c.chart->contains(s.points[i])) {
            throw SchemaError(child(child(ptr, "points"), i), "point lies outside the chart");
          }
        }
      }
      s.samples = count_or(t, "samples", ptr, 5, 0);
      s.horizon = number_or(t, "horizon", ptr, 10.0);
      if (!(s.horizon > 0.0)) throw SchemaError(child(ptr, "horizon"), "must be positive");
      break;
    }
    case TaskKind::leaf:
      only_keys(t, ptr, {"kind", "expect", "route", "m", "stride", "csv"});
      route("route");
      m();
      s.stride = count_or(t, "stride", ptr, 1, 1);
      if (const json* v = maybe(t, "csv")) {
        s.csv = string(*v, child(ptr, "csv"));
        if (s.csv.empty() || s.csv.find('/') != std::string::npos || s.csv.front() == '.') {
          throw SchemaError(child(ptr, "csv"), "expected a plain file name");
        }
      }
      break;
    case TaskKind::holonomy:
      only_keys(t, ptr, {"kind", "expect", "loop", "m"});
      route("loop");
      if (!s.routes.back().is_closed(1e-12)) throw SchemaError(child(ptr, "loop"), "loop is not closed");
      m();
      break;
    case TaskKind::recover_rho:
      only_keys(t, ptr, {"kind", "expect", "samples", "h", "tol"});
      s.samples = count_or(t, "samples", ptr, 50, 1);
      s.h = number_or(t, "h", ptr, 1e-4);
      if (!(s.h > 0.0)) throw SchemaError(child(ptr, "h"), "must be positive");
      break;
    case TaskKind::group_law:
      only_keys(t, ptr, {"kind", "expect", "trials", "word_length", "tol"});
      s.trials = count_or(t, "trials", ptr, 100, 0);
      s.word_length = count_or(t, "word_length", ptr, 4, 0);
      break;
    case TaskKind::path_independence: {
      only_keys(t, ptr, {"kind", "expect", "g", "routes", "m", "random", "tol"});
      if (t.contains("random")) {
        if (t.contains("g") || t.contains("routes")) {
          throw SchemaError(ptr, "\"random\" excludes \"g\" and \"routes\"");
        }
        s.random = count_or(t, "random", ptr, 20, 1);
      } else {
        s.g = group_element(need(t, "g", ptr), c, child(ptr, "g"));
        const std::string rptr = child(ptr, "routes");
        const json& rs = array(need(t, "routes", ptr), rptr);
        if (rs.size() < 2) throw SchemaError(rptr, "needs at least two routes");
        for (std::size_t i = 0; i < rs.size(); ++i) {
          s.routes.push_back(path(rs[i], c, child(rptr, i)));
          if (!s.routes.back().starts_at_identity(1e-12)) {
            throw SchemaError(child(rptr, i), "route must start at the identity");
          }
          if (c.group->distance(s.routes.back().end(), *s.g) > 1e-9) {
            throw SchemaError(child(rptr, i), "route does not end at g");
          }
        }
      }
      m();
      break;
    }
    case TaskKind::sign_duality:
      only_keys(t, ptr, {"kind", "expect", "trials", "tol"});
      s.trials = count_or(t, "trials", ptr, 20, 0);
      break;
  }
  if (const json* v = maybe(t, "tol")) {
    if (!(number(*v, child(ptr, "tol")) > 0.0)) throw SchemaError(child(ptr, "tol"), "must be positive");
  }
  for (const auto& r : s.routes) {
    if (s.kind != TaskKind::holonomy && !r.starts_at_identity(1e-12)) {
      throw SchemaError(ptr, "route must start at the identity");
    }
  }
  return s;
}

}  // namespace

Supernumber supernumber_from_json(const json& j, int num_generators, const std::string& ptr) {
  if (j.is_number()) return Supernumber(num_generators, j.get<double>());
  if (!j.is_object()) throw SchemaError(ptr, "expected a number or a supernumber object");
  only_keys(j, ptr, {"N", "terms"});
  if (const json* n = maybe(j, "N")) {
    if (integer(*n, child(ptr, "N")) != num_generators) {
      throw SchemaError(child(ptr, "N"), "generator count differs from grassmann_N");
    }
  }
  Supernumber s(num_generators);
  const std::string tptr = child(ptr, "terms");
  const json& terms = array(need(j, "terms", ptr), tptr);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string q = child(tptr, i);
    only_keys(terms[i], q, {"subset", "coeff"});
    const json& subset = array(need(terms[i], "subset", q), child(q, "subset"));
    Mask mask = 0;
    long last = 0;
    for (std::size_t k = 0; k < subset.size(); ++k) {
      const long g = integer(subset[k], child(child(q, "subset"), k));
      if (g < 1 || g > num_generators) {
        throw SchemaError(child(child(q, "subset"), k), "generator index out of range");
      }
      if (g <= last) throw SchemaError(child(q, "subset"), "indices must be strictly increasing");
      last = g;
      mask |= Mask{1} << (g - 1);
    }
    s[mask] += number(need(terms[i], "coeff", q), child(q, "coeff"));
  }
  return s;
}

json to_json(const Supernumber& s) {
  if (s.soul().is_zero()) return s.body();
  json terms = json::array();
  for (Mask m = 0; m < s.size(); ++m) {
    if (s[m] == 0.0) continue;
    json subset = json::array();
    for (Mask r = m; r != 0; r &= r - 1) subset.push_back(std::countr_zero(r) + 1);
    terms.push_back({{"subset", subset}, {"coeff", s[m]}});
  }
  return {{"N", s.num_generators()}, {"terms", terms}};
}

json to_json(const Point& m) {
  json a = json::array();
  for (const auto& s : m) a.push_back(to_json(s));
  return a;
}

json to_json(const AlgebraElement& x) { return to_json(x.coords); }

Scenario load_scenario(const json& j) {
  const std::string root;
  if (!j.is_object()) throw SchemaError(root, "scenario must be an object");
  only_keys(j, root, {"name", "grassmann_N", "seed", "fundamental_sign", "params", "algebra",
                      "group", "chart", "rho", "tolerances", "tasks"});
  Scenario s;
  s.name = string(need(j, "name", root), "/name");
  if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos || s.name.front() == '.') {
    throw SchemaError("/name", "expected a plain identifier");
  }
  if (const json* n = maybe(j, "grassmann_N")) {
    const long N = integer(*n, "/grassmann_N");
    if (N < 0 || N > Supernumber::kMaxGenerators) throw SchemaError("/grassmann_N", "out of range");
    s.grassmann_n = static_cast<int>(N);
  }
  if (const json* v = maybe(j, "seed")) {
    if (!v->is_number_unsigned()) throw SchemaError("/seed", "expected a non-negative integer");
    s.seed = v->get<std::uint64_t>();
  }
  if (const json* v = maybe(j, "fundamental_sign")) {
    const long sign = integer(*v, "/fundamental_sign");
    if (sign != 1 && sign != -1) throw SchemaError("/fundamental_sign", "must be +1 or -1");
    s.sign = static_cast<int>(sign);
  }
  if (const json* p = maybe(j, "params")) {
    if (!p->is_object()) throw SchemaError("/params", "expected an object");
    for (auto it = p->begin(); it != p->end(); ++it) {
      s.params.emplace_back(it.key(), number(it.value(), child("/params", it.key())));
    }
  }
  if (const json* t = maybe(j, "tolerances")) {
    if (!t->is_object()) throw SchemaError("/tolerances", "expected an object");
    only_keys(*t, "/tolerances", {"rtol", "atol", "max_step", "max_steps", "residual"});
    Tolerances& tol = s.tolerances;
    tol.rtol = number_or(*t, "rtol", "/tolerances", tol.rtol);
    tol.atol = number_or(*t, "atol", "/tolerances", tol.atol);
    tol.max_step = number_or(*t, "max_step", "/tolerances", tol.max_step);
    tol.residual = number_or(*t, "residual", "/tolerances", tol.residual);
    if (const json* v = maybe(*t, "max_steps")) tol.max_steps = integer(*v, "/tolerances/max_steps");
    if (!(tol.rtol > 0.0)) throw SchemaError("/tolerances/rtol", "must be positive");
    if (!(tol.atol > 0.0)) throw SchemaError("/tolerances/atol", "must be positive");
    if (!(tol.max_step >= 0.0)) throw SchemaError("/tolerances/max_step", "must be non-negative");
    if (tol.max_steps < 1) throw SchemaError("/tolerances/max_steps", "must be positive");
    if (!(tol.residual >= 0.0)) throw SchemaError("/tolerances/residual", "must be non-negative");
  }

  const StructureConstants sc = algebra(need(j, "algebra", root), "/algebra");
  s.group_spec = need(j, "group", root);
  const Group g = group(s.group_spec, sc, s.grassmann_n, "/group");
  const Chart ch = chart(need(j, "chart", root), "/chart");

  const json& rho = array(need(j, "rho", root), "/rho");
  if (static_cast<int>(rho.size()) != sc.dim()) {
    throw SchemaError("/rho", "needs one field per basis element (" + std::to_string(sc.dim()) + ")");
  }
  ExprContext ctx = ch.context();
  for (const auto& [name, value] : s.params) {
    try {
      ctx.set_constant(name, value);
    } catch (const Error& e) {
      throw SchemaError(child("/params", name), e.what());
    }
  }
  std::vector<VectorField> fields;
  for (int i = 0; i < sc.dim(); ++i) {
    const std::string fptr = child("/rho", static_cast<std::size_t>(i));
    const json& f = array(rho[i], fptr);
    if (static_cast<int>(f.size()) != ch.size()) {
      throw SchemaError(fptr, "needs one component per coordinate (" + std::to_string(ch.size()) + ")");
    }
    VectorField vf;
    vf.parity = sc.parity(i);
    std::vector<std::string> src;
    for (int c = 0; c < ch.size(); ++c) {
      const std::string cptr = child(fptr, static_cast<std::size_t>(c));
      if (f[c].is_number()) {
        vf.components.emplace_back(f[c].get<double>());
        src.push_back(vf.components.back().str(ctx));
        continue;
      }
      src.push_back(string(f[c], cptr));
      try {
        vf.components.push_back(parse(src.back(), ctx));
      } catch (const Error& e) {
        throw SchemaError(cptr, e.what());
      }
    }
    s.rho_src.push_back(std::move(src));
    fields.push_back(std::move(vf));
  }
  Representation rep(sc, ch, ctx, std::move(fields), s.grassmann_n);

  ActionModel model{std::move(rep), g, s.sign, {}};
  model.flow.ode.rtol = s.tolerances.rtol;
  model.flow.ode.atol = s.tolerances.atol;
  if (s.tolerances.max_step > 0.0) model.flow.ode.max_step = s.tolerances.max_step;
  model.flow.ode.max_steps = s.tolerances.max_steps;
  try {
    model.check();
  } catch (const Error& e) {
    throw SchemaError("/group", e.what());
  }
  s.model = std::move(model);

  const Ctx c{s.grassmann_n, &s.model->group.algebra(), &s.model->rep.chart(), &s.model->group};
  const json& tasks = array(need(j, "tasks", root), "/tasks");
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    s.tasks.push_back(task(tasks[i], c, child("/tasks", i)));
  }
  return s;
}

json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports the 1-based position of the offending byte.
    const std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
    throw ParseError(offset, path.string() + ": " + e.what());
  }
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  return load_scenario(parse_json_file(path));
}

json to_json(const Scenario& s) {
  json params = json::object();
  for (const auto& [k, v] : s.params) params[k] = v;
  const Representation& rep = s.rep();
  json rho = json::array();
  for (const auto& f : rep.fields()) {
    json comps = json::array();
    for (const auto& e : f.components) comps.push_back(e.str(rep.context()));
    rho.push_back(comps);
  }
  const Tolerances& t = s.tolerances;
  json tol = {{"rtol", t.rtol}, {"atol", t.atol}, {"max_steps", t.max_steps}, {"residual", t.residual}};
  if (t.max_step > 0.0) tol["max_step"] = t.max_step;
  json tasks = json::array();
  for (const auto& task : s.tasks) tasks.push_back(task.raw);
  return {{"name", s.name},
          {"grassmann_N", s.grassmann_n},
          {"seed", s.seed},
          {"fundamental_sign", s.sign},
          {"params", params},
          {"algebra", algebra_json(s.group().algebra())},
          {"group", group_json(s.group())},
          {"chart", chart_json(rep.chart())},
          {"rho", rho},
          {"tolerances", tol},
          {"tasks", tasks}};
}

}  // namespace liact
