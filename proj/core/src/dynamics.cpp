#include "aef/dynamics.hpp"

#include <cmath>

#include "aef/parse.hpp"

namespace aef {

namespace {

constexpr std::size_t kGi = 0;
constexpr std::size_t kDgi = kGi + kDim * kDim;
constexpr std::size_t kA = kDgi + kDim * kDim * kDim;
constexpr std::size_t kDa = kA + kDim;
constexpr std::size_t kXi = kDa + kDim * kDim;
constexpr std::size_t kDet = kXi + kOps * kDim;
constexpr std::size_t kOutputs = kDet + 1;

}  // namespace

NumericCaseInstance::NumericCaseInstance(const SymbolTable& table, const ExprMat& g_cov, const ExprMat& g_inv, const Covector& a,
                                         const KillingBasis& basis, const std::map<std::string, double>& params,
                                         const std::map<std::string, std::string>& functions) {
  for (const auto& p : table.parameters()) {
    auto it = params.find(p.name);
    double v;
    if (it != params.end()) v = it->second;
    else if (p.domain.is_finite()) v = p.domain.contains(1.0) ? 1.0 : p.domain.values.front().to_double();
    else v = 0.5 * (p.domain.intervals.front().first + p.domain.intervals.front().second);
    point_.params.push_back(v);
  }
  // Closed forms for the free functions and their derivatives.
  std::vector<Expr> closed;
  for (const auto& f : table.functions()) {
    auto it = functions.find(f.name);
    std::string text = it != functions.end() ? it->second : (f.name == "a0" ? table.coordinates()[f.coord] : "1");
    Expr e = parse_canonical(text, table);
    if (contains_opaque(e)) throw std::invalid_argument("closed form for " + f.name + " refers to a free function");
    for (int i = 0; i < kDim; ++i)
      if (i != f.coord && depends_on(e, Var::coord(i)))
        throw std::invalid_argument("closed form for " + f.name + " depends on another coordinate");
    closed.push_back(e);
  }
  auto concrete = [&](const Expr& e) {
    return substitute(e, [&](const Expr& leaf) -> std::optional<Expr> {
      if (leaf.kind() != Kind::Opaque) return std::nullopt;
      Expr d = closed[leaf.index()];
      for (int k = 0; k < leaf.order(); ++k) d = diff(d, leaf.opaque_coord());
      return d;
    });
  };

  std::vector<Expr> out(kOutputs);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      Expr gij = concrete(g_inv[i][j]);
      out[kGi + i * kDim + j] = gij;
      for (int k = 0; k < kDim; ++k) out[kDgi + (k * kDim + i) * kDim + j] = diff(gij, k);
    }
  for (int j = 0; j < kDim; ++j) {
    Expr aj = concrete(a[j]);
    out[kA + j] = aj;
    for (int k = 0; k < kDim; ++k) out[kDa + k * kDim + j] = diff(aj, k);
  }
  for (int op = 0; op < kOps; ++op)
    for (int i = 0; i < kDim; ++i) out[kXi + op * kDim + i] = concrete(basis.xi[op][i]);
  out[kDet] = concrete(determinant(g_cov));
  prog_ = Program(out);
}

NumericCaseInstance NumericCaseInstance::from_case(const GroupCase& c, const ExprMat& g_inv, const Covector& a) {
  std::map<std::string, double> params;
  std::map<std::string, std::string> functions;
  if (c.dynamics) {
    params = c.dynamics->parameters;
    functions = c.dynamics->functions;
  }
  return NumericCaseInstance(c.table, c.metric.g, g_inv, a, c.killing, params, functions);
}

bool NumericCaseInstance::eval(const std::array<double, kDim>& u, Eval& e) const {
  point_.u = u;
  std::vector<double> v;
  if (prog_.run(point_, 0.0, v) != EvalStatus::Ok) return false;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      e.gi[i][j] = v[kGi + i * kDim + j];
      for (int k = 0; k < kDim; ++k) e.dgi[k][i][j] = v[kDgi + (k * kDim + i) * kDim + j];
    }
  for (int j = 0; j < kDim; ++j) {
    e.a[j] = v[kA + j];
    for (int k = 0; k < kDim; ++k) e.da[k][j] = v[kDa + k * kDim + j];
  }
  for (int op = 0; op < kOps; ++op)
    for (int i = 0; i < kDim; ++i) e.xi[op][i] = v[kXi + op * kDim + i];
  e.det = v[kDet];
  return true;
}

void NumericCaseInstance::derivative(const PhaseState& s, PhaseState& ds) const {
  Eval e;
  if (!eval(s.u, e)) throw BlowUp(std::nan(""));
  std::array<double, kDim> kin{};
  for (int i = 0; i < kDim; ++i) kin[i] = s.p[i] + e.a[i];
  for (int i = 0; i < kDim; ++i) {
    double acc = 0.0;
    for (int j = 0; j < kDim; ++j) acc += e.gi[i][j] * kin[j];
    ds.u[i] = 2.0 * acc;
  }
  for (int k = 0; k < kDim; ++k) {
    double acc = 0.0;
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) acc += e.dgi[k][i][j] * kin[i] * kin[j] + 2.0 * e.gi[i][j] * kin[i] * e.da[k][j];
    ds.p[k] = -acc;
  }
}

double NumericCaseInstance::hamiltonian(const PhaseState& s) const {
  Eval e;
  if (!eval(s.u, e)) return std::nan("");
  double h = 0.0;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) h += e.gi[i][j] * (s.p[i] + e.a[i]) * (s.p[j] + e.a[j]);
  return h;
}

std::array<double, kOps> NumericCaseInstance::conserved(const PhaseState& s) const {
  Eval e;
  std::array<double, kOps> x{};
  if (!eval(s.u, e)) {
    x.fill(std::nan(""));
    return x;
  }
  for (int op = 0; op < kOps; ++op)
    for (int i = 0; i < kDim; ++i) x[op] += e.xi[op][i] * s.p[i];
  return x;
}

double NumericCaseInstance::metric_determinant(const PhaseState& s) const {
  Eval e;
  if (!eval(s.u, e)) return std::nan("");
  return e.det;
}

namespace {

PhaseState axpy(const PhaseState& s, double h, const PhaseState& d) {
  PhaseState r;
  for (int i = 0; i < kDim; ++i) {
    r.u[i] = s.u[i] + h * d.u[i];
    r.p[i] = s.p[i] + h * d.p[i];
  }
  return r;
}

PhaseState rk4_step(const NumericCaseInstance& inst, const PhaseState& s, double h) {
  PhaseState k1, k2, k3, k4;
  inst.derivative(s, k1);
  inst.derivative(axpy(s, h / 2, k1), k2);
  inst.derivative(axpy(s, h / 2, k2), k3);
  inst.derivative(axpy(s, h, k3), k4);
  PhaseState r;
  for (int i = 0; i < kDim; ++i) {
    r.u[i] = s.u[i] + h / 6 * (k1.u[i] + 2 * k2.u[i] + 2 * k3.u[i] + k4.u[i]);
    r.p[i] = s.p[i] + h / 6 * (k1.p[i] + 2 * k2.p[i] + 2 * k3.p[i] + k4.p[i]);
  }
  return r;
}

double distance(const PhaseState& a, const PhaseState& b) {
  double m = 0.0;
  for (int i = 0; i < kDim; ++i) m = std::max({m, std::fabs(a.u[i] - b.u[i]), std::fabs(a.p[i] - b.p[i])});
  return m;
}

double norm(const PhaseState& s) {
  double m = 0.0;
  for (int i = 0; i < kDim; ++i) m = std::max({m, std::fabs(s.u[i]), std::fabs(s.p[i])});
  return m;
}

}  // namespace

Trajectory integrate(const NumericCaseInstance& inst, const PhaseState& start, double dt, double t_end, const IntegrateOptions& opt) {
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw std::invalid_argument("dt must be positive and t_end non-negative");
  Trajectory tr;
  tr.dt = dt;
  tr.t_end = t_end;
  tr.method = opt.method;
  auto record = [&](double t, const PhaseState& s) {
    tr.t.push_back(t);
    tr.states.push_back(s);
    tr.h.push_back(inst.hamiltonian(s));
    tr.x.push_back(inst.conserved(s));
  };
  auto check = [&](double t, const PhaseState& s) {
    double n = norm(s);
    if (!std::isfinite(n) || n > opt.blowup_norm) throw BlowUp(t);
    double det = inst.metric_determinant(s);
    if (!std::isfinite(det) || std::fabs(det) < opt.min_det) throw MetricDegeneration(t);
  };
  PhaseState s = start;
  check(0.0, s);
  record(0.0, s);
  const auto n = static_cast<std::size_t>(std::llround(t_end / dt));
  for (std::size_t k = 1; k <= n; ++k) {
    if (opt.method == Method::RK4) {
      s = rk4_step(inst, s, dt);
    } else {
      // Step doubling: refine the interval until full and half steps agree.
      int pieces = 1;
      PhaseState next;
      for (;;) {
        double h = dt / pieces;
        PhaseState coarse = s, fine = s;
        for (int q = 0; q < pieces; ++q) coarse = rk4_step(inst, coarse, h);
        for (int q = 0; q < 2 * pieces; ++q) fine = rk4_step(inst, fine, h / 2);
        next = fine;
        if (distance(coarse, fine) <= opt.adaptive_tol * (1.0 + norm(fine)) || pieces >= 1024) break;
        pieces *= 2;
      }
      s = next;
    }
    ++tr.steps;
    double t = static_cast<double>(k) * dt;
    check(t, s);
    if (k % opt.record_every == 0 || k == n) record(t, s);
  }
  return tr;
}

bool ConservationReport::all_pass() const {
  for (const auto& e : entries)
    if (!e.pass) return false;
  return true;
}

std::string ConservationReport::first_failure() const {
  for (const auto& e : entries)
    if (!e.pass) return e.quantity;
  return "";
}

ConservationReport conservation_report(const Trajectory& traj, double tol) {
  ConservationReport r;
  r.tol = tol;
  auto drift = [&](const std::string& name, auto get) {
    DriftEntry e;
    e.quantity = name;
    e.initial = get(0);
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
      double d = std::fabs(get(k) - e.initial) / (1.0 + std::fabs(e.initial));
      if (!std::isfinite(d)) d = INFINITY;
      e.drift = std::max(e.drift, d);
    }
    e.pass = e.drift < tol;
    r.entries.push_back(e);
  };
  drift("H", [&](std::size_t k) { return traj.h[k]; });
  for (int a = 0; a < kOps; ++a) drift("X" + std::to_string(a + 1), [&](std::size_t k) { return traj.x[k][a]; });
  return r;
}

}  // namespace aef
