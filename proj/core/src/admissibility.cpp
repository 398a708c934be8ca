#include "aef/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "numeric.hpp"

namespace aef {

ReductionFrame make_frame(const KillingBasis& basis, ZeroTester& z) {
  ReductionFrame f;
  f.basis = basis;
  f.c = recover_structure_constants(basis, z);
  f.lambda = lambda_matrix(basis, z);
  f.omega = omega(basis, f.lambda, z);
  f.ct = c_tilde(f.c, f.omega);
  return f;
}

ExprMat w0_matrix(const ReductionFrame& f) {
  ExprMat w;
  for (int a = 0; a < kBlock; ++a) {
    ExprVec row(kBlock);
    for (int g = 0; g < kBlock; ++g) row[g] = normalize(directional(f.basis.xi[a], f.omega[g]));
    w.push_back(std::move(row));
  }
  ExprVec row0(kBlock);
  for (int g = 0; g < kBlock; ++g) row0[g] = normalize(diff(f.omega[g], 0));
  w.push_back(std::move(row0));
  ExprMat b = f.basis.block();
  for (int a = 0; a < kBlock; ++a) {
    ExprVec row(kBlock);
    for (int g = 0; g < kBlock; ++g) {
      std::vector<Expr> t;
      for (int c = 0; c < kBlock; ++c) t.push_back(diff(b[a][c], 0) * f.lambda[c][g]);
      row[g] = normalize(add(std::move(t)));
    }
    w.push_back(std::move(row));
  }
  return w;
}

namespace {

int sub_rank(const Eigen::MatrixXd& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  if (rows.empty() || cols.empty()) return 0;
  Eigen::MatrixXd s(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(rows[i], cols[j]);
  return detail::numeric_rank(s);
}

// Rank of a submatrix, required to agree at every sample point.
int stable_rank(const std::vector<Eigen::MatrixXd>& ms, const std::vector<int>& rows, const std::vector<int>& cols) {
  int r = sub_rank(ms[0], rows, cols);
  for (std::size_t q = 1; q < ms.size(); ++q)
    if (sub_rank(ms[q], rows, cols) != r) throw RankInstability("submatrix rank varies across generic points");
  return r;
}

std::vector<int> iota(std::size_t n) {
  std::vector<int> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<int>(i);
  return v;
}

}  // namespace

NullSpace null_space(const ExprMat& w, std::size_t cols, ZeroTester& z, std::size_t npts) {
  NullSpace ns;
  if (cols == 0) return ns;
  if (w.empty()) {
    ns.free = iota(cols);
    ns.theta = identity(cols);
    return ns;
  }
  detail::MatrixProgram prog(w);
  auto pts = detail::generic_points(z, {&w}, npts);
  std::vector<Eigen::MatrixXd> ms(pts.size());
  for (std::size_t q = 0; q < pts.size(); ++q) prog.eval(pts[q], z.config().delta_den, ms[q]);

  std::vector<int> all_rows = iota(w.size());
  ns.rank = stable_rank(ms, all_rows, iota(cols));
  // Pivot columns: scan from the last column so the free set comes first.
  for (int j = static_cast<int>(cols) - 1; j >= 0 && static_cast<int>(ns.pivots.size()) < ns.rank; --j) {
    auto trial = ns.pivots;
    trial.push_back(j);
    if (stable_rank(ms, all_rows, trial) > static_cast<int>(ns.pivots.size())) ns.pivots = trial;
  }
  std::sort(ns.pivots.begin(), ns.pivots.end());
  for (int j = 0; j < static_cast<int>(cols); ++j)
    if (!std::binary_search(ns.pivots.begin(), ns.pivots.end(), j)) ns.free.push_back(j);
  for (int i = 0; i < static_cast<int>(w.size()) && static_cast<int>(ns.rows.size()) < ns.rank; ++i) {
    auto trial = ns.rows;
    trial.push_back(i);
    if (stable_rank(ms, trial, ns.pivots) > static_cast<int>(ns.rows.size())) ns.rows = trial;
  }

  const std::size_t r = ns.pivots.size();
  ns.theta = zeros(cols, ns.free.size());
  for (std::size_t k = 0; k < ns.free.size(); ++k) ns.theta[ns.free[k]][k] = Expr(1);
  if (r > 0 && !ns.free.empty()) {
    ExprMat omega_hat = zeros(r, r), zmat = zeros(r, ns.free.size());
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < r; ++j) omega_hat[i][j] = w[ns.rows[i]][ns.pivots[j]];
      for (std::size_t k = 0; k < ns.free.size(); ++k) zmat[i][k] = w[ns.rows[i]][ns.free[k]];
    }
    ExprMat sol = matmul(inverse(omega_hat), zmat);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < ns.free.size(); ++k) ns.theta[ns.pivots[i]][k] = normalize(-sol[i][k]);
  }
  if (!ns.free.empty() && !z.test_all(entries(normalize(matmul(w, ns.theta)))))
    throw CertificationFailed("null-space basis does not annihilate the constraint matrix");
  return ns;
}

const char* to_string(ReductionStatus s) {
  switch (s) {
    case ReductionStatus::Running: return "Running";
    case ReductionStatus::SolvedFreeComponents: return "SolvedFreeComponents";
    case ReductionStatus::OnlyZeroSolution: return "OnlyZeroSolution";
  }
  return "?";
}

namespace {

// (Ct_a)_{bg} = Ct^g_{ab}: X_a(P_b) = sum_g (Ct_a)_{bg} P_g.
ExprMat ct_matrix(const ReductionFrame& f, int a) {
  ExprMat m = zeros(kBlock, kBlock);
  for (int b = 0; b < kBlock; ++b)
    for (int g = 0; g < kBlock; ++g) m[b][g] = f.ct[g][a][b];
  return m;
}

ExprMat apply_operator(const VectorField& x, const ExprMat& m) {
  ExprMat out = m;
  for (auto& row : out)
    for (auto& e : row) e = normalize(directional(x, e));
  return out;
}

ExprMat rows_of(const ExprMat& m, const std::vector<int>& rows) {
  ExprMat out;
  for (int r : rows) out.push_back(m[r]);
  return out;
}

void append_rows(ExprMat& dst, const ExprMat& src) { dst.insert(dst.end(), src.begin(), src.end()); }

std::array<ExprMat, kBlock> operator_coefficients(const ReductionFrame& f, const ExprMat& theta, const std::vector<int>& free) {
  std::array<ExprMat, kBlock> n;
  for (int a = 0; a < kBlock; ++a) n[a] = normalize(rows_of(matmul(ct_matrix(f, a), theta), free));
  return n;
}

}  // namespace

ReductionState reduce(const ReductionFrame& f, const ExprMat& w0, ZeroTester& z) {
  ReductionState s;
  s.theta = identity(kBlock);
  s.free = {0, 1, 2};
  s.w = w0;
  while (true) {
    std::size_t m = s.free.size();
    if (s.w.empty() || z.test_all(entries(s.w))) {
      s.status = ReductionStatus::SolvedFreeComponents;
      return s;
    }
    NullSpace ns = null_space(s.w, m, z);
    if (ns.free.size() == m) throw RankInstability("constraint matrix is not identically zero but has numeric rank 0");
    ++s.k;
    if (s.k > 6) throw NonTermination();
    s.theta = normalize(matmul(s.theta, ns.theta));
    std::vector<int> next;
    for (int j : ns.free) next.push_back(s.free[j]);
    s.free = next;
    if (s.free.empty()) {
      s.status = ReductionStatus::OnlyZeroSolution;
      s.trace.push_back({s.k, s.w, s.free, s.theta});
      s.w.clear();
      return s;
    }
    s.trace.push_back({s.k, s.w, s.free, s.theta});

    // Substitute P = theta a into the projection equations.
    m = s.free.size();
    auto n = operator_coefficients(f, s.theta, s.free);
    ExprMat w;
    for (int a = 0; a < kBlock; ++a) {
      ExprMat r = apply_operator(f.basis.xi[a], s.theta);
      ExprMat tn = matmul(s.theta, n[a]);
      ExprMat ct = matmul(ct_matrix(f, a), s.theta);
      for (std::size_t i = 0; i < kBlock; ++i)
        for (std::size_t j = 0; j < m; ++j) r[i][j] = normalize(r[i][j] + tn[i][j] - ct[i][j]);
      append_rows(w, r);
    }
    for (int a = 0; a < kBlock; ++a)
      for (int b = a + 1; b < kBlock; ++b) {
        ExprMat xa_nb = apply_operator(f.basis.xi[a], n[b]);
        ExprMat xb_na = apply_operator(f.basis.xi[b], n[a]);
        ExprMat nbna = matmul(n[b], n[a]);
        ExprMat nanb = matmul(n[a], n[b]);
        ExprMat r = zeros(m, m);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j) {
            std::vector<Expr> t{xa_nb[i][j], -xb_na[i][j], nbna[i][j], -nanb[i][j]};
            for (int g = 0; g < kBlock; ++g) t.push_back(-(f.ct[g][a][b] * n[g][i][j]));
            r[i][j] = normalize(add(std::move(t)));
          }
        append_rows(w, r);
      }
    ExprMat d0w = zeros(1, kBlock);
    for (int g = 0; g < kBlock; ++g) d0w[0][g] = diff(f.omega[g], 0);
    append_rows(w, normalize(matmul(d0w, s.theta)));
    s.w = w;
  }
}

namespace {

void collect_factors(const Expr& e, std::vector<Expr>& out) {
  switch (e.kind()) {
    case Kind::Mul:
      for (const auto& a : e.args()) collect_factors(a, out);
      break;
    case Kind::Pow:
      collect_factors(e.args()[0], out);
      break;
    case Kind::Neg:
      collect_factors(e.args()[0], out);
      break;
    case Kind::Div:
      collect_factors(e.args()[0], out);
      collect_factors(e.args()[1], out);
      break;
    case Kind::Coord:
    case Kind::Call:
    case Kind::Add:
      out.push_back(e);
      break;
    default:
      break;
  }
}

bool depends_on_ignored(const Expr& e) {
  for (int j = 1; j < kDim; ++j)
    if (depends_on(e, Var::coord(j))) return true;
  return false;
}

// phi = prod t_k^{n_k} with d_b log phi = g_b, fitted on candidate factors.
std::optional<Expr> integrating_factor(const std::array<Expr, kBlock>& g, const std::vector<Expr>& seeds, ZeroTester& z) {
  std::vector<Expr> atoms;
  for (int j = 1; j < kDim; ++j) {
    Expr u = Expr::coord(j);
    for (const Expr& t : {u, exp(u), sin(u), cos(u), sinh(u), cosh(u)}) atoms.push_back(t);
  }
  for (const auto& s : seeds) {
    std::vector<Expr> fs;
    collect_factors(s, fs);
    for (const auto& t : fs) atoms.push_back(normalize(t));
  }
  std::vector<Expr> uniq;
  for (const auto& a : atoms)
    if (depends_on_ignored(a) && std::find(uniq.begin(), uniq.end(), a) == uniq.end()) uniq.push_back(a);
  atoms = uniq;

  // logd[k][b] = d_b t_k / t_k
  ExprMat logd = zeros(atoms.size(), kBlock);
  for (std::size_t k = 0; k < atoms.size(); ++k)
    for (int b = 0; b < kBlock; ++b) logd[k][b] = normalize(diff(atoms[k], b + 1) / atoms[k]);
  ExprMat gm = zeros(1, kBlock);
  for (int b = 0; b < kBlock; ++b) gm[0][b] = g[b];

  const std::size_t npts = 12;
  std::vector<Point> pts;
  try {
    pts = detail::generic_points(z, {&logd, &gm}, npts);
  } catch (const SamplingExhausted&) {
    return std::nullopt;
  }
  detail::MatrixProgram lp(logd), gp(gm);
  std::vector<Eigen::MatrixXd> lv(npts), gv(npts);
  for (std::size_t q = 0; q < npts; ++q) {
    lp.eval(pts[q], z.config().delta_den, lv[q]);
    gp.eval(pts[q], z.config().delta_den, gv[q]);
  }
  auto design = [&](const std::vector<int>& sel) {
    Eigen::MatrixXd m(npts * kBlock, sel.size());
    for (std::size_t q = 0; q < npts; ++q)
      for (int b = 0; b < kBlock; ++b)
        for (std::size_t k = 0; k < sel.size(); ++k) m(static_cast<Eigen::Index>(q * kBlock + b), static_cast<Eigen::Index>(k)) = lv[q](sel[k], b);
    return m;
  };
  Eigen::VectorXd rhs(npts * kBlock);
  for (std::size_t q = 0; q < npts; ++q)
    for (int b = 0; b < kBlock; ++b) rhs(static_cast<Eigen::Index>(q * kBlock + b)) = gv[q](0, b);

  // Keep atoms whose log-derivatives are independent of those already kept.
  std::vector<int> sel;
  for (int k = 0; k < static_cast<int>(atoms.size()); ++k) {
    auto trial = sel;
    trial.push_back(k);
    if (detail::numeric_rank(design(trial), 1e-9) > static_cast<int>(sel.size())) sel = trial;
  }
  if (sel.empty()) return std::nullopt;
  Eigen::MatrixXd d = design(sel);
  Eigen::VectorXd n = d.colPivHouseholderQr().solve(rhs);
  if ((d * n - rhs).norm() > 1e-7 * (1.0 + rhs.norm())) return std::nullopt;

  std::vector<Expr> factors;
  for (std::size_t k = 0; k < sel.size(); ++k) {
    auto r = detail::snap_rational(n(static_cast<Eigen::Index>(k)), 12, 1e-6);
    if (!r) return std::nullopt;
    if (!r->is_zero()) factors.push_back(pow(atoms[sel[k]], Expr(*r)));
  }
  Expr phi = normalize(mul(std::move(factors)));
  std::vector<Expr> check;
  for (int b = 0; b < kBlock; ++b) check.push_back(normalize(diff(phi, b + 1) - g[b] * phi));
  if (!z.test_all(check)) return std::nullopt;
  return phi;
}

}  // namespace

ResidualSystem residual_system(const ReductionState& s, const ReductionFrame& f, ZeroTester& z) {
  ResidualSystem rs;
  const std::size_t m = s.free.size();
  rs.n = operator_coefficients(f, s.theta, s.free);
  for (int b = 0; b < kBlock; ++b) {
    rs.g[b] = zeros(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        std::vector<Expr> t;
        for (int a = 0; a < kBlock; ++a) t.push_back(f.lambda[b][a] * rs.n[a][i][j]);
        rs.g[b][i][j] = normalize(add(std::move(t)));
      }
  }
  if (m == 0) {
    rs.solved = true;
    return rs;
  }
  for (int a = 0; a < kBlock; ++a)
    if (!z.is_zero(f.basis.xi[a][0])) {
      rs.note = "independent operators move the essential coordinate";
      return rs;
    }

  static const char* kNames[] = {"a0", "b1", "b2"};
  std::vector<Expr> fn;
  for (std::size_t i = 0; i < m; ++i) {
    auto idx = z.table().function_index(kNames[i]);
    if (!idx || z.table().functions()[*idx].coord != 0) {
      rs.note = std::string("free function ") + kNames[i] + "(u0) is not declared";
      return rs;
    }
    fn.push_back(Expr::opaque(*idx, 0));
  }

  std::vector<Expr> all_g;
  for (const auto& gb : rs.g) {
    auto e = entries(gb);
    all_g.insert(all_g.end(), e.begin(), e.end());
  }
  if (z.test_all(all_g)) {
    rs.amplitudes = fn;
    rs.solved = true;
    rs.note = "free components are arbitrary functions of u0";
    return rs;
  }
  if (m == 1) {
    std::array<Expr, kBlock> g1{rs.g[0][0][0], rs.g[1][0][0], rs.g[2][0][0]};
    std::vector<Expr> seeds = entries(f.basis.block());
    auto th = entries(s.theta);
    seeds.insert(seeds.end(), th.begin(), th.end());
    if (auto phi = integrating_factor(g1, seeds, z)) {
      rs.amplitudes = {normalize(fn[0] * *phi)};
      rs.solved = true;
      rs.note = "free component is a0(u0) times an integrating factor";
      return rs;
    }
  }
  rs.note = "residual system left unsolved";
  return rs;
}

namespace {

// Replaces a certified component by a shorter equal form: 0, or
// f(u0) * q * prod t_k^{n_k} with rational q, when one exists.
Expr tidy_component(const Expr& e, const std::vector<Expr>& seeds, ZeroTester& z) {
  if (z.is_zero(e)) return Expr(0);
  for (const auto& fn : z.table().functions()) {
    if (fn.coord != 0) continue;
    Expr f = Expr::opaque(*z.table().function_index(fn.name), 0);
    Expr h = normalize(e / f);
    if (contains_opaque(h)) continue;
    std::array<Expr, kBlock> g;
    for (int b = 0; b < kBlock; ++b) g[b] = normalize(diff(h, b + 1) / h);
    auto phi = integrating_factor(g, seeds, z);
    if (!phi) continue;
    Expr ratio = normalize(h / *phi);
    std::vector<Point> pts;
    try {
      pts = z.sample_points({ratio}, 3);
    } catch (const SamplingExhausted&) {
      continue;
    }
    double q0 = 0.0;
    try {
      q0 = evaluate(ratio, pts[0]);
    } catch (const std::exception&) {
      continue;
    }
    auto q = detail::snap_rational(q0, 100, 1e-7);
    if (!q || q->is_zero()) continue;
    Expr cand = normalize(Expr(*q) * f * *phi);
    if (z.is_zero(normalize(cand - e))) return cand;
  }
  return e;
}

}  // namespace

Covector holonomic_potential(const ExprVec& proj, const ReductionFrame& f, const Expr& a0, ZeroTester& z) {
  Covector a(kDim);
  a[0] = a0;
  ExprVec sp = normalize(matvec(f.lambda, proj));
  for (int b = 0; b < kBlock; ++b) a[b + 1] = sp[b];
  std::vector<Expr> check;
  for (int al = 0; al < kBlock; ++al) check.push_back(normalize(contract(f.basis.xi[al], a) - proj[al]));
  if (!z.test_all(check)) throw CertificationFailed("holonomic potential does not reproduce its projections");
  std::vector<Expr> seeds = entries(f.basis.block());
  for (const auto& e : entries(f.lambda)) seeds.push_back(e);
  for (int b = 1; b < kDim; ++b) a[b] = tidy_component(a[b], seeds, z);
  return a;
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::PotentialFound: return "PotentialFound";
    case Outcome::NoField: return "NoField";
    case Outcome::ZeroField: return "ZeroField";
    case Outcome::Unsolved: return "Unsolved";
  }
  return "?";
}

std::optional<Outcome> outcome_from_string(const std::string& s) {
  for (Outcome o : {Outcome::PotentialFound, Outcome::NoField, Outcome::ZeroField, Outcome::Unsolved})
    if (s == to_string(o)) return o;
  return std::nullopt;
}

bool is_zero_covector(const Covector& a, ZeroTester& z) { return z.test_all(a).zero; }

PipelineResult run_pipeline(const KillingBasis& basis, ZeroTester& z) {
  PipelineResult r;
  r.frame = make_frame(basis, z);
  r.w0 = w0_matrix(r.frame);
  r.state = reduce(r.frame, r.w0, z);
  if (r.state.status == ReductionStatus::OnlyZeroSolution) {
    r.potential = Covector(kDim, Expr(0));
    r.outcome = Outcome::NoField;
    return r;
  }
  r.residual = residual_system(r.state, r.frame, z);
  if (!r.residual.solved) {
    r.outcome = Outcome::Unsolved;
    return r;
  }
  ExprVec proj = normalize(matvec(r.state.theta, r.residual.amplitudes));
  r.potential = holonomic_potential(proj, r.frame, Expr(0), z);
  r.outcome = is_zero_covector(*r.potential, z) ? Outcome::ZeroField : Outcome::PotentialFound;
  return r;
}

bool outcome_satisfies(const PipelineResult& r, Outcome expected, ZeroTester& z) {
  switch (expected) {
    case Outcome::NoField: return r.state.status == ReductionStatus::OnlyZeroSolution;
    case Outcome::ZeroField: return r.potential && is_zero_covector(*r.potential, z);
    case Outcome::PotentialFound: return r.outcome == Outcome::PotentialFound;
    case Outcome::Unsolved: return r.outcome == Outcome::Unsolved;
  }
  return false;
}

bool AdmissibilityReport::all() const {
  for (const auto& row : pass)
    for (bool b : row)
      if (!b) return false;
  return true;
}

std::vector<Expr> admissibility_residuals(const Covector& a, const VectorField& xi) {
  ExprMat f = faraday(a);
  Expr proj = contract(xi, a);
  std::vector<Expr> out;
  for (int i = 0; i < kDim; ++i) {
    std::vector<Expr> t{diff(proj, i)};
    for (int j = 0; j < kDim; ++j) t.push_back(-(xi[j] * f[i][j]));
    out.push_back(normalize(add(std::move(t))));
  }
  return out;
}

AdmissibilityReport check_admissibility(const Covector& a, const KillingBasis& basis, ZeroTester& z) {
  AdmissibilityReport rep;
  for (int op = 0; op < kOps; ++op) {
    auto res = admissibility_residuals(a, basis.xi[op]);
    for (int i = 0; i < kDim; ++i) {
      auto zr = z.test(res[i]);
      rep.pass[op][i] = zr.zero;
      if (!zr.zero && !rep.witness) {
        rep.witness = zr.witness;
        rep.failing_operator = op;
        rep.failing_component = i;
      }
      rep.residuals.push_back(res[i]);
    }
  }
  return rep;
}

LinearMomentumFunction poisson_linear(const LinearMomentumFunction& f, const LinearMomentumFunction& g) {
  return {commutator(f.xi, g.xi), normalize(directional(f.xi, g.gamma) - directional(g.xi, f.gamma))};
}

std::vector<bool> check_closure(const KillingBasis& basis, const StructureConstants& c, ZeroTester& z) {
  std::vector<bool> out;
  for (int a = 0; a < kOps; ++a)
    for (int b = a + 1; b < kOps; ++b) {
      auto br = poisson_linear({basis.xi[a], Expr(0)}, {basis.xi[b], Expr(0)});
      std::vector<Expr> res{br.gamma};
      for (int i = 0; i < kDim; ++i) {
        std::vector<Expr> t{br.xi[i]};
        for (int d = 0; d < kOps; ++d) t.push_back(-(c(d, a, b) * basis.xi[d][i]));
        res.push_back(normalize(add(std::move(t))));
      }
      out.push_back(z.test_all(res).zero);
    }
  return out;
}

BracketDecomposition check_bracket_decomposition(const ExprMat& gi, const Covector& a, const LinearMomentumFunction& y,
                                                 ZeroTester& z) {
  BracketDecomposition d;
  d.quadratic = killing_residual(gi, y.xi);
  ExprMat f = faraday(a);
  d.linear = ExprVec(kDim);
  for (int l = 0; l < kDim; ++l) {
    std::vector<Expr> t;
    for (int i = 0; i < kDim; ++i) {
      std::vector<Expr> inner{diff(y.gamma, i)};
      for (int j = 0; j < kDim; ++j) inner.push_back(y.xi[j] * f[i][j]);
      t.push_back(Expr(2) * gi[i][l] * add(std::move(inner)));
    }
    d.linear[l] = normalize(add(std::move(t)));
  }
  d.quadratic_zero = z.test_all(entries(d.quadratic)).zero;
  d.linear_zero = z.test_all(d.linear).zero;
  return d;
}

std::vector<Expr> compatibility_residuals(const Covector& a, const ReductionFrame& f) {
  std::array<Expr, kOps> proj;
  for (int d = 0; d < kOps; ++d) proj[d] = normalize(contract(f.basis.xi[d], a));
  // first[a][s] = X_a(P_s)
  std::array<std::array<Expr, kOps>, kBlock> first;
  for (int al = 0; al < kBlock; ++al)
    for (int s = 0; s < kOps; ++s) first[al][s] = normalize(directional(f.basis.xi[al], proj[s]));
  std::vector<Expr> out;
  for (int al = 0; al < kBlock; ++al)
    for (int be = 0; be < kBlock; ++be)
      for (int ga = al + 1; ga < kBlock; ++ga) {
        std::vector<Expr> t{directional(f.basis.xi[ga], first[al][be]), -directional(f.basis.xi[al], first[ga][be])};
        for (int s = 0; s < kOps; ++s) {
          t.push_back(-(f.c(s, al, be) * first[ga][s]));
          t.push_back(f.c(s, ga, be) * first[al][s]);
        }
        out.push_back(normalize(add(std::move(t))));
      }
  return out;
}

std::vector<Expr> annihilation_residuals(const Covector& a, const ReductionFrame& f) {
  std::vector<Expr> out;
  for (int i = 0; i < kDim; ++i) {
    std::vector<Expr> t;
    for (int g = 0; g < kBlock; ++g) t.push_back(diff(f.omega[g], i) * contract(f.basis.xi[g], a));
    out.push_back(normalize(add(std::move(t))));
  }
  return out;
}

GaugeComparison compare_potentials(const Covector& pipe, const Covector& ref, const KillingBasis& basis, ZeroTester& z) {
  GaugeComparison g;
  std::array<Expr, kOps> p, q;
  for (int d = 0; d < kOps; ++d) {
    p[d] = normalize(contract(basis.xi[d], pipe));
    q[d] = normalize(contract(basis.xi[d], ref));
  }
  int pick = -1;
  for (int d = 0; d < kOps && pick < 0; ++d)
    if (!z.is_zero(p[d])) pick = d;
  if (pick < 0) {
    g.ratio = Expr(1);
    g.equivalent = z.test_all({q[0], q[1], q[2], q[3]}).zero && z.test_all(entries(faraday(ref))).zero;
    if (!g.equivalent) g.reason = "pipeline potential vanishes but the reference does not";
    return g;
  }
  g.ratio = normalize(q[pick] / p[pick]);
  for (int j = 1; j < kDim; ++j)
    if (!z.is_zero(diff(g.ratio, j))) {
      g.reason = "projection ratio depends on the ignored coordinates";
      return g;
    }
  Covector scaled(kDim);
  for (int i = 0; i < kDim; ++i) scaled[i] = normalize(g.ratio * pipe[i]);
  if (!z.test_all(entries(difference(faraday(scaled), faraday(ref)))).zero) {
    g.reason = "field strengths differ";
    return g;
  }
  std::vector<Expr> dproj;
  for (int d = 0; d < kOps; ++d) dproj.push_back(normalize(contract(basis.xi[d], scaled) - q[d]));
  if (!z.test_all(dproj).zero) {
    g.reason = "projections differ";
    return g;
  }
  g.equivalent = true;
  return g;
}

}  // namespace aef
