#include "aef/lie.hpp"

#include <cmath>

#include "numeric.hpp"

namespace aef {

ExprMat KillingBasis::block() const {
  ExprMat b = zeros(kBlock, kBlock);
  for (int a = 0; a < kBlock; ++a)
    for (int c = 0; c < kBlock; ++c) b[a][c] = xi[a][c + 1];
  return b;
}

StructureConstants::StructureConstants() { c_.fill(Expr(0)); }

void StructureConstants::set(int d, int a, int b, const Expr& v) {
  c_[idx(d, a, b)] = v;
  c_[idx(d, b, a)] = normalize(-v);
}

VectorField commutator(const VectorField& x, const VectorField& y) {
  VectorField r(kDim);
  for (int i = 0; i < kDim; ++i) r[i] = normalize(directional(x, y[i]) - directional(y, x[i]));
  return r;
}

namespace {

// Functions of the parameters used to express parameter-dependent constants.
std::vector<Expr> parameter_fit_basis(const SymbolTable& t) {
  std::vector<Expr> finite{Expr(1)};
  std::vector<Expr> cont{Expr(1)};
  for (int k = 0; k < static_cast<int>(t.parameters().size()); ++k) {
    Expr p = Expr::param(k);
    if (t.parameters()[k].domain.is_finite()) {
      std::size_t n = finite.size();
      for (std::size_t i = 0; i < n; ++i) finite.push_back(finite[i] * p);
    } else {
      cont.push_back(p);
      cont.push_back(sin(p));
      cont.push_back(cos(p));
    }
  }
  std::vector<Expr> out;
  for (const auto& f : finite)
    for (const auto& c : cont) out.push_back(normalize(f * c));
  return out;
}

}  // namespace

StructureConstants recover_structure_constants(const KillingBasis& basis, ZeroTester& z, const StructureRecoveryOptions& opt) {
  const SymbolTable& table = z.table();
  // Brackets for a < b, flattened with the basis components into one program.
  std::vector<std::pair<int, int>> pairs;
  std::vector<VectorField> br;
  for (int a = 0; a < kOps; ++a)
    for (int b = a + 1; b < kOps; ++b) {
      pairs.emplace_back(a, b);
      br.push_back(commutator(basis.xi[a], basis.xi[b]));
    }
  std::vector<Expr> outs;
  for (const auto& x : basis.xi) outs.insert(outs.end(), x.begin(), x.end());
  for (const auto& v : br) outs.insert(outs.end(), v.begin(), v.end());
  Program prog(outs);

  std::vector<Expr> fit = parameter_fit_basis(table);
  bool has_params = !table.parameters().empty();
  int nsamples = opt.parameter_samples > 0 ? opt.parameter_samples : (has_params ? std::max<int>(2 * static_cast<int>(fit.size()), 6) : 1);
  if (!has_params) fit = {Expr(1)};
  Program fit_prog(fit);

  // values[pair][d][sample]
  std::vector<std::array<std::vector<double>, kOps>> values(pairs.size());
  Eigen::MatrixXd fit_rows(nsamples, static_cast<Eigen::Index>(fit.size()));
  std::vector<double> buf;
  Sampler& sampler = z.sampler();
  for (int s = 0; s < nsamples; ++s) {
    // Draw a parameter assignment, then coordinate points sharing it.
    std::vector<Point> pts;
    int attempts = 0;
    Point base = sampler.draw(prog.max_opaque_order() + 1);
    while (static_cast<int>(pts.size()) < opt.points) {
      if (++attempts > opt.points * z.config().max_attempts) throw SamplingExhausted();
      Point p = sampler.draw(prog.max_opaque_order() + 1);
      p.params = base.params;
      if (prog.run(p, z.config().delta_den, buf) == EvalStatus::Ok) pts.push_back(std::move(p));
      if (attempts % opt.points == 0 && pts.empty()) base = sampler.draw(prog.max_opaque_order() + 1);
    }
    if (fit_prog.run(pts[0], 0.0, buf) != EvalStatus::Ok) throw SamplingExhausted();
    for (std::size_t k = 0; k < fit.size(); ++k) fit_rows(s, static_cast<Eigen::Index>(k)) = buf[k];

    const Eigen::Index rows = static_cast<Eigen::Index>(pts.size()) * kDim;
    std::vector<std::vector<double>> vals(pts.size());
    for (std::size_t q = 0; q < pts.size(); ++q) prog.run(pts[q], z.config().delta_den, vals[q]);
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
      Eigen::MatrixXd m(rows, kOps);
      Eigen::VectorXd rhs(rows);
      for (std::size_t q = 0; q < pts.size(); ++q)
        for (int i = 0; i < kDim; ++i) {
          Eigen::Index r = static_cast<Eigen::Index>(q) * kDim + i;
          for (int d = 0; d < kOps; ++d) m(r, d) = vals[q][d * kDim + i];
          rhs(r) = vals[q][kOps * kDim + pi * kDim + i];
        }
      Eigen::VectorXd c = m.completeOrthogonalDecomposition().solve(rhs);
      double res = (m * c - rhs).norm();
      double scale = 1.0 + rhs.norm() + m.norm();
      if (res > opt.consistency_tol * scale * 1e3) {
        // Distinguish a bracket outside the span from point-dependent coefficients.
        bool pointwise = true;
        for (std::size_t q = 0; q < pts.size() && pointwise; ++q) {
          Eigen::MatrixXd mq = m.middleRows(static_cast<Eigen::Index>(q) * kDim, kDim);
          Eigen::VectorXd rq = rhs.segment(static_cast<Eigen::Index>(q) * kDim, kDim);
          Eigen::VectorXd cq = mq.completeOrthogonalDecomposition().solve(rq);
          if ((mq * cq - rq).norm() > opt.consistency_tol * (1.0 + rq.norm() + mq.norm()) * 1e3) pointwise = false;
        }
        if (pointwise) throw NonConstantCoefficients(pairs[pi].first, pairs[pi].second);
        throw NotClosed(pairs[pi].first, pairs[pi].second);
      }
      for (int d = 0; d < kOps; ++d) values[pi][d].push_back(c(d));
    }
  }

  StructureConstants out;
  auto fit_qr = fit_rows.colPivHouseholderQr();
  for (std::size_t pi = 0; pi < pairs.size(); ++pi)
    for (int d = 0; d < kOps; ++d) {
      Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(values[pi][d].data(), nsamples);
      Eigen::VectorXd coef = fit_qr.solve(v);
      std::vector<Expr> terms;
      for (std::size_t k = 0; k < fit.size(); ++k) {
        auto r = detail::snap_rational(coef(static_cast<Eigen::Index>(k)), opt.max_den, 1e-6);
        if (!r) throw NonConstantCoefficients(pairs[pi].first, pairs[pi].second);
        if (!r->is_zero()) terms.push_back(Expr(*r) * fit[k]);
      }
      out.set(d, pairs[pi].first, pairs[pi].second, normalize(add(std::move(terms))));
    }

  auto res = closure_residuals(basis, out);
  for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
    std::vector<Expr> comp(res.begin() + static_cast<long>(pi * kDim), res.begin() + static_cast<long>((pi + 1) * kDim));
    if (!z.test_all(comp)) throw NotClosed(pairs[pi].first, pairs[pi].second);
  }
  return out;
}

std::vector<Expr> closure_residuals(const KillingBasis& basis, const StructureConstants& c) {
  std::vector<Expr> out;
  for (int a = 0; a < kOps; ++a)
    for (int b = a + 1; b < kOps; ++b) {
      VectorField br = commutator(basis.xi[a], basis.xi[b]);
      for (int i = 0; i < kDim; ++i) {
        std::vector<Expr> t{br[i]};
        for (int d = 0; d < kOps; ++d)
          if (!c(d, a, b).is_zero_literal()) t.push_back(-(c(d, a, b) * basis.xi[d][i]));
        out.push_back(normalize(add(std::move(t))));
      }
    }
  return out;
}

std::vector<Expr> jacobi_residuals(const StructureConstants& c) {
  std::vector<Expr> out;
  for (int a = 0; a < kOps; ++a)
    for (int b = a + 1; b < kOps; ++b)
      for (int e = b + 1; e < kOps; ++e)
        for (int g = 0; g < kOps; ++g) {
          std::vector<Expr> t;
          for (int f = 0; f < kOps; ++f) {
            t.push_back(c(f, a, b) * c(g, f, e));
            t.push_back(c(f, b, e) * c(g, f, a));
            t.push_back(c(f, e, a) * c(g, f, b));
          }
          out.push_back(normalize(add(std::move(t))));
        }
  return out;
}

ExprMat lambda_matrix(const KillingBasis& basis, ZeroTester& z) {
  ExprMat b = basis.block();
  Expr det = normalize(determinant(b));
  if (det.is_zero_literal() || z.is_zero(det)) throw DegenerateBlock();
  ExprMat lam = normalize(inverse(b));
  if (!z.test_all(entries(normalize(difference(matmul(b, lam), identity(kBlock)))))) throw DegenerateBlock();
  return lam;
}

ExprVec omega(const KillingBasis& basis, const ExprMat& lambda, ZeroTester& z) {
  ExprVec x4(kBlock);
  for (int c = 0; c < kBlock; ++c) x4[c] = basis.xi[kDependent][c + 1];
  ExprVec w = normalize(vecmat(x4, lambda));
  std::vector<Expr> res;
  for (int i = 0; i < kDim; ++i) {
    std::vector<Expr> t{basis.xi[kDependent][i]};
    for (int a = 0; a < kBlock; ++a) t.push_back(-(w[a] * basis.xi[a][i]));
    res.push_back(normalize(add(std::move(t))));
  }
  if (!z.test_all(res)) throw InconsistentDependentOperator();
  return w;
}

CTilde c_tilde(const StructureConstants& c, const ExprVec& w) {
  CTilde ct;
  for (int g = 0; g < kBlock; ++g)
    for (int a = 0; a < kOps; ++a)
      for (int b = 0; b < kOps; ++b) ct[g][a][b] = normalize(c(g, a, b) + w[g] * c(kDependent, a, b));
  return ct;
}

std::vector<Expr> lambda_identity_residuals(const KillingBasis& basis, const ExprMat& lam, const CTilde& ct) {
  ExprMat b = basis.block();
  std::vector<Expr> out;
  for (int a = 0; a < kBlock; ++a)
    for (int s = 0; s < kBlock; ++s)
      for (int g = 0; g < kBlock; ++g) {
        std::vector<Expr> t{directional(basis.xi[a], lam[s][g])};
        for (int r = 0; r < kBlock; ++r) {
          t.push_back(diff(b[a][r], s + 1) * lam[r][g]);
          t.push_back(lam[s][r] * ct[g][a][r]);
        }
        out.push_back(normalize(add(std::move(t))));
      }
  return out;
}

std::vector<Expr> omega_identity_residuals(const KillingBasis& basis, const ExprVec& w, const CTilde& ct) {
  std::vector<Expr> out;
  for (int a = 0; a < kBlock; ++a)
    for (int g = 0; g < kBlock; ++g) {
      std::vector<Expr> t{directional(basis.xi[a], w[g]), -ct[g][a][kDependent]};
      for (int b = 0; b < kBlock; ++b) t.push_back(-(w[b] * ct[g][b][a]));
      out.push_back(normalize(add(std::move(t))));
    }
  return out;
}

}  // namespace aef
