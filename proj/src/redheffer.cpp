// SPDX-License-Identifier: Apache-2.0

#include "rclift/redheffer.hpp"

#include <Eigen/LU>
#include <algorithm>

namespace rclift::red {

RedhefferQuadruple::RedhefferQuadruple(sys::LinearSystem realization, Index split,
                                       const ToleranceConfig& tol)
    : realization_(std::move(realization)), split_(split) {
  realization_.check_shapes();
  if (split < 0 || split > realization_.output_dim())
    fail(Errc::bad_dims, "output split outside the output space");
  if (split > 0 && op::operator_norm(realization_.feed_op.topRows(split)) > tol.check_tol)
    fail(Errc::feedthrough_nonzero, "feedthrough into the E-rows must vanish");
}

RedhefferQuadruple::PointValues RedhefferQuadruple::eval(Complex lambda) const {
  const OperatorMatrix f = sys::transfer_eval(realization_, lambda);
  const OperatorMatrix w = sys::observability_eval(realization_, lambda);
  PointValues pv;
  pv.p11 = f.topRows(split_);
  pv.p21 = f.bottomRows(dim_y());
  pv.p12 = w.topRows(split_);
  pv.p22 = w.bottomRows(dim_y());
  return pv;
}

RedhefferQuadruple::TaylorBlocks RedhefferQuadruple::taylor(Index k) const {
  const sys::TaylorData td = sys::taylor(realization_, k);
  TaylorBlocks tb;
  const Index y = dim_y();
  for (Index j = 0; j <= k; ++j) {
    const auto& f = td.f[static_cast<size_t>(j)];
    const auto& w = td.w[static_cast<size_t>(j)];
    tb.f11.push_back(f.topRows(split_));
    tb.f21.push_back(f.bottomRows(y));
    tb.w12.push_back(w.topRows(split_));
    tb.w22.push_back(w.bottomRows(y));
  }
  return tb;
}

SchurParameter SchurParameter::constant(OperatorMatrix v, const ToleranceConfig& tol) {
  SchurParameter p;
  p.open_ball_ = op::operator_norm(v) <= 1.0 - tol.norm_slack;
  p.constant_ = std::move(v);
  return p;
}

SchurParameter SchurParameter::realized(sys::LinearSystem s, bool open_ball,
                                        const ToleranceConfig& tol) {
  s.check_shapes();
  if (op::operator_norm(s.system_matrix()) > 1.0 + tol.check_tol)
    fail(Errc::not_a_contraction, "Schur parameter needs a contractive system matrix");
  SchurParameter p;
  p.realized_ = std::move(s);
  p.open_ball_ = open_ball;
  return p;
}

Index SchurParameter::dim_e() const {
  return realized_ ? realized_->input_dim() : constant_.cols();
}

Index SchurParameter::dim_e_prime() const {
  return realized_ ? realized_->output_dim() : constant_.rows();
}

OperatorMatrix SchurParameter::eval(Complex lambda) const {
  return realized_ ? sys::transfer_eval(*realized_, lambda) : constant_;
}

std::vector<OperatorMatrix> SchurParameter::taylor(Index k) const {
  if (realized_) return sys::taylor(*realized_, k).f;
  std::vector<OperatorMatrix> c(static_cast<size_t>(k) + 1,
                                OperatorMatrix::Zero(constant_.rows(), constant_.cols()));
  c[0] = constant_;
  return c;
}

OperatorMatrix SchurParameter::mult_op(Index k) const {
  return sys::toeplitz_block(taylor(k), k, k);
}

SchurParameter zero_parameter(const RedhefferQuadruple& q) {
  ToleranceConfig tol;
  return SchurParameter::constant(OperatorMatrix::Zero(q.dim_e_prime(), q.dim_e()), tol);
}

namespace {

void check_parameter_dims(const RedhefferQuadruple& q, const SchurParameter& v) {
  if (v.dim_e() != q.dim_e() || v.dim_e_prime() != q.dim_e_prime())
    fail(Errc::shape_mismatch, "Schur parameter spaces do not match the quadruple");
}

OperatorMatrix lu_solve(const OperatorMatrix& a, const OperatorMatrix& rhs, Errc code,
                        const char* what) {
  if (a.rows() == 0) return rhs;
  Eigen::FullPivLU<OperatorMatrix> lu(a);
  if (!lu.isInvertible()) fail(code, what);
  return lu.solve(rhs);
}

struct TruncatedBlocks {
  OperatorMatrix m11, m21, g12, g22;
};

TruncatedBlocks truncated_blocks(const RedhefferQuadruple& q, Index k_in, Index k_out) {
  const auto tb = q.taylor(k_out);
  TruncatedBlocks b;
  b.m11 = sys::toeplitz_block(tb.f11, k_in, k_out);
  b.m21 = sys::toeplitz_block(tb.f21, k_in, k_out);
  const Index u = q.dim_u();
  b.g12.resize((k_out + 1) * q.dim_e(), u);
  b.g22.resize((k_out + 1) * q.dim_y(), u);
  for (Index j = 0; j <= k_out; ++j) {
    b.g12.middleRows(j * q.dim_e(), q.dim_e()) = tb.w12[static_cast<size_t>(j)];
    b.g22.middleRows(j * q.dim_y(), q.dim_y()) = tb.w22[static_cast<size_t>(j)];
  }
  return b;
}

OperatorMatrix open_ball_mult_op(const SchurParameter& v, Index k,
                                 const ToleranceConfig& tol) {
  if (!v.open_ball()) fail(Errc::not_open_ball, "parameter is not flagged open-ball");
  OperatorMatrix mv = v.mult_op(k);
  if (op::operator_norm(mv) > 1.0 - tol.norm_slack)
    fail(Errc::not_open_ball, "truncated multiplication operator norm reaches 1");
  return mv;
}

sys::TruncatedHardyOperator gamma_from_blocks(const RedhefferQuadruple& q, Index k,
                                              OperatorMatrix g) {
  sys::TruncatedHardyOperator out;
  out.op = std::move(g);
  out.out_degree = k;
  out.in_degree = 0;
  out.out_block = q.dim_y();
  out.in_block = q.dim_u();
  out.domain_is_hardy = false;
  return out;
}

}  // namespace

OperatorMatrix transform_eval(const RedhefferQuadruple& q, const SchurParameter& v,
                              Complex lambda, const ToleranceConfig& tol) {
  (void)tol;
  check_parameter_dims(q, v);
  const auto pv = q.eval(lambda);
  const OperatorMatrix vl = v.eval(lambda);
  const Index e = q.dim_e();
  const OperatorMatrix a = OperatorMatrix::Identity(e, e) - pv.p11 * vl;
  const OperatorMatrix inner =
      lu_solve(a, pv.p12, Errc::fraction_singular, "I - Psi11 V is numerically singular");
  return pv.p22 + pv.p21 * vl * inner;
}

sys::TruncatedHardyOperator transform_gamma(const RedhefferQuadruple& q,
                                            const SchurParameter& v, Index k,
                                            const ToleranceConfig& tol) {
  check_parameter_dims(q, v);
  const OperatorMatrix mv = open_ball_mult_op(v, k, tol);
  const auto b = truncated_blocks(q, k, k);
  const Index n = mv.cols();
  const OperatorMatrix a = OperatorMatrix::Identity(n, n) - b.m11 * mv;
  const OperatorMatrix inner =
      lu_solve(a, b.g12, Errc::fraction_singular, "I - M11 M_V singular");
  return gamma_from_blocks(q, k, b.g22 + b.m21 * mv * inner);
}

sys::TruncatedHardyOperator transform_gamma_any(const RedhefferQuadruple& q,
                                                const SchurParameter& v, Index k) {
  check_parameter_dims(q, v);
  const OperatorMatrix mv = v.mult_op(k);
  const auto b = truncated_blocks(q, k, k);
  const Index n = mv.cols();
  // M11 has vanishing diagonal blocks, so M11 M_V is nilpotent at truncation
  // and the resolvent exists for any Schur parameter.
  const OperatorMatrix a = OperatorMatrix::Identity(n, n) - b.m11 * mv;
  const OperatorMatrix inner =
      lu_solve(a, b.g12, Errc::fraction_singular, "I - M11 M_V singular");
  return gamma_from_blocks(q, k, b.g22 + b.m21 * mv * inner);
}

OperatorMatrix Blocked2x2::assemble() const {
  if (a11.rows() != a12.rows() || a21.rows() != a22.rows() || a11.cols() != a21.cols() ||
      a12.cols() != a22.cols())
    fail(Errc::shape_mismatch, "2x2 blocks do not assemble");
  OperatorMatrix m(a11.rows() + a21.rows(), a11.cols() + a12.cols());
  m.topLeftCorner(a11.rows(), a11.cols()) = a11;
  m.topRightCorner(a12.rows(), a12.cols()) = a12;
  m.bottomLeftCorner(a21.rows(), a21.cols()) = a21;
  m.bottomRightCorner(a22.rows(), a22.cols()) = a22;
  return m;
}

CoefficientMatrix coefficient_matrix_rect(const RedhefferQuadruple& q, Index k_in,
                                          Index k_out) {
  if (k_in < 0 || k_out < k_in) fail(Errc::bad_dims, "bad truncation degrees");
  const auto b = truncated_blocks(q, k_in, k_out);
  CoefficientMatrix cm;
  cm.blocks = Blocked2x2{b.m11, b.g12, b.m21, b.g22};
  cm.k_in = k_in;
  cm.k_out = k_out;
  cm.dim_e = q.dim_e();
  cm.dim_y = q.dim_y();
  cm.dim_e_prime = q.dim_e_prime();
  cm.dim_u = q.dim_u();
  return cm;
}

CoefficientMatrix coefficient_matrix(const RedhefferQuadruple& q, Index k) {
  return coefficient_matrix_rect(q, k, k);
}

double coisometry_defect(const RedhefferQuadruple& q, Index k) {
  const OperatorMatrix k0 = coefficient_matrix(q, k).assemble();
  return op::coisometry_defect(k0);
}

double isometry_defect(const RedhefferQuadruple& q, Index k) {
  const OperatorMatrix x = coefficient_matrix_rect(q, k, 2 * k + 1).assemble();
  return op::isometry_defect(x);
}

double column_isometry_defect(const RedhefferQuadruple& q, Index k) {
  const auto b = truncated_blocks(q, k, k);
  const Index u = q.dim_u();
  return op::herm_norm(OperatorMatrix::Identity(u, u) - b.g12.adjoint() * b.g12 -
                       b.g22.adjoint() * b.g22);
}

Blocked2x2 redheffer_product(const Blocked2x2& m1, const Blocked2x2& m2,
                             const ToleranceConfig& tol) {
  (void)tol;
  // m1 : X (+) U1 -> X' (+) Y1, m2 : X' (+) U2 -> X (+) Y2.
  if (m1.a11.rows() != m2.a11.cols() || m2.a11.rows() != m1.a11.cols())
    fail(Errc::shape_mismatch, "feedback state spaces do not match");
  const Index x = m2.a11.rows();
  const Index xp = m1.a11.rows();
  const OperatorMatrix i_x = OperatorMatrix::Identity(x, x);
  const OperatorMatrix i_xp = OperatorMatrix::Identity(xp, xp);
  Eigen::FullPivLU<OperatorMatrix> lu_x(i_x - m2.a11 * m1.a11);
  if (x > 0 && !lu_x.isInvertible())
    fail(Errc::feedback_singular, "I - Z2 Z1 is numerically singular");
  Eigen::FullPivLU<OperatorMatrix> lu_xp(i_xp - m1.a11 * m2.a11);
  if (xp > 0 && !lu_xp.isInvertible())
    fail(Errc::feedback_singular, "I - Z1 Z2 is numerically singular");
  const OperatorMatrix r_xp_b1 = xp > 0 ? OperatorMatrix(lu_xp.solve(m1.a12)) : m1.a12;
  const OperatorMatrix r_x_b2 = x > 0 ? OperatorMatrix(lu_x.solve(m2.a12)) : m2.a12;
  Blocked2x2 out;
  out.a11 = m1.a22 + m1.a21 * m2.a11 * r_xp_b1;
  out.a12 = m1.a21 * r_x_b2;
  out.a21 = m2.a21 * r_xp_b1;
  out.a22 = m2.a22 + m2.a21 * m1.a11 * r_x_b2;
  return out;
}

Blocked2x2 rotation(const SchurParameter& v, Index k, const ToleranceConfig& tol) {
  const OperatorMatrix mv = open_ball_mult_op(v, k, tol);
  const Index ne = mv.cols(), np = mv.rows();
  Blocked2x2 r;
  r.a11 = mv;
  r.a12 = op::psd_sqrt(OperatorMatrix::Identity(np, np) - mv * mv.adjoint());
  r.a21 = -op::psd_sqrt(OperatorMatrix::Identity(ne, ne) - mv.adjoint() * mv);
  r.a22 = mv.adjoint();
  return r;
}

Blocked2x2 rotated_coefficient_matrix(const RedhefferQuadruple& q, const SchurParameter& v,
                                      Index k, const ToleranceConfig& tol) {
  check_parameter_dims(q, v);
  const OperatorMatrix mv = open_ball_mult_op(v, k, tol);
  const auto b = truncated_blocks(q, k, k);
  const Index ne = mv.cols(), np = mv.rows();
  const OperatorMatrix dmv =
      op::psd_sqrt(OperatorMatrix::Identity(ne, ne) - mv.adjoint() * mv);
  const OperatorMatrix dmvs =
      op::psd_sqrt(OperatorMatrix::Identity(np, np) - mv * mv.adjoint());
  Eigen::FullPivLU<OperatorMatrix> lu_e(OperatorMatrix::Identity(ne, ne) - b.m11 * mv);
  Eigen::FullPivLU<OperatorMatrix> lu_p(OperatorMatrix::Identity(np, np) - mv * b.m11);
  if ((ne > 0 && !lu_e.isInvertible()) || (np > 0 && !lu_p.isInvertible()))
    fail(Errc::feedback_singular, "feedback resolvent singular");
  const auto solve_e = [&](const OperatorMatrix& rhs) {
    return ne > 0 ? OperatorMatrix(lu_e.solve(rhs)) : rhs;
  };
  const auto solve_p = [&](const OperatorMatrix& rhs) {
    return np > 0 ? OperatorMatrix(lu_p.solve(rhs)) : rhs;
  };
  Blocked2x2 kv;
  kv.a11 = mv.adjoint() - dmv * solve_e(b.m11 * dmvs);
  kv.a12 = -dmv * solve_e(b.g12);
  kv.a21 = b.m21 * solve_p(dmvs);
  kv.a22 = b.g22 + b.m21 * mv * solve_e(b.g12);
  return kv;
}

double rotated_isometry_defect(const RedhefferQuadruple& q, const SchurParameter& v, Index k,
                               const ToleranceConfig& tol) {
  const Index big = 2 * k + 1;
  const OperatorMatrix kv = rotated_coefficient_matrix(q, v, big, tol).assemble();
  const Index ep = q.dim_e_prime(), u = q.dim_u();
  // Restrict to input degrees 0..k of the Hardy column plus the flat column.
  OperatorMatrix x(kv.rows(), (k + 1) * ep + u);
  x.leftCols((k + 1) * ep) = kv.leftCols((k + 1) * ep);
  x.rightCols(u) = kv.rightCols(u);
  return op::isometry_defect(x);
}

SingletonReport range_singleton_check(const RedhefferQuadruple& q, Index k,
                                      const ToleranceConfig& tol) {
  SingletonReport rep;
  const auto tb = q.taylor(k);
  double n12 = 0, n21 = 0;
  for (Index j = 0; j <= k; ++j) {
    n12 = std::max(n12, op::operator_norm(tb.w12[static_cast<size_t>(j)]));
    n21 = std::max(n21, op::operator_norm(tb.f21[static_cast<size_t>(j)]));
  }
  rep.psi12_zero = n12 <= tol.check_tol;
  rep.psi21_zero = n21 <= tol.check_tol;
  rep.e_trivial = q.dim_e() == 0;
  const auto b = truncated_blocks(q, k, k);
  rep.gamma22_coisometry_defect = op::coisometry_defect(b.g22);
  rep.singleton = rep.psi12_zero || rep.psi21_zero;
  if (rep.singleton) return rep;

  // Non-singleton: exhibit two constants with distinct transformed Taylor
  // data.  The grid is deterministic and cheap; on non-degenerate instances
  // the first-order term Psi21 E_pq Psi12 already separates.
  const Index ep = q.dim_e_prime(), e = q.dim_e();
  const OperatorMatrix zero = OperatorMatrix::Zero(ep, e);
  const OperatorMatrix g0 = transform_gamma_any(q, SchurParameter::constant(zero, tol), k).op;
  const Complex scales[] = {{0.5, 0.0}, {-0.5, 0.0}, {0.0, 0.5}, {0.0, -0.5}};
  double best = 0;
  for (Index p = 0; p < ep; ++p)
    for (Index qq = 0; qq < e; ++qq)
      for (const Complex& c : scales) {
        OperatorMatrix cand = zero;
        cand(p, qq) = c;
        const OperatorMatrix g =
            transform_gamma_any(q, SchurParameter::constant(cand, tol), k).op;
        const double d = op::operator_norm(g - g0);
        if (d > best) {
          best = d;
          rep.witness = std::make_pair(cand, zero);
        }
      }
  if (best <= 10 * tol.check_tol) rep.witness.reset();
  return rep;
}

MaxPrincipleReport max_principle_suite(const RedhefferQuadruple& q,
                                       const std::vector<SchurParameter>& samples, Index k,
                                       const ToleranceConfig& tol) {
  MaxPrincipleReport rep;
  const Index half = k / 2;
  for (const auto& v : samples) {
    rep.norms.push_back(op::operator_norm(transform_gamma(q, v, k, tol).op));
    rep.norms_half.push_back(op::operator_norm(transform_gamma(q, v, half, tol).op));
  }
  if (rep.norms.empty()) return rep;
  rep.max_norm = *std::max_element(rep.norms.begin(), rep.norms.end());
  rep.min_norm = *std::min_element(rep.norms.begin(), rep.norms.end());
  rep.delta = 1.0 - rep.max_norm;
  for (size_t i = 0; i < rep.norms.size(); ++i)
    if (rep.norms_half[i] > rep.norms[i] + tol.check_tol) rep.monotone = false;
  rep.strict_regime = rep.delta > tol.norm_slack;
  rep.norm_one_regime = (1.0 - rep.min_norm) <= 10 * tol.check_tol;
  return rep;
}

KernelInclusionReport kernel_inclusion_check(const RedhefferQuadruple& q,
                                             const SchurParameter& v,
                                             const SchurParameter& v_tilde, Index k,
                                             const ToleranceConfig& tol) {
  KernelInclusionReport rep;
  const OperatorMatrix gv = transform_gamma(q, v, k, tol).op;
  const OperatorMatrix gt = transform_gamma_any(q, v_tilde, k).op;
  const auto b = truncated_blocks(q, k, k);
  if (gv.cols() == 0) return rep;
  Eigen::JacobiSVD<OperatorMatrix> svd(gv, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const Index u = q.dim_u();
  const OperatorMatrix i_u = OperatorMatrix::Identity(u, u);
  const OperatorMatrix gram_t = i_u - gt.adjoint() * gt;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) < 1.0 - tol.check_tol) continue;
    ++rep.kernel_dim;
    const Eigen::VectorXcd vec = svd.matrixV().col(i);
    rep.inclusion_residual = std::max(rep.inclusion_residual, (gram_t * vec).norm());
    rep.psi12_residual = std::max(rep.psi12_residual, (b.g12 * vec).norm());
    rep.agreement_residual =
        std::max(rep.agreement_residual, (gt * vec - b.g22 * vec).norm());
  }
  rep.holds = rep.inclusion_residual <= 10 * tol.check_tol;
  return rep;
}

BoundsReport bounds_check(const RedhefferQuadruple& q, const SchurParameter& v,
                          const Eigen::VectorXcd& u, Index k, const ToleranceConfig& tol) {
  check_parameter_dims(q, v);
  if (u.size() != q.dim_u()) fail(Errc::shape_mismatch, "test vector dimension");
  const OperatorMatrix mv = open_ball_mult_op(v, k, tol);
  const auto b = truncated_blocks(q, k, k);
  BoundsReport rep;
  rep.mv_norm = op::operator_norm(mv);
  const Index ne = mv.cols();
  const OperatorMatrix a = OperatorMatrix::Identity(ne, ne) - b.m11 * mv;
  const OperatorMatrix inner = lu_solve(a, b.g12, Errc::fraction_singular, "resolvent");
  const Eigen::VectorXcd hu = b.g22 * u + b.m21 * (mv * (inner * u));
  rep.lhs = hu.squaredNorm();
  const double u2 = u.squaredNorm();
  const double g12u = (b.g12 * u).squaredNorm();
  const double g22u = (b.g22 * u).squaredNorm();
  const double denom = op::operator_norm(a);
  rep.rhs1 = u2 - (1.0 - rep.mv_norm * rep.mv_norm) / (denom * denom) * g12u;
  const double ratio = (1.0 - rep.mv_norm) / (1.0 + rep.mv_norm);
  rep.rhs2 = u2 - ratio * g12u;
  rep.column_defect = column_isometry_defect(q, k);
  if (rep.column_defect <= tol.check_tol)
    rep.rhs3 = 2.0 * rep.mv_norm / (1.0 + rep.mv_norm) * u2 + ratio * g22u;
  return rep;
}

}  // namespace rclift::red
