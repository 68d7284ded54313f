// SPDX-License-Identifier: Apache-2.0

#include "rclift/lifting.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace rclift::lift {

void Report::add(std::string name, double residual, double tolerance) {
  const bool ok = residual <= tolerance;
  checks.push_back(Check{std::move(name), residual, tolerance, ok});
  pass = pass && ok;
}

LiftingDataSet make_data_set(OperatorMatrix a, OperatorMatrix t_prime, OperatorMatrix r,
                             OperatorMatrix q, const ToleranceConfig& tol, Index k) {
  if (t_prime.rows() != t_prime.cols() || t_prime.rows() != a.rows())
    fail(Errc::shape_mismatch, "T' must be square on the codomain of A");
  if (r.rows() != a.cols() || q.rows() != a.cols() || r.cols() != q.cols())
    fail(Errc::shape_mismatch, "R and Q must map a common space into the domain of A");
  if (k < 0) fail(Errc::bad_dims, "negative truncation degree");
  LiftingDataSet d;
  d.def_a = op::defect(a, tol);
  d.def_t = op::defect(t_prime, tol);
  d.a = std::move(a);
  d.t_prime = std::move(t_prime);
  d.r = std::move(r);
  d.q = std::move(q);
  d.k = k;
  return d;
}

Report validate(const LiftingDataSet& d, const ToleranceConfig& tol) {
  Report rep;
  rep.add("intertwining:commute", op::operator_norm(d.t_prime * d.a * d.r - d.a * d.q),
          tol.check_tol);
  const Index h0 = d.dim_h0();
  double order_violation = 0.0;
  if (h0 > 0) {
    OperatorMatrix gap = d.q.adjoint() * d.q - d.r.adjoint() * d.r;
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(0.5 * (gap + gap.adjoint()),
                                                     Eigen::EigenvaluesOnly);
    order_violation = std::max(0.0, -es.eigenvalues().minCoeff());
  }
  rep.add("intertwining:order", order_violation, tol.check_tol);
  rep.add("contraction:A", std::max(0.0, op::operator_norm(d.a) - 1.0), tol.check_tol);
  rep.add("contraction:Tprime", std::max(0.0, op::operator_norm(d.t_prime) - 1.0),
          tol.check_tol);
  return rep;
}

OperatorMatrix schaffer_lifting(const OperatorMatrix& t_prime, const op::DefectData& def_t,
                                Index k) {
  const Index hp = t_prime.rows();
  const Index dt = def_t.rank;
  const Index m = hp + (k + 1) * dt;
  OperatorMatrix u = OperatorMatrix::Zero(m, m);
  u.topLeftCorner(hp, hp) = t_prime;
  // Degree-0 embedding of D_{T'} in defect coordinates.
  u.block(hp, 0, dt, hp) = def_t.embedding.adjoint() * def_t.defect_operator;
  for (Index d = 1; d <= k; ++d)
    u.block(hp + d * dt, hp + (d - 1) * dt, dt, dt) = OperatorMatrix::Identity(dt, dt);
  return u;
}

OperatorMatrix UnderlyingContraction::stacked() const {
  OperatorMatrix w(omega1.rows() + omega2.rows(), omega1.cols());
  w.topRows(omega1.rows()) = omega1;
  w.bottomRows(omega2.rows()) = omega2;
  return w;
}

UnderlyingContraction underlying_contraction(const LiftingDataSet& d,
                                             const ToleranceConfig& tol) {
  const OperatorMatrix& ja = d.def_a.embedding;
  const OperatorMatrix& jt = d.def_t.embedding;
  const Index ra = d.def_a.rank, rt = d.def_t.rank;
  const OperatorMatrix daq = ja.adjoint() * (d.def_a.defect_operator * d.q);
  const OperatorMatrix jf = op::range_basis(daq, tol.rank_tol);
  OperatorMatrix target(rt + ra, d.dim_h0());
  target.topRows(rt) = jt.adjoint() * (d.def_t.defect_operator * (d.a * d.r));
  target.bottomRows(ra) = ja.adjoint() * (d.def_a.defect_operator * d.r);
  // The extraction is a least-squares solve on the range of D_A Q; the
  // residual certifies that the data actually intertwines.
  const OperatorMatrix x = target * op::pseudo_inverse(daq, tol.rank_tol);
  const double resid = op::operator_norm(x * daq - target);
  if (resid > tol.check_tol)
    fail(Errc::inconsistent_data,
         "extracted map does not reproduce the data, residual " + std::to_string(resid));
  const OperatorMatrix w = x * jf;
  if (op::operator_norm(w) > 1.0 + tol.check_tol)
    fail(Errc::inconsistent_data, "extracted map is not a contraction");
  UnderlyingContraction out;
  out.omega1 = w.topRows(rt);
  out.omega2 = w.bottomRows(ra);
  out.f_embedding = jf;
  return out;
}

LiftingDataSet omega_to_data_set(const UnderlyingContraction& w, const ToleranceConfig& tol,
                                 Index k) {
  const Index y = w.dim_dt(), u = w.dim_da(), f = w.dim_f();
  OperatorMatrix a(y, y + u);
  a << OperatorMatrix::Identity(y, y), OperatorMatrix::Zero(y, u);
  OperatorMatrix q(y + u, f);
  q.topRows(y).setZero();
  q.bottomRows(u) = w.f_embedding;
  return make_data_set(a, OperatorMatrix::Zero(y, y), w.stacked(), q, tol, k);
}

red::RedhefferQuadruple phi_coeffs(const UnderlyingContraction& w,
                                   const ToleranceConfig& tol) {
  const Index rt = w.dim_dt(), ra = w.dim_da();
  const op::DefectData dw = op::defect(w.stacked().adjoint(), tol);
  const OperatorMatrix dj = dw.defect_operator * dw.embedding;  // (rt+ra) x rw
  const OperatorMatrix& jf = w.f_embedding;
  const OperatorMatrix jg = op::complement_basis(jf);
  const Index g = jg.cols(), rw = dw.rank;
  sys::LinearSystem s;
  s.state_op = w.omega2 * jf.adjoint();
  s.input_op = dj.bottomRows(ra);
  s.output_op = OperatorMatrix(g + rt, ra);
  s.output_op.topRows(g) = jg.adjoint();
  s.output_op.bottomRows(rt) = w.omega1 * jf.adjoint();
  s.feed_op = OperatorMatrix::Zero(g + rt, rw);
  s.feed_op.bottomRows(rt) = dj.topRows(rt);
  return red::RedhefferQuadruple(std::move(s), g, tol);
}

OperatorMatrix ContractiveInterpolant::stacked(const LiftingDataSet& d) const {
  const OperatorMatrix da_coords = d.def_a.embedding.adjoint() * d.def_a.defect_operator;
  OperatorMatrix b(a_part.rows() + gamma.op.rows(), a_part.cols());
  b.topRows(a_part.rows()) = a_part;
  b.bottomRows(gamma.op.rows()) = gamma.op * da_coords;
  return b;
}

ContractiveInterpolant interpolant(const LiftingDataSet& d, const red::RedhefferQuadruple& q,
                                   const red::SchurParameter& v, Index k,
                                   const ToleranceConfig& tol) {
  if (q.dim_u() != d.def_a.rank || q.dim_y() != d.def_t.rank)
    fail(Errc::shape_mismatch, "quadruple does not match the data set defect spaces");
  ContractiveInterpolant b;
  b.a_part = d.a;
  b.gamma = red::transform_gamma(q, v, k, tol);
  return b;
}

Report verify_interpolant(const ContractiveInterpolant& b, const LiftingDataSet& d, Index k,
                          const ToleranceConfig& tol) {
  if (b.gamma.out_degree != k)
    fail(Errc::shape_mismatch, "interpolant truncation degree does not match");
  const Index hp = d.dim_h_prime();
  const Index rt = d.def_t.rank;
  const OperatorMatrix bf = b.stacked(d);
  const OperatorMatrix uprime = schaffer_lifting(d.t_prime, d.def_t, k);
  Report rep;
  rep.add("interpolation:projection", op::operator_norm(bf.topRows(hp) - d.a),
          tol.check_tol);
  const OperatorMatrix gap = uprime * bf * d.r - bf * d.q;
  // The forward shift raises the degree by one, so the identity is exact
  // only below the truncation edge.
  rep.add("interpolation:shift", op::operator_norm(gap.topRows(hp + k * rt)), tol.check_tol);
  rep.add("interpolation:contraction", std::max(0.0, op::operator_norm(bf) - 1.0),
          tol.check_tol);
  return rep;
}

OmegaB omega_b(const LiftingDataSet& d, const ContractiveInterpolant& b,
               const ToleranceConfig& tol) {
  const UnderlyingContraction w = underlying_contraction(d, tol);
  const op::DefectData dg = op::defect(b.gamma.op, tol);
  const OperatorMatrix m = dg.defect_operator * w.f_embedding;
  const OperatorMatrix t = dg.defect_operator * w.omega2;
  const OperatorMatrix jfb = op::range_basis(m, tol.rank_tol);
  const OperatorMatrix y = t * op::pseudo_inverse(m, tol.rank_tol);
  OmegaB out;
  out.residual = op::operator_norm(y * m - t);
  if (out.residual > tol.check_tol)
    fail(Errc::inconsistent_data, "omega_B relation has residual " +
                                      std::to_string(out.residual));
  out.omega_b = dg.embedding.adjoint() * y * jfb;
  out.f_b_rank = jfb.cols();
  out.defect_rank = dg.rank;
  out.cls = op::classify(out.omega_b, tol);
  return out;
}

bool singleton_check(const LiftingDataSet& d, const ContractiveInterpolant& b,
                     const ToleranceConfig& tol) {
  const OmegaB ob = omega_b(d, b, tol);
  return ob.f_b_rank == ob.defect_rank || ob.cls == op::OperatorClass::co_isometry ||
         ob.cls == op::OperatorClass::unitary;
}

DensityReport density_diagnostic(const red::RedhefferQuadruple& q, Index k_max,
                                 const ToleranceConfig& tol) {
  DensityReport rep;
  const Index e = q.dim_e();
  const red::CoefficientMatrix cm = red::coefficient_matrix(q, k_max);
  const OperatorMatrix& g12 = cm.blocks.a12;
  for (Index k = 0; k <= k_max; ++k) {
    const OperatorMatrix sub = g12.topRows((k + 1) * e);
    Index rank = 0;
    if (sub.rows() > 0 && sub.cols() > 0) {
      Eigen::JacobiSVD<OperatorMatrix> svd(sub);
      const Eigen::VectorXd& sv = svd.singularValues();
      const double cutoff = tol.rank_tol * (sv.size() ? sv(0) : 0.0);
      while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    }
    rep.ranks.push_back(rank);
    rep.dense.push_back(rank == (k + 1) * e);
  }
  const sys::StabilityResult st = sys::strong_stability(q.realization().state_op, tol);
  rep.rho = st.spectral_radius;
  rep.rho_lt_one = st.stable;
  rep.column_isometry_defect = red::column_isometry_defect(q, k_max);
  if (k_max >= 1 && e > 0) {
    const OperatorMatrix low = op::range_basis(g12.topRows(k_max * e), tol.rank_tol);
    const OperatorMatrix shifted = g12.bottomRows(k_max * e);  // backward shift
    rep.shift_invariance_residual =
        op::operator_norm(shifted - low * (low.adjoint() * shifted));
  }
  if (e > 0) {
    const OperatorMatrix full = op::range_basis(g12, tol.rank_tol);
    OperatorMatrix constants = OperatorMatrix::Zero((k_max + 1) * e, e);
    constants.topRows(e) = OperatorMatrix::Identity(e, e);
    rep.constants_residual =
        op::operator_norm(constants - full * (full.adjoint() * constants));
  }
  return rep;
}

InverseResult inverse_construction(const red::RedhefferQuadruple& q,
                                   const ToleranceConfig& tol) {
  const sys::LinearSystem& n = q.realization();
  const Index e = q.dim_e(), y = q.dim_y(), x = q.dim_u(), ep = q.dim_e_prime();
  const op::OperatorClass cls = op::classify(n.system_matrix(), tol);
  if (cls != op::OperatorClass::co_isometry && cls != op::OperatorClass::unitary)
    fail(Errc::not_coisometric, "inverse construction needs a co-isometric realization");
  if (op::operator_norm(n.feed_op.topRows(e)) > tol.check_tol)
    fail(Errc::feedthrough_nonzero, "Psi11(0) must vanish");
  const OperatorMatrix c1 = n.output_op.topRows(e);
  if (op::coisometry_defect(c1) > tol.check_tol)
    fail(Errc::kernel_extraction, "Psi12(0) is not co-isometric");
  OperatorMatrix jf(x, x - e), jg(x, e);
  if (x > 0 && e > 0) {
    Eigen::JacobiSVD<OperatorMatrix> svd(c1, Eigen::ComputeFullV);
    jg = svd.matrixV().leftCols(e);
    jf = svd.matrixV().rightCols(x - e);
  } else {
    jf = OperatorMatrix::Identity(x, x);
    jg = OperatorMatrix(x, 0);
  }
  InverseResult out;
  out.omega.omega1 = n.output_op.bottomRows(y) * jf;
  out.omega.omega2 = n.state_op * jf;
  out.omega.f_embedding = jf;
  out.psi = c1 * jg;
  if (op::isometry_defect(out.psi) > tol.check_tol ||
      op::coisometry_defect(out.psi) > tol.check_tol)
    fail(Errc::kernel_extraction, "psi is not unitary");
  const op::DefectData dw = op::defect(out.omega.stacked().adjoint(), tol);
  OperatorMatrix target(y + x, ep);
  target.topRows(y) = n.feed_op.bottomRows(y);
  target.bottomRows(x) = n.input_op;
  out.phi = op::parrott_coisometry_solve(dw, target, tol);
  out.data = omega_to_data_set(out.omega, tol);
  const red::RedhefferQuadruple phi_q = phi_coeffs(out.omega, tol);
  // psi and phi must carry the given coefficients onto the constructed ones
  // pointwise on a sample of the disc.
  double max_resid = 0.0;
  for (int j = 0; j < 10; ++j) {
    const Complex lambda = 0.7 * std::exp(Complex(0, 2.0 * M_PI * j / 10.0));
    const auto given = q.eval(lambda);
    const auto built = phi_q.eval(lambda);
    OperatorMatrix lhs(e + y, ep + x), rhs(e + y, ep + x);
    lhs.topLeftCorner(e, ep) = out.psi * given.p11;
    lhs.topRightCorner(e, x) = out.psi * given.p12;
    lhs.bottomLeftCorner(y, ep) = given.p21;
    lhs.bottomRightCorner(y, x) = given.p22;
    rhs.topLeftCorner(e, ep) = built.p11 * out.phi;
    rhs.topRightCorner(e, x) = built.p12;
    rhs.bottomLeftCorner(y, ep) = built.p21 * out.phi;
    rhs.bottomRightCorner(y, x) = built.p22;
    max_resid = std::max(max_resid, op::operator_norm(lhs - rhs));
  }
  out.report.add("inverse:coefs_relation", max_resid, tol.check_tol);
  out.report.add("inverse:phi_coisometry", op::coisometry_defect(out.phi), tol.check_tol);
  const bool unitary_regime =
      (cls == op::OperatorClass::unitary ||
       op::isometry_defect(n.system_matrix()) <= tol.check_tol) &&
      sys::strong_stability(n.state_op, tol).stable;
  if (unitary_regime)
    out.report.add("inverse:phi_unitary", op::isometry_defect(out.phi), tol.check_tol);
  return out;
}

namespace {

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b) {
  OperatorMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

Eigen::VectorXcd vectorize(const OperatorMatrix& a) {
  return Eigen::Map<const Eigen::VectorXcd>(a.data(), a.size());
}

OperatorMatrix unvectorize(const Eigen::VectorXcd& v, Index rows, Index cols) {
  return Eigen::Map<const OperatorMatrix>(v.data(), rows, cols);
}

}  // namespace

OmegaEquivalence omega_equivalence(const UnderlyingContraction& w,
                                   const UnderlyingContraction& w2,
                                   const ToleranceConfig& tol) {
  if (w.dim_da() != w2.dim_da() || w.dim_dt() != w2.dim_dt() || w.dim_f() != w2.dim_f())
    fail(Errc::shape_mismatch, "contractions act between different spaces");
  const Index u = w.dim_da();
  const OperatorMatrix pf = w.f_embedding * w.f_embedding.adjoint();
  const OperatorMatrix pf2 = w2.f_embedding * w2.f_embedding.adjoint();
  if (op::operator_norm(pf - pf2) > tol.check_tol)
    fail(Errc::shape_mismatch, "contractions are not defined on the same subspace F");

  OmegaEquivalence out;
  const sys::StabilityResult st1 =
      sys::strong_stability(w.omega2 * w.f_embedding.adjoint(), tol);
  const sys::StabilityResult st2 =
      sys::strong_stability(w2.omega2 * w2.f_embedding.adjoint(), tol);
  out.unitary_regime = op::isometry_defect(w.stacked()) <= tol.check_tol &&
                       op::isometry_defect(w2.stacked()) <= tol.check_tol && st1.stable &&
                       st2.stable;

  // Solve the intertwining relations directly as a linear system in Theta:
  //   C theta = C', Z theta = theta Z', P_G theta P_F = 0, P_F theta P_G = 0
  // with C = omega1 P_F, Z = omega2 P_F.  Alternating projection onto the
  // affine solution set and the unitary group; one step suffices when the
  // solution is unique.
  const OperatorMatrix c = w.omega1 * w.f_embedding.adjoint();
  const OperatorMatrix c2 = w2.omega1 * w2.f_embedding.adjoint();
  const OperatorMatrix z = w.omega2 * w.f_embedding.adjoint();
  const OperatorMatrix z2 = w2.omega2 * w2.f_embedding.adjoint();
  const OperatorMatrix i_u = OperatorMatrix::Identity(u, u);
  const OperatorMatrix pg = i_u - pf;
  const Index rows_c = c.rows() * u, rows_z = u * u;
  OperatorMatrix m(rows_c + 3 * rows_z, u * u);
  m.topRows(rows_c) = kron(i_u, c);
  m.middleRows(rows_c, rows_z) = kron(i_u, z) - kron(z2.transpose(), i_u);
  m.middleRows(rows_c + rows_z, rows_z) = kron(pf.transpose(), pg);
  m.middleRows(rows_c + 2 * rows_z, rows_z) = kron(pg.transpose(), pf);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(m.rows());
  rhs.head(rows_c) = vectorize(c2);
  const OperatorMatrix m_pinv = op::pseudo_inverse(m, tol.rank_tol);

  OperatorMatrix theta = i_u;
  for (int it = 0; it < 60; ++it) {
    const Eigen::VectorXcd correction = m_pinv * (m * vectorize(theta) - rhs);
    theta = op::polar_unitary(unvectorize(vectorize(theta) - correction, u, u));
  }

  const double r_out = op::operator_norm(c * theta - c2);
  const double r_theta = op::operator_norm(z * theta - theta * z2);
  const double r_theta_star =
      op::operator_norm(z * theta.adjoint() - theta.adjoint() * z2);
  const double r_reduce = std::max(op::operator_norm(pg * theta * pf),
                                   op::operator_norm(pf * theta * pg));
  const double accept = 100 * tol.check_tol;
  out.output_relation = r_out <= accept;
  out.state_relation_theta = r_theta <= accept;
  out.state_relation_theta_star = r_theta_star <= accept;
  out.f_reducing = r_reduce <= accept;
  if (out.output_relation && out.f_reducing &&
      (out.state_relation_theta || out.state_relation_theta_star))
    out.theta = theta;
  return out;
}

}  // namespace rclift::lift
