// SPDX-License-Identifier: Apache-2.0

#include "rclift/systems.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace rclift::sys {

OperatorMatrix LinearSystem::system_matrix() const {
  const Index x = state_dim(), u = input_dim(), y = output_dim();
  OperatorMatrix s(x + y, x + u);
  s.topLeftCorner(x, x) = state_op;
  s.topRightCorner(x, u) = input_op;
  s.bottomLeftCorner(y, x) = output_op;
  s.bottomRightCorner(y, u) = feed_op;
  return s;
}

void LinearSystem::check_shapes() const {
  if (state_op.rows() != state_op.cols() || input_op.rows() != state_op.rows() ||
      output_op.cols() != state_op.cols() || feed_op.rows() != output_op.rows() ||
      feed_op.cols() != input_op.cols())
    fail(Errc::shape_mismatch, "system matrix does not assemble");
}

namespace {

// (I - lambda Z)^{-1} * rhs with a singularity guard.
OperatorMatrix resolvent_apply(const OperatorMatrix& z, Complex lambda,
                               const OperatorMatrix& rhs) {
  const Index n = z.rows();
  if (n == 0) return rhs;
  OperatorMatrix a = OperatorMatrix::Identity(n, n) - lambda * z;
  Eigen::FullPivLU<OperatorMatrix> lu(a);
  if (!lu.isInvertible())
    fail(Errc::resolvent_singular, "I - lambda Z is numerically singular");
  return lu.solve(rhs);
}

}  // namespace

OperatorMatrix transfer_eval(const LinearSystem& s, Complex lambda) {
  s.check_shapes();
  if (std::abs(lambda) >= 1.0)
    fail(Errc::resolvent_singular, "evaluation point outside the open unit disc");
  return s.feed_op + lambda * s.output_op * resolvent_apply(s.state_op, lambda, s.input_op);
}

OperatorMatrix observability_eval(const LinearSystem& s, Complex lambda) {
  s.check_shapes();
  if (std::abs(lambda) >= 1.0)
    fail(Errc::resolvent_singular, "evaluation point outside the open unit disc");
  const Index x = s.state_dim();
  return s.output_op * resolvent_apply(s.state_op, lambda, OperatorMatrix::Identity(x, x));
}

TaylorData taylor(const LinearSystem& s, Index n) {
  s.check_shapes();
  TaylorData td;
  td.f.reserve(static_cast<size_t>(n) + 1);
  td.w.reserve(static_cast<size_t>(n) + 1);
  td.f.push_back(s.feed_op);
  td.w.push_back(s.output_op);
  OperatorMatrix czk = s.output_op;  // C Z^k
  for (Index k = 1; k <= n; ++k) {
    td.f.push_back(czk * s.input_op);  // C Z^{k-1} B
    czk = czk * s.state_op;
    td.w.push_back(czk);
  }
  return td;
}

OperatorMatrix toeplitz_block(const std::vector<OperatorMatrix>& coeffs, Index k_in,
                              Index k_out) {
  if (coeffs.empty()) fail(Errc::bad_dims, "toeplitz_block needs at least one coefficient");
  const Index y = coeffs[0].rows(), u = coeffs[0].cols();
  OperatorMatrix m = OperatorMatrix::Zero((k_out + 1) * y, (k_in + 1) * u);
  for (Index i = 0; i <= k_out; ++i)
    for (Index j = 0; j <= std::min(i, k_in); ++j) {
      const size_t d = static_cast<size_t>(i - j);
      if (d < coeffs.size()) m.block(i * y, j * u, y, u) = coeffs[d];
    }
  return m;
}

HardyPair truncated_ops(const LinearSystem& s, Index k_in, Index k_out) {
  if (k_out < 0) k_out = k_in;
  if (k_in < 0) fail(Errc::bad_dims, "negative truncation degree");
  const TaylorData td = taylor(s, k_out);
  const Index y = s.output_dim(), u = s.input_dim(), x = s.state_dim();
  HardyPair pair;
  pair.mult.op = toeplitz_block(td.f, k_in, k_out);
  pair.mult.out_degree = k_out;
  pair.mult.in_degree = k_in;
  pair.mult.out_block = y;
  pair.mult.in_block = u;
  pair.mult.domain_is_hardy = true;
  OperatorMatrix gw((k_out + 1) * y, x);
  for (Index k = 0; k <= k_out; ++k) gw.middleRows(k * y, y) = td.w[static_cast<size_t>(k)];
  pair.obs.op = gw;
  pair.obs.out_degree = k_out;
  pair.obs.in_degree = 0;
  pair.obs.out_block = y;
  pair.obs.in_block = x;
  pair.obs.domain_is_hardy = false;
  return pair;
}

StabilityResult strong_stability(const OperatorMatrix& z, const ToleranceConfig& tol) {
  if (z.rows() != z.cols()) fail(Errc::shape_mismatch, "state operator must be square");
  StabilityResult res;
  if (z.rows() == 0) {
    res.stable = true;
    return res;
  }
  Eigen::ComplexEigenSolver<OperatorMatrix> es(z, false);
  res.spectral_radius = es.eigenvalues().cwiseAbs().maxCoeff();
  res.stable = res.spectral_radius < 1.0 - tol.rank_tol;
  return res;
}

OperatorMatrix unobservable_subspace(const LinearSystem& s, const ToleranceConfig& tol) {
  s.check_shapes();
  const Index x = s.state_dim(), y = s.output_dim();
  if (x == 0) return OperatorMatrix(0, 0);
  // In finite dimension the kernel stabilizes after dim X powers.
  OperatorMatrix obs(x * y, x);
  OperatorMatrix czk = s.output_op;
  for (Index k = 0; k < x; ++k) {
    obs.middleRows(k * y, y) = czk;
    czk = czk * s.state_op;
  }
  if (obs.rows() == 0) return OperatorMatrix::Identity(x, x);
  Eigen::JacobiSVD<OperatorMatrix> svd(obs, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = sv.size() == 0 ? 0.0 : tol.rank_tol * sv(0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(x - rank);
}

LinearSystem observable_reduction(const LinearSystem& s, const ToleranceConfig& tol) {
  const op::OperatorClass cls = op::classify(s.system_matrix(), tol);
  if (cls != op::OperatorClass::co_isometry && cls != op::OperatorClass::unitary)
    fail(Errc::not_coisometric, "observable_reduction needs a co-isometric system");
  const OperatorMatrix kernel = unobservable_subspace(s, tol);
  if (kernel.cols() == 0) return s;
  const OperatorMatrix theta = op::complement_basis(kernel);
  LinearSystem r;
  r.state_op = theta.adjoint() * s.state_op * theta;
  r.input_op = theta.adjoint() * s.input_op;
  r.output_op = s.output_op * theta;
  r.feed_op = s.feed_op;
  return r;
}

std::optional<OperatorMatrix> unitary_equivalence(const LinearSystem& s1,
                                                  const LinearSystem& s2,
                                                  const ToleranceConfig& tol) {
  s1.check_shapes();
  s2.check_shapes();
  if (s1.input_dim() != s2.input_dim() || s1.output_dim() != s2.output_dim())
    fail(Errc::shape_mismatch, "input/output spaces differ");
  for (const LinearSystem* s : {&s1, &s2}) {
    const op::OperatorClass cls = op::classify(s->system_matrix(), tol);
    if (cls != op::OperatorClass::co_isometry && cls != op::OperatorClass::unitary)
      fail(Errc::not_coisometric, "unitary_equivalence needs co-isometric systems");
    if (unobservable_subspace(*s, tol).cols() != 0)
      fail(Errc::not_observable, "unitary_equivalence needs observable systems");
  }
  const Index x1 = s1.state_dim(), x2 = s2.state_dim();
  // Transfer functions of observable realizations agree iff the Taylor
  // coefficients agree up to the combined state dimension.
  const Index deg = x1 + x2;
  const TaylorData t1 = taylor(s1, deg), t2 = taylor(s2, deg);
  for (Index k = 0; k <= deg; ++k)
    if (op::operator_norm(t1.f[static_cast<size_t>(k)] - t2.f[static_cast<size_t>(k)]) >
        tol.check_tol)
      return std::nullopt;
  if (x1 != x2) return std::nullopt;
  const Index big = std::max<Index>(std::max(x1, x2), 1);
  const OperatorMatrix g1 = truncated_ops(s1, big).obs.op;
  const OperatorMatrix g2 = truncated_ops(s2, big).obs.op;
  // Gamma_{W1} = Gamma_{W2} Theta; re-orthogonalize the least-squares
  // solution so the result is exactly unitary.
  OperatorMatrix theta = op::polar_unitary(op::pseudo_inverse(g2, tol.rank_tol) * g1);
  const double scale = 1.0 + op::operator_norm(s1.system_matrix());
  const double resid =
      std::max({op::operator_norm(theta * s1.state_op - s2.state_op * theta),
                op::operator_norm(s1.output_op - s2.output_op * theta),
                op::operator_norm(theta * s1.input_op - s2.input_op)});
  if (resid > 100 * tol.check_tol * scale) return std::nullopt;
  return theta;
}

}  // namespace rclift::sys
