// SPDX-License-Identifier: Apache-2.0

#include "rclift/generators.hpp"

#include <Eigen/QR>
#include <cmath>

namespace rclift::gen {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& word : s_) word = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * M_PI * u2;
  cached_ = r * std::sin(t);
  has_cached_ = true;
  return r * std::cos(t);
}

Complex Rng::normal_complex() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) * M_SQRT1_2;
}

Rng Rng::fork() { return Rng(next_u64()); }

OperatorMatrix gaussian(Rng& rng, Index rows, Index cols) {
  OperatorMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal_complex();
  return m;
}

namespace {

// Thin QR with the R-diagonal phases pushed into Q; the first column of the
// result points along the first input column.
OperatorMatrix thin_q(const OperatorMatrix& a) {
  const Index rows = a.rows(), cols = a.cols();
  Eigen::HouseholderQR<OperatorMatrix> qr(a);
  OperatorMatrix q = qr.householderQ() * OperatorMatrix::Identity(rows, cols);
  const OperatorMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (Index j = 0; j < cols; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1, 0);
  }
  return q;
}

}  // namespace

OperatorMatrix unitary(Rng& rng, Index n) {
  if (n == 0) return OperatorMatrix(0, 0);
  return thin_q(gaussian(rng, n, n));
}

OperatorMatrix isometry(Rng& rng, Index rows, Index cols) {
  if (cols == 0) return OperatorMatrix(rows, 0);
  if (rows < cols) fail(Errc::bad_dims, "isometry needs rows >= cols");
  return thin_q(gaussian(rng, rows, cols));
}

OperatorMatrix contraction(Rng& rng, Index rows, Index cols, double norm) {
  OperatorMatrix g = gaussian(rng, rows, cols);
  const double s = op::operator_norm(g);
  if (s > 0) g *= norm / s;
  return g;
}

lift::UnderlyingContraction random_omega(Rng& rng, Index dim_y, Index dim_u, Index dim_f,
                                         const OmegaOptions& opts,
                                         const ToleranceConfig& tol) {
  if (dim_f > dim_u) fail(Errc::bad_dims, "F must embed into D_A");
  lift::UnderlyingContraction w;
  w.f_embedding = opts.identity_f
                      ? OperatorMatrix(OperatorMatrix::Identity(dim_u, dim_u).leftCols(dim_f))
                      : isometry(rng, dim_u, dim_f);
  if (dim_f == 0) {
    w.omega1 = OperatorMatrix(dim_y, 0);
    w.omega2 = OperatorMatrix(dim_u, 0);
    return w;
  }
  if (opts.rho_max >= 0 && dim_y == 0)
    fail(Errc::bad_dims, "cannot cap the spectral radius without Y-rows");
  const OperatorMatrix gy = gaussian(rng, dim_y, dim_f);
  const OperatorMatrix gu = gaussian(rng, dim_u, dim_f);
  double alpha = 1.0;
  for (int attempt = 0; attempt < 120; ++attempt) {
    OperatorMatrix stacked(dim_y + dim_u, dim_f);
    stacked.topRows(dim_y) = alpha * gy;
    stacked.bottomRows(dim_u) = gu;
    if (opts.isometric) {
      stacked = thin_q(stacked);
    } else {
      const double s = op::operator_norm(stacked);
      if (s > 0) stacked *= opts.norm / s;
    }
    w.omega1 = stacked.topRows(dim_y);
    w.omega2 = stacked.bottomRows(dim_u);
    if (opts.rho_max < 0) return w;
    const auto st = sys::strong_stability(w.omega2 * w.f_embedding.adjoint(), tol);
    if (st.spectral_radius <= opts.rho_max) return w;
    alpha *= 1.6;
  }
  fail(Errc::bad_dims, "spectral radius cap not reachable");
}

lift::UnderlyingContraction omega_strict_margin(Rng& rng, Index dim_y, Index dim_f,
                                                Index dim_g, const ToleranceConfig& tol) {
  (void)tol;
  if (dim_f < 1 || dim_g < dim_f) fail(Errc::bad_dims, "needs dim_g >= dim_f >= 1");
  const Index dim_u = dim_f + dim_g;
  lift::UnderlyingContraction w;
  w.f_embedding = OperatorMatrix::Identity(dim_u, dim_u).leftCols(dim_f);
  const OperatorMatrix jg = OperatorMatrix::Identity(dim_u, dim_u).rightCols(dim_g);
  // omega2 pushes F into the complement with a fixed singular-value floor,
  // keeping the whole map strictly contractive.
  w.omega2 = 0.5 * jg * isometry(rng, dim_g, dim_f) +
             0.15 * w.f_embedding * contraction(rng, dim_f, dim_f, 1.0);
  w.omega1 = contraction(rng, dim_y, dim_f, 0.55);
  return w;
}

lift::UnderlyingContraction omega_norm_attaining(Rng& rng, Index dim_y, Index dim_u,
                                                 Index dim_f, const ToleranceConfig& tol) {
  (void)tol;
  if (dim_y < 1 || dim_f < 1 || dim_f > dim_u)
    fail(Errc::bad_dims, "needs dim_y >= 1 and 1 <= dim_f <= dim_u");
  OperatorMatrix first(dim_y + dim_u, 1);
  first.setZero();
  OperatorMatrix v = gaussian(rng, dim_y, 1);
  first.topRows(dim_y) = v / v.norm();
  OperatorMatrix cols(dim_y + dim_u, dim_f);
  cols.col(0) = first;
  if (dim_f > 1) cols.rightCols(dim_f - 1) = gaussian(rng, dim_y + dim_u, dim_f - 1);
  const OperatorMatrix stacked = thin_q(cols);  // keeps column 0 up to phase
  lift::UnderlyingContraction w;
  w.omega1 = stacked.topRows(dim_y);
  w.omega2 = stacked.bottomRows(dim_u);
  w.f_embedding = isometry(rng, dim_u, dim_f);
  return w;
}

lift::LiftingDataSet dressed_data_set(Rng& rng, const lift::UnderlyingContraction& w,
                                      bool dress, const ToleranceConfig& tol, Index k) {
  lift::LiftingDataSet d = lift::omega_to_data_set(w, tol, k);
  if (!dress) return d;
  const OperatorMatrix wp = unitary(rng, d.dim_h_prime());
  const OperatorMatrix wh = unitary(rng, d.dim_h());
  const OperatorMatrix w0 = unitary(rng, d.dim_h0());
  return lift::make_data_set(wp * d.a * wh.adjoint(), wp * d.t_prime * wp.adjoint(),
                             wh * d.r * w0, wh * d.q * w0, tol, k);
}

lift::LiftingDataSet classical_data_set(Rng& rng, Index dim_v, Index n_blocks, double a_norm,
                                        double c, const ToleranceConfig& tol, Index k) {
  if (dim_v < 1 || n_blocks < 2) fail(Errc::bad_dims, "needs dim_v >= 1, n_blocks >= 2");
  const Index h = dim_v * n_blocks, h0 = dim_v * (n_blocks - 1);
  const Index hp = dim_v + 1;
  const OperatorMatrix t_prime = contraction(rng, hp, hp, 0.9);
  const OperatorMatrix a0 = gaussian(rng, hp, dim_v);
  OperatorMatrix a(hp, h);
  OperatorMatrix block = a0;
  for (Index j = 0; j < n_blocks; ++j) {
    a.middleCols(j * dim_v, dim_v) = block;
    block = c * t_prime * block;
  }
  const double s = op::operator_norm(a);
  if (s > 0) a *= a_norm / s;
  OperatorMatrix r = OperatorMatrix::Zero(h, h0), q = OperatorMatrix::Zero(h, h0);
  r.topRows(h0) = c * OperatorMatrix::Identity(h0, h0);
  q.bottomRows(h0) = OperatorMatrix::Identity(h0, h0);
  return lift::make_data_set(a, t_prime, r, q, tol, k);
}

red::SchurParameter schur_constant(Rng& rng, Index dim_e, Index dim_e_prime, double norm,
                                   const ToleranceConfig& tol) {
  return red::SchurParameter::constant(contraction(rng, dim_e_prime, dim_e, norm), tol);
}

red::SchurParameter schur_realized(Rng& rng, Index dim_e, Index dim_e_prime, Index dim_x,
                                   double norm, const ToleranceConfig& tol) {
  const OperatorMatrix s = contraction(rng, dim_x + dim_e_prime, dim_x + dim_e, 1.0);
  sys::LinearSystem sys;
  sys.state_op = s.topLeftCorner(dim_x, dim_x);
  sys.input_op = s.topRightCorner(dim_x, dim_e);
  sys.output_op = norm * s.bottomLeftCorner(dim_e_prime, dim_x);
  sys.feed_op = norm * s.bottomRightCorner(dim_e_prime, dim_e);
  return red::SchurParameter::realized(std::move(sys), norm < 1.0 - tol.norm_slack, tol);
}

sys::LinearSystem coisometric_system(Rng& rng, Index dim_x, Index dim_u, Index dim_y) {
  if (dim_u < dim_y) fail(Errc::bad_dims, "co-isometric system needs dim_u >= dim_y");
  const OperatorMatrix s = isometry(rng, dim_x + dim_u, dim_x + dim_y).adjoint();
  sys::LinearSystem out;
  out.state_op = s.topLeftCorner(dim_x, dim_x);
  out.input_op = s.topRightCorner(dim_x, dim_u);
  out.output_op = s.bottomLeftCorner(dim_y, dim_x);
  out.feed_op = s.bottomRightCorner(dim_y, dim_u);
  return out;
}

sys::LinearSystem conjugate_system(Rng& rng, const sys::LinearSystem& s) {
  const OperatorMatrix u = unitary(rng, s.state_dim());
  sys::LinearSystem out;
  out.state_op = u * s.state_op * u.adjoint();
  out.input_op = u * s.input_op;
  out.output_op = s.output_op * u.adjoint();
  out.feed_op = s.feed_op;
  return out;
}

sys::LinearSystem pad_unobservable(Rng& rng, const sys::LinearSystem& s, Index pad) {
  const Index x = s.state_dim();
  sys::LinearSystem out;
  out.state_op = OperatorMatrix::Zero(x + pad, x + pad);
  out.state_op.topLeftCorner(x, x) = s.state_op;
  out.state_op.bottomRightCorner(pad, pad) = unitary(rng, pad);
  out.input_op = OperatorMatrix::Zero(x + pad, s.input_dim());
  out.input_op.topRows(x) = s.input_op;
  out.output_op = OperatorMatrix::Zero(s.output_dim(), x + pad);
  out.output_op.leftCols(x) = s.output_op;
  out.feed_op = s.feed_op;
  return out;
}

red::RedhefferQuadruple dressed_quadruple(Rng& rng, const lift::UnderlyingContraction& w,
                                          Index enlarge, const ToleranceConfig& tol) {
  const red::RedhefferQuadruple q0 = lift::phi_coeffs(w, tol);
  const Index e = q0.dim_e(), ep = q0.dim_e_prime();
  const OperatorMatrix we = unitary(rng, e);
  OperatorMatrix input_dress;  // E'_new -> E'
  if (enlarge > 0)
    input_dress = isometry(rng, ep + enlarge, ep).adjoint();
  else
    input_dress = unitary(rng, ep);
  sys::LinearSystem s = q0.realization();
  s.input_op = s.input_op * input_dress;
  OperatorMatrix c = s.output_op;
  c.topRows(e) = we * c.topRows(e);
  s.output_op = c;
  OperatorMatrix d = s.feed_op * input_dress;
  d.topRows(e) = we * d.topRows(e);
  s.feed_op = d;
  return red::RedhefferQuadruple(std::move(s), e, tol);
}

lift::UnderlyingContraction conjugate_omega(const lift::UnderlyingContraction& w,
                                            const OperatorMatrix& theta) {
  const OperatorMatrix uf = w.f_embedding.adjoint() * theta * w.f_embedding;
  lift::UnderlyingContraction out;
  out.omega1 = w.omega1 * uf;
  out.omega2 = theta.adjoint() * w.omega2 * uf;
  out.f_embedding = w.f_embedding;
  return out;
}

OperatorMatrix f_reducing_unitary(Rng& rng, const lift::UnderlyingContraction& w) {
  const OperatorMatrix& jf = w.f_embedding;
  const OperatorMatrix jg = op::complement_basis(jf);
  return jf * unitary(rng, jf.cols()) * jf.adjoint() +
         jg * unitary(rng, jg.cols()) * jg.adjoint();
}

}  // namespace rclift::gen
