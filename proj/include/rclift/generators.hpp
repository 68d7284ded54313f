// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

#include "rclift/lifting.hpp"

namespace rclift::gen {

/// xoshiro256++ seeded through splitmix64, normals via Box-Muller on
/// 53-bit uniforms.  The whole chain is fixed arithmetic on uint64/double,
/// so identical seeds reproduce identical instances on any platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform();  ///< [0, 1)
  double normal();
  Complex normal_complex();  ///< unit-variance complex Gaussian

  /// Deterministic child stream (for retry chains inside generators).
  Rng fork();

private:
  std::array<std::uint64_t, 4> s_{};
  double cached_ = 0.0;
  bool has_cached_ = false;
};

OperatorMatrix gaussian(Rng& rng, Index rows, Index cols);

/// Haar-like unitary from the QR factorization with phase-normalized R.
OperatorMatrix unitary(Rng& rng, Index n);

/// rows x cols matrix with orthonormal columns (rows >= cols).
OperatorMatrix isometry(Rng& rng, Index rows, Index cols);

/// Gaussian matrix rescaled to the exact target operator norm.
OperatorMatrix contraction(Rng& rng, Index rows, Index cols, double norm);

struct OmegaOptions {
  bool isometric = false;
  double norm = 0.8;      ///< target norm when not isometric
  double rho_max = -1.0;  ///< cap on the spectral radius of omega2 P_F, if >= 0
  bool identity_f = false;  ///< embed F as the leading coordinates of D_A
};

/// Random underlying contraction F -> D_{T'} (+) D_A with dim F = f <= u.
/// With rho_max set, the Y-rows are reweighted until the state operator's
/// spectral radius falls below the cap (needs y >= 1).
lift::UnderlyingContraction random_omega(Rng& rng, Index dim_y, Index dim_u, Index dim_f,
                                         const OmegaOptions& opts, const ToleranceConfig& tol);

/// Strictly contractive omega arranged so the compressed observability
/// column has a singular-value floor and the central column stays away
/// from norm one (the strict regime of the maximum principle).
lift::UnderlyingContraction omega_strict_margin(Rng& rng, Index dim_y, Index dim_f,
                                                Index dim_g, const ToleranceConfig& tol);

/// Isometric omega with a distinguished direction u0 in F killed by omega2
/// and mapped isometrically into D_{T'} by omega1, so the transformed
/// column through u0 attains norm one at every truncation.
lift::UnderlyingContraction omega_norm_attaining(Rng& rng, Index dim_y, Index dim_u,
                                                 Index dim_f, const ToleranceConfig& tol);

/// Normal-form data set of omega, optionally dressed by random unitaries on
/// H', H and H0 (which leaves the lifting structure intact).
lift::LiftingDataSet dressed_data_set(Rng& rng, const lift::UnderlyingContraction& w,
                                      bool dress, const ToleranceConfig& tol, Index k = 16);

/// Relaxation-shaped data set on V^{n-1} -> V^n: R, Q the truncation /
/// shift pair scaled by c, T' a random contraction, A the block row
/// [A0, c T' A0, ...] rescaled to the target norm.
lift::LiftingDataSet classical_data_set(Rng& rng, Index dim_v, Index n_blocks, double a_norm,
                                        double c, const ToleranceConfig& tol, Index k = 16);

red::SchurParameter schur_constant(Rng& rng, Index dim_e, Index dim_e_prime, double norm,
                                   const ToleranceConfig& tol);
red::SchurParameter schur_realized(Rng& rng, Index dim_e, Index dim_e_prime, Index dim_x,
                                   double norm, const ToleranceConfig& tol);

/// Random co-isometric system (needs dim_u >= dim_y).
sys::LinearSystem coisometric_system(Rng& rng, Index dim_x, Index dim_u, Index dim_y);

/// Same system conjugated by a random state-space unitary.
sys::LinearSystem conjugate_system(Rng& rng, const sys::LinearSystem& s);

/// Direct sum with a unitary state block invisible from the output; stays
/// co-isometric and keeps the transfer function.
sys::LinearSystem pad_unobservable(Rng& rng, const sys::LinearSystem& s, Index pad);

/// Quadruple of omega with the E / E' spaces dressed by random unitaries;
/// with enlarge > 0 the input space E' is widened by composing with a
/// random co-isometry, which adds a kernel to phi in the inverse direction.
red::RedhefferQuadruple dressed_quadruple(Rng& rng, const lift::UnderlyingContraction& w,
                                          Index enlarge, const ToleranceConfig& tol);

/// omega conjugated by the F-reducing unitary theta (acting as theta_f on F
/// and identity-or-theta_g on the complement).
lift::UnderlyingContraction conjugate_omega(const lift::UnderlyingContraction& w,
                                            const OperatorMatrix& theta);

/// F-reducing unitary assembled from unitaries on F and its complement.
OperatorMatrix f_reducing_unitary(Rng& rng, const lift::UnderlyingContraction& w);

}  // namespace rclift::gen
