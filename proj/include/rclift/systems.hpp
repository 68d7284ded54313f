// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "rclift/opcore.hpp"

namespace rclift::sys {

/// Discrete-time system quadruple {Z, B, C, D}.  The transfer function
/// D + z C (I - z Z)^{-1} B and the observability function C (I - z Z)^{-1}
/// are the two analytic faces of the same realization; everything analytic
/// in this library is carried by such a quadruple.
struct LinearSystem {
  OperatorMatrix state_op;   ///< Z : X -> X
  OperatorMatrix input_op;   ///< B : U -> X
  OperatorMatrix output_op;  ///< C : X -> Y
  OperatorMatrix feed_op;    ///< D : U -> Y

  Index state_dim() const { return state_op.rows(); }
  Index input_dim() const { return input_op.cols(); }
  Index output_dim() const { return output_op.rows(); }

  /// [[Z, B], [C, D]] on X (+) U -> X (+) Y.
  OperatorMatrix system_matrix() const;

  void check_shapes() const;
};

OperatorMatrix transfer_eval(const LinearSystem& s, Complex lambda);
OperatorMatrix observability_eval(const LinearSystem& s, Complex lambda);

/// f[k], w[k] for k = 0..n with f0 = D, fk = C Z^{k-1} B, wk = C Z^k.
struct TaylorData {
  std::vector<OperatorMatrix> f;
  std::vector<OperatorMatrix> w;
};

TaylorData taylor(const LinearSystem& s, Index n);

/// Block matrix between degree-truncated Hardy spaces.  Multiplication
/// operators are block lower-triangular Toeplitz in the degree index;
/// observability operators are single block columns whose domain is a
/// plain coefficient space.
struct TruncatedHardyOperator {
  OperatorMatrix op;
  Index out_degree = 0;        ///< output degrees 0..out_degree
  Index in_degree = 0;         ///< input degrees 0..in_degree (Hardy domain)
  Index out_block = 0;         ///< codomain dim per degree
  Index in_block = 0;          ///< domain dim per degree when domain_is_hardy
  bool domain_is_hardy = true; ///< false: domain is a flat coefficient space
};

/// Block lower-triangular Toeplitz matrix of the given degree coefficients.
OperatorMatrix toeplitz_block(const std::vector<OperatorMatrix>& coeffs, Index k_in,
                              Index k_out);

struct HardyPair {
  TruncatedHardyOperator mult;  ///< M_F
  TruncatedHardyOperator obs;   ///< Gamma_W
};

/// Truncations of the multiplication and observability operators.  With
/// k_out == k_in (default) the row identity of a co-isometric system is
/// exact under truncation; a taller k_out exposes the isometry defect of
/// the low-degree columns.
HardyPair truncated_ops(const LinearSystem& s, Index k_in, Index k_out = -1);

struct StabilityResult {
  bool stable = false;
  double spectral_radius = 0.0;
};

StabilityResult strong_stability(const OperatorMatrix& z, const ToleranceConfig& tol);

/// Orthonormal basis of Ker Gamma_W = intersection of Ker(C Z^k), k < dim X.
OperatorMatrix unobservable_subspace(const LinearSystem& s, const ToleranceConfig& tol);

/// Compression of a co-isometric system to the complement of Ker Gamma_W.
/// The result is observable, co-isometric and has the same transfer function.
LinearSystem observable_reduction(const LinearSystem& s, const ToleranceConfig& tol);

/// For observable co-isometric systems with matching transfer functions,
/// returns the unitary Theta with Theta Z1 = Z2 Theta, C1 = C2 Theta,
/// Theta B1 = B2; std::nullopt when the transfer functions differ.
std::optional<OperatorMatrix> unitary_equivalence(const LinearSystem& s1,
                                                  const LinearSystem& s2,
                                                  const ToleranceConfig& tol);

}  // namespace rclift::sys
