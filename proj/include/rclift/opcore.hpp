// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rclift/types.hpp"

namespace rclift::op {

enum class OperatorClass {
  strict_contraction,
  contraction,
  isometry,
  co_isometry,
  unitary,
  expansion,
};

const char* class_name(OperatorClass c);

/// Largest singular value; 0 for matrices with an empty factor.
double operator_norm(const OperatorMatrix& a);

/// Largest |eigenvalue| of a (numerically) Hermitian matrix.
double herm_norm(const OperatorMatrix& a);

/// ||a* a - I|| on the domain side.
double isometry_defect(const OperatorMatrix& a);

/// ||a a* - I|| on the codomain side.
double coisometry_defect(const OperatorMatrix& a);

/// Hermitian positive square root; negative eigenvalues are clamped to
/// zero so the result is positive semidefinite by construction.
OperatorMatrix psd_sqrt(const OperatorMatrix& g);

/// Moore-Penrose pseudoinverse with relative singular-value cutoff.
OperatorMatrix pseudo_inverse(const OperatorMatrix& a, double rel_tol);

/// Orthonormal basis of the column space (relative cutoff).
OperatorMatrix range_basis(const OperatorMatrix& a, double rel_tol);

/// Orthonormal basis of range(j)^perp; j must have orthonormal columns.
OperatorMatrix complement_basis(const OperatorMatrix& j);

/// Nearest unitary factor in the polar decomposition.
OperatorMatrix polar_unitary(const OperatorMatrix& a);

/// Norm-based classification against the tolerance policy.  `unitary`
/// subsumes isometry and co-isometry; `strict_contraction` means the
/// norm stays below 1 - norm_slack.
OperatorClass classify(const OperatorMatrix& m, const ToleranceConfig& tol);

/// Defect operator D_N = (I - N*N)^{1/2} of a contraction N, together
/// with an isometric embedding whose range is the defect space.
struct DefectData {
  OperatorMatrix defect_operator;  ///< square on dom(N)
  OperatorMatrix embedding;        ///< dom(N) x rank, orthonormal columns
  Index rank = 0;
};

DefectData defect(const OperatorMatrix& n, const ToleranceConfig& tol);

/// Minimal-norm solution of g1 * x = g2.  Throws `no_factorization`
/// when range(g2) is not contained in range(g1) within tolerance.
OperatorMatrix douglas_solve(const OperatorMatrix& g1, const OperatorMatrix& g2,
                             const ToleranceConfig& tol);

/// Solves defect_operator * (embedding * phi) = m for phi expressed in
/// the embedded defect basis and checks that phi is a co-isometry onto
/// the defect space.
OperatorMatrix parrott_coisometry_solve(const DefectData& dstar, const OperatorMatrix& m,
                                        const ToleranceConfig& tol);

}  // namespace rclift::op
