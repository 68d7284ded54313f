// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rclift/redheffer.hpp"

namespace rclift::lift {

/// The five-operator data of a relaxed lifting problem; the isometric
/// lifting of T' is always the canonical shift-type lifting and is derived,
/// not stored.  Defect data for A and T' fixes the coordinates used for
/// everything downstream.
struct LiftingDataSet {
  OperatorMatrix a;        ///< A : H -> H'
  OperatorMatrix t_prime;  ///< T' : H' -> H'
  OperatorMatrix r;        ///< R : H0 -> H
  OperatorMatrix q;        ///< Q : H0 -> H
  op::DefectData def_a;
  op::DefectData def_t;
  Index k = 16;  ///< truncation degree of the lifted Hardy space

  Index dim_h() const { return a.cols(); }
  Index dim_h_prime() const { return a.rows(); }
  Index dim_h0() const { return r.cols(); }
};

LiftingDataSet make_data_set(OperatorMatrix a, OperatorMatrix t_prime, OperatorMatrix r,
                             OperatorMatrix q, const ToleranceConfig& tol, Index k = 16);

struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Report {
  std::vector<Check> checks;
  bool pass = true;

  void add(std::string name, double residual, double tolerance);
};

/// Residuals of the intertwining identity, the order relation
/// R*R <= Q*Q, and the contractivity of A and T'.
Report validate(const LiftingDataSet& d, const ToleranceConfig& tol);

/// Canonical isometric lifting [[T', 0], [E D_{T'}, S]] on H' (+) the
/// degree-truncated Hardy space of the defect space of T'.  The truncated
/// forward shift drops the top degree, so the lifted operator is isometric
/// on everything below the truncation edge.
OperatorMatrix schaffer_lifting(const OperatorMatrix& t_prime, const op::DefectData& def_t,
                                Index k);

/// Contraction extracted from a data set, split into the row into the
/// defect space of T' and the row into the defect space of A.  F is the
/// column space of D_A Q, carried as an explicit isometric embedding.
struct UnderlyingContraction {
  OperatorMatrix omega1;       ///< F -> D_{T'} coordinates
  OperatorMatrix omega2;       ///< F -> D_A coordinates
  OperatorMatrix f_embedding;  ///< isometry F -> D_A coordinates

  Index dim_dt() const { return omega1.rows(); }
  Index dim_da() const { return omega2.rows(); }
  Index dim_f() const { return f_embedding.cols(); }

  /// [omega1; omega2] : F -> D_{T'} (+) D_A.
  OperatorMatrix stacked() const;
};

UnderlyingContraction underlying_contraction(const LiftingDataSet& d,
                                             const ToleranceConfig& tol);

/// Data set with A = [I 0] co-isometric, T' = 0, R = omega, Q the
/// F-embedding into the second summand; its underlying contraction is the
/// given omega again.
LiftingDataSet omega_to_data_set(const UnderlyingContraction& w, const ToleranceConfig& tol,
                                 Index k = 16);

/// Coefficient quadruple of the data set, realized by the normal-form
/// system with state space D_A, state operator omega2 P_F, input column
/// through the defect of omega*, and outputs split G (+) D_{T'}.
red::RedhefferQuadruple phi_coeffs(const UnderlyingContraction& w,
                                   const ToleranceConfig& tol);

/// Contraction [A; Gamma D_A] stacked over H' and the truncated Hardy space.
struct ContractiveInterpolant {
  OperatorMatrix a_part;
  sys::TruncatedHardyOperator gamma;  ///< D_A coordinates -> truncated H^2(D_{T'})

  OperatorMatrix stacked(const LiftingDataSet& d) const;
};

ContractiveInterpolant interpolant(const LiftingDataSet& d, const red::RedhefferQuadruple& q,
                                   const red::SchurParameter& v, Index k,
                                   const ToleranceConfig& tol);

/// Checks the two interpolation identities and contractivity; the shift
/// identity is evaluated strictly below the truncation edge where it is
/// exact.
Report verify_interpolant(const ContractiveInterpolant& b, const LiftingDataSet& d, Index k,
                          const ToleranceConfig& tol);

struct OmegaB {
  OperatorMatrix omega_b;  ///< F_B -> defect-of-Gamma coordinates
  Index f_b_rank = 0;
  Index defect_rank = 0;
  op::OperatorClass cls = op::OperatorClass::contraction;
  double residual = 0.0;
};

/// The contraction omega_B with omega_B D_Gamma|_F = D_Gamma omega2;
/// whether it is isometric tracks whether omega is, independently of the
/// interpolant.
OmegaB omega_b(const LiftingDataSet& d, const ContractiveInterpolant& b,
               const ToleranceConfig& tol);

/// True iff the parameter set producing this interpolant is a singleton:
/// F_B exhausts the defect space of Gamma or omega_B is co-isometric.
bool singleton_check(const LiftingDataSet& d, const ContractiveInterpolant& b,
                     const ToleranceConfig& tol);

struct DensityReport {
  std::vector<bool> dense;   ///< per degree 0..k_max
  std::vector<Index> ranks;  ///< rank of the compressed Gamma_{Psi12}
  double rho = 0.0;
  bool rho_lt_one = false;
  double column_isometry_defect = 0.0;
  double shift_invariance_residual = 0.0;
  double constants_residual = 0.0;
};

/// Ranks of the compressed Gamma_{Psi12} per degree; density at degree K
/// means full rank (K+1) dim E.  Also exercises the mechanism: the range
/// contains the constants and is backward-shift invariant.
DensityReport density_diagnostic(const red::RedhefferQuadruple& q, Index k_max,
                                 const ToleranceConfig& tol);

struct InverseResult {
  LiftingDataSet data;
  UnderlyingContraction omega;
  OperatorMatrix psi;  ///< unitary E -> G
  OperatorMatrix phi;  ///< co-isometry E' -> defect of omega*
  Report report;
};

/// Constructs a lifting data set whose coefficients reproduce the given
/// quadruple up to the unitary psi and the co-isometry phi; requires a
/// co-isometric realization with vanishing E-feedthrough.
InverseResult inverse_construction(const red::RedhefferQuadruple& q,
                                   const ToleranceConfig& tol);

struct OmegaEquivalence {
  std::optional<OperatorMatrix> theta;
  bool f_reducing = false;
  bool output_relation = false;        ///< omega1 P_F theta = omega1' P_F
  bool state_relation_theta = false;   ///< omega2 P_F theta = theta omega2' P_F
  bool state_relation_theta_star = false;  ///< same with theta* in the middle
  bool unitary_regime = false;         ///< both coefficient matrices unitary-type
};

/// Unitary equivalence of two underlying contractions on the same F,
/// decided through their normal-form realizations.  Both readings of the
/// ambiguous state relation are tested and reported.
OmegaEquivalence omega_equivalence(const UnderlyingContraction& w,
                                   const UnderlyingContraction& w2,
                                   const ToleranceConfig& tol);

}  // namespace rclift::lift
