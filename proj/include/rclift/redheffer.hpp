// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rclift/systems.hpp"

namespace rclift::red {

/// Four analytic coefficients sharing one realization.  The output space
/// of the realization splits as E (+) Y at row `split`: the E-rows of the
/// transfer/observability functions are Psi11/Psi12, the Y-rows are
/// Psi21/Psi22.  The feedthrough into E must vanish, so Psi11(0) = 0.
class RedhefferQuadruple {
public:
  RedhefferQuadruple(sys::LinearSystem realization, Index split, const ToleranceConfig& tol);

  const sys::LinearSystem& realization() const { return realization_; }
  Index split() const { return split_; }

  Index dim_e() const { return split_; }
  Index dim_y() const { return realization_.output_dim() - split_; }
  Index dim_e_prime() const { return realization_.input_dim(); }
  Index dim_u() const { return realization_.state_dim(); }

  struct PointValues {
    OperatorMatrix p11, p12, p21, p22;
  };

  /// All four blocks at one point of the disc.
  PointValues eval(Complex lambda) const;

  /// Degree coefficients of the four blocks up to degree k.
  struct TaylorBlocks {
    std::vector<OperatorMatrix> f11, f21;  // multiplication coefficients
    std::vector<OperatorMatrix> w12, w22;  // observability coefficients
  };
  TaylorBlocks taylor(Index k) const;

private:
  sys::LinearSystem realization_;
  Index split_;
};

/// Schur-class free parameter: either a constant contraction E -> E' or a
/// realized analytic function with contractive system matrix.  The
/// open_ball flag marks sup-norm < 1; operations that need it re-check the
/// truncated multiplication-operator norm on entry.
class SchurParameter {
public:
  static SchurParameter constant(OperatorMatrix v, const ToleranceConfig& tol);
  static SchurParameter realized(sys::LinearSystem s, bool open_ball,
                                 const ToleranceConfig& tol);

  bool open_ball() const { return open_ball_; }
  bool is_constant() const { return !realized_.has_value(); }
  Index dim_e() const;        ///< domain
  Index dim_e_prime() const;  ///< codomain

  OperatorMatrix eval(Complex lambda) const;
  std::vector<OperatorMatrix> taylor(Index k) const;

  /// Truncated multiplication operator H^2_K(E) -> H^2_K(E').
  OperatorMatrix mult_op(Index k) const;

  const std::optional<sys::LinearSystem>& realized_system() const { return realized_; }
  const OperatorMatrix& constant_value() const { return constant_; }

private:
  SchurParameter() = default;
  OperatorMatrix constant_;
  std::optional<sys::LinearSystem> realized_;
  bool open_ball_ = false;
};

/// Zero parameter of the right dimensions (the central choice).
SchurParameter zero_parameter(const RedhefferQuadruple& q);

/// Psi22(l) + Psi21(l) V(l) (I - Psi11(l) V(l))^{-1} Psi12(l).
OperatorMatrix transform_eval(const RedhefferQuadruple& q, const SchurParameter& v,
                              Complex lambda, const ToleranceConfig& tol);

/// Truncated Gamma of the transformed function,
///   Gamma_22 + M_21 M_V (I - M_11 M_V)^{-1} Gamma_12.
/// Requires an open-ball parameter.
sys::TruncatedHardyOperator transform_gamma(const RedhefferQuadruple& q,
                                            const SchurParameter& v, Index k,
                                            const ToleranceConfig& tol);

/// Same formula without the open-ball admission check.  The resolvent is
/// unipotent at truncation because Psi11(0) = 0, so this evaluates for any
/// Schur parameter; used where sphere parameters are legitimate.
sys::TruncatedHardyOperator transform_gamma_any(const RedhefferQuadruple& q,
                                                const SchurParameter& v, Index k);

/// Generic 2x2 block operator matrix.  When used as a Redheffer factor the
/// blocks play the roles [[Z, B], [C, D]] of a feedback interconnection.
struct Blocked2x2 {
  OperatorMatrix a11, a12, a21, a22;
  OperatorMatrix assemble() const;
};

/// [[M_{Psi11}, Gamma_{Psi12}], [M_{Psi21}, Gamma_{Psi22}]] with input
/// degrees 0..k_in and output degrees 0..k_out.
struct CoefficientMatrix {
  Blocked2x2 blocks;
  Index k_in = 0, k_out = 0;
  Index dim_e = 0, dim_y = 0, dim_e_prime = 0, dim_u = 0;
  OperatorMatrix assemble() const { return blocks.assemble(); }
};

CoefficientMatrix coefficient_matrix(const RedhefferQuadruple& q, Index k);
CoefficientMatrix coefficient_matrix_rect(const RedhefferQuadruple& q, Index k_in,
                                          Index k_out);

/// ||K0 K0* - I|| of the square truncation; exactly the roundoff level for
/// quadruples with a co-isometric realization.
double coisometry_defect(const RedhefferQuadruple& q, Index k);

/// ||I - X* X|| where X has input degrees 0..k and output degrees 0..2k+1.
/// The tall truncation sees the full column tails, so in the unitary regime
/// this decays like rho^{2k}; the square truncation cannot decay because its
/// edge columns are cut off.
double isometry_defect(const RedhefferQuadruple& q, Index k);

/// Column isometry defect || I - (G12* G12 + G22* G22) || on the flat input
/// space; the gate for the third norm bound.
double column_isometry_defect(const RedhefferQuadruple& q, Index k);

/// Feedback interconnection of two 2x2 block matrices (blocks read as
/// [[Z1, B1], [C1, D1]] and [[Z2, B2], [C2, D2]] with Z1 : X -> X',
/// Z2 : X' -> X).
Blocked2x2 redheffer_product(const Blocked2x2& m1, const Blocked2x2& m2,
                             const ToleranceConfig& tol);

/// Unitary rotation [[M_V, D_{M_V*}], [-D_{M_V}, M_V*]] of a strictly
/// contractive truncated multiplication operator.
Blocked2x2 rotation(const SchurParameter& v, Index k, const ToleranceConfig& tol);

/// Closed-form blocks of the product rotation(V) o K0; the lower-right
/// block is transform_gamma.
Blocked2x2 rotated_coefficient_matrix(const RedhefferQuadruple& q, const SchurParameter& v,
                                      Index k, const ToleranceConfig& tol);

/// Isometry defect of the rotated coefficient matrix restricted to input
/// degrees 0..k, computed at internal truncation 2k+1 (decay diagnostic for
/// the unitary regime).
double rotated_isometry_defect(const RedhefferQuadruple& q, const SchurParameter& v, Index k,
                               const ToleranceConfig& tol);

struct SingletonReport {
  bool singleton = false;
  bool psi12_zero = false;
  bool psi21_zero = false;
  // co-isometric-case equivalents, reported alongside
  bool e_trivial = false;
  double gamma22_coisometry_defect = 0.0;
  std::optional<std::pair<OperatorMatrix, OperatorMatrix>> witness;  // distinct constants
};

/// Decides whether the range of the transform is a singleton and, when it
/// is not, finds two constant parameters with distinct transformed Taylor
/// data from the grid {0, +-1/2, +-i/2} x elementary matrices.
SingletonReport range_singleton_check(const RedhefferQuadruple& q, Index k,
                                      const ToleranceConfig& tol);

struct MaxPrincipleReport {
  std::vector<double> norms;       ///< ||Gamma_{H_V}|| per sample at degree k
  std::vector<double> norms_half;  ///< same at degree k/2 (monotonicity evidence)
  double max_norm = 0.0;
  double min_norm = 0.0;
  double delta = 0.0;            ///< 1 - max_norm
  bool monotone = true;          ///< norms_half <= norms + check_tol
  bool strict_regime = false;    ///< all norms <= 1 - delta with delta > slack
  bool norm_one_regime = false;  ///< all norms within check_tol of 1
};

MaxPrincipleReport max_principle_suite(const RedhefferQuadruple& q,
                                       const std::vector<SchurParameter>& samples, Index k,
                                       const ToleranceConfig& tol);

struct KernelInclusionReport {
  bool holds = true;
  Index kernel_dim = 0;
  double inclusion_residual = 0.0;  ///< max ||(I - Gt* Gt) u|| over kernel basis
  double psi12_residual = 0.0;      ///< max ||Gamma_12 u||
  double agreement_residual = 0.0;  ///< max ||Gt u - Gamma_22 u||
};

/// Ker D_{Gamma_{H_V}} is independent of the open-ball parameter and sits
/// inside Ker D_{Gamma_{H_Vt}} for every Schur parameter Vt; checks the
/// inclusion and the mechanism behind it.
KernelInclusionReport kernel_inclusion_check(const RedhefferQuadruple& q,
                                             const SchurParameter& v,
                                             const SchurParameter& v_tilde, Index k,
                                             const ToleranceConfig& tol);

struct BoundsReport {
  double lhs = 0.0;   ///< ||Gamma_{H_V} u||^2
  double rhs1 = 0.0;  ///< sharp resolvent bound
  double rhs2 = 0.0;  ///< (1-n)/(1+n) relaxation
  std::optional<double> rhs3;  ///< isometric-column bound, when applicable
  double mv_norm = 0.0;
  double column_defect = 0.0;
};

BoundsReport bounds_check(const RedhefferQuadruple& q, const SchurParameter& v,
                          const Eigen::VectorXcd& u, Index k, const ToleranceConfig& tol);

}  // namespace rclift::red
