// SPDX-License-Identifier: Apache-2.0

#include "rclift/opcore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace rclift {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::non_finite: return "NonFinite";
    case Errc::not_a_contraction: return "NotAContraction";
    case Errc::no_factorization: return "NoFactorization";
    case Errc::not_solvable: return "NotSolvable";
    case Errc::not_coisometric: return "NotCoisometric";
    case Errc::not_isometric: return "NotIsometric";
    case Errc::not_observable: return "NotObservable";
    case Errc::not_open_ball: return "NotOpenBall";
    case Errc::resolvent_singular: return "ResolventSingular";
    case Errc::fraction_singular: return "FractionSingular";
    case Errc::feedback_singular: return "FeedbackSingular";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::inconsistent_data: return "InconsistentData";
    case Errc::feedthrough_nonzero: return "FeedthroughNonzero";
    case Errc::kernel_extraction: return "KernelExtraction";
    case Errc::bad_dims: return "BadDims";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

}  // namespace rclift

namespace rclift::op {

const char* class_name(OperatorClass c) {
  switch (c) {
    case OperatorClass::strict_contraction: return "strict_contraction";
    case OperatorClass::contraction: return "contraction";
    case OperatorClass::isometry: return "isometry";
    case OperatorClass::co_isometry: return "co_isometry";
    case OperatorClass::unitary: return "unitary";
    case OperatorClass::expansion: return "expansion";
  }
  return "unknown";
}

namespace {

Eigen::VectorXd singular_values(const OperatorMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return Eigen::VectorXd();
  return Eigen::JacobiSVD<OperatorMatrix>(a).singularValues();
}

}  // namespace

double operator_norm(const OperatorMatrix& a) {
  const Eigen::VectorXd sv = singular_values(a);
  return sv.size() == 0 ? 0.0 : sv(0);
}

double herm_norm(const OperatorMatrix& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(0.5 * (a + a.adjoint()),
                                                   Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double isometry_defect(const OperatorMatrix& a) {
  const Index n = a.cols();
  return herm_norm(a.adjoint() * a - OperatorMatrix::Identity(n, n));
}

double coisometry_defect(const OperatorMatrix& a) {
  const Index n = a.rows();
  return herm_norm(a * a.adjoint() - OperatorMatrix::Identity(n, n));
}

OperatorMatrix psd_sqrt(const OperatorMatrix& g) {
  if (g.rows() != g.cols()) fail(Errc::shape_mismatch, "psd_sqrt needs a square matrix");
  if (g.rows() == 0) return g;
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(0.5 * (g + g.adjoint()));
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

OperatorMatrix pseudo_inverse(const OperatorMatrix& a, double rel_tol) {
  if (a.rows() == 0 || a.cols() == 0) return OperatorMatrix(a.cols(), a.rows());
  Eigen::JacobiSVD<OperatorMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = rel_tol * sv(0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

OperatorMatrix range_basis(const OperatorMatrix& a, double rel_tol) {
  if (a.rows() == 0 || a.cols() == 0) return OperatorMatrix(a.rows(), 0);
  Eigen::JacobiSVD<OperatorMatrix> svd(a, Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = rel_tol * sv(0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

OperatorMatrix complement_basis(const OperatorMatrix& j) {
  const Index n = j.rows();
  if (j.cols() == 0) return OperatorMatrix::Identity(n, n);
  if (j.cols() >= n) return OperatorMatrix(n, 0);
  // Full SVD of an isometry: the trailing left singular vectors span the
  // complement of the range.
  Eigen::JacobiSVD<OperatorMatrix> svd(j, Eigen::ComputeFullU);
  return svd.matrixU().rightCols(n - j.cols());
}

OperatorMatrix polar_unitary(const OperatorMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return OperatorMatrix(a.rows(), a.cols());
  Eigen::JacobiSVD<OperatorMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

OperatorClass classify(const OperatorMatrix& m, const ToleranceConfig& tol) {
  if (!m.allFinite()) fail(Errc::non_finite, "matrix has NaN or Inf entries");
  const double iso = isometry_defect(m);
  const double co = coisometry_defect(m);
  if (iso <= tol.check_tol && co <= tol.check_tol) return OperatorClass::unitary;
  if (iso <= tol.check_tol) return OperatorClass::isometry;
  if (co <= tol.check_tol) return OperatorClass::co_isometry;
  const double nrm = operator_norm(m);
  if (nrm <= 1.0 - tol.norm_slack) return OperatorClass::strict_contraction;
  if (nrm <= 1.0 + tol.check_tol) return OperatorClass::contraction;
  return OperatorClass::expansion;
}

DefectData defect(const OperatorMatrix& n, const ToleranceConfig& tol) {
  if (!n.allFinite()) fail(Errc::non_finite, "matrix has NaN or Inf entries");
  if (operator_norm(n) > 1.0 + tol.check_tol)
    fail(Errc::not_a_contraction, "defect of a non-contraction");
  const Index d = n.cols();
  DefectData out;
  if (d == 0) {
    out.defect_operator = OperatorMatrix(0, 0);
    out.embedding = OperatorMatrix(0, 0);
    return out;
  }
  OperatorMatrix g = OperatorMatrix::Identity(d, d) - n.adjoint() * n;
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(0.5 * (g + g.adjoint()));
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  out.defect_operator =
      es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
  const double cutoff = tol.rank_tol * lam.maxCoeff();
  Index rank = 0;
  for (Index i = 0; i < d; ++i)
    if (lam(i) > cutoff) ++rank;
  // Eigen returns ascending eigenvalues; keep the defect basis ordered by
  // decreasing eigenvalue for reproducibility.
  OperatorMatrix emb(d, rank);
  for (Index k = 0; k < rank; ++k) emb.col(k) = es.eigenvectors().col(d - 1 - k);
  out.embedding = emb;
  out.rank = rank;
  return out;
}

OperatorMatrix douglas_solve(const OperatorMatrix& g1, const OperatorMatrix& g2,
                             const ToleranceConfig& tol) {
  if (g1.rows() != g2.rows()) fail(Errc::shape_mismatch, "douglas_solve codomains differ");
  OperatorMatrix lambda = pseudo_inverse(g1, tol.rank_tol) * g2;
  const double resid = operator_norm(g1 * lambda - g2);
  if (resid > tol.check_tol)
    fail(Errc::no_factorization, "range inclusion fails, residual " + std::to_string(resid));
  return lambda;
}

OperatorMatrix parrott_coisometry_solve(const DefectData& dstar, const OperatorMatrix& m,
                                        const ToleranceConfig& tol) {
  if (dstar.defect_operator.rows() != m.rows())
    fail(Errc::shape_mismatch, "parrott_coisometry_solve ambient dims differ");
  const OperatorMatrix a = dstar.defect_operator * dstar.embedding;
  OperatorMatrix phi = pseudo_inverse(a, tol.rank_tol) * m;
  const double resid = operator_norm(a * phi - m);
  if (resid > tol.check_tol)
    fail(Errc::not_solvable, "target not in the range of the defect, residual " +
                                 std::to_string(resid));
  const double co = coisometry_defect(phi);
  if (co > tol.check_tol)
    fail(Errc::not_coisometric, "solution fails phi phi* = I, defect " + std::to_string(co));
  return phi;
}

}  // namespace rclift::op
