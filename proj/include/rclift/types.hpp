// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rclift {

using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Complex matrix acting between finite-dimensional Hilbert spaces.
/// Rows index the codomain, columns the domain; zero-dimensional
/// spaces are legal and appear as 0xN / Nx0 / 0x0 matrices.
using OperatorMatrix = Eigen::MatrixXcd;

inline Index dom_dim(const OperatorMatrix& a) { return a.cols(); }
inline Index cod_dim(const OperatorMatrix& a) { return a.rows(); }

enum class Errc {
  non_finite,
  not_a_contraction,
  no_factorization,
  not_solvable,
  not_coisometric,
  not_isometric,
  not_observable,
  not_open_ball,
  resolvent_singular,
  fraction_singular,
  feedback_singular,
  shape_mismatch,
  inconsistent_data,
  feedthrough_nonzero,
  kernel_extraction,
  bad_dims,
  parse_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

/// Numerical policy shared by all operations: relative rank cutoff,
/// invariant-check tolerance and the slack used for open-ball admission.
struct ToleranceConfig {
  double rank_tol = 1e-10;
  double check_tol = 1e-9;
  double norm_slack = 1e-6;

  void validate() const {
    if (!(0 < rank_tol && rank_tol <= check_tol && check_tol <= norm_slack && norm_slack < 1))
      fail(Errc::bad_dims, "need 0 < rank_tol <= check_tol <= norm_slack < 1");
  }
};

}  // namespace rclift
