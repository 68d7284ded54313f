// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "rclift/generators.hpp"
#include "rclift/io.hpp"

namespace rclift::verify {

/// Composite check suites behind the `verify` command.  Each returns a
/// named-residual report; sampled parameters are drawn from a seeded
/// stream so reports are reproducible.

lift::Report data_set_suite(const lift::LiftingDataSet& d, Index k, std::uint64_t seed,
                            const ToleranceConfig& tol);

lift::Report omega_suite(const lift::UnderlyingContraction& w, Index k, std::uint64_t seed,
                         const ToleranceConfig& tol);

lift::Report quadruple_suite(const red::RedhefferQuadruple& q, Index k, std::uint64_t seed,
                             const ToleranceConfig& tol);

lift::Report system_suite(const sys::LinearSystem& s, std::optional<Index> split, Index k,
                          std::uint64_t seed, const ToleranceConfig& tol);

lift::Report schur_suite(const red::SchurParameter& v, Index k, const ToleranceConfig& tol);

/// Dispatch on the instance kind.
lift::Report instance_suite(const io::Instance& inst, Index k, std::uint64_t seed,
                            const ToleranceConfig& tol);

}  // namespace rclift::verify
