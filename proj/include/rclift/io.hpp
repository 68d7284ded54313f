// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "rclift/lifting.hpp"

namespace rclift::io {

using Json = nlohmann::ordered_json;

/// On-disk instance: a tagged payload plus optional provenance.  Complex
/// entries are [re, im] pairs, matrices row-major with explicit rows/cols,
/// so files are diffable and reproducible byte for byte.
struct Instance {
  enum class Kind { data_set, omega, quadruple, system, schur_param };
  Kind kind;
  std::optional<lift::LiftingDataSet> data_set;
  std::optional<lift::UnderlyingContraction> omega;
  std::optional<red::RedhefferQuadruple> quadruple;
  std::optional<sys::LinearSystem> system;
  std::optional<Index> system_split;  ///< output split carried by a system file
  std::optional<red::SchurParameter> schur;
  Json meta = Json::object();
};

const char* kind_name(Instance::Kind k);
Instance::Kind kind_from_name(const std::string& name);

Json matrix_to_json(const OperatorMatrix& m);
OperatorMatrix matrix_from_json(const Json& j);

Json system_to_json(const sys::LinearSystem& s);
sys::LinearSystem system_from_json(const Json& j);

Json instance_to_json(const Instance& inst);
Instance instance_from_json(const Json& j, const ToleranceConfig& tol);

std::string serialize(const Instance& inst);
Instance parse_instance(const std::string& text, const ToleranceConfig& tol);

/// "-" means stdin/stdout.
Instance load_instance(const std::string& path, const ToleranceConfig& tol);
void write_text(const std::string& path, const std::string& text);

Json report_to_json(const lift::Report& rep);

std::string format_double(double v);  ///< full-precision decimal

}  // namespace rclift::io
