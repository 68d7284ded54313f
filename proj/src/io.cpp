// SPDX-License-Identifier: Apache-2.0

#include "rclift/io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace rclift::io {

const char* kind_name(Instance::Kind k) {
  switch (k) {
    case Instance::Kind::data_set: return "data_set";
    case Instance::Kind::omega: return "omega";
    case Instance::Kind::quadruple: return "quadruple";
    case Instance::Kind::system: return "system";
    case Instance::Kind::schur_param: return "schur_param";
  }
  return "unknown";
}

Instance::Kind kind_from_name(const std::string& name) {
  if (name == "data_set") return Instance::Kind::data_set;
  if (name == "omega") return Instance::Kind::omega;
  if (name == "quadruple") return Instance::Kind::quadruple;
  if (name == "system") return Instance::Kind::system;
  if (name == "schur_param") return Instance::Kind::schur_param;
  fail(Errc::parse_error, "unknown instance kind '" + name + "'");
}

Json matrix_to_json(const OperatorMatrix& m) {
  Json data = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      data.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

OperatorMatrix matrix_from_json(const Json& j) {
  try {
    const Index rows = j.at("rows").get<Index>();
    const Index cols = j.at("cols").get<Index>();
    if (rows < 0 || cols < 0) fail(Errc::parse_error, "negative matrix dimension");
    const Json& data = j.at("data");
    if (static_cast<Index>(data.size()) != rows * cols)
      fail(Errc::parse_error, "matrix data length does not match rows*cols");
    OperatorMatrix m(rows, cols);
    Index idx = 0;
    for (Index i = 0; i < rows; ++i)
      for (Index jj = 0; jj < cols; ++jj, ++idx)
        m(i, jj) = Complex(data[idx].at(0).get<double>(), data[idx].at(1).get<double>());
    if (!m.allFinite()) fail(Errc::parse_error, "matrix has non-finite entries");
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, e.what());
  }
}

Json system_to_json(const sys::LinearSystem& s) {
  return Json{{"state", matrix_to_json(s.state_op)},
              {"input", matrix_to_json(s.input_op)},
              {"output", matrix_to_json(s.output_op)},
              {"feed", matrix_to_json(s.feed_op)}};
}

sys::LinearSystem system_from_json(const Json& j) {
  try {
    sys::LinearSystem s;
    s.state_op = matrix_from_json(j.at("state"));
    s.input_op = matrix_from_json(j.at("input"));
    s.output_op = matrix_from_json(j.at("output"));
    s.feed_op = matrix_from_json(j.at("feed"));
    s.check_shapes();
    return s;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::shape_mismatch) fail(Errc::parse_error, e.what());
    throw;
  }
}

Json instance_to_json(const Instance& inst) {
  Json payload;
  switch (inst.kind) {
    case Instance::Kind::data_set: {
      const auto& d = *inst.data_set;
      payload = Json{{"A", matrix_to_json(d.a)},
                     {"Tprime", matrix_to_json(d.t_prime)},
                     {"R", matrix_to_json(d.r)},
                     {"Q", matrix_to_json(d.q)},
                     {"K", d.k}};
      break;
    }
    case Instance::Kind::omega: {
      const auto& w = *inst.omega;
      payload = Json{{"omega1", matrix_to_json(w.omega1)},
                     {"omega2", matrix_to_json(w.omega2)},
                     {"f_embedding", matrix_to_json(w.f_embedding)}};
      break;
    }
    case Instance::Kind::quadruple: {
      payload = Json{{"system", system_to_json(inst.quadruple->realization())},
                     {"split", inst.quadruple->split()}};
      break;
    }
    case Instance::Kind::system: {
      payload = Json{{"system", system_to_json(*inst.system)}};
      if (inst.system_split) payload["split"] = *inst.system_split;
      break;
    }
    case Instance::Kind::schur_param: {
      const auto& v = *inst.schur;
      if (v.is_constant())
        payload = Json{{"constant", matrix_to_json(v.constant_value())}};
      else
        payload = Json{{"system", system_to_json(*v.realized_system())}};
      payload["open_ball"] = v.open_ball();
      break;
    }
  }
  Json out{{"kind", kind_name(inst.kind)}, {"payload", std::move(payload)}};
  if (!inst.meta.empty()) out["meta"] = inst.meta;
  return out;
}

Instance instance_from_json(const Json& j, const ToleranceConfig& tol) {
  try {
    Instance inst;
    inst.kind = kind_from_name(j.at("kind").get<std::string>());
    const Json& p = j.at("payload");
    switch (inst.kind) {
      case Instance::Kind::data_set:
        inst.data_set = lift::make_data_set(
            matrix_from_json(p.at("A")), matrix_from_json(p.at("Tprime")),
            matrix_from_json(p.at("R")), matrix_from_json(p.at("Q")), tol,
            p.value("K", Index{16}));
        break;
      case Instance::Kind::omega: {
        lift::UnderlyingContraction w;
        w.omega1 = matrix_from_json(p.at("omega1"));
        w.omega2 = matrix_from_json(p.at("omega2"));
        w.f_embedding = matrix_from_json(p.at("f_embedding"));
        if (w.omega1.cols() != w.f_embedding.cols() ||
            w.omega2.cols() != w.f_embedding.cols() ||
            w.omega2.rows() != w.f_embedding.rows())
          fail(Errc::parse_error, "omega blocks have inconsistent shapes");
        inst.omega = std::move(w);
        break;
      }
      case Instance::Kind::quadruple:
        inst.quadruple = red::RedhefferQuadruple(system_from_json(p.at("system")),
                                                 p.at("split").get<Index>(), tol);
        break;
      case Instance::Kind::system:
        inst.system = system_from_json(p.at("system"));
        if (p.contains("split")) inst.system_split = p.at("split").get<Index>();
        break;
      case Instance::Kind::schur_param: {
        const bool open_ball = p.value("open_ball", false);
        if (p.contains("constant")) {
          inst.schur = red::SchurParameter::constant(matrix_from_json(p.at("constant")), tol);
        } else {
          inst.schur =
              red::SchurParameter::realized(system_from_json(p.at("system")), open_ball, tol);
        }
        break;
      }
    }
    if (j.contains("meta")) inst.meta = j.at("meta");
    return inst;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, e.what());
  }
}

std::string serialize(const Instance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

Instance parse_instance(const std::string& text, const ToleranceConfig& tol) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, e.what());
  }
  return instance_from_json(j, tol);
}

Instance load_instance(const std::string& path, const ToleranceConfig& tol) {
  std::string text;
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream f(path);
    if (!f) fail(Errc::parse_error, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  return parse_instance(text, tol);
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-" || path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::trunc);
  if (!f) fail(Errc::parse_error, "cannot write '" + path + "'");
  f << text;
}

Json report_to_json(const lift::Report& rep) {
  Json checks = Json::array();
  for (const auto& c : rep.checks)
    checks.push_back(Json{{"name", c.name},
                          {"residual", c.residual},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
  return Json{{"checks", std::move(checks)}, {"pass", rep.pass}};
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace rclift::io
