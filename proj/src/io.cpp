#include "spl/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace spl {

namespace {

bool is_diagonal(const MatrixC& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != cplx(0.0)) return false;
    }
  }
  for (Index i = 0; i < m.rows(); ++i) {
    if (m(i, i).imag() != 0.0) return false;
  }
  return true;
}

std::vector<double> diagonal_values(const MatrixC& m) {
  std::vector<double> out;
  for (Index i = 0; i < m.rows(); ++i) out.push_back(m(i, i).real());
  return out;
}

Gap gap_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::ParseError, "\"gap\" must be [left, right]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<double> values_from_json(const json& j, const char* key) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, std::string("\"") + key + "\" must be an array");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) throw Error(ErrorCode::ParseError, std::string("non-numeric entry in ") + key);
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

json matrix_to_json(const MatrixC& m) {
  json j;
  if (m.rows() == m.cols()) {
    j["n"] = m.rows();
  } else {
    j["rows"] = m.rows();
    j["cols"] = m.cols();
  }
  json re = json::array();
  json im = json::array();
  bool complex_part = false;
  for (Index i = 0; i < m.rows(); ++i) {
    json rr = json::array();
    json ri = json::array();
    for (Index k = 0; k < m.cols(); ++k) {
      rr.push_back(m(i, k).real());
      ri.push_back(m(i, k).imag());
      complex_part = complex_part || m(i, k).imag() != 0.0;
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  j["real"] = std::move(re);
  if (complex_part) j["imag"] = std::move(im);
  return j;
}

MatrixC matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("real") || !j["real"].is_array()) {
    throw Error(ErrorCode::ParseError, "matrix JSON needs a \"real\" array of rows");
  }
  const json& re = j["real"];
  const Index rows = static_cast<Index>(re.size());
  if (rows == 0 || !re[0].is_array()) throw Error(ErrorCode::ParseError, "matrix has no rows");
  const Index cols = static_cast<Index>(re[0].size());
  if (j.contains("n")) {
    const auto n = j["n"].get<Index>();
    if (n != rows || n != cols) throw Error(ErrorCode::ParseError, "\"n\" disagrees with the data");
  }
  if (j.contains("rows") && j["rows"].get<Index>() != rows) {
    throw Error(ErrorCode::ParseError, "\"rows\" disagrees with the data");
  }
  if (j.contains("cols") && j["cols"].get<Index>() != cols) {
    throw Error(ErrorCode::ParseError, "\"cols\" disagrees with the data");
  }
  const json* im = j.contains("imag") ? &j["imag"] : nullptr;
  if (im && (!im->is_array() || static_cast<Index>(im->size()) != rows)) {
    throw Error(ErrorCode::ParseError, "\"imag\" must match the shape of \"real\"");
  }
  MatrixC m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& rr = re[static_cast<std::size_t>(i)];
    if (!rr.is_array() || static_cast<Index>(rr.size()) != cols) {
      throw Error(ErrorCode::ParseError, "ragged matrix rows");
    }
    const json* ri = im ? &(*im)[static_cast<std::size_t>(i)] : nullptr;
    if (ri && (!ri->is_array() || static_cast<Index>(ri->size()) != cols)) {
      throw Error(ErrorCode::ParseError, "ragged imaginary rows");
    }
    for (Index k = 0; k < cols; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      if (!rr[kk].is_number() || (ri && !(*ri)[kk].is_number())) {
        throw Error(ErrorCode::ParseError, "non-numeric matrix entry");
      }
      m(i, k) = cplx(rr[kk].get<double>(), ri ? (*ri)[kk].get<double>() : 0.0);
    }
  }
  return m;
}

json instance_to_json(const PerturbationInstance& inst) {
  json j;
  if (is_diagonal(inst.A0) && is_diagonal(inst.A1)) {
    j["sigma0"] = diagonal_values(inst.A0);
    j["sigma1"] = diagonal_values(inst.A1);
  } else {
    j["A0"] = matrix_to_json(inst.A0);
    j["A1"] = matrix_to_json(inst.A1);
  }
  j["gap"] = {inst.split.gap.left, inst.split.gap.right};
  j["B"] = matrix_to_json(inst.B);
  if (!inst.basis().isIdentity(0.0)) j["basis"] = matrix_to_json(inst.basis());
  return j;
}

PerturbationInstance instance_from_json(const json& j, const std::optional<Gap>& gap_override) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "instance JSON must be an object");
  std::optional<Gap> gap = gap_override;
  if (!gap && j.contains("gap")) gap = gap_from_json(j["gap"]);
  if (!gap) throw Error(ErrorCode::ParseError, "no gap given (file or --gap-left/--gap-right)");

  try {
    std::optional<MatrixC> basis;
    if (j.contains("basis")) basis = matrix_from_json(j["basis"]);

    if (j.contains("sigma0") || j.contains("A0")) {
      if (!j.contains("B")) throw Error(ErrorCode::ParseError, "instance JSON needs \"B\"");
      const MatrixC b = matrix_from_json(j["B"]);
      if (j.contains("sigma0")) {
        if (!j.contains("sigma1")) throw Error(ErrorCode::ParseError, "missing \"sigma1\"");
        return assemble_instance(values_from_json(j["sigma0"], "sigma0"),
                                 values_from_json(j["sigma1"], "sigma1"), *gap, b, basis);
      }
      if (!j.contains("A1")) throw Error(ErrorCode::ParseError, "missing \"A1\"");
      return make_instance(matrix_from_json(j["A0"]), matrix_from_json(j["A1"]), b, *gap, basis);
    }

    if (j.contains("A")) {
      const HermitianOp a(matrix_from_json(j["A"]));
      const json* w = j.contains("W") ? &j["W"] : (j.contains("V") ? &j["V"] : nullptr);
      const HermitianOp pert = w ? HermitianOp(matrix_from_json(*w)) : HermitianOp::zero(a.dim());
      return instance_from_operators(a, pert, *gap);
    }

    if (j.contains("real")) {
      const HermitianOp a(matrix_from_json(j));
      return instance_from_operators(a, HermitianOp::zero(a.dim()), *gap);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  throw Error(ErrorCode::ParseError, "unrecognized instance JSON layout");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << text;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace spl
