#include "odeof/cli/state_file.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "odeof/errors.hpp"

namespace odeof::cli {

using nlohmann::json;

json state_to_json(const BipartiteDensity& rho) {
  const CMatrix& m = rho.matrix();
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return {{"dA", rho.dims().dA}, {"dB", rho.dims().dB}, {"matrix", std::move(rows)}};
}

BipartiteDensity state_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dA") || !j.contains("dB") || !j.contains("matrix")) {
    throw ParameterError("state file needs fields dA, dB and matrix");
  }
  if (!j["dA"].is_number_integer() || !j["dB"].is_number_integer()) {
    throw ParameterError("dA and dB must be integers");
  }
  const BipartiteDims dims(j["dA"].get<int>(), j["dB"].get<int>());
  const int n = dims.total();
  const json& rows = j["matrix"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
    throw ShapeError("matrix must have dA*dB = " + std::to_string(n) + " rows");
  }
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw ShapeError("row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
    }
    for (int k = 0; k < n; ++k) {
      const json& e = row[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw ParameterError("matrix entries must be [re, im] pairs");
      }
      m(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return BipartiteDensity(std::move(m), dims);
}

BipartiteDensity read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open state file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParameterError("state file " + path + " is not valid JSON: " + e.what());
  }
  return state_from_json(j);
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParameterError("cannot write " + path);
    out << contents;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw ParameterError("cannot write " + path);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw ParameterError("cannot write " + path + ": " + ec.message());
  }
}

void write_state_file(const std::string& path, const BipartiteDensity& rho) {
  write_file_atomic(path, state_to_json(rho).dump(2) + "\n");
}

}  // namespace odeof::cli
