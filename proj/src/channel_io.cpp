#include <fstream>

#include "qmemcap/chanrep.hpp"

namespace qmemcap {

using nlohmann::json;

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

cplx entry_from_json(const json& e) {
  if (e.is_number()) return cplx(e.get<double>(), 0.0);
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
    throw Error(ErrorKind::ParseError, "matrix entry must be [re, im]");
  return cplx(e[0].get<double>(), e[1].get<double>());
}

}  // namespace

Mat matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw Error(ErrorKind::ParseError, "matrix must be a nonempty array of rows");
  const size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw Error(ErrorKind::ParseError, "matrix row must be a nonempty array");
  const size_t cols = j[0].size();
  Mat m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw Error(ErrorKind::ParseError, "ragged matrix rows");
    for (size_t c = 0; c < cols; ++c) m(r, c) = entry_from_json(j[r][c]);
  }
  return m;
}

json channel_to_json(const Channel& ch) {
  json k = json::array();
  for (const auto& m : ch.kraus()) k.push_back(matrix_to_json(m));
  return json{{"dim_in", ch.dim_in()}, {"dim_out", ch.dim_out()}, {"kraus", k}};
}

Channel channel_from_json(const json& j, double tol) {
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "channel JSON must be an object");
  for (const char* key : {"dim_in", "dim_out", "kraus"})
    if (!j.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing field ") + key);
  if (!j["dim_in"].is_number_integer() || !j["dim_out"].is_number_integer())
    throw Error(ErrorKind::ParseError, "dim_in and dim_out must be integers");
  const int din = j["dim_in"].get<int>();
  const int dout = j["dim_out"].get<int>();
  if (din <= 0 || dout <= 0) throw Error(ErrorKind::ParseError, "dimensions must be positive");
  const json& kj = j["kraus"];
  if (!kj.is_array() || kj.empty()) throw Error(ErrorKind::ParseError, "kraus must be a nonempty array");
  std::vector<Mat> ks;
  for (const auto& mj : kj) {
    Mat m = matrix_from_json(mj);
    if (m.rows() != dout || m.cols() != din)
      throw Error(ErrorKind::DimensionMismatch, "Kraus operator shape differs from dim_out x dim_in");
    ks.push_back(std::move(m));
  }
  return validate_channel(std::move(ks), tol);
}

Channel load_channel(const std::string& path, double tol) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  return channel_from_json(j, tol);
}

}  // namespace qmemcap
