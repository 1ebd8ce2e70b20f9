#include "tracial/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "tracial/errors.hpp"

namespace tracial::io {

namespace {

using nlohmann::json;
using linalg::Complex;
using linalg::ComplexMatrix;

constexpr double kAsymmetryTol = 1e-12;

Complex parse_entry(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  throw Error(ErrorCode::ParseError, "matrix entry must be a number or [re, im]");
}

ComplexMatrix parse_matrix(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing matrix ") + key);
  const json& rows = j.at(key);
  if (!rows.is_array() || rows.empty()) throw Error(ErrorCode::ParseError, std::string(key) + " must be a nonempty array");
  const auto n = static_cast<Eigen::Index>(rows.size());
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw Error(ErrorCode::ParseError, std::string(key) + " must be square");
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = parse_entry(row[static_cast<std::size_t>(k)]);
  }
  if (!linalg::all_finite(m)) throw Error(ErrorCode::ParseError, std::string(key) + " has non-finite entries");
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kAsymmetryTol)
    throw Error(ErrorCode::NotHermitian, std::string(key) + " is not Hermitian (asymmetry " + std::to_string(asym) + ")");
  return m;
}

json encode_matrix(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

PairDocument parse_pair_document(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "pair document must be an object");
  const ComplexMatrix a = parse_matrix(j, "A");
  const ComplexMatrix b = parse_matrix(j, "B");
  if (a.rows() != b.rows()) throw Error(ErrorCode::ParseError, "A and B differ in size");
  auto text_field = [&](const char* key) {
    if (!j.contains(key)) return std::string();
    if (!j.at(key).is_string()) throw Error(ErrorCode::ParseError, std::string(key) + " must be a string");
    return j.at(key).get<std::string>();
  };
  return {text_field("name"), text_field("source"),
          pencil::HermitianPair(linalg::HermitianMatrix::symmetrized(a), linalg::HermitianMatrix::symmetrized(b))};
}

PairDocument load_pair_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IOError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_pair_document(ss.str());
}

std::string to_json(const PairDocument& doc) {
  json j;
  j["name"] = doc.name;
  j["source"] = doc.source;
  j["A"] = encode_matrix(doc.pair.a().matrix());
  j["B"] = encode_matrix(doc.pair.b().matrix());
  return j.dump(2) + "\n";
}

}  // namespace tracial::io
