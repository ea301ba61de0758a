#include "simplexstab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace simplexstab::io {
namespace {

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json columns_json(const Matrix& m) {
  Json out = Json::array();
  for (int c = 0; c < m.cols(); ++c) out.push_back(vector_json(m.col(c)));
  return out;
}

Json rows_json(const Matrix& m) { return columns_json(m.transpose()); }

Vector vector_from(const Json& j, int n, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw Error(ErrorCode::kIo, std::string(what) + ": expected an array of length " +
                                    std::to_string(n));
  Vector v(n);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::kIo, std::string(what) + ": non-numeric entry");
    v(i) = j[i].get<double>();
  }
  return v;
}

Matrix columns_from(const Json& j, int n, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::kIo, std::string(what) + ": expected an array");
  Matrix m(n, static_cast<int>(j.size()));
  for (std::size_t c = 0; c < j.size(); ++c) m.col(static_cast<int>(c)) = vector_from(j[c], n, what);
  return m;
}

int dimension_of(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
    throw Error(ErrorCode::kIo, "missing integer field \"n\"");
  const int n = j["n"].get<int>();
  if (n < 1) throw Error(ErrorCode::kIo, "\"n\" must be positive");
  return n;
}

}  // namespace

Json polytope_to_json(const Polytope& k) {
  Json out;
  out["n"] = k.dim();
  if (k.has_vertices()) out["vertices"] = columns_json(k.vertices());
  if (k.has_halfspaces()) {
    const Halfspaces& h = k.halfspaces();
    Json hs = Json::array();
    for (int j = 0; j < h.count(); ++j)
      hs.push_back(Json{{"a", vector_json(h.normals.row(j).transpose())}, {"b", h.offsets(j)}});
    out["halfspaces"] = hs;
  }
  return out;
}

Polytope polytope_from_json(const Json& j) {
  const int n = dimension_of(j);
  const bool has_v = j.contains("vertices");
  const bool has_h = j.contains("halfspaces");
  if (!has_v && !has_h) throw Error(ErrorCode::kIo, "polytope needs vertices or halfspaces");
  Matrix a;
  Vector b;
  if (has_h) {
    const Json& hs = j["halfspaces"];
    if (!hs.is_array()) throw Error(ErrorCode::kIo, "halfspaces: expected an array");
    a.resize(static_cast<int>(hs.size()), n);
    b.resize(static_cast<int>(hs.size()));
    for (std::size_t r = 0; r < hs.size(); ++r) {
      if (!hs[r].contains("a") || !hs[r].contains("b") || !hs[r]["b"].is_number())
        throw Error(ErrorCode::kIo, "halfspace entries need \"a\" and \"b\"");
      a.row(static_cast<int>(r)) = vector_from(hs[r]["a"], n, "halfspace a").transpose();
      b(static_cast<int>(r)) = hs[r]["b"].get<double>();
    }
  }
  if (has_v && has_h) return Polytope::from_both(columns_from(j["vertices"], n, "vertices"), a, b);
  if (has_v) return Polytope::from_vertices(columns_from(j["vertices"], n, "vertices"));
  return Polytope::from_halfspaces(a, b);
}

Json measure_to_json(const DiscreteMeasure& mu) {
  Json out;
  out["n"] = mu.dim();
  out["points"] = columns_json(mu.points());
  out["weights"] = vector_json(mu.weights());
  return out;
}

DiscreteMeasure measure_from_json(const Json& j) {
  const int n = dimension_of(j);
  if (!j.contains("points") || !j.contains("weights"))
    throw Error(ErrorCode::kIo, "measure needs points and weights");
  Matrix points = columns_from(j["points"], n, "points");
  Vector weights = vector_from(j["weights"], static_cast<int>(points.cols()), "weights");
  return DiscreteMeasure(std::move(points), std::move(weights));
}

Json ellipsoid_to_json(const Ellipsoid& e) {
  Json out;
  out["n"] = e.dim();
  out["center"] = vector_json(e.center);
  out["shape"] = rows_json(e.shape);
  return out;
}

Ellipsoid ellipsoid_from_json(const Json& j) {
  const int n = dimension_of(j);
  if (!j.contains("center") || !j.contains("shape"))
    throw Error(ErrorCode::kIo, "ellipsoid needs center and shape");
  Ellipsoid e{vector_from(j["center"], n, "center"), columns_from(j["shape"], n, "shape").transpose()};
  check_ellipsoid(e);
  return e;
}

Matrix point_columns_from_json(const Json& j) {
  const int n = dimension_of(j);
  if (j.contains("points")) return columns_from(j["points"], n, "points");
  if (j.contains("vertices")) return columns_from(j["vertices"], n, "vertices");
  throw Error(ErrorCode::kIo, "expected \"points\" or \"vertices\"");
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIo, path + ": " + e.what());
  }
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot rename into " + path);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace simplexstab::io
