#include "nidx/io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace nidx {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ValidationError("space spec at " + path + ": " + msg);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) fail(path, std::string("missing field '") + key + "'");
  return j.at(key);
}

double parse_p(const Json& j, const std::string& path) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return kInf;
    fail(path, "p must be a number or \"inf\"");
  }
  if (!j.is_number()) fail(path, "p must be a number or \"inf\"");
  double p = j.get<double>();
  if (!(p >= 1.0)) fail(path, "p must lie in [1, inf]");
  return p;
}

Space parse(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  std::string kind = field(j, "kind", path).get<std::string>();
  try {
    if (kind == "lp") {
      const Json& d = field(j, "dim", path);
      if (!d.is_number_integer() || d.get<int>() < 1) fail(path + ".dim", "dim must be an integer >= 1");
      return Space::lp(d.get<int>(), parse_p(field(j, "p", path), path + ".p"));
    }
    if (kind == "gauge2d") {
      const Json& s = field(j, "samples", path);
      if (!s.is_array()) fail(path + ".samples", "expected an array of radii");
      std::vector<double> radii = s.get<std::vector<double>>();
      if (j.contains("dim") && j.at("dim").get<int>() != 2) fail(path + ".dim", "gauge2d has dim 2");
      if (j.contains("angles")) {
        std::vector<double> ang = j.at("angles").get<std::vector<double>>();
        if (ang.size() != radii.size()) fail(path + ".angles", "angles and samples differ in length");
        std::vector<Eigen::Vector2d> verts;
        for (std::size_t k = 0; k < ang.size(); ++k)
          verts.emplace_back(radii[k] * std::cos(ang[k]), radii[k] * std::sin(ang[k]));
        return Space::gauge2d(Gauge2d::from_vertices(std::move(verts)));
      }
      return Space::gauge2d(Gauge2d::from_radii(std::move(radii)));
    }
    if (kind == "absolute_sum") {
      Space outer = parse(field(j, "outer", path), path + ".outer");
      Space left = parse(field(j, "left", path), path + ".left");
      Space right = parse(field(j, "right", path), path + ".right");
      Space s = Space::absolute_sum(outer, left, right);
      if (j.contains("dim") && j.at("dim").get<int>() != s.dim())
        fail(path + ".dim", "dim must equal left.dim + right.dim");
      return s;
    }
    if (kind == "esum") {
      Space E = parse(field(j, "E", path), path + ".E");
      const Json& arr = field(j, "summands", path);
      if (!arr.is_array()) fail(path + ".summands", "expected an array");
      std::vector<Space> parts;
      for (std::size_t i = 0; i < arr.size(); ++i)
        parts.push_back(parse(arr[i], path + ".summands[" + std::to_string(i) + "]"));
      Space s = Space::esum(E, std::move(parts));
      if (j.contains("dim") && j.at("dim").get<int>() != s.dim())
        fail(path + ".dim", "dim must equal the sum of summand dims");
      return s;
    }
    if (kind == "dual") return Space::dual_of(parse(field(j, "of", path), path + ".of"));
  } catch (const nlohmann::json::exception& e) {
    fail(path, e.what());
  } catch (const ValidationError& e) {
    std::string msg = e.what();
    if (msg.rfind("space spec at ", 0) == 0) throw;
    fail(path, msg);
  }
  fail(path + ".kind", "unknown kind '" + kind + "'");
}

}  // namespace

Space space_from_json(const Json& j) { return parse(j, "$"); }

Json space_to_json(const Space& space) {
  Json j;
  switch (space.kind()) {
    case Space::Kind::lp:
      j["kind"] = "lp";
      j["dim"] = space.dim();
      if (std::isinf(space.p()))
        j["p"] = "inf";
      else
        j["p"] = space.p();
      break;
    case Space::Kind::gauge2d:
      j["kind"] = "gauge2d";
      j["dim"] = 2;
      j["samples"] = space.gauge().radii();
      if (!space.gauge().uniform_grid()) j["angles"] = space.gauge().angles();
      break;
    case Space::Kind::absolute_sum:
      j["kind"] = "absolute_sum";
      j["dim"] = space.dim();
      j["outer"] = space_to_json(space.outer());
      j["left"] = space_to_json(space.blocks()[0]);
      j["right"] = space_to_json(space.blocks()[1]);
      break;
    case Space::Kind::esum: {
      j["kind"] = "esum";
      j["dim"] = space.dim();
      j["E"] = space_to_json(space.outer());
      Json arr = Json::array();
      for (const auto& b : space.blocks()) arr.push_back(space_to_json(b));
      j["summands"] = arr;
      break;
    }
    case Space::Kind::dual:
      j["kind"] = "dual";
      j["dim"] = space.dim();
      j["of"] = space_to_json(space.of());
      break;
  }
  return j;
}

Space load_space(const std::string& path) {
  Json j;
  try {
    if (path == "-") {
      j = Json::parse(std::cin);
    } else {
      std::ifstream in(path);
      if (!in) throw ValidationError("cannot open space file '" + path + "'");
      j = Json::parse(in);
    }
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("space file '" + path + "': " + e.what());
  }
  return space_from_json(j);
}

Mat matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw ValidationError("matrix rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ValidationError("matrix row " + std::to_string(r) + " has the wrong length");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

OperatorData operator_from_json(const Json& j) {
  OperatorData d;
  if (j.is_array()) {
    d.matrix = matrix_from_json(j);
    return d;
  }
  if (!j.contains("matrix")) throw ValidationError("operator JSON needs a 'matrix' field");
  d.matrix = matrix_from_json(j.at("matrix"));
  if (j.contains("space")) d.space = space_from_json(j.at("space"));
  return d;
}

Mat matrix_from_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    for (char& c : line)
      if (c == ',' || c == ';') c = ' ';
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!ls.eof()) throw ValidationError("CSV matrix: non-numeric entry in row " + std::to_string(rows.size()));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError("CSV matrix is empty");
  Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size())
      throw ValidationError("CSV matrix row " + std::to_string(r) + " has the wrong length");
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  return m;
}

std::string matrix_to_csv(const Mat& m) {
  std::ostringstream os;
  os.precision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << (c ? "," : "") << m(r, c);
    os << "\n";
  }
  return os.str();
}

}  // namespace nidx
