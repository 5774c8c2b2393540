#include "liemap/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace liemap::io {

using nlohmann::json;

nlohmann::json map_to_json(const PolynomialMap& map) {
  json j;
  j["n"] = map.n;
  j["order"] = map.order;
  j["dt"] = map.dt;
  j["basis"] = "grlex-desc";
  json weights = json::array();
  for (int d = 0; d <= map.order; ++d) {
    const Eigen::MatrixXd& W = map.weights[d];
    json entry;
    entry["degree"] = d;
    entry["rows"] = W.rows();
    entry["cols"] = W.cols();
    json data = json::array();
    for (Eigen::Index r = 0; r < W.rows(); ++r)
      for (Eigen::Index c = 0; c < W.cols(); ++c) data.push_back(W(r, c));
    entry["data"] = std::move(data);
    weights.push_back(std::move(entry));
  }
  j["weights"] = std::move(weights);
  return j;
}

PolynomialMap map_from_json(const nlohmann::json& j) {
  PolynomialMap map;
  map.n = j.at("n").get<int>();
  map.order = j.at("order").get<int>();
  map.dt = j.at("dt").get<double>();
  if (map.n < 1) throw std::invalid_argument("map: field \"n\" must be >= 1");
  if (map.order < 0) throw std::invalid_argument("map: field \"order\" must be >= 0");
  if (!(map.dt > 0.0) || !std::isfinite(map.dt))
    throw std::invalid_argument("map: field \"dt\" must be positive and finite");
  if (j.at("basis").get<std::string>() != "grlex-desc")
    throw std::invalid_argument("map: unsupported basis ordering (expected grlex-desc)");
  const json& weights = j.at("weights");
  if (!weights.is_array() || static_cast<int>(weights.size()) != map.order + 1)
    throw std::invalid_argument("map: field \"weights\" must list degrees 0..order");
  for (int d = 0; d <= map.order; ++d) {
    const json& entry = weights.at(d);
    if (entry.at("degree").get<int>() != d)
      throw std::invalid_argument("map: weights out of degree order at index " +
                                  std::to_string(d));
    const Eigen::Index rows = entry.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = entry.at("cols").get<Eigen::Index>();
    if (rows != map.n || cols != polybasis::basis_dim(map.n, d))
      throw std::invalid_argument("map: weight shape mismatch at degree " +
                                  std::to_string(d));
    const json& data = entry.at("data");
    if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols)
      throw std::invalid_argument("map: weight data length mismatch at degree " +
                                  std::to_string(d));
    Eigen::MatrixXd W(rows, cols);
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) {
        const double v = data.at(k++).get<double>();
        if (!std::isfinite(v))
          throw std::invalid_argument("map: non-finite weight at degree " +
                                      std::to_string(d));
        W(r, c) = v;
      }
    map.weights.push_back(std::move(W));
  }
  return map;
}

nlohmann::json system_to_json(const PolynomialSystem& sys) {
  json j;
  j["n"] = sys.n;
  json terms = json::array();
  for (int d = 0; d <= sys.max_deg(); ++d) {
    const Eigen::MatrixXd& P = sys.coeffs[d];
    if (P.size() == 0) continue;
    const polybasis::MonomialBasis cols = polybasis::basis(sys.n, d);
    for (Eigen::Index c = 0; c < P.cols(); ++c)
      for (int v = 0; v < sys.n; ++v)
        if (P(v, c) != 0.0) {
          json term;
          term["target"] = v;
          term["exponents"] = cols.entries[c];
          term["coeff"] = P(v, c);
          terms.push_back(std::move(term));
        }
  }
  j["terms"] = std::move(terms);
  return j;
}

PolynomialSystem system_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  if (n < 1) throw std::invalid_argument("system: field \"n\" must be >= 1");
  PolynomialSystem sys(n, 0);
  const json& terms = j.at("terms");
  if (!terms.is_array())
    throw std::invalid_argument("system: field \"terms\" must be an array");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const json& term = terms.at(i);
    const int target = term.at("target").get<int>();
    const auto exponents = term.at("exponents").get<polybasis::MultiIndex>();
    const double coeff = term.at("coeff").get<double>();
    if (!std::isfinite(coeff))
      throw std::invalid_argument("system: non-finite coefficient in term " +
                                  std::to_string(i));
    sys.add_term(target, exponents, coeff);  // validates target and exponents
  }
  return sys;
}

namespace {

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return json::parse(in);  // json::parse_error carries line/byte diagnostics
}

void write_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace

void save_map(const PolynomialMap& map, const std::string& path) {
  write_file(map_to_json(map), path);
}

PolynomialMap load_map(const std::string& path) { return map_from_json(parse_file(path)); }

void save_system(const PolynomialSystem& sys, const std::string& path) {
  write_file(system_to_json(sys), path);
}

PolynomialSystem load_system(const std::string& path) {
  return system_from_json(parse_file(path));
}

void save_trajectory_csv(const TrajectoryDataset& data, const std::string& path) {
  if (data.n < 1) throw std::invalid_argument("save_trajectory_csv: empty dataset");
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
  out << "t";
  for (int c = 1; c <= data.n; ++c) out << ",x" << c;
  out << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << static_cast<double>(i) * data.dt;
    for (int c = 0; c < data.n; ++c) out << ',' << data.states[i][c];
    out << '\n';
  }
  if (!out) throw std::runtime_error("short write to " + path);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& tok, int line_no) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw std::invalid_argument("trajectory line " + std::to_string(line_no) +
                                ": not a number: \"" + tok + "\"");
  return v;
}

}  // namespace

TrajectoryDataset load_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("trajectory: empty file " + path);
  const std::vector<std::string> header = split_csv(line);
  if (header.size() < 2 || header[0] != "t")
    throw std::invalid_argument("trajectory line 1: header must be t,x1,...,xn");
  const int n = static_cast<int>(header.size()) - 1;
  for (int c = 1; c <= n; ++c)
    if (header[c] != "x" + std::to_string(c))
      throw std::invalid_argument("trajectory line 1: column " + std::to_string(c) +
                                  " must be named x" + std::to_string(c));

  TrajectoryDataset data;
  data.n = n;
  std::vector<double> times;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> fields = split_csv(line);
    if (static_cast<int>(fields.size()) != n + 1)
      throw std::invalid_argument("trajectory line " + std::to_string(line_no) +
                                  ": expected " + std::to_string(n + 1) + " fields, got " +
                                  std::to_string(fields.size()));
    times.push_back(parse_double(fields[0], line_no));
    Eigen::VectorXd state(n);
    for (int c = 0; c < n; ++c) state[c] = parse_double(fields[c + 1], line_no);
    data.states.push_back(std::move(state));
  }
  if (data.states.empty())
    throw std::invalid_argument("trajectory: no data rows in " + path);

  if (times.size() >= 2) {
    const double dt = times[1] - times[0];
    if (!(dt > 0.0))
      throw std::invalid_argument("trajectory: time column must be increasing");
    for (std::size_t i = 1; i + 1 < times.size(); ++i)
      if (std::abs(times[i + 1] - times[i] - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
        throw std::invalid_argument("trajectory: nonuniform time step near row " +
                                    std::to_string(i + 2));
    data.dt = dt;
  }
  return data;
}

}  // namespace liemap::io
