#include "mvdeg/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mvdeg/error.hpp"
#include "mvdeg/rng.hpp"

namespace mvdeg::io {

namespace {

struct Field {
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Field> split_csv_line(const std::string& line) {
  std::vector<Field> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string raw = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t lead = raw.find_first_not_of(" \t");
    std::size_t trail = raw.find_last_not_of(" \t");
    std::string text = lead == std::string::npos ? std::string{} : raw.substr(lead, trail - lead + 1);
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') text = text.substr(1, text.size() - 2);
    out.push_back({std::move(text), start + 1 + (lead == std::string::npos ? 0 : lead)});
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool get_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  return f;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  return f;
}

void strip_bom(std::string& line) {
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF && static_cast<unsigned char>(line[1]) == 0xBB &&
      static_cast<unsigned char>(line[2]) == 0xBF) {
    line.erase(0, 3);
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

MultivariateSignal parse_signal_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!get_line(in, line)) throw ParseError(source, 1, 0, "empty file; expected a header row of channel names");
  strip_bom(line);
  const auto header = split_csv_line(line);
  std::vector<std::string> labels;
  bool all_numeric = true;
  for (const auto& f : header) {
    double dummy;
    if (!parse_number(f.text, dummy)) all_numeric = false;
    if (f.text.empty()) throw ParseError(source, 1, f.column, "empty channel name in header");
    labels.push_back(f.text);
  }
  if (all_numeric) throw ParseError(source, 1, 1, "missing header row (first line is numeric)");

  const std::size_t p = labels.size();
  std::vector<double> values;
  std::size_t line_no = 1;
  std::size_t rows = 0;
  while (get_line(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != p) {
      throw ParseError(source, line_no, 1, "expected " + std::to_string(p) + " fields, found " +
                                               std::to_string(fields.size()));
    }
    for (const auto& f : fields) {
      double v;
      if (!parse_number(f.text, v)) throw ParseError(source, line_no, f.column, "not a number: '" + f.text + "'");
      if (!std::isfinite(v)) throw ParseError(source, line_no, f.column, "non-finite value");
      values.push_back(v);
    }
    ++rows;
  }
  if (rows < 2) throw ParseError(source, line_no, 0, "signal needs at least 2 data rows");
  return MultivariateSignal(p, rows, std::move(values), std::move(labels));
}

MultivariateSignal read_signal_csv(const std::filesystem::path& path) {
  auto f = open_in(path);
  return parse_signal_csv(f, path.string());
}

void write_signal_csv(std::ostream& out, const MultivariateSignal& signal) {
  const auto& labels = signal.labels();
  for (std::size_t ch = 0; ch < labels.size(); ++ch) out << (ch ? "," : "") << labels[ch];
  out << '\n';
  for (std::size_t t = 0; t < signal.samples(); ++t) {
    for (std::size_t ch = 0; ch < signal.channels(); ++ch) out << (ch ? "," : "") << format_double(signal.at(ch, t));
    out << '\n';
  }
}

void write_signal_csv(const std::filesystem::path& path, const MultivariateSignal& signal) {
  auto f = open_out(path);
  write_signal_csv(f, signal);
}

StationLayout parse_station_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!get_line(in, line)) throw ParseError(source, 1, 0, "empty file; expected header station_id,x,y");
  strip_bom(line);
  const auto header = split_csv_line(line);
  if (header.size() != 3 || header[0].text != "station_id" || header[1].text != "x" || header[2].text != "y") {
    throw ParseError(source, 1, 1, "expected header 'station_id,x,y'");
  }
  StationLayout layout;
  std::size_t line_no = 1;
  while (get_line(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 3) throw ParseError(source, line_no, 1, "expected 3 fields");
    double x, y;
    if (!parse_number(f[1].text, x)) throw ParseError(source, line_no, f[1].column, "not a number: '" + f[1].text + "'");
    if (!parse_number(f[2].text, y)) throw ParseError(source, line_no, f[2].column, "not a number: '" + f[2].text + "'");
    layout.ids.push_back(f[0].text);
    layout.positions.emplace_back(x, y);
  }
  if (layout.size() == 0) throw ParseError(source, line_no, 0, "no stations");
  return layout;
}

StationLayout read_station_csv(const std::filesystem::path& path) {
  auto f = open_in(path);
  return parse_station_csv(f, path.string());
}

nlohmann::json parse_json(std::istream& in, const std::string& source) {
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(source, line, col, "invalid JSON");
  }
}

nlohmann::json read_json(const std::filesystem::path& path) {
  auto f = open_in(path);
  return parse_json(f, path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const std::string& source) {
  if (!j.is_array() || j.empty()) throw ParseError(source, 1, 0, "expected a nonempty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw ParseError(source, 1, 0, "row " + std::to_string(i) + " has the wrong length");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      if (!j[i][k].is_number()) throw ParseError(source, 1, 0, "non-numeric matrix entry");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
    }
  }
  return m;
}

nlohmann::json graph_to_json(const WeightedGraph& g) {
  return {{"n", g.size()}, {"directed", g.directed()}, {"weights", matrix_to_json(g.weights())}};
}

WeightedGraph graph_from_json(const nlohmann::json& j, const std::string& source) {
  if (!j.is_object() || !j.contains("n") || !j.contains("directed") || !j.contains("weights")) {
    throw ParseError(source, 1, 0, "graph JSON needs keys n, directed, weights");
  }
  if (!j["n"].is_number_integer() || !j["directed"].is_boolean()) {
    throw ParseError(source, 1, 0, "graph JSON: n must be an integer and directed a boolean");
  }
  const auto n = j["n"].get<long long>();
  Eigen::MatrixXd w = matrix_from_json(j["weights"], source);
  if (n < 1 || w.rows() != n || w.cols() != n) {
    throw Error(ErrorKind::Dimension, source + ": weights are not " + std::to_string(n) + "x" + std::to_string(n));
  }
  return WeightedGraph(std::move(w), j["directed"].get<bool>()).with_descriptor("file(" + std::to_string(n) + ")");
}

WeightedGraph read_graph_json(const std::filesystem::path& path) { return graph_from_json(read_json(path), path.string()); }

void write_graph_json(const std::filesystem::path& path, const WeightedGraph& g) { write_json(path, graph_to_json(g)); }

Eigen::MatrixXd read_correlation_json(const std::filesystem::path& path) {
  const auto j = read_json(path);
  if (j.is_object() && j.contains("corr")) return matrix_from_json(j["corr"], path.string());
  return matrix_from_json(j, path.string());
}

nlohmann::json generator_spec_to_json(const GeneratorSpec& spec) {
  nlohmann::json j{{"kind", to_string(spec.kind)},
                   {"p", spec.channels()},
                   {"n", spec.n},
                   {"seed", spec.seed},
                   {"generator_version", kGeneratorVersion}};
  if (spec.kind == GeneratorKind::mixture) j["q"] = spec.q;
  if (spec.kind == GeneratorKind::correlated) j["corr"] = matrix_to_json(spec.corr);
  return j;
}

void write_curves_csv(std::ostream& out, const std::vector<EntropyCurve>& curves) {
  out << "method,tau,mean,sd,n_realizations\n";
  for (const auto& c : curves) {
    for (const auto& r : c.records) {
      out << c.method << ',' << r.tau << ',';
      if (r.defined) {
        out << format_double(r.mean) << ',' << format_double(r.sd);
      } else {
        out << "undefined,undefined";
      }
      out << ',' << r.realizations << '\n';
    }
  }
}

void write_curves_csv(const std::filesystem::path& path, const std::vector<EntropyCurve>& curves) {
  auto f = open_out(path);
  write_curves_csv(f, curves);
}

nlohmann::json curve_to_json(const EntropyCurve& curve) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : curve.records) {
    nlohmann::json rec{{"tau", r.tau}, {"defined", r.defined}, {"n_realizations", r.realizations}};
    if (r.defined) {
      rec["mean"] = r.mean;
      rec["sd"] = r.sd;
    } else {
      rec["mean"] = nullptr;
      rec["sd"] = nullptr;
      rec["note"] = r.note;
    }
    records.push_back(std::move(rec));
  }
  nlohmann::json j{{"method", curve.method}, {"m", curve.m}, {"c", curve.c}, {"graph", curve.graph}, {"records", records}};
  j["seed"] = curve.seed ? nlohmann::json(*curve.seed) : nlohmann::json(nullptr);
  return j;
}

}  // namespace mvdeg::io
