#include "stcut/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace stcut {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(ErrorCode::kParseError, what, line);
}

int parse_int(std::string_view field, int line) {
  int value = 0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size()) fail(line, "expected an integer, got '" + std::string(field) + "'");
  return value;
}

double parse_real(std::string_view field, int line) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size() || !std::isfinite(value)) {
    fail(line, "expected a finite number, got '" + std::string(field) + "'");
  }
  return value;
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  enum class Mode { kUnset, kProduct, kGeneral };
  int n = -1;
  Vertex s = -1;
  Vertex t = -1;
  Matrix cap;
  Matrix dem;
  std::vector<double> mu;
  std::vector<bool> mu_seen;
  Mode mode = Mode::kUnset;

  auto vertex = [&](std::string_view field, int line) {
    const int v = parse_int(field, line);
    if (v < 0 || v >= n) fail(line, "vertex " + std::to_string(v) + " out of range");
    return v;
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto f = split_fields(line);
    if (f.empty()) continue;
    const std::string_view key = f[0];

    if (n < 0 && key != "graph") fail(line_no, "expected 'graph' header before '" + std::string(key) + "'");
    if (key == "graph") {
      if (n >= 0) fail(line_no, "duplicate 'graph' header");
      if (f.size() < 2) fail(line_no, "'graph' needs a vertex count");
      n = parse_int(f[1], line_no);
      if (n < 2) fail(line_no, "need at least two vertices");
      if (f.size() < 4) throw Error(ErrorCode::kMissingTerminals, "'graph' needs s and t", line_no);
      if (f.size() > 4) fail(line_no, "trailing fields after 'graph'");
      s = parse_int(f[2], line_no);
      t = parse_int(f[3], line_no);
      if (s < 0 || s >= n || t < 0 || t >= n || s == t) {
        throw Error(ErrorCode::kMissingTerminals, "terminals must be distinct vertices in range", line_no);
      }
      cap = Matrix::Zero(n, n);
      dem = Matrix::Zero(n, n);
      mu.assign(n, 0.0);
      mu_seen.assign(n, false);
    } else if (key == "cap" || key == "dem_edge") {
      if (f.size() != 4) fail(line_no, "'" + std::string(key) + "' takes u v w");
      if (key == "dem_edge" && mode != Mode::kGeneral) fail(line_no, "'dem_edge' outside 'dem general'");
      const int u = vertex(f[1], line_no);
      const int v = vertex(f[2], line_no);
      if (u >= v) fail(line_no, "edges must be listed with u < v");
      const double w = parse_real(f[3], line_no);
      if (!(w > 0.0)) fail(line_no, "weights must be positive");
      Matrix& target = key == "cap" ? cap : dem;
      target(u, v) += w;
      target(v, u) += w;
    } else if (key == "dem") {
      if (f.size() != 2) fail(line_no, "'dem' takes 'product' or 'general'");
      if (mode != Mode::kUnset) fail(line_no, "duplicate 'dem' line");
      if (f[1] == "product") {
        mode = Mode::kProduct;
      } else if (f[1] == "general") {
        mode = Mode::kGeneral;
      } else {
        fail(line_no, "unknown demand mode '" + std::string(f[1]) + "'");
      }
    } else if (key == "mu") {
      if (mode != Mode::kProduct) fail(line_no, "'mu' outside 'dem product'");
      if (f.size() != 3) fail(line_no, "'mu' takes v p");
      const int v = vertex(f[1], line_no);
      if (mu_seen[v]) fail(line_no, "duplicate 'mu' for vertex " + std::to_string(v));
      mu_seen[v] = true;
      mu[v] = parse_real(f[2], line_no);
      if (mu[v] < 0.0) throw Error(ErrorCode::kBadProbability, "negative probability", line_no);
    } else {
      fail(line_no, "unknown directive '" + std::string(key) + "'");
    }
  }
  if (n < 0) fail(1, "missing 'graph' header");
  if (mode == Mode::kUnset) fail(line_no, "missing 'dem' line");
  if (mode == Mode::kProduct) {
    for (int v = 0; v < n; ++v) {
      if (!mu_seen[v]) fail(line_no, "no 'mu' for vertex " + std::to_string(v));
    }
    return Instance::create(s, t, std::move(cap), ProductDemand{std::move(mu)});
  }
  return Instance::create(s, t, std::move(cap), GeneralDemand{std::move(dem)});
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string write_instance(const Instance& inst) {
  const int n = inst.num_vertices();
  const Matrix cap = inst.raw_capacity();
  std::ostringstream out;
  out << "graph " << n << ' ' << inst.s() << ' ' << inst.t() << '\n';
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (cap(u, v) > 0.0) out << "cap " << u << ' ' << v << ' ' << format_real(cap(u, v)) << '\n';
    }
  }
  if (inst.has_product_demand()) {
    out << "dem product\n";
    const auto& mu = inst.mu();
    for (Vertex v = 0; v < n; ++v) out << "mu " << v << ' ' << format_real(mu[v]) << '\n';
  } else {
    out << "dem general\n";
    const Matrix& dem = std::get<GeneralDemand>(inst.demand()).weights;
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) {
        if (dem(u, v) > 0.0) out << "dem_edge " << u << ' ' << v << ' ' << format_real(dem(u, v)) << '\n';
      }
    }
  }
  return out.str();
}

void write_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << write_instance(inst);
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

bool same_instance(const Instance& a, const Instance& b, double tol) {
  if (a.num_vertices() != b.num_vertices() || a.s() != b.s() || a.t() != b.t()) return false;
  if (a.has_product_demand() != b.has_product_demand()) return false;
  auto close = [tol](const Matrix& x, const Matrix& y) {
    return (x - y).cwiseAbs().maxCoeff() <= tol * std::max(1.0, x.cwiseAbs().maxCoeff());
  };
  if (!close(a.raw_capacity(), b.raw_capacity())) return false;
  if (a.has_product_demand()) {
    for (std::size_t v = 0; v < a.mu().size(); ++v) {
      if (std::abs(a.mu()[v] - b.mu()[v]) > tol) return false;
    }
    return true;
  }
  return close(std::get<GeneralDemand>(a.demand()).weights, std::get<GeneralDemand>(b.demand()).weights);
}

}  // namespace stcut
