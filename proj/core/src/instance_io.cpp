#include "hypext/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace hypext {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-empty, non-comment line, split into tokens.
  std::vector<std::string> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++number_;
      const auto hash = line.find('#');
      if (hash != std::string::npos) {
        line.erase(hash);
      }
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      for (std::string tok; ss >> tok;) {
        tokens.push_back(tok);
      }
      if (!tokens.empty()) {
        return tokens;
      }
    }
    fail("unexpected end of input");
  }

  std::vector<std::string> expect(const std::string& key, std::size_t values) {
    auto tokens = next();
    if (tokens.front() != key || tokens.size() != values + 1) {
      fail("expected '" + key + "' with " + std::to_string(values) + " value(s)");
    }
    return tokens;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw FormatError("line " + std::to_string(number_) + ": " + msg);
  }

  double to_double(const std::string& s) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) {
        fail("bad number '" + s + "'");
      }
      return v;
    } catch (const std::logic_error&) {
      fail("bad number '" + s + "'");
    }
  }

  std::size_t to_count(const std::string& s) const {
    const double v = to_double(s);
    if (v < 0 || v != std::floor(v)) {
      fail("bad count '" + s + "'");
    }
    return static_cast<std::size_t>(v);
  }

  HPoint point(int m) {
    const auto tokens = next();
    if (tokens.size() != static_cast<std::size_t>(m) + 1) {
      fail("expected " + std::to_string(m + 1) + " coordinates");
    }
    Vector v(m + 1);
    for (int i = 0; i <= m; ++i) {
      v[i] = to_double(tokens[static_cast<std::size_t>(i)]);
    }
    try {
      return HPoint(v);
    } catch (const GeometryError& e) {
      fail(e.what());
    }
  }

  std::vector<HPoint> block(const std::string& key, int m) {
    const std::size_t n = to_count(expect(key, 1)[1]);
    std::vector<HPoint> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(point(m));
    }
    return out;
  }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

void write_point(std::ostream& out, const HPoint& p) {
  for (Eigen::Index i = 0; i < p.coords().size(); ++i) {
    out << (i ? " " : "") << format_double(p[static_cast<int>(i)]);
  }
  out << '\n';
}

int read_header(LineReader& r, const std::string& magic) {
  const auto head = r.next();
  if (head.size() != 2 || head[0] != magic || head[1] != "v1") {
    r.fail("expected header '" + magic + " v1'");
  }
  const double m = r.to_double(r.expect("dimension", 1)[1]);
  if (m < 1 || m != std::floor(m)) {
    r.fail("dimension must be a positive integer");
  }
  return static_cast<int>(m);
}

template <class T>
T open_and(const std::filesystem::path& path, T (*reader)(std::istream&)) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open " + path.string());
  }
  return reader(in);
}

}  // namespace

std::string format_double(double x) {
  std::ostringstream ss;
  ss << std::setprecision(17) << x;
  return ss.str();
}

void write_instance(std::ostream& out, const Instance& inst) {
  const PartialMap& map = inst.map;
  out << "hypext-instance v1\n";
  out << "dimension " << map.dimension() << '\n';
  out << "curvature -1\n";
  out << "declared_C " << format_double(map.declared_C) << '\n';
  out << "sources " << map.size() << '\n';
  for (const HPoint& p : map.sources) {
    write_point(out, p);
  }
  out << "targets " << map.targets.size() << '\n';
  for (const HPoint& p : map.targets) {
    write_point(out, p);
  }
  if (!inst.queries.empty()) {
    out << "queries " << inst.queries.size() << '\n';
    for (const HPoint& p : inst.queries) {
      write_point(out, p);
    }
  }
  out << "end\n";
}

Instance read_instance(std::istream& in) {
  LineReader r(in);
  const int m = read_header(r, "hypext-instance");
  if (r.expect("curvature", 1)[1] != "-1") {
    r.fail("only curvature -1 is supported");
  }
  Instance inst;
  inst.map.declared_C = r.to_double(r.expect("declared_C", 1)[1]);
  inst.map.sources = r.block("sources", m);
  inst.map.targets = r.block("targets", m);
  if (inst.map.sources.size() != inst.map.targets.size()) {
    r.fail("sources and targets differ in length");
  }
  for (;;) {
    const auto tokens = r.next();
    if (tokens.size() == 1 && tokens[0] == "end") {
      break;
    }
    if (tokens[0] == "queries" && tokens.size() == 2) {
      const std::size_t k = r.to_count(tokens[1]);
      for (std::size_t i = 0; i < k; ++i) {
        inst.queries.push_back(r.point(m));
      }
      continue;
    }
    r.fail("unexpected '" + tokens[0] + "'");
  }
  return inst;
}

Instance load_instance(const std::filesystem::path& path) { return open_and(path, &read_instance); }

void save_instance(const std::filesystem::path& path, const Instance& inst) {
  std::ofstream out(path);
  if (!out) {
    throw FormatError("cannot write " + path.string());
  }
  write_instance(out, inst);
}

void write_points(std::ostream& out, const std::vector<HPoint>& points) {
  out << "hypext-points v1\n";
  out << "dimension " << (points.empty() ? 0 : points.front().dimension()) << '\n';
  out << "points " << points.size() << '\n';
  for (const HPoint& p : points) {
    write_point(out, p);
  }
  out << "end\n";
}

std::vector<HPoint> read_points(std::istream& in) {
  LineReader r(in);
  const int m = read_header(r, "hypext-points");
  std::vector<HPoint> out = r.block("points", m);
  const auto tail = r.next();
  if (tail.size() != 1 || tail[0] != "end") {
    r.fail("expected 'end'");
  }
  return out;
}

std::vector<HPoint> load_points(const std::filesystem::path& path) {
  return open_and(path, &read_points);
}

void write_net(std::ostream& out, const Net& net) {
  out << "hypext-net v1\n";
  out << "epsilon " << format_double(net.epsilon) << '\n';
  out << "R " << format_double(net.R) << '\n';
  out << "num_bins " << net.num_bins << '\n';
  out << "theoretical_N " << net.theoretical_N << '\n';
  out << "centers " << net.centers.size() << '\n';
  for (std::size_t k = 0; k < net.centers.size(); ++k) {
    out << net.center_indices[k] << ' ' << net.bin_of[k] << ' ';
    write_point(out, net.centers[k]);
  }
  out << "end\n";
}

KeyValues KeyValues::parse(std::istream& in) {
  KeyValues kv;
  std::string line;
  std::size_t number = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError("line " + std::to_string(number) + ": expected key = value");
    }
    kv.values_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues KeyValues::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open " + path.string());
  }
  return parse(in);
}

std::optional<double> KeyValues::number(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    return std::nullopt;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used == it->second.size()) {
      return v;
    }
  } catch (const std::logic_error&) {
  }
  throw FormatError("config key '" + key + "' is not a number");
}

std::optional<long long> KeyValues::integer(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    return std::nullopt;
  }
  try {
    std::size_t used = 0;
    const long long v = std::stoll(it->second, &used);
    if (used == it->second.size()) {
      return v;
    }
  } catch (const std::logic_error&) {
  }
  throw FormatError("config key '" + key + "' is not an integer");
}

std::optional<std::string> KeyValues::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    return std::nullopt;
  }
  return it->second;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out << (i ? "," : "") << cells[i];
  }
  out << '\n';
}

std::string csv_cell(double x) { return format_double(x); }

}  // namespace hypext
