#pragma once

// Plain-text instance, point-list, config and CSV formats. All floats are
// written with 17 significant digits so files round-trip exactly.
//
// Instance:
//   hypext-instance v1
//   dimension <m>
//   curvature -1
//   declared_C <C>
//   sources <n>
//   <x0 x1 ... xm>      (n lines, hyperboloid coordinates)
//   targets <n>
//   <y0 y1 ... ym>
//   [queries <k> + k lines]
//   end
// Lines starting with '#' are ignored.

#include "hypext/net.hpp"
#include "hypext/one_point.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypext {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Instance {
  PartialMap map;
  std::vector<HPoint> queries;
};

std::string format_double(double x);

void write_instance(std::ostream& out, const Instance& inst);
Instance read_instance(std::istream& in);
Instance load_instance(const std::filesystem::path& path);
void save_instance(const std::filesystem::path& path, const Instance& inst);

// hypext-points v1 / dimension <m> / points <n> / n lines / end
void write_points(std::ostream& out, const std::vector<HPoint>& points);
std::vector<HPoint> read_points(std::istream& in);
std::vector<HPoint> load_points(const std::filesystem::path& path);

// hypext-net v1, then epsilon, R, num_bins, theoretical_N and one
// "<sample index> <bin> <coords>" line per center.
void write_net(std::ostream& out, const Net& net);

/// `key = value` lines; '#' starts a comment.
class KeyValues {
 public:
  static KeyValues parse(std::istream& in);
  static KeyValues load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::optional<double> number(const std::string& key) const;
  std::optional<long long> integer(const std::string& key) const;
  std::optional<std::string> text(const std::string& key) const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Writes one CSV line; numbers go through format_double.
void write_csv_row(std::ostream& out, const std::vector<std::string>& cells);
std::string csv_cell(double x);

}  // namespace hypext
