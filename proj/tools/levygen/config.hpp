#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "levygen/asymptotics.hpp"

namespace levygen::cli {

using json = nlohmann::json;

/// Read-only view of one JSON object that records which keys were read, so
/// done() can reject anything the schema does not know.
class Node {
 public:
  Node(const json& j, std::string path);

  const std::string& path() const { return path_; }
  const json& raw() const { return *j_; }
  bool has(const std::string& key) const;
  Node at(const std::string& key) const;
  std::optional<Node> opt(const std::string& key) const;
  const json& value(const std::string& key) const;

  double num(const std::string& key) const;
  double num(const std::string& key, double fallback) const;
  long integer(const std::string& key) const;
  long integer(const std::string& key, long fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::string str(const std::string& key) const;
  std::string str(const std::string& key, const std::string& fallback) const;
  Vector vec(const std::string& key) const;
  std::vector<double> list(const std::string& key) const;
  Matrix mat(const std::string& key) const;

  /// Throws ConfigError naming the first key that was never read.
  void done() const;
  std::string child(const std::string& key) const { return path_ + "." + key; }

 private:
  const json* j_;
  std::string path_;
  std::shared_ptr<std::set<std::string>> seen_;
};

[[noreturn]] void fail(const std::string& path, const std::string& what);

double as_number(const json& j, const std::string& path);
Vector as_vector(const json& j, const std::string& path);
Matrix as_matrix(const json& j, const std::string& path);
std::uint64_t as_seed(const json& j, const std::string& path);
std::uint64_t parse_seed(const std::string& text, const std::string& path);

/// Number or expression string in x.
ScalarField scalar_field(const json& j, const std::string& path, std::string* desc = nullptr);
/// Rows of numbers or expressions, each of length k; *rows receives the row count.
MatrixField matrix_field(const json& j, const std::string& path, int k, int* rows, std::string* desc);

LevyMeasureSpec measure(const json& j, const std::string& path);
LevyTriplet triplet(const Node& n);
Symbol symbol(const json& j, const std::string& path);
TestFunction function(const json& j, const std::string& path, int d);
std::vector<Vector> grid(const json& j, const std::string& path);
VariableOrderFn order(const json& j, const std::string& path, const std::vector<Vector>& sample);
TargetSet target(const json& j, const std::string& path);
SmallJumpOptions small_jumps(const json& j, const std::string& path);
ProcessModel model(const json& j, const std::string& path);
std::vector<double> t_grid(const json& j, const std::string& path);
GrowthFunction growth(const json& j, const std::string& path);

/// Loads a JSON document; parse errors become ConfigError with the byte offset.
json load(const std::string& file);

}  // namespace levygen::cli
