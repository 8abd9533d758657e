#pragma once

// Machine-readable reports: a minimal ordered JSON tree with deterministic
// serialization (insertion-ordered keys, 17-significant-digit decimals), so
// repeated runs produce byte-identical output.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bpm/certify.hpp"
#include "bpm/ode.hpp"
#include "bpm/problem.hpp"
#include "bpm/solve.hpp"

namespace bpm {

class JsonValue {
 public:
  enum class Type { Null, Bool, Int, Real, Str, Arr, Obj };

  JsonValue() : type_(Type::Null) {}
  static JsonValue boolean(bool b);
  static JsonValue integer(long long i);
  static JsonValue real(double d);
  static JsonValue str(std::string s);
  static JsonValue array();
  static JsonValue object();
  static JsonValue vector(const vec& v);

  // Object/array builders; return *this for chaining.
  JsonValue& set(const std::string& key, JsonValue v);
  JsonValue& push(JsonValue v);

  std::string dump(int indent = 2) const;

 private:
  Type type_;
  bool b_ = false;
  long long i_ = 0;
  double d_ = 0.0;
  std::string s_;
  std::vector<JsonValue> arr_;
  std::vector<std::pair<std::string, JsonValue>> obj_;

  void write(std::string& out, int indent, int depth) const;
};

inline constexpr const char* kToolVersion = "bpm 0.1.0";

JsonValue certificate_json(const Certificate& cert);
JsonValue root_json(const RootResult& root);
JsonValue oracle_json(const OraclePoint& pt);
JsonValue periodic_json(const PeriodicResult& pr,
                        const std::string& trajectory_path);

// Report skeleton: tool version, command, problem identity, and the
// standing user assertion the certificates rely on.
JsonValue report_skeleton(const ProblemFile& problem,
                          const std::string& command);

// 17-significant-digit text form used in reports and trajectory files.
std::string format_double(double v);

// Plain-text trajectory: one line per node, columns t x1 ... xn.
std::string trajectory_text(const Trajectory& traj);

}  // namespace bpm
