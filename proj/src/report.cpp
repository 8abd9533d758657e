#include "bpm/report.hpp"

#include <cmath>
#include <cstdio>

namespace bpm {

JsonValue JsonValue::boolean(bool b) {
  JsonValue v;
  v.type_ = Type::Bool;
  v.b_ = b;
  return v;
}

JsonValue JsonValue::integer(long long i) {
  JsonValue v;
  v.type_ = Type::Int;
  v.i_ = i;
  return v;
}

JsonValue JsonValue::real(double d) {
  JsonValue v;
  v.type_ = Type::Real;
  v.d_ = d;
  return v;
}

JsonValue JsonValue::str(std::string s) {
  JsonValue v;
  v.type_ = Type::Str;
  v.s_ = std::move(s);
  return v;
}

JsonValue JsonValue::array() {
  JsonValue v;
  v.type_ = Type::Arr;
  return v;
}

JsonValue JsonValue::object() {
  JsonValue v;
  v.type_ = Type::Obj;
  return v;
}

JsonValue JsonValue::vector(const vec& x) {
  JsonValue v = array();
  for (double e : x) v.push(real(e));
  return v;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
  obj_.emplace_back(key, std::move(v));
  return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
  arr_.push_back(std::move(v));
  return *this;
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return v > 0 ? "1e999" : (v < 0 ? "-1e999" : "null");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
}

void pad(std::string& out, int indent, int depth) {
  out.append(static_cast<std::size_t>(indent) * depth, ' ');
}

}  // namespace

void JsonValue::write(std::string& out, int indent, int depth) const {
  switch (type_) {
    case Type::Null: out += "null"; return;
    case Type::Bool: out += b_ ? "true" : "false"; return;
    case Type::Int: out += std::to_string(i_); return;
    case Type::Real: out += format_double(d_); return;
    case Type::Str: write_escaped(out, s_); return;
    case Type::Arr: {
      if (arr_.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line; nested structures get spread.
      bool flat = true;
      for (const JsonValue& v : arr_)
        if (v.type_ == Type::Arr || v.type_ == Type::Obj) flat = false;
      out += '[';
      for (std::size_t i = 0; i < arr_.size(); ++i) {
        if (!flat) {
          out += '\n';
          pad(out, indent, depth + 1);
        }
        arr_[i].write(out, indent, depth + 1);
        if (i + 1 < arr_.size()) out += flat ? ", " : ",";
      }
      if (!flat) {
        out += '\n';
        pad(out, indent, depth);
      }
      out += ']';
      return;
    }
    case Type::Obj: {
      if (obj_.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      for (std::size_t i = 0; i < obj_.size(); ++i) {
        out += '\n';
        pad(out, indent, depth + 1);
        write_escaped(out, obj_[i].first);
        out += ": ";
        obj_[i].second.write(out, indent, depth + 1);
        if (i + 1 < obj_.size()) out += ',';
      }
      out += '\n';
      pad(out, indent, depth);
      out += '}';
      return;
    }
  }
}

std::string JsonValue::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  out += '\n';
  return out;
}

namespace {

JsonValue rigor_json(const RigorMode& rigor) {
  JsonValue r = JsonValue::object();
  if (rigor.kind == RigorMode::Kind::Sampled) {
    r.set("mode", JsonValue::str("sampled"));
    r.set("density", JsonValue::integer(rigor.density));
  } else {
    r.set("mode", JsonValue::str("lipschitz"));
    r.set("lipschitz", JsonValue::real(rigor.lipschitz));
    r.set("max_depth", JsonValue::integer(rigor.max_depth));
    r.set("cell_budget", JsonValue::integer(rigor.cell_budget));
  }
  return r;
}

}  // namespace

JsonValue certificate_json(const Certificate& cert) {
  JsonValue j = JsonValue::object();
  j.set("condition", JsonValue::str(condition_name(cert.condition)));
  j.set("verdict", JsonValue::str(verdict_name(cert.verdict)));
  if (cert.sign != 0) j.set("sign", JsonValue::integer(cert.sign));
  if (!cert.margins.empty()) {
    JsonValue m = JsonValue::object();
    for (const FaceMargin& fm : cert.margins)
      m.set(fm.label, JsonValue::real(fm.margin));
    j.set("margins", std::move(m));
    j.set("worst_margin", JsonValue::real(cert.worst_margin()));
  }
  if (cert.anchor) j.set("anchor", JsonValue::vector(*cert.anchor));
  if (cert.witness) j.set("witness", JsonValue::vector(*cert.witness));
  if (!cert.reason.empty()) j.set("reason", JsonValue::str(cert.reason));
  j.set("rigor", rigor_json(cert.rigor));
  if (!cert.data.empty()) {
    JsonValue d = JsonValue::object();
    for (const auto& [k, v] : cert.data) d.set(k, JsonValue::real(v));
    j.set("data", std::move(d));
  }
  // The closure hypothesis (zero not on the image boundary without being
  // attained) cannot be checked numerically; certificates assert existence
  // modulo this standing assumption. In finite dimension a certified
  // condition yields an attained zero.
  if (cert.verdict == Verdict::Certified &&
      cert.condition != Condition::Invariance)
    j.set("conclusion", JsonValue::str("zero guaranteed (finite dimension)"));
  return j;
}

JsonValue root_json(const RootResult& root) {
  JsonValue j = JsonValue::object();
  j.set("method", JsonValue::str(root.method));
  j.set("x", JsonValue::vector(root.x));
  j.set("residual", JsonValue::real(root.residual));
  j.set("iterations", JsonValue::integer(root.iterations));
  j.set("converged", JsonValue::boolean(root.converged));
  if (!root.stages.empty()) {
    JsonValue stages = JsonValue::array();
    for (const HomotopyStage& s : root.stages) {
      JsonValue e = JsonValue::object();
      e.set("n", JsonValue::real(s.n));
      e.set("residual", JsonValue::real(s.residual));
      e.set("inner_converged", JsonValue::boolean(s.inner_converged));
      stages.push(std::move(e));
    }
    j.set("stages", std::move(stages));
  }
  return j;
}

JsonValue oracle_json(const OraclePoint& pt) {
  JsonValue j = JsonValue::object();
  j.set("method", JsonValue::str("oracle"));
  j.set("x", JsonValue::vector(pt.x));
  j.set("residual", JsonValue::real(pt.residual));
  return j;
}

JsonValue periodic_json(const PeriodicResult& pr,
                        const std::string& trajectory_path) {
  JsonValue j = JsonValue::object();
  j.set("a", JsonValue::vector(pr.a));
  j.set("displacement", JsonValue::real(pr.displacement));
  j.set("max_radius", JsonValue::real(pr.max_radius));
  j.set("steps", JsonValue::integer(pr.steps));
  j.set("iterations", JsonValue::integer(pr.iterations));
  j.set("converged", JsonValue::boolean(pr.converged));
  if (!trajectory_path.empty())
    j.set("trajectory", JsonValue::str(trajectory_path));
  j.set("note",
        JsonValue::str("finite-dimensional run: continuity gives compactness; "
                       "the lipschitz constant is used for the step budget"));
  return j;
}

JsonValue report_skeleton(const ProblemFile& problem,
                          const std::string& command) {
  JsonValue j = JsonValue::object();
  j.set("tool", JsonValue::str(kToolVersion));
  j.set("command", JsonValue::str(command));
  JsonValue prob = JsonValue::object();
  prob.set("path", JsonValue::str(problem.path));
  prob.set("digest", JsonValue::str(problem.digest));
  prob.set("dim", JsonValue::integer(problem.space.dim));
  prob.set("norm", JsonValue::str(norm_name(problem.space)));
  j.set("problem", std::move(prob));
  j.set("assumption",
        JsonValue::str("user asserts: zero is attained if it lies in the "
                       "closure of the image (not checked numerically)"));
  return j;
}

std::string trajectory_text(const Trajectory& traj) {
  std::string out;
  for (const TrajectoryPoint& p : traj) {
    out += format_double(p.t);
    for (double v : p.x) {
      out += ' ';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace bpm
