#include "bpm/problem.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

#include "bpm/errors.hpp"

namespace bpm {

namespace {

struct Line {
  int number;
  std::string key, value;
};

using Section = std::vector<Line>;

[[noreturn]] void fail(int line, const std::string& msg) {
  throw parse_error("line " + std::to_string(line) + ": " + msg,
                    static_cast<std::size_t>(line));
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, int line) {
  const std::string t = trim(text);
  double v = 0.0;
  auto [next, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || next != t.data() + t.size())
    fail(line, "malformed number '" + t + "'");
  return v;
}

int parse_int(const std::string& text, int line) {
  const double v = parse_double(text, line);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) fail(line, "expected an integer");
  return i;
}

vec parse_vector(const std::string& text, int line) {
  vec out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) out.push_back(parse_double(piece, line));
  if (out.empty()) fail(line, "expected a comma-separated vector");
  return out;
}

const Line* find(const Section& sec, const std::string& key) {
  for (const Line& l : sec)
    if (l.key == key) return &l;
  return nullptr;
}

const Line& need(const Section& sec, const std::string& key, int sec_line) {
  const Line* l = find(sec, key);
  if (!l) fail(sec_line, "missing key '" + key + "'");
  return *l;
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

ProblemFile parse_problem_text(const std::string& text,
                               const std::string& path) {
  std::map<std::string, Section> sections;
  std::map<std::string, int> section_lines;
  {
    std::stringstream ss(text);
    std::string raw;
    std::string current;
    int number = 0;
    while (std::getline(ss, raw)) {
      ++number;
      const auto hash = raw.find('#');
      if (hash != std::string::npos) raw = raw.substr(0, hash);
      const std::string line = trim(raw);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail(number, "unterminated section header");
        current = trim(line.substr(1, line.size() - 2));
        if (current.empty()) fail(number, "empty section name");
        if (sections.count(current))
          fail(number, "duplicate section [" + current + "]");
        sections[current];
        section_lines[current] = number;
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail(number, "expected 'key = value'");
      if (current.empty()) fail(number, "key outside any section");
      sections[current].push_back(
          {number, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
    }
    if (sections.empty()) fail(1, "empty problem file");
  }

  ProblemFile p;
  p.path = path;
  p.digest = fnv1a_hex(text);

  // [space]
  if (!sections.count("space")) fail(1, "missing [space] section");
  const Section& space_sec = sections["space"];
  const int space_line = section_lines["space"];
  p.space.dim = parse_int(need(space_sec, "dim", space_line).value,
                          need(space_sec, "dim", space_line).number);
  if (p.space.dim < 1) fail(space_line, "dim must be >= 1");
  const Line& norm_line = need(space_sec, "norm", space_line);
  const std::string norm_text = norm_line.value;
  if (norm_text == "l1")
    p.space.norm = Norm::L1;
  else if (norm_text == "l2")
    p.space.norm = Norm::L2;
  else if (norm_text == "linf")
    p.space.norm = Norm::Linf;
  else if (norm_text == "lp") {
    p.space.norm = Norm::Lp;
    const Line& pl = need(space_sec, "p", space_line);
    p.space.p = parse_double(pl.value, pl.number);
    if (!(p.space.p > 1.0)) fail(pl.number, "lp exponent must exceed 1");
  } else {
    fail(norm_line.number, "unknown norm '" + norm_text +
                               "' (expected l1, l2, lp, linf)");
  }

  // [domain]
  if (sections.count("domain")) {
    const Section& dom = sections["domain"];
    const int dom_line = section_lines["domain"];
    const std::string type = need(dom, "type", dom_line).value;
    if (type == "box") {
      const Line& lo = need(dom, "lo", dom_line);
      const Line& hi = need(dom, "hi", dom_line);
      BoxDomain box{parse_vector(lo.value, lo.number),
                    parse_vector(hi.value, hi.number)};
      if (box.dim() != p.space.dim)
        fail(lo.number, "box bounds must have dim entries");
      try {
        box.validate();
      } catch (const std::exception& e) {
        fail(dom_line, e.what());
      }
      p.domain = box;
    } else if (type == "ball") {
      const Line& c = need(dom, "center", dom_line);
      const Line& r = need(dom, "radius", dom_line);
      BallDomain ball{parse_vector(c.value, c.number),
                      parse_double(r.value, r.number), p.space};
      if (ball.dim() != p.space.dim)
        fail(c.number, "ball center must have dim entries");
      if (!(ball.radius > 0)) fail(r.number, "radius must be positive");
      p.domain = ball;
    } else if (type == "hilbert-cube") {
      const Line& t = need(dom, "truncation", dom_line);
      HilbertCubeDomain cube{parse_int(t.value, t.number)};
      if (cube.truncation != p.space.dim)
        fail(t.number, "truncation must equal dim");
      p.domain = cube;
    } else {
      fail(dom_line, "unknown domain type '" + type + "'");
    }
  }

  // [map]
  if (!sections.count("map")) fail(1, "missing [map] section");
  const Section& map_sec = sections["map"];
  const int map_line = section_lines["map"];
  std::vector<std::string> comps(p.space.dim);
  int seen = 0;
  for (const Line& l : map_sec) {
    if (l.key.size() < 2 || l.key[0] != 'f')
      fail(l.number, "map keys must be f1..fn");
    const int idx = parse_int(l.key.substr(1), l.number);
    if (idx < 1 || idx > p.space.dim)
      fail(l.number, "map component index out of range");
    if (!comps[idx - 1].empty()) fail(l.number, "duplicate component " + l.key);
    comps[idx - 1] = l.value;
    ++seen;
  }
  if (seen != p.space.dim)
    fail(map_line, "expected exactly " + std::to_string(p.space.dim) +
                       " map components f1..f" + std::to_string(p.space.dim));
  try {
    p.map = MapSpec::from_expressions(comps, p.space.dim);
  } catch (const parse_error& e) {
    fail(map_line, std::string("bad map expression: ") + e.what());
  }
  p.map_sources = std::move(comps);

  // [linear]
  if (sections.count("linear")) {
    const Section& lin = sections["linear"];
    const int lin_line = section_lines["linear"];
    mat l(p.space.dim, p.space.dim);
    for (int r = 0; r < p.space.dim; ++r) {
      const Line& row = need(lin, "row" + std::to_string(r + 1), lin_line);
      const vec entries = parse_vector(row.value, row.number);
      if (static_cast<int>(entries.size()) != p.space.dim)
        fail(row.number, "matrix rows must have dim entries");
      for (int c = 0; c < p.space.dim; ++c) l(r, c) = entries[c];
    }
    p.linear = std::move(l);
  }

  // [ode]
  if (sections.count("ode")) {
    const Section& ode = sections["ode"];
    const int ode_line = section_lines["ode"];
    OdeSection o;
    const Line& t = need(ode, "T", ode_line);
    o.T = parse_double(t.value, t.number);
    const Line& r = need(ode, "R", ode_line);
    o.R = parse_double(r.value, r.number);
    const Line& li = need(ode, "lipschitz", ode_line);
    o.lipschitz = parse_double(li.value, li.number);
    if (!(o.T > 0)) fail(t.number, "T must be positive");
    if (!(o.R > 0)) fail(r.number, "R must be positive");
    if (o.lipschitz < 0) fail(li.number, "lipschitz must be nonnegative");
    p.ode = o;
  } else if (p.map.time_dependent()) {
    fail(map_line, "map uses t but there is no [ode] section");
  }

  // [growth]
  if (sections.count("growth")) {
    const Section& g = sections["growth"];
    const int g_line = section_lines["growth"];
    GrowthSection gs;
    const Line& a = need(g, "alpha", g_line);
    gs.alpha = parse_double(a.value, a.number);
    const Line& b = need(g, "beta", g_line);
    gs.beta = parse_double(b.value, b.number);
    if (gs.alpha < 0 || gs.beta < 0)
      fail(a.number, "growth constants must be nonnegative");
    p.growth = gs;
  }

  if (!p.domain && !p.ode)
    fail(1, "a [domain] section is required (unless [ode] implies a ball)");
  return p;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw parse_error("cannot open problem file '" + path + "'", 0);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_problem_text(buffer.str(), path);
}

Domain ProblemFile::effective_domain() const {
  if (domain) return *domain;
  if (ode) {
    if (space.norm == Norm::Linf)
      return BoxDomain{vec(space.dim, -ode->R), vec(space.dim, ode->R)};
    return BallDomain{vec(space.dim, 0.0), ode->R, space};
  }
  throw precondition_error("problem has no domain");
}

MapSpec ProblemFile::solve_map() const {
  if (!linear) return map;
  mat inv;
  if (!invert(*linear, inv))
    throw precondition_error("linear section is singular");
  const MapSpec& g = map;
  return MapSpec::from_function(
      space.dim, space.dim,
      [inv, g](const vec& x, double) { return add(x, matvec(inv, g.eval(x))); },
      false);
}

}  // namespace bpm
