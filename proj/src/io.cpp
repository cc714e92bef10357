#include "ridge/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace ridge {

namespace {

using Json = nlohmann::ordered_json;

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string("expected a number for \"") + what + "\"");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ParseError(std::string("non-finite value for \"") + what + "\"");
  return x;
}

double number_or(const Json& obj, const char* key, double fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, key);
}

Vector vector_of(const Json& j, const char* what, std::size_t dim) {
  if (!j.is_array()) throw ParseError(std::string("expected an array for \"") + what + "\"");
  if (j.size() != dim) {
    throw ParseError(std::string("dimension mismatch: \"") + what + "\" has " +
                     std::to_string(j.size()) + " entries, expected " + std::to_string(dim));
  }
  Vector v;
  v.reserve(dim);
  for (const auto& x : j) v.push_back(number(x, what));
  return v;
}

const Json& required(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field \"") + key + "\"");
  return *it;
}

std::size_t dimension(const Json& doc) {
  const Json& d = required(doc, "dim");
  if (!d.is_number_integer() || d.get<long long>() < 1) {
    throw ParseError("\"dim\" must be a positive integer");
  }
  return static_cast<std::size_t>(d.get<long long>());
}

Json parse_document(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("top level must be an object");
  return doc;
}

std::vector<EuclideanEntry> entries(const Json& doc, const char* key, std::size_t dim) {
  std::vector<EuclideanEntry> out;
  auto it = doc.find(key);
  if (it == doc.end()) return out;
  if (!it->is_array()) throw ParseError(std::string("\"") + key + "\" must be an array");
  for (const auto& e : *it) {
    if (!e.is_object()) throw ParseError(std::string("entries of \"") + key + "\" must be objects");
    out.push_back(EuclideanEntry{vector_of(required(e, "a"), "a", dim), number(required(e, "b"), "b"),
                                 number(required(e, "w"), "w")});
  }
  return out;
}

Json entries_json(const std::vector<RidgeAtom>& list) {
  Json out = Json::array();
  for (const auto& e : list) out.push_back(Json{{"a", e.dir.coords()}, {"b", e.b}, {"w", e.w}});
  return out;
}

Json crease_report_json(const CreaseReport& r) {
  Json creases = Json::array();
  for (const auto& c : r.creases) creases.push_back(Json{{"y", c.y}, {"jump", c.jump}});
  return Json{{"z0", r.z0},
              {"range", {r.range.lo, r.range.hi}},
              {"resolution", r.resolution},
              {"step", r.step},
              {"threshold", r.threshold},
              {"creases", std::move(creases)}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

CanonicalForm parse_measure(const std::string& text, const Tolerances& tol) {
  const Json doc = parse_document(text);
  EuclideanMeasure t;
  t.dim = dimension(doc);
  t.atoms = entries(doc, "atoms", t.dim);
  t.particles = entries(doc, "particles", t.dim);

  AffineTail tail = AffineTail::zero(t.dim);
  tail.c0 = number_or(doc, "c0", 0.0);
  if (auto it = doc.find("tail"); it != doc.end()) {
    if (!it->is_object()) throw ParseError("\"tail\" must be an object");
    if (auto a0 = it->find("a0"); a0 != it->end()) tail.a0 = vector_of(*a0, "a0", t.dim);
    tail.b0 = number_or(*it, "b0", 0.0);
  }
  try {
    return canonicalize_full(t, tail, tol);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

CanonicalForm read_measure(const std::string& path, const Tolerances& tol) {
  return parse_measure(read_text_file(path), tol);
}

std::string dump_measure(const RidgeMeasure& m, const AffineTail& tail) {
  Json doc{{"dim", m.dim},
           {"c0", tail.c0},
           {"atoms", entries_json(m.atoms)},
           {"particles", entries_json(m.particles)},
           {"tail", {{"a0", tail.a0}, {"b0", tail.b0}}}};
  return dump(doc);
}

FiniteNetwork parse_network(const std::string& text) {
  const Json doc = parse_document(text);
  FiniteNetwork net;
  net.dim = dimension(doc);
  net.c0 = number_or(doc, "c0", 0.0);
  if (auto it = doc.find("units"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("\"units\" must be an array");
    for (const auto& u : *it) {
      if (!u.is_object()) throw ParseError("units must be objects");
      net.units.push_back(NetworkUnit{number(required(u, "c"), "c"),
                                      vector_of(required(u, "a"), "a", net.dim),
                                      number(required(u, "b"), "b")});
    }
  }
  try {
    net.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return net;
}

FiniteNetwork read_network(const std::string& path) { return parse_network(read_text_file(path)); }

std::string dump_network(const FiniteNetwork& net) {
  Json units = Json::array();
  for (const auto& u : net.units) units.push_back(Json{{"c", u.c}, {"a", u.a}, {"b", u.b}});
  return dump(Json{{"dim", net.dim}, {"c0", net.c0}, {"units", std::move(units)}});
}

std::string dump_crease_report(const CreaseReport& report) { return dump(crease_report_json(report)); }

std::string dump_certificate(const Certificate& cert) {
  Json lines = Json::array();
  for (const auto& lc : cert.lines) {
    Json gaps = Json::array();
    for (const auto& g : lc.gaps) {
      gaps.push_back(Json{{"q", g.q}, {"r", g.r}, {"slab_integral", g.value}, {"pass", g.pass}});
    }
    Json affinity = Json::array();
    for (const auto& a : lc.affinity) {
      affinity.push_back(Json{{"q", a.q},
                              {"r", a.r},
                              {"deviation", a.deviation},
                              {"limit", a.limit},
                              {"affine", a.affine}});
    }
    Json line = crease_report_json(lc.report);
    line["unmatched_creases"] = lc.unmatched;
    line["gaps"] = std::move(gaps);
    line["affinity"] = std::move(affinity);
    lines.push_back(std::move(line));
  }

  Json doc{{"passed", cert.passed},
           {"conclusion", cert.conclusion},
           {"counterexample", cert.counterexample},
           {"creases_ok", cert.creases_ok},
           {"creases_match_atoms", cert.creases_match_atoms},
           {"non_affine_gaps", cert.non_affine_gaps},
           {"max_affine_deviation", cert.max_affine_deviation},
           {"slab_ok", cert.slab_ok},
           {"residual_slab_mass", cert.residual_slab_mass}};
  if (cert.cramer_wold) {
    const auto& cw = *cert.cramer_wold;
    doc["cramer_wold"] = Json{
        {"ok", cert.cramer_wold_ok},
        {"max_abs", cw.max_abs},
        {"tol", cw.tol},
        {"per_direction", cw.per_direction},
        {"note", "tolerance factor * TV / sqrt(entries) is a heuristic scale for finite clouds"}};
  }
  doc["lines"] = std::move(lines);
  return dump(doc);
}

std::string format_number(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& os, const LineTrace& trace) {
  const std::size_t n = trace.f.size();
  os << "y,f,first_diff,second_diff\n";
  for (std::size_t j = 0; j < n; ++j) {
    os << format_number(trace.y[j]) << ',' << format_number(trace.f[j]) << ',';
    if (j + 1 < n) os << format_number(trace.f[j + 1] - trace.f[j]);
    os << ',';
    if (j >= 1 && j + 1 < n) os << format_number(trace.f[j - 1] - 2.0 * trace.f[j] + trace.f[j + 1]);
    os << '\n';
  }
}

}  // namespace ridge
