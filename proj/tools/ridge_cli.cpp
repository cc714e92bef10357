// ridge: command-line front end for canonicalization, evaluation, extraction
// and the piecewise-linearity certificate.
//
// Exit codes: 0 ok, 2 input error, 3 extraction residual, 4 certificate
// failure.

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <locale>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ridge/extraction.hpp"
#include "ridge/io.hpp"
#include "ridge/pwl.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitResidual = 3;
constexpr int kExitCertificate = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("RIDGE_SEED"); env && *env) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("RIDGE_SEED is not an unsigned integer: ") + env);
    }
  }
  return 0;
}

ridge::CanonicalForm load_measure(const std::string& path) {
  ridge::CanonicalForm cf = ridge::read_measure(path);
  if (cf.dropped > 0) {
    std::cerr << "note: dropped " << cf.dropped << " entr" << (cf.dropped == 1 ? "y" : "ies")
              << " with zero direction (they contribute nothing)\n";
  }
  return cf;
}

// Writes to `path`, or to stdout when path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    ridge::write_text_file(path, text);
  }
}

std::vector<ridge::Vector> read_points(const std::string& path, std::size_t dim) {
  std::istringstream in(ridge::read_text_file(path));
  std::vector<ridge::Vector> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    for (char& c : line) {
      if (c == ',' || c == '\t' || c == ';') c = ' ';
    }
    std::istringstream ls(line);
    ls.imbue(std::locale::classic());
    ridge::Vector p;
    std::string tok;
    while (ls >> tok) {
      double x = 0.0;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
      if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
        if (pts.empty() && p.empty()) break;  // header row
        throw ridge::ParseError(path + ":" + std::to_string(lineno) + ": not a number: " + tok);
      }
      p.push_back(x);
    }
    if (p.empty()) continue;
    if (p.size() != dim) {
      throw ridge::ParseError(path + ":" + std::to_string(lineno) + ": dimension mismatch (" +
                              std::to_string(p.size()) + " coordinates, expected " +
                              std::to_string(dim) + ")");
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

std::vector<ridge::Vector> grid_points(const std::vector<double>& grid, std::size_t dim) {
  if (grid.size() != 3) throw UsageError("--grid expects lo,hi,n");
  const double lo = grid[0];
  const double hi = grid[1];
  if (!(grid[2] >= 1.0) || grid[2] != static_cast<double>(static_cast<std::size_t>(grid[2]))) {
    throw UsageError("--grid: n must be a positive integer");
  }
  const auto n = static_cast<std::size_t>(grid[2]);
  double total = 1.0;
  for (std::size_t k = 0; k < dim; ++k) total *= static_cast<double>(n);
  if (total > 1e7) throw UsageError("--grid would produce more than 10^7 points");

  std::vector<ridge::Vector> pts;
  std::vector<std::size_t> idx(dim, 0);
  auto coord = [&](std::size_t i) {
    return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  for (;;) {
    ridge::Vector p(dim);
    for (std::size_t k = 0; k < dim; ++k) p[k] = coord(idx[k]);
    pts.push_back(std::move(p));
    std::size_t k = dim;
    while (k-- > 0) {
      if (++idx[k] < n) break;
      idx[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return pts;
}

ridge::LineRange line_range(const std::vector<double>& r) {
  if (r.size() != 2 || !(r[0] < r[1])) throw UsageError("--range expects lo,hi with lo < hi");
  return {r[0], r[1]};
}

int cmd_canonicalize(const std::string& in, const std::string& out) {
  const ridge::CanonicalForm cf = load_measure(in);
  emit(out, ridge::dump_measure(cf.measure, cf.tail));
  return kExitOk;
}

int cmd_eval(const std::string& path, const std::vector<double>& grid, const std::string& points,
             const std::string& out) {
  const ridge::CanonicalForm cf = load_measure(path);
  const std::size_t dim = cf.measure.dim;
  if (grid.empty() == points.empty()) throw UsageError("eval needs exactly one of --grid or --points");
  const auto pts = points.empty() ? grid_points(grid, dim) : read_points(points, dim);
  const ridge::RidgeEvaluator eval(cf.measure, cf.tail);

  std::ostringstream os;
  for (std::size_t k = 0; k < dim; ++k) os << 'x' << (k + 1) << ',';
  os << "f\n";
  for (const auto& p : pts) {
    for (double x : p) os << ridge::format_number(x) << ',';
    os << ridge::format_number(eval.value(p)) << '\n';
  }
  emit(out, os.str());
  return kExitOk;
}

int cmd_extract(const std::string& path, const std::string& out, std::optional<double> tol) {
  const ridge::CanonicalForm cf = load_measure(path);
  try {
    const ridge::FiniteNetwork net = ridge::extract_finite_network(cf.measure, cf.tail, tol);
    emit(out, ridge::dump_network(net));
  } catch (const ridge::ResidualError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "residual TV: " << ridge::format_number(e.residual_tv())
              << "  tolerance: " << ridge::format_number(e.tolerance())
              << "  atomic TV: " << ridge::format_number(ridge::total_variation(cf.measure.atoms))
              << "\n";
    return kExitResidual;
  }
  return kExitOk;
}

struct VerifyOptions {
  std::vector<std::string> checks{"creases", "slab", "cramer-wold"};
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string trace;
  std::vector<double> range{-5.0, 5.0};
  std::size_t resolution = ridge::kDefaultResolution;
  std::size_t lines = 0;
};

int cmd_verify(const std::string& path, const VerifyOptions& opt) {
  const ridge::CanonicalForm cf = load_measure(path);
  ridge::CertificateConfig cfg;
  cfg.check_creases = cfg.check_slab = cfg.check_cramer_wold = false;
  for (const auto& c : opt.checks) {
    if (c == "creases") {
      cfg.check_creases = true;
    } else if (c == "slab") {
      cfg.check_slab = true;
    } else if (c == "cramer-wold") {
      cfg.check_cramer_wold = true;
    } else {
      throw UsageError("unknown check: " + c + " (expected creases, slab, cramer-wold)");
    }
  }
  cfg.seed = resolve_seed(opt.seed);
  cfg.y_range = line_range(opt.range);
  cfg.resolution = opt.resolution;

  const std::size_t dim = cf.measure.dim;
  ridge::GeneralPositionSet gp;
  gp.seed = cfg.seed;
  if (dim >= 2) {
    const std::size_t n = dim - 1;
    const std::size_t count = opt.lines ? opt.lines : n + 3;
    if (count < n + 1) throw UsageError("--lines must be at least dim");
    gp = ridge::sample_general_position(n, count, ridge::Ball{ridge::Vector(n, 0.0), 1.0}, cfg.seed);
  }
  const ridge::Certificate cert = ridge::pwl_certificate(cf.measure, cf.tail, gp, cfg);
  emit(opt.out, ridge::dump_certificate(cert));

  if (!opt.trace.empty() && !cert.lines.empty()) {
    // The trace of the first failing line, or of the first line on success.
    std::size_t pick = 0;
    for (std::size_t i = 0; i < cert.lines.size(); ++i) {
      const auto& lc = cert.lines[i];
      bool bad = !lc.unmatched.empty();
      for (const auto& g : lc.gaps) bad = bad || !g.pass;
      for (const auto& a : lc.affinity) bad = bad || !a.affine;
      if (bad) {
        pick = i;
        break;
      }
    }
    const ridge::RidgeEvaluator eval(cf.measure, cf.tail);
    std::ofstream os(opt.trace, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + opt.trace);
    ridge::write_trace_csv(
        os, ridge::sample_line(eval.field(), cert.lines[pick].report.z0, cfg.y_range, cfg.resolution));
  }

  if (!cert.passed) {
    std::cerr << "certificate failed: " << cert.counterexample << "\n";
    return kExitCertificate;
  }
  return kExitOk;
}

int cmd_probe(const std::string& path, const std::vector<double>& z0,
              const std::vector<double>& range, std::size_t resolution, double crease_tol,
              const std::string& out, const std::string& creases_out) {
  const ridge::CanonicalForm cf = load_measure(path);
  if (z0.size() + 1 != cf.measure.dim) {
    throw UsageError("--z0 must have " + std::to_string(cf.measure.dim - 1) + " coordinates");
  }
  const ridge::RidgeEvaluator eval(cf.measure, cf.tail);
  const ridge::LineRange r = line_range(range);
  const ridge::LineTrace trace = ridge::sample_line(eval.field(), z0, r, resolution);
  std::ostringstream os;
  ridge::write_trace_csv(os, trace);
  emit(out, os.str());
  const std::string report = ridge::dump_crease_report(ridge::detect_creases(trace, r, crease_tol));
  if (creases_out.empty()) {
    std::cerr << report;
  } else {
    emit(creases_out, report);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integral representations of shallow ReLU networks", "ridge"};
  app.require_subcommand(1);

  std::string in, out, aux;

  auto* canon = app.add_subcommand("canonicalize", "Write the canonical half-sphere form of a measure");
  canon->add_option("input", in, "Measure file")->required();
  canon->add_option("output", out, "Output measure file (- for stdout)")->required();

  std::vector<double> grid;
  std::string points;
  auto* eval = app.add_subcommand("eval", "Evaluate the induced function, CSV rows x..., f");
  eval->add_option("measure", in, "Measure file")->required();
  eval->add_option("--grid", grid, "lo,hi,n: n points per axis")->delimiter(',')->expected(3);
  eval->add_option("--points", points, "File with one point per line");
  eval->add_option("--out", out, "CSV output (default stdout)");

  std::optional<double> residual_tol;
  auto* extract = app.add_subcommand("extract", "Extract a finite-width network from the atomic part");
  extract->add_option("measure", in, "Measure file")->required();
  extract->add_option("output", out, "Network file (- for stdout)")->required();
  extract->add_option("--residual-tol", residual_tol, "Largest tolerated particle TV")
      ->check(CLI::NonNegativeNumber);

  VerifyOptions vopt;
  auto* verify = app.add_subcommand("verify", "Run the piecewise-linearity certificate");
  verify->add_option("measure", in, "Measure file")->required();
  verify->add_option("--checks", vopt.checks, "creases,slab,cramer-wold")->delimiter(',');
  verify->add_option("--seed", vopt.seed, "Seed (falls back to RIDGE_SEED, then 0)");
  verify->add_option("--out", vopt.out, "Certificate report (default stdout)");
  verify->add_option("--trace", vopt.trace, "CSV trace of the first failing line");
  verify->add_option("--range", vopt.range, "lo,hi along each line")->delimiter(',')->expected(2);
  verify->add_option("--resolution", vopt.resolution, "Grid points per line")->check(CLI::Range(3, 1 << 24));
  verify->add_option("--lines", vopt.lines, "Number of lines (default dim+2)");

  std::vector<double> z0;
  std::vector<double> prange{-5.0, 5.0};
  std::size_t resolution = ridge::kDefaultResolution;
  double crease_tol = ridge::kDefaultCreaseTol;
  auto* probe = app.add_subcommand("probe", "Sample f along a vertical line and list its creases");
  probe->add_option("measure", in, "Measure file")->required();
  probe->add_option("--z0", z0, "Foot point in R^n")->delimiter(',');
  probe->add_option("--range", prange, "lo,hi")->delimiter(',')->expected(2);
  probe->add_option("--resolution", resolution, "Grid points")->check(CLI::Range(3, 1 << 24));
  probe->add_option("--crease-tol", crease_tol, "Relative crease threshold");
  probe->add_option("--out", out, "Trace CSV (default stdout)");
  probe->add_option("--creases", aux, "Crease report (default stderr)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*canon) return cmd_canonicalize(in, out);
    if (*eval) return cmd_eval(in, grid, points, out);
    if (*extract) return cmd_extract(in, out, residual_tol);
    if (*verify) return cmd_verify(in, vopt);
    if (*probe) return cmd_probe(in, z0, prange, resolution, crease_tol, out, aux);
  } catch (const ridge::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
