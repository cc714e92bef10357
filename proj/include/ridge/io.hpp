#pragma once

// File formats.
//
// Measure files:
//   { "dim": n+1, "c0": c,
//     "atoms":     [{"a": [...], "b": b, "w": w}, ...],
//     "particles": [{"a": [...], "b": b, "w": w}, ...],
//     "tail": {"a0": [...], "b0": b0} }
// Directions may be arbitrary nonzero vectors; the reader canonicalizes.
//
// Network files:
//   { "dim": d, "c0": c, "units": [{"c": c, "a": [...], "b": b}, ...] }
//
// Numbers are written as shortest round-trip decimals with '.' separators.

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "ridge/extraction.hpp"
#include "ridge/measure.hpp"
#include "ridge/network.hpp"
#include "ridge/pwl.hpp"

namespace ridge {

/// Malformed or invalid input file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Parses and canonicalizes a measure document.
CanonicalForm parse_measure(const std::string& text, const Tolerances& tol = {});
CanonicalForm read_measure(const std::string& path, const Tolerances& tol = {});
/// Canonical form only; ends with a newline.
std::string dump_measure(const RidgeMeasure& m, const AffineTail& tail);

FiniteNetwork parse_network(const std::string& text);
FiniteNetwork read_network(const std::string& path);
std::string dump_network(const FiniteNetwork& net);

std::string dump_crease_report(const CreaseReport& report);
std::string dump_certificate(const Certificate& cert);

/// Shortest decimal that reads back to the same double.
std::string format_number(double x);

/// Columns y, f, first_diff, second_diff. first_diff is the forward
/// difference f[j+1] - f[j]; second_diff is centred. Undefined cells are
/// left empty.
void write_trace_csv(std::ostream& os, const LineTrace& trace);

}  // namespace ridge
