#pragma once

// JSON problem files.
//
// {
//   "version": 1,
//   "dimension": d,
//   "constraints": [
//     {"type": "linear", "A": [[...], ...], "b": [...]},        A x >= b
//     {"type": "ellipsoid", "Q": [[...]], "p": [...], "l": l},   l + p.x + x.Qx/2 <= 0
//     {"type": "psd", "n": n, "offset": k}                       svec block
//   ],
//   "potentials": [
//     {"type": "linear", "c": [...]},
//     {"type": "quadratic", "sigma": [[...]], "mu": [...]},
//     {"type": "norm", "sigma": [[...]], "mu": [...]},
//     {"type": "entropy"}, {"type": "power", "p": p}, {"type": "log"},
//     {"type": "exp"}, {"type": "logdet", "n": n, "offset": k}
//   ],
//   "sampler": {"metric": "log"|"vaidya"|"lewis", "r0", "lazy", "c_inner",
//               "inner_budget", "eps", "thin", "seed", "start": [...]},
//   "bounding_box": {"lower": [...], "upper": [...]},
//   "output": {"samples": path, "format": "jsonl"|"csv"}
// }
//
// Matrices are row-major arrays of rows. A PSD block of side n occupies
// n(n+1)/2 coordinates from `offset`, holding the lower triangle column by
// column: X11, X21, ..., Xn1, X22, X32, ..., Xnn.
// Only "version" and "dimension" are required. Unknown keys are errors.

#include "dikin/cooling.hpp"
#include "dikin/diagnostics.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace dikin {

struct SamplerSettings {
  LinearMetricKind metric = LinearMetricKind::log;
  double r0 = 0.3;
  double lazy = 0.5;
  int c_inner = 50;
  long inner_budget = 0;
  double eps = 0.1;
  long thin = 1;
  std::uint64_t seed = 0;
  std::optional<Vector> start;
};

struct OutputSettings {
  std::string samples;
  std::string format = "jsonl";
};

struct ProblemFile {
  int version = 1;
  ProblemSpec spec;
  SamplerSettings sampler;
  std::optional<Box> bounding_box;
  OutputSettings output;
};

/// Throws ParseError naming the JSON pointer of the offending value.
ProblemFile parse_problem(const nlohmann::json& j);
ProblemFile parse_problem_text(const std::string& text);
ProblemFile load_problem(const std::string& path);

nlohmann::json to_json(const ProblemFile& f);
std::string serialize_problem(const ProblemFile& f);

CoolingConfig cooling_config(const SamplerSettings& s);
BuildOptions build_options(const SamplerSettings& s);

nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const Matrix& M);

}  // namespace dikin
