#include "dikin/problem_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace dikin {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError((where.empty() ? "/" : where) + ": " + what);
}

void only_keys(const json& j, const std::string& where,
               std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(where, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) fail(where + "/" + k, "unknown field");
  }
}

const json& need(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) fail(where + "/" + key, "missing required field");
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

long integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<long>();
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

Vector vec(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Index>(i)) = number(j[i], where + "/" + std::to_string(i));
  }
  return v;
}

Matrix mat(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of rows");
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix M(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string wi = where + "/" + std::to_string(i);
    const Vector r = vec(j[i], wi);
    if (static_cast<size_t>(r.size()) != cols) fail(wi, "ragged matrix row");
    M.row(static_cast<Index>(i)) = r.transpose();
  }
  return M;
}

ConstraintTerm parse_constraint(const json& j, const std::string& w) {
  const std::string type = text(need(j, w, "type"), w + "/type");
  if (type == "linear") {
    only_keys(j, w, {"type", "A", "b"});
    return LinearConstraint{mat(need(j, w, "A"), w + "/A"),
                            vec(need(j, w, "b"), w + "/b")};
  }
  if (type == "ellipsoid") {
    only_keys(j, w, {"type", "Q", "p", "l"});
    const Matrix Q = mat(need(j, w, "Q"), w + "/Q");
    const Vector p = j.contains("p") ? vec(j.at("p"), w + "/p")
                                     : Vector::Zero(Q.rows());
    return EllipsoidConstraint{Q, p, number(need(j, w, "l"), w + "/l")};
  }
  if (type == "psd") {
    only_keys(j, w, {"type", "n", "offset"});
    return PsdConstraint{integer(need(j, w, "n"), w + "/n"),
                         j.contains("offset") ? integer(j.at("offset"), w + "/offset") : 0};
  }
  fail(w + "/type", "unknown constraint type '" + type + "'");
}

PotentialTerm parse_potential(const json& j, const std::string& w) {
  const std::string type = text(need(j, w, "type"), w + "/type");
  if (type == "linear") {
    only_keys(j, w, {"type", "c"});
    return LinearPotential{vec(need(j, w, "c"), w + "/c")};
  }
  if (type == "quadratic" || type == "norm") {
    only_keys(j, w, {"type", "sigma", "mu"});
    const Matrix S = mat(need(j, w, "sigma"), w + "/sigma");
    const Vector mu = j.contains("mu") ? vec(j.at("mu"), w + "/mu")
                                       : Vector::Zero(S.rows());
    if (type == "quadratic") return QuadraticPotential{S, mu};
    return NormPotential{S, mu};
  }
  if (type == "entropy") {
    only_keys(j, w, {"type"});
    return EntropyPotential{};
  }
  if (type == "power") {
    only_keys(j, w, {"type", "p"});
    return PowerPotential{number(need(j, w, "p"), w + "/p")};
  }
  if (type == "log") {
    only_keys(j, w, {"type"});
    return LogPotential{};
  }
  if (type == "exp") {
    only_keys(j, w, {"type"});
    return ExpPotential{};
  }
  if (type == "logdet") {
    only_keys(j, w, {"type", "n", "offset"});
    return LogDetPotential{integer(need(j, w, "n"), w + "/n"),
                           j.contains("offset") ? integer(j.at("offset"), w + "/offset") : 0};
  }
  fail(w + "/type", "unknown potential type '" + type + "'");
}

SamplerSettings parse_sampler(const json& j, Index dim) {
  const std::string w = "/sampler";
  only_keys(j, w, {"metric", "r0", "lazy", "c_inner", "inner_budget", "eps",
                   "thin", "seed", "start"});
  SamplerSettings s;
  if (j.contains("metric")) {
    try {
      s.metric = parse_linear_kind(text(j.at("metric"), w + "/metric"));
    } catch (const ParseError& e) {
      fail(w + "/metric", e.what());
    }
  }
  if (j.contains("r0")) s.r0 = number(j.at("r0"), w + "/r0");
  if (j.contains("lazy")) s.lazy = number(j.at("lazy"), w + "/lazy");
  if (j.contains("c_inner")) s.c_inner = static_cast<int>(integer(j.at("c_inner"), w + "/c_inner"));
  if (j.contains("inner_budget")) s.inner_budget = integer(j.at("inner_budget"), w + "/inner_budget");
  if (j.contains("eps")) s.eps = number(j.at("eps"), w + "/eps");
  if (j.contains("thin")) s.thin = integer(j.at("thin"), w + "/thin");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) fail(w + "/seed", "expected a non-negative integer");
    s.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("start")) {
    s.start = vec(j.at("start"), w + "/start");
    if (s.start->size() != dim) fail(w + "/start", "length differs from dimension");
  }
  if (!(s.r0 > 0.0 && s.r0 <= 1.0)) fail(w + "/r0", "must lie in (0, 1]");
  if (!(s.lazy >= 0.0 && s.lazy < 1.0)) fail(w + "/lazy", "must lie in [0, 1)");
  if (s.c_inner < 1) fail(w + "/c_inner", "must be >= 1");
  if (!(s.eps > 0.0 && s.eps < 1.0)) fail(w + "/eps", "must lie in (0, 1)");
  if (s.thin < 1) fail(w + "/thin", "must be >= 1");
  return s;
}

}  // namespace

ProblemFile parse_problem(const json& j) {
  only_keys(j, "", {"version", "dimension", "constraints", "potentials",
                    "sampler", "bounding_box", "output"});
  ProblemFile f;
  f.version = static_cast<int>(integer(need(j, "", "version"), "/version"));
  if (f.version != 1) fail("/version", "unsupported version");
  f.spec.dim = integer(need(j, "", "dimension"), "/dimension");
  if (f.spec.dim < 1) fail("/dimension", "must be >= 1");
  if (j.contains("constraints")) {
    const json& cs = j.at("constraints");
    if (!cs.is_array()) fail("/constraints", "expected an array");
    for (size_t i = 0; i < cs.size(); ++i) {
      f.spec.constraints.push_back(parse_constraint(cs[i], "/constraints/" + std::to_string(i)));
    }
  }
  if (j.contains("potentials")) {
    const json& ps = j.at("potentials");
    if (!ps.is_array()) fail("/potentials", "expected an array");
    for (size_t i = 0; i < ps.size(); ++i) {
      f.spec.potentials.push_back(parse_potential(ps[i], "/potentials/" + std::to_string(i)));
    }
  }
  try {
    f.spec.validate();
  } catch (const Error& e) {
    fail("", e.what());
  }
  if (j.contains("sampler")) f.sampler = parse_sampler(j.at("sampler"), f.spec.dim);
  if (j.contains("bounding_box")) {
    const json& b = j.at("bounding_box");
    only_keys(b, "/bounding_box", {"lower", "upper"});
    Box box{vec(need(b, "/bounding_box", "lower"), "/bounding_box/lower"),
            vec(need(b, "/bounding_box", "upper"), "/bounding_box/upper")};
    if (box.lower.size() != f.spec.dim || box.upper.size() != f.spec.dim) {
      fail("/bounding_box", "length differs from dimension");
    }
    if ((box.upper.array() <= box.lower.array()).any()) {
      fail("/bounding_box", "upper must exceed lower");
    }
    f.bounding_box = box;
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    only_keys(o, "/output", {"samples", "format"});
    if (o.contains("samples")) f.output.samples = text(o.at("samples"), "/output/samples");
    if (o.contains("format")) {
      f.output.format = text(o.at("format"), "/output/format");
      if (f.output.format != "jsonl" && f.output.format != "csv") {
        fail("/output/format", "expected 'jsonl' or 'csv'");
      }
    }
  }
  return f;
}

ProblemFile parse_problem_text(const std::string& s) {
  json j;
  try {
    j = json::parse(s);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("/: invalid JSON: ") + e.what());
  }
  return parse_problem(j);
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str());
}

json to_json(const Vector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_json(const Matrix& M) {
  json a = json::array();
  for (Index i = 0; i < M.rows(); ++i) a.push_back(to_json(Vector(M.row(i).transpose())));
  return a;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

json to_json(const ProblemFile& f) {
  json j;
  j["version"] = f.version;
  j["dimension"] = f.spec.dim;
  json cs = json::array();
  for (const auto& c : f.spec.constraints) {
    cs.push_back(std::visit(
        overloaded{
            [](const LinearConstraint& l) {
              return json{{"type", "linear"}, {"A", to_json(l.A)}, {"b", to_json(l.b)}};
            },
            [](const EllipsoidConstraint& e) {
              return json{{"type", "ellipsoid"}, {"Q", to_json(e.Q)},
                          {"p", to_json(e.p)}, {"l", e.l}};
            },
            [](const PsdConstraint& p) {
              return json{{"type", "psd"}, {"n", p.n}, {"offset", p.offset}};
            },
        },
        c));
  }
  j["constraints"] = cs;
  json ps = json::array();
  for (const auto& p : f.spec.potentials) {
    ps.push_back(std::visit(
        overloaded{
            [](const LinearPotential& l) { return json{{"type", "linear"}, {"c", to_json(l.c)}}; },
            [](const QuadraticPotential& q) {
              return json{{"type", "quadratic"}, {"sigma", to_json(q.sigma)}, {"mu", to_json(q.mu)}};
            },
            [](const NormPotential& q) {
              return json{{"type", "norm"}, {"sigma", to_json(q.sigma)}, {"mu", to_json(q.mu)}};
            },
            [](const EntropyPotential&) { return json{{"type", "entropy"}}; },
            [](const PowerPotential& p) { return json{{"type", "power"}, {"p", p.p}}; },
            [](const LogPotential&) { return json{{"type", "log"}}; },
            [](const ExpPotential&) { return json{{"type", "exp"}}; },
            [](const LogDetPotential& p) {
              return json{{"type", "logdet"}, {"n", p.n}, {"offset", p.offset}};
            },
        },
        p));
  }
  j["potentials"] = ps;
  const auto& s = f.sampler;
  json sj{{"metric", to_string(s.metric)}, {"r0", s.r0}, {"lazy", s.lazy},
          {"c_inner", s.c_inner}, {"inner_budget", s.inner_budget},
          {"eps", s.eps}, {"thin", s.thin}, {"seed", s.seed}};
  if (s.start) sj["start"] = to_json(*s.start);
  j["sampler"] = sj;
  if (f.bounding_box) {
    j["bounding_box"] = {{"lower", to_json(f.bounding_box->lower)},
                         {"upper", to_json(f.bounding_box->upper)}};
  }
  json o{{"format", f.output.format}};
  if (!f.output.samples.empty()) o["samples"] = f.output.samples;
  j["output"] = o;
  return j;
}

std::string serialize_problem(const ProblemFile& f) { return to_json(f).dump(2); }

CoolingConfig cooling_config(const SamplerSettings& s) {
  CoolingConfig c;
  c.r0 = s.r0;
  c.laziness = s.lazy;
  c.c_inner = s.c_inner;
  c.inner_budget = s.inner_budget;
  c.eps = s.eps;
  c.thin = s.thin;
  c.seed = s.seed;
  c.hint = s.start;
  return c;
}

BuildOptions build_options(const SamplerSettings& s) {
  BuildOptions b;
  b.linear = s.metric;
  return b;
}

}  // namespace dikin
