#include "dikin/cli.hpp"

#include "dikin/problem_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace dikin {

using nlohmann::json;

unsigned worker_count(unsigned requested) {
  unsigned n = std::max(1u, requested);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  n = std::min(n, hw);
  if (const char* env = std::getenv("DIKIN_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  const auto dots = s.find("..");
  try {
    if (dots != std::string::npos) {
      const int a = std::stoi(s.substr(0, dots));
      const int b = std::stoi(s.substr(dots + 2));
      if (b < a) throw std::invalid_argument("empty range");
      for (int v = a; v <= b; ++v) out.push_back(v);
      return out;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  } catch (const std::exception&) {
    throw ParseError("cannot read integer list '" + s + "'");
  }
  if (out.empty()) throw ParseError("empty integer list");
  return out;
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_samples(std::ostream& os, const Samples& xs, const std::string& format) {
  if (format == "csv") {
    if (!xs.empty()) {
      for (Index j = 0; j < xs.front().size(); ++j) os << (j ? "," : "") << "x" << j;
      os << "\n";
    }
    for (const auto& x : xs) {
      for (Index j = 0; j < x.size(); ++j) os << (j ? "," : "") << num(x(j));
      os << "\n";
    }
    return;
  }
  for (const auto& x : xs) {
    os << "[";
    for (Index j = 0; j < x.size(); ++j) os << (j ? "," : "") << num(x(j));
    os << "]\n";
  }
}

Samples read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open sample file");
  Samples xs;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      xs.push_back(Eigen::Map<const Vector>(j.get<std::vector<double>>().data(),
                                            static_cast<Index>(j.size())));
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": not a JSON array of numbers");
    }
  }
  return xs;
}

json metric_json(const Metric& g) {
  const auto& p = g.params();
  json j{{"name", p.name},
         {"nu", p.nu},
         {"nu_bar", p.nu_bar},
         {"applied_scaling", p.applied_scaling},
         {"ssc", to_string(p.flags.ssc)},
         {"ltsc", to_string(p.flags.ltsc)},
         {"asc", to_string(p.flags.asc)}};
  if (const auto* c = dynamic_cast<const CompositeMetric*>(&g)) {
    json parts = json::array();
    for (const auto& part : c->parts()) parts.push_back(metric_json(*part));
    j["parts"] = parts;
  }
  return j;
}

json report_json(const CoolingReport& r) {
  json trace = json::array();
  for (const auto& t : r.trace) {
    trace.push_back({{"phase", t.phase},
                     {"sigma2", std::isfinite(t.sigma2) ? json(t.sigma2) : json("inf")},
                     {"r", t.r},
                     {"steps", t.steps},
                     {"acceptance", t.acceptance}});
  }
  return {{"d", r.d},
          {"nu", r.nu},
          {"nu_bar", r.nu_bar},
          {"sigma0_sq", r.sigma0_sq},
          {"x_star", to_json(r.x_star)},
          {"phi_offset_from_pure_center", r.phi_offset_from_pure_center},
          {"skipped_phase2", r.skipped_phase2},
          {"phase2_updates", r.phase2_updates},
          {"phase3_updates", r.phase3_updates},
          {"phase1_attempts", r.phase1_attempts},
          {"inner_budget", r.inner_budget},
          {"phase4_burn", r.phase4_burn},
          {"final_acceptance", r.final_stats.acceptance_rate()},
          {"trace", trace}};
}

struct ChainResult {
  Samples xs;
  CoolingReport report;
  json metric;
};

// Independent chains with seeds seed, seed + 1, ...; results keep chain order.
std::vector<ChainResult> run_chains(const ProblemFile& f, long n, unsigned chains,
                                    bool verbose, std::ostream& err) {
  std::vector<ChainResult> out(chains);
  std::vector<std::exception_ptr> errors(chains);
  std::mutex log_mutex;
  std::atomic<unsigned> next{0};
  auto work = [&]() {
    for (unsigned i = next++; i < chains; i = next++) {
      try {
        CoolingConfig cfg = cooling_config(f.sampler);
        cfg.seed = f.sampler.seed + i;
        if (verbose) {
          cfg.progress = [&, i](int phase, double s2, double acc) {
            std::lock_guard<std::mutex> lock(log_mutex);
            err << "chain " << i << " phase " << phase << " sigma2 " << s2
                << " acceptance " << acc << "\n";
          };
        }
        const long share = n / chains + (i < n % chains ? 1 : 0);
        ReducedProblem red = reduce(f.spec);
        CompositePtr g = build_metric(red, build_options(f.sampler));
        out[i].metric = metric_json(*g);
        GaussianCooling gc(std::move(red), std::move(g), cfg);
        out[i].xs = gc.sample(share);
        out[i].report = gc.report();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = worker_count(chains);
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

void apply_overrides(ProblemFile& f, const std::optional<std::uint64_t>& seed,
                     const std::optional<double>& r,
                     const std::optional<double>& lazy,
                     const std::optional<long>& inner) {
  if (seed) f.sampler.seed = *seed;
  if (r) {
    if (!(*r > 0.0 && *r <= 1.0)) throw UsageError("--r must lie in (0, 1]");
    f.sampler.r0 = *r;
  }
  if (lazy) f.sampler.lazy = *lazy;
  if (inner) {
    if (*inner < 1) throw UsageError("--inner-budget must be >= 1");
    f.sampler.inner_budget = *inner;
  }
}

// Writes samples to `out` ("-" for the stream) and the sidecar next to it.
void emit(const Samples& xs, const json& meta, const std::string& out_path,
          const std::string& format, std::ostream& out, std::ostream& err) {
  if (out_path.empty() || out_path == "-") {
    write_samples(out, xs, format);
    err << meta.dump() << "\n";
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw std::runtime_error(out_path + ": cannot write");
  write_samples(os, xs, format);
  std::ofstream ms(out_path + ".meta.json");
  if (!ms) throw std::runtime_error(out_path + ".meta.json: cannot write");
  ms << meta.dump(2) << "\n";
}

json settings_json(const ProblemFile& f) { return to_json(f)["sampler"]; }

// ----------------------------------------------------------------- bench

struct BenchProblem {
  Matrix A;
  Vector b;
  Vector start;
};

BenchProblem bench_problem(const std::string& family, int d, Rng& rng) {
  const Index n = d;
  BenchProblem p;
  if (family == "box") {
    p.A.resize(2 * n, n);
    p.A << Matrix::Identity(n, n), -Matrix::Identity(n, n);
    p.b = Vector::Constant(2 * n, -1.0);
    p.start = Vector::Zero(n);
  } else if (family == "simplex") {
    p.A.resize(n + 1, n);
    p.A << Matrix::Identity(n, n), -Vector::Ones(n).transpose();
    p.b = Vector::Zero(n + 1);
    p.b(n) = -1.0;
    p.start = Vector::Constant(n, 1.0 / (2.0 * d));
  } else if (family == "polytope") {
    // Box cut by 2d random halfspaces at distance 0.5-1 from the origin.
    const Index m = 4 * n;
    p.A.resize(m, n);
    p.b.resize(m);
    p.A.topRows(2 * n) << Matrix::Identity(n, n), -Matrix::Identity(n, n);
    p.b.head(2 * n).setConstant(-1.0);
    std::uniform_real_distribution<double> u(0.5, 1.0);
    for (Index i = 2 * n; i < m; ++i) {
      Vector a = standard_normal(n, rng);
      a.normalize();
      p.A.row(i) = a.transpose();
      p.b(i) = -u(rng);
    }
    p.start = Vector::Zero(n);
  } else {
    throw UsageError("unknown family '" + family + "' (box, simplex, polytope)");
  }
  return p;
}

MetricPtr bench_metric(const BenchProblem& p, LinearMetricKind kind) {
  switch (kind) {
    case LinearMetricKind::vaidya:
      return std::make_shared<VaidyaMetric>(p.A, p.b);
    case LinearMetricKind::lewis:
      return std::make_shared<LewisMetric>(p.A, p.b);
    default:
      return std::make_shared<LogBarrier>(p.A, p.b);
  }
}

std::string bench_svg(const std::vector<json>& rows) {
  const double W = 480, H = 320, L = 50, R = 20, T = 20, B = 40;
  double dmin = 1e300, dmax = -1e300;
  for (const auto& r : rows) {
    dmin = std::min(dmin, r["d"].get<double>());
    dmax = std::max(dmax, r["d"].get<double>());
  }
  if (dmax <= dmin) dmax = dmin + 1;
  auto X = [&](double d) { return L + (d - dmin) / (dmax - dmin) * (W - L - R); };
  auto Y = [&](double a) { return T + (1.0 - a) * (H - T - B); };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<line x1=\"" << L << "\" y1=\"" << Y(0) << "\" x2=\"" << W - R << "\" y2=\"" << Y(0) << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << L << "\" y1=\"" << Y(0) << "\" x2=\"" << L << "\" y2=\"" << Y(1) << "\" stroke=\"black\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"" << H - 8 << "\" text-anchor=\"middle\">dimension</text>\n";
  s << "<text x=\"12\" y=\"" << H / 2 << "\" transform=\"rotate(-90 12 " << H / 2
    << ")\" text-anchor=\"middle\">acceptance</text>\n";
  for (double a : {0.0, 0.5, 1.0}) {
    s << "<text x=\"" << L - 6 << "\" y=\"" << Y(a) + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << a << "</text>\n";
  }
  s << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (const auto& r : rows) s << X(r["d"].get<double>()) << "," << Y(r["acceptance"].get<double>()) << " ";
  s << "\"/>\n";
  for (const auto& r : rows) {
    s << "<circle cx=\"" << X(r["d"].get<double>()) << "\" cy=\"" << Y(r["acceptance"].get<double>())
      << "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

// --------------------------------------------------------------- certify

std::vector<Certificate> certify_entry(const CatalogEntry& e, int points, int dirs,
                                       Rng& rng) {
  const auto pts = random_interior_points(*e.metric, e.x0, points, rng, 10, 0.5,
                                          e.point_target());
  auto out = derivative_certificates(e.name, *e.metric, pts, rng);
  out.push_back(sc_certificate(e.name, *e.metric, pts, rng, dirs));
  out.push_back(ssc_certificate(e.name, *e.metric, pts, rng, dirs));
  if (e.metric->params().flags.ltsc != Certification::unverified) {
    out.push_back(ltsc_certificate(e.name, *e.metric, pts, rng, dirs));
  }
  if (e.metric->params().d2_psd) {
    out.push_back(d2_psd_certificate(e.name, *e.metric, pts, rng, dirs));
  }
  if (e.A.rows() > 0) out.push_back(chord_certificate(e.name, *e.metric, e.A, e.b, pts, rng));
  if (e.psd_n > 0) out.push_back(psd_chord_certificate(e.name, *e.metric, e.psd_n, pts, rng));
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Dikin walk sampler with Gaussian cooling"};
  app.require_subcommand(1);

  std::string problem, out_path, format = "jsonl";
  long n = 1000;
  std::optional<std::uint64_t> seed;
  std::optional<double> r, lazy;
  std::optional<long> inner;
  unsigned chains = 1;
  bool verbose = false;

  auto lazy_check = CLI::Validator(
      [](std::string& s) -> std::string {
        try {
          const double v = std::stod(s);
          if (v == 0.0 || v == 0.5) return "";
        } catch (const std::exception&) {
        }
        return "--lazy must be 0 or 0.5";
      },
      "{0,0.5}");

  auto common = [&](CLI::App* sub, bool needs_problem) {
    auto* p = sub->add_option("--problem", problem, "problem JSON file");
    if (needs_problem) p->required()->check(CLI::ExistingFile);
    sub->add_option("--n", n, "number of samples")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--out", out_path, "output path ('-' for stdout)");
    sub->add_option("--format", format, "jsonl or csv")
        ->check(CLI::IsMember({"jsonl", "csv"}));
  };
  auto sampler_flags = [&](CLI::App* sub) {
    sub->add_option("--r", r, "walk radius r0 in (0, 1]");
    sub->add_option("--lazy", lazy, "laziness, 0 or 0.5")->check(lazy_check);
    sub->add_option("--inner-budget", inner, "steps per sigma^2 update");
    sub->add_flag("--verbose", verbose, "print schedule progress");
  };

  auto* sample = app.add_subcommand("sample", "Gaussian-cooling Dikin walk samples");
  common(sample, true);
  sampler_flags(sample);
  sample->add_option("--chains", chains, "independent chains")->check(CLI::PositiveNumber);

  auto* walk = app.add_subcommand("walk", "raw Dikin walk from a supplied start");
  common(walk, true);
  sampler_flags(walk);
  std::vector<double> start;
  walk->add_option("--start", start, "start point (x-space)")->delimiter(',');

  auto* certify = app.add_subcommand("certify", "barrier property certificates");
  std::string barrier = "all";
  int dirs = 4;
  bool strict = false;
  certify->add_option("--barrier", barrier, "barrier name or 'all'");
  certify->add_option("--n", n, "random interior points")->check(CLI::PositiveNumber);
  certify->add_option("--dirs", dirs, "directions per point")->check(CLI::PositiveNumber);
  certify->add_option("--seed", seed, "random seed");
  certify->add_option("--out", out_path, "output path");
  certify->add_option("--format", format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
  certify->add_flag("--strict", strict, "exit 1 if a certificate fails");

  auto* compare = app.add_subcommand("compare", "compare samples with the rejection oracle");
  common(compare, true);
  sampler_flags(compare);
  std::string samples_path;
  compare->add_option("--samples", samples_path, "existing JSONL samples instead of a run")
      ->check(CLI::ExistingFile);

  auto* bench = app.add_subcommand("bench", "acceptance and ESS against dimension");
  std::string family = "polytope", dims_text = "2..8", metric_name = "log";
  long steps = 4000;
  bench->add_option("--family", family, "box, simplex or polytope");
  bench->add_option("--dims", dims_text, "dimensions, 'a..b' or 'a,b,c'");
  bench->add_option("--steps", steps, "walk steps per dimension")->check(CLI::PositiveNumber);
  bench->add_option("--metric", metric_name, "log, vaidya or lewis");
  bench->add_option("--seed", seed, "random seed");
  bench->add_option("--r", r, "walk radius");
  bench->add_option("--lazy", lazy, "laziness, 0 or 0.5")->check(lazy_check);
  bench->add_option("--out", out_path, "CSV path; an .svg plot is written next to it");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? 0 : 2;
  }

  try {
    if (sample->parsed()) {
      ProblemFile f = load_problem(problem);
      apply_overrides(f, seed, r, lazy, inner);
      if (out_path.empty()) out_path = f.output.samples;
      if (!sample->count("--format")) format = f.output.format;
      const auto t0 = std::chrono::steady_clock::now();
      auto results = run_chains(f, n, chains, verbose, err);
      Samples all;
      json per_chain = json::array();
      for (unsigned i = 0; i < results.size(); ++i) {
        all.insert(all.end(), results[i].xs.begin(), results[i].xs.end());
        json c = report_json(results[i].report);
        c["seed"] = f.sampler.seed + i;
        c["samples"] = results[i].xs.size();
        c["metric"] = results[i].metric;
        per_chain.push_back(c);
      }
      json meta{{"command", "sample"},
                {"problem", problem},
                {"n", all.size()},
                {"seed", f.sampler.seed},
                {"chains", chains},
                {"sampler", settings_json(f)},
                {"chain_reports", per_chain}};
      emit(all, meta, out_path, format, out, err);
      err << "sampled " << all.size() << " points in "
          << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
          << " s\n";
      return 0;
    }

    if (walk->parsed()) {
      ProblemFile f = load_problem(problem);
      apply_overrides(f, seed, r, lazy, inner);
      if (out_path.empty()) out_path = f.output.samples;
      if (!walk->count("--format")) format = f.output.format;
      Vector x0;
      if (!start.empty()) {
        x0 = Eigen::Map<const Vector>(start.data(), static_cast<Index>(start.size()));
      } else if (f.sampler.start) {
        x0 = *f.sampler.start;
      } else {
        throw UsageError("walk needs --start or sampler.start in the problem file");
      }
      if (x0.size() != f.spec.dim) throw UsageError("--start length differs from the dimension");
      const ReducedProblem red = reduce(f.spec);
      CompositePtr g = build_metric(red, build_options(f.sampler));
      WalkConfig wc;
      wc.r = f.sampler.r0;
      wc.laziness = f.sampler.lazy;
      DikinWalk dw(g, linear_target(red.c), augment(red, x0), wc, f.sampler.seed);
      Samples xs;
      for (long i = 0; i < n; ++i) {
        dw.run(f.sampler.thin);
        xs.push_back(project_sample(red, dw.x()));
      }
      json meta{{"command", "walk"},
                {"problem", problem},
                {"n", xs.size()},
                {"seed", f.sampler.seed},
                {"r", wc.r},
                {"lazy", wc.laziness},
                {"thin", f.sampler.thin},
                {"start", to_json(x0)},
                {"metric", metric_json(*g)},
                {"acceptance", dw.stats().acceptance_rate()},
                {"steps", dw.stats().steps}};
      emit(xs, meta, out_path, format, out, err);
      return 0;
    }

    if (certify->parsed()) {
      if (!certify->count("--format")) format = "csv";
      Rng rng(seed.value_or(0));
      auto catalog = barrier_catalog(rng);
      {
        CatalogEntry ctl;
        ctl.name = "psd-unscaled";
        ctl.metric = std::make_shared<PsdBarrier>(3, 1.0);
        ctl.x0 = SvecCodec(3).svec(Matrix::Identity(3, 3));
        ctl.psd_n = 3;
        ctl.cost = ctl.x0;
        catalog.push_back(ctl);
      }
      std::vector<const CatalogEntry*> chosen;
      for (const auto& e : catalog) {
        if ((barrier == "all" && e.name != "psd-unscaled") || e.name == barrier) {
          chosen.push_back(&e);
        }
      }
      if (chosen.empty()) {
        std::string names;
        for (const auto& e : catalog) names += " " + e.name;
        throw UsageError("unknown barrier '" + barrier + "'; one of: all" + names);
      }
      std::ofstream file;
      std::ostream* os = &out;
      if (!out_path.empty() && out_path != "-") {
        file.open(out_path);
        if (!file) throw std::runtime_error(out_path + ": cannot write");
        os = &file;
      }
      if (format == "csv") {
        *os << "barrier,check,points,worst,sense,threshold,passed,nu,nu_bar,applied_scaling,note\n";
      }
      bool all_ok = true;
      for (const auto* e : chosen) {
        const auto& p = e->metric->params();
        for (const auto& c : certify_entry(*e, static_cast<int>(n), dirs, rng)) {
          all_ok = all_ok && c.passed;
          if (format == "csv") {
            *os << c.name << "," << c.check << "," << c.points << "," << num(c.worst)
                << "," << (c.at_most ? "<=" : ">=") << "," << num(c.threshold) << ","
                << (c.passed ? "pass" : "fail") << ","
                << num(p.nu) << "," << num(p.nu_bar) << "," << num(p.applied_scaling)
                << "," << c.note << "\n";
          } else {
            *os << json{{"barrier", c.name}, {"check", c.check}, {"points", c.points},
                        {"worst", c.worst}, {"sense", c.at_most ? "<=" : ">="},
                        {"threshold", c.threshold},
                        {"passed", c.passed}, {"nu", p.nu}, {"nu_bar", p.nu_bar},
                        {"applied_scaling", p.applied_scaling}, {"note", c.note}}
                       .dump()
                << "\n";
          }
        }
        const auto pts = random_interior_points(*e->metric, e->x0, 20, rng, 10, 0.5,
                                                e->point_target());
        json asc = json::array();
        for (const auto& a : asc_probe(*e->metric, pts, rng)) {
          asc.push_back({{"r", a.r}, {"mean_abs_log_ratio", a.mean_abs_log_ratio},
                         {"mean_acceptance", a.mean_acceptance}});
        }
        err << e->name << " asc probe (report only): " << asc.dump() << "\n";
      }
      return (strict && !all_ok) ? 1 : 0;
    }

    if (compare->parsed()) {
      ProblemFile f = load_problem(problem);
      apply_overrides(f, seed, r, lazy, inner);
      if (f.spec.dim > 3) throw DimensionError("compare: oracle runs only up to dimension 3");
      Samples xs;
      if (!samples_path.empty()) {
        xs = read_samples(samples_path);
      } else {
        auto results = run_chains(f, n, 1, verbose, err);
        xs = std::move(results.front().xs);
      }
      const Box box = f.bounding_box ? *f.bounding_box : derive_box(f.spec);
      RejectionOracle oracle(f.spec, box);
      Rng rng(f.sampler.seed + 0x9e3779b97f4a7c15ULL);
      const Samples ref = oracle.draw(static_cast<long>(xs.size()), rng);
      const CompareReport rep = compare_samples(xs, ref, &box.lower, &box.upper);
      json coords = json::array();
      for (const auto& c : rep.coords) {
        coords.push_back({{"mean_sampler", c.mean_a}, {"mean_oracle", c.mean_b},
                          {"var_sampler", c.var_a}, {"var_oracle", c.var_b},
                          {"mean_delta_se", c.mean_z}, {"var_delta_se", c.var_z},
                          {"ks_statistic", c.ks.statistic}, {"ks_p", c.ks.p_value}});
      }
      json j{{"command", "compare"},
             {"problem", problem},
             {"n_sampler", rep.n_a},
             {"n_oracle", rep.n_b},
             {"oracle_acceptance", oracle.acceptance_rate()},
             {"coordinates", coords},
             {"max_abs_delta_se", rep.max_abs_z()},
             {"histogram_tv", std::isfinite(rep.tv) ? json(rep.tv) : json(nullptr)}};
      if (!out_path.empty() && out_path != "-") {
        std::ofstream os(out_path);
        if (!os) throw std::runtime_error(out_path + ": cannot write");
        os << j.dump(2) << "\n";
      } else {
        out << j.dump(2) << "\n";
      }
      return 0;
    }

    if (bench->parsed()) {
      const auto dims = parse_int_list(dims_text);
      const LinearMetricKind kind = parse_linear_kind(metric_name);
      Rng rng(seed.value_or(0));
      std::vector<json> rows;
      for (int d : dims) {
        if (d < 1) throw UsageError("--dims must be positive");
        const BenchProblem p = bench_problem(family, d, rng);
        const MetricPtr g = bench_metric(p, kind);
        const Vector center = analytic_center(*g, Vector::Zero(d), p.start).x;
        WalkConfig wc;
        wc.r = r.value_or(0.3);
        wc.laziness = lazy.value_or(0.5);
        DikinWalk dw(g, uniform_target(), center, wc, rng());
        std::vector<double> trace;
        trace.reserve(static_cast<size_t>(steps));
        const auto t0 = std::chrono::steady_clock::now();
        dw.run(steps, [&](const Vector& x) { trace.push_back(x(0)); });
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double ess = effective_sample_size(trace);
        rows.push_back({{"family", family}, {"metric", metric_name}, {"d", d},
                        {"m", p.A.rows()}, {"steps", steps},
                        {"acceptance", dw.stats().acceptance_rate()}, {"ess", ess},
                        {"tau", static_cast<double>(steps) / ess},
                        {"seconds", secs}});
      }
      std::ostringstream csv;
      csv << "family,metric,d,m,steps,acceptance,ess,tau,seconds\n";
      for (const auto& row : rows) {
        csv << row["family"].get<std::string>() << "," << row["metric"].get<std::string>()
            << "," << row["d"] << "," << row["m"] << "," << row["steps"] << ","
            << num(row["acceptance"].get<double>()) << "," << num(row["ess"].get<double>())
            << "," << num(row["tau"].get<double>()) << "," << num(row["seconds"].get<double>())
            << "\n";
      }
      if (!out_path.empty() && out_path != "-") {
        std::ofstream os(out_path);
        if (!os) throw std::runtime_error(out_path + ": cannot write");
        os << csv.str();
        std::string svg_path = out_path;
        const auto dot = svg_path.rfind('.');
        if (dot != std::string::npos && svg_path.find('/', dot) == std::string::npos) {
          svg_path.erase(dot);
        }
        std::ofstream ss(svg_path + ".svg");
        if (!ss) throw std::runtime_error(svg_path + ".svg: cannot write");
        ss << bench_svg(rows);
      } else {
        out << csv.str();
      }
      return 0;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace dikin
