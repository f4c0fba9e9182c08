#include "dikin/problem_io.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace dikin;

namespace {

std::string preset(const std::string& name) {
  return std::string(DIKIN_PRESET_DIR) + "/" + name;
}

std::string parse_error(const std::string& text) {
  try {
    parse_problem_text(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ProblemIo, MinimalBox) {
  const auto f = parse_problem_text(R"({"version": 1, "dimension": 2,
    "constraints": [{"type": "linear", "A": [[1,0],[0,1],[-1,0],[0,-1]], "b": [0,0,-1,-1]}]})");
  EXPECT_EQ(f.spec.dim, 2);
  ASSERT_EQ(f.spec.constraints.size(), 1u);
  const auto& lc = std::get<LinearConstraint>(f.spec.constraints[0]);
  EXPECT_EQ(lc.A.rows(), 4);
  EXPECT_EQ(lc.A(2, 0), -1.0);
  EXPECT_TRUE(f.spec.potentials.empty());
  EXPECT_TRUE(f.spec.feasible(Vector::Constant(2, 0.5)));
  EXPECT_FALSE(f.spec.feasible(Vector::Constant(2, 1.5)));
}

TEST(ProblemIo, MissingDimension) {
  const auto msg = parse_error(R"({"version": 1})");
  EXPECT_NE(msg.find("/dimension"), std::string::npos) << msg;
}

TEST(ProblemIo, ErrorsCarryLocation) {
  EXPECT_NE(parse_error(R"({"version": 1, "dimension": 2, "extra": 0})").find("/extra"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"version": 1, "dimension": 1,
      "constraints": [{"type": "linear", "A": [[1]], "b": ["x"]}]})")
                .find("/constraints/0/b/0"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"version": 1, "dimension": 1,
      "potentials": [{"type": "wobble"}]})")
                .find("/potentials/0/type"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"version": 2, "dimension": 1})").find("/version"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"version": 1, "dimension": 1, "sampler": {"r0": 3}})")
                .find("/sampler/r0"),
            std::string::npos);
  EXPECT_NE(parse_error("{not json").find("invalid JSON"), std::string::npos);
  EXPECT_THROW(load_problem("/definitely/not/here.json"), ParseError);
}

TEST(ProblemIo, PresetsRoundTrip) {
  for (const char* name : {"box.json", "gaussian_polytope.json", "psd_trace.json"}) {
    const auto a = load_problem(preset(name));
    const std::string s1 = serialize_problem(a);
    const auto b = parse_problem_text(s1);
    EXPECT_EQ(serialize_problem(b), s1) << name;
  }
}

TEST(ProblemIo, PsdLayoutAndPotentials) {
  const auto f = load_problem(preset("psd_trace.json"));
  const auto& pc = std::get<PsdConstraint>(f.spec.constraints[0]);
  EXPECT_EQ(pc.n, 2);
  EXPECT_TRUE(f.spec.feasible((Vector(3) << 0.3, 0.1, 0.3).finished()));
  EXPECT_FALSE(f.spec.feasible((Vector(3) << 0.3, 0.4, 0.3).finished()));
  const auto g = load_problem(preset("gaussian_polytope.json"));
  ASSERT_EQ(g.spec.potentials.size(), 1u);
  const Vector mu = (Vector(2) << 0.3, -0.2).finished();
  EXPECT_NEAR(g.spec.potential(mu), 0.0, 1e-15);
  ASSERT_TRUE(g.bounding_box.has_value());
}

TEST(ProblemIo, SamplerSettingsFlowIntoConfig) {
  const auto f = parse_problem_text(R"({"version": 1, "dimension": 1,
    "sampler": {"metric": "vaidya", "r0": 0.2, "lazy": 0, "c_inner": 7, "eps": 0.05,
                "thin": 3, "seed": 99, "start": [0.5]}})");
  const auto cfg = cooling_config(f.sampler);
  EXPECT_EQ(cfg.r0, 0.2);
  EXPECT_EQ(cfg.laziness, 0.0);
  EXPECT_EQ(cfg.c_inner, 7);
  EXPECT_EQ(cfg.thin, 3);
  EXPECT_EQ(cfg.seed, 99u);
  ASSERT_TRUE(cfg.hint.has_value());
  EXPECT_EQ(build_options(f.sampler).linear, LinearMetricKind::vaidya);
}
