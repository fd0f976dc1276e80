/*
 * Copyright 2026 The treeverify Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <functional>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "treeverify/core/errors.hpp"
#include "treeverify/ingest/ingest.hpp"
#include "treeverify/spec/spec.hpp"

namespace treeverify::spec {
namespace {

using tvtest::Q;

Error ErrorOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  return Error(ErrorCode::kInternal, "no error");
}

ThresholdImplication Implication(std::vector<std::string> atoms, const std::string& conclusion = "logit <= 0") {
  ThresholdImplication spec;
  for (const auto& a : atoms) spec.premise.push_back(ParseAtom(a));
  spec.conclusion = ParseConclusion(conclusion);
  return spec;
}

TEST(ParseSpecs, WorkedFile) {
  const auto space = tvtest::StandardSpace();
  const auto specs = ParseSpecs(ingest::ReadFile(tvtest::DataPath("worked/specs.json")), space);
  ASSERT_EQ(specs.size(), 4u);
  EXPECT_EQ(specs[0].id, "A");
  const auto& a = std::get<ThresholdImplication>(specs[0].body);
  ASSERT_EQ(a.premise.size(), 1u);
  EXPECT_EQ(a.premise[0].feature, "gwd");
  EXPECT_EQ(a.premise[0].op, CompareOp::kGreater);
  EXPECT_EQ(a.premise[0].exact, Rational(5));
  EXPECT_EQ(a.conclusion.op, CompareOp::kLessEqual);
  EXPECT_EQ(a.conclusion.constant, Rational(0));
  ASSERT_FALSE(specs[1].IsImplication());
  EXPECT_EQ(std::get<Monotonicity>(specs[1].body).feature, "pga");
  EXPECT_EQ(std::get<Monotonicity>(specs[1].body).direction, Direction::kNonDecreasing);
  EXPECT_EQ(std::get<ThresholdImplication>(specs[3].body).premise.size(), 3u);
}

TEST(ParseSpecs, EmptyPremiseAndDefaultConclusion) {
  const auto specs = ParseSpecs(R"({"specs":[{"id":"never","kind":"implication","premise":[]},
                                             {"id":"margin","kind":"implication","conclusion":"logit > -1.5"}]})",
                                tvtest::StandardSpace());
  const auto& never = std::get<ThresholdImplication>(specs[0].body);
  EXPECT_TRUE(never.premise.empty());
  EXPECT_EQ(never.conclusion.ToString(), "logit <= 0");
  const auto& margin = std::get<ThresholdImplication>(specs[1].body);
  EXPECT_EQ(margin.conclusion.op, CompareOp::kGreater);
  EXPECT_EQ(margin.conclusion.constant, Q(-3, 2));
}

TEST(ParseSpecs, PreservesFileOrder) {
  const auto specs = ParseSpecs(R"({"specs":[{"id":"z","kind":"monotone","feature":"gwd","direction":"non-increasing"},
                                             {"id":"a","kind":"implication","premise":["pga >= 0.5"]},
                                             {"id":"m","kind":"monotone","feature":"pga","direction":"non-decreasing"}]})",
                                tvtest::StandardSpace());
  ASSERT_EQ(specs.size(), 3u);
  EXPECT_EQ(specs[0].id, "z");
  EXPECT_EQ(specs[1].id, "a");
  EXPECT_EQ(specs[2].id, "m");
}

TEST(ParseSpecs, ErrorsCarryCodesAndLocations) {
  const auto space = tvtest::StandardSpace();
  const auto unknown = ErrorOf([&] {
    ParseSpecs(R"({"specs":[{"id":"x","kind":"implication","premise":["depth > 3"]}]})", space);
  });
  EXPECT_EQ(unknown.code(), ErrorCode::kUnknownFeature);

  const auto direction = ErrorOf([&] {
    ParseSpecs("{\"specs\":[\n{\"id\":\"x\",\"kind\":\"monotone\",\"feature\":\"pga\",\n\"direction\":\"upward\"}]}",
               space);
  });
  EXPECT_EQ(direction.code(), ErrorCode::kUnknownDirection);
  EXPECT_NE(std::string(direction.what()).find("line 3"), std::string::npos) << direction.what();

  const auto atom = ErrorOf([&] {
    ParseSpecs("{\"specs\":[\n\n{\"id\":\"x\",\"kind\":\"implication\",\"premise\":[\"gwd >> 5\"]}]}", space);
  });
  EXPECT_EQ(atom.code(), ErrorCode::kMalformedAtom);
  EXPECT_NE(std::string(atom.what()).find("line 3"), std::string::npos) << atom.what();
  EXPECT_NE(std::string(atom.what()).find("column 6"), std::string::npos) << atom.what();

  EXPECT_EQ(ErrorOf([&] { ParseSpecs("{\"specs\":", space); }).code(), ErrorCode::kMalformedSpec);
  EXPECT_EQ(ErrorOf([&] { ParseSpecs(R"({"specs":[{"id":"x","kind":"other"}]})", space); }).code(),
            ErrorCode::kMalformedSpec);
}

TEST(ParseSpecs, EntriesFailIndependently) {
  const auto entries = ParseSpecEntries(R"({"specs":[{"id":"ok","kind":"implication","premise":["gwd > 5.0"]},
                                                    {"id":"bad","kind":"implication","premise":["gwd ~ 5"]},
                                                    {"kind":"monotone"},
                                                    {"id":"late","kind":"monotone","feature":"pga","direction":"non-decreasing"}]})");
  ASSERT_EQ(entries.size(), 4u);
  EXPECT_TRUE(entries[0].spec.has_value());
  ASSERT_TRUE(entries[1].error.has_value());
  EXPECT_EQ(entries[1].error->code(), ErrorCode::kMalformedAtom);
  EXPECT_EQ(entries[2].id, "#2");
  EXPECT_EQ(entries[2].error->code(), ErrorCode::kMalformedSpec);
  EXPECT_TRUE(entries[3].spec.has_value());
}

TEST(Atoms, GrammarAndColumns) {
  const Atom atom = ParseAtom("  slope<=0.1 ");
  EXPECT_EQ(atom.feature, "slope");
  EXPECT_EQ(atom.op, CompareOp::kLessEqual);
  EXPECT_EQ(atom.exact, Q(1, 10));
  EXPECT_EQ(atom.ToString(), "slope <= 0.1");

  auto column = [](const char* text) {
    const std::string what = ErrorOf([&] { ParseAtom(text); }).what();
    return what.substr(0, what.find(' ', 7));
  };
  EXPECT_EQ(column("> 3"), "column 1");
  EXPECT_EQ(column("gwd = 3"), "column 5");
  EXPECT_EQ(column("gwd < abc"), "column 7");
  EXPECT_EQ(column("gwd < 3 4"), "column 9");
  EXPECT_EQ(ErrorOf([] { ParseConclusion("logit < 0"); }).code(), ErrorCode::kMalformedAtom);
  EXPECT_EQ(ErrorOf([] { ParseConclusion("risk <= 0"); }).code(), ErrorCode::kMalformedAtom);
}

// The rounded bound must agree with the decimal on every binary32 input
// near the constant.
TEST(Atoms, DirectedRoundingMatchesDecimal) {
  std::mt19937_64 rng(11);
  const CompareOp ops[] = {CompareOp::kLess, CompareOp::kLessEqual, CompareOp::kGreater, CompareOp::kGreaterEqual};
  for (int trial = 0; trial < 400; ++trial) {
    const Rational c = Q(static_cast<long>(rng() % 20001) - 10000, 1000);
    const float near = tvtest::Floor32(c);
    for (CompareOp op : ops) {
      const Atom atom = MakeAtom("f", op, c);
      float x = near;
      for (int k = 0; k < 3; ++k) x = std::nextafter(x, -std::numeric_limits<float>::infinity());
      for (int k = 0; k < 7; ++k) {
        EXPECT_EQ(atom.Holds(x), atom.HoldsExact(tvtest::Exact(x))) << atom.ToString() << " at " << x;
        x = std::nextafter(x, std::numeric_limits<float>::infinity());
      }
    }
  }
  // 0.1 is not a binary32: x < 0.1 admits the binary32 just below it.
  const Atom less = MakeAtom("f", CompareOp::kLess, Q(1, 10));
  EXPECT_TRUE(less.Holds(tvtest::Floor32(Q(1, 10))));
  EXPECT_FALSE(less.Holds(tvtest::Ceil32(Q(1, 10))));
}

TEST(Negate, SpecCBox) {
  const auto space = tvtest::StandardSpace();
  const auto query = Negate(Implication({"dist > 2.5", "pga < 0.35"}), space);
  ASSERT_TRUE(query.constraint_box.has_value());
  const Interval& dist = query.constraint_box->intervals[1];
  EXPECT_EQ(dist.lo, 2.5f);
  EXPECT_FALSE(dist.lo_closed);
  EXPECT_EQ(dist.hi, 3.29f);
  EXPECT_TRUE(dist.hi_closed);
  const Interval& pga = query.constraint_box->intervals[3];
  EXPECT_EQ(pga.lo, 0.33f);
  EXPECT_TRUE(pga.lo_closed);
  EXPECT_EQ(pga.hi, tvtest::Ceil32(Q(35, 100)));
  EXPECT_FALSE(pga.hi_closed);
  EXPECT_EQ(query.constraint_box->intervals[0], Interval::Closed(space[0].lower, space[0].upper));
  EXPECT_EQ(query.target.op, CompareOp::kGreater);
  EXPECT_EQ(query.target.constant, Rational(0));
}

TEST(Negate, InfeasibleAndOpenBothEnds) {
  const auto space = tvtest::StandardSpace();
  EXPECT_TRUE(Negate(Implication({"gwd > 7.0"}), space).Vacuous());
  EXPECT_TRUE(Negate(Implication({"pga > 0.4", "pga < 0.3"}), space).Vacuous());
  const auto query = Negate(Implication({"pga > 0.4", "pga < 0.45"}), space);
  ASSERT_FALSE(query.Vacuous());
  const Interval& pga = query.constraint_box->intervals[3];
  EXPECT_FALSE(pga.lo_closed);
  EXPECT_FALSE(pga.hi_closed);
  EXPECT_FALSE(pga.Contains(tvtest::Floor32(Q(4, 10))));
  EXPECT_TRUE(pga.Contains(tvtest::Ceil32(Q(4, 10))));
  EXPECT_FALSE(pga.Contains(tvtest::Ceil32(Q(45, 100))));
  EXPECT_TRUE(pga.Contains(tvtest::Floor32(Q(45, 100))));
}

TEST(Negate, TargetInvolution) {
  for (const char* text : {"logit <= 0", "logit > 0.25", "logit <= -3.5"}) {
    const Conclusion c = ParseConclusion(text);
    EXPECT_EQ(c.Negated().Negated(), c);
    EXPECT_NE(c.Negated().op, c.op);
    for (const Rational& v : {Rational(-4), c.constant, Rational(1, 3)}) {
      EXPECT_NE(c.Holds(v), c.Negated().Holds(v));
    }
  }
}

// A point lies in the box iff it is in the domain and satisfies the
// premise as written.
TEST(Negate, BoxMatchesPremiseOnRandomPoints) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto space = tvtest::RandomSpace(rng, 1 + rng() % 3);
    const auto spec = tvtest::RandomImplication(rng, space);
    const auto query = Negate(spec, space);
    for (int k = 0; k < 200; ++k) {
      std::vector<float> point;
      for (size_t f = 0; f < space.size(); ++f) {
        // Grid values plus their binary32 neighbours hit the boundaries.
        float v = static_cast<float>(static_cast<int>(rng() % 26) - 2) / 20.0f;
        if (rng() % 3 == 0) v = std::nextafter(v, (rng() % 2) ? 2.0f : -2.0f);
        point.push_back(v);
      }
      const bool in_box = query.constraint_box && query.constraint_box->Contains(point);
      bool in_domain = true;
      for (size_t f = 0; f < space.size(); ++f) {
        in_domain = in_domain && space[f].lower <= point[f] && point[f] <= space[f].upper;
      }
      EXPECT_EQ(in_box, in_domain && tvtest::PremiseHoldsExact(spec, space, point));
    }
  }
}

TEST(Subsumes, WorkedPairs) {
  const auto space = tvtest::StandardSpace();
  const auto a = Implication({"gwd > 5.0"});
  const auto c = Implication({"dist > 2.5", "pga < 0.35"});
  const auto d = Implication({"slope < 0.1", "dist > 2.5", "pga < 0.35"});
  EXPECT_TRUE(PremiseSubsumes(c, d, space));
  EXPECT_FALSE(PremiseSubsumes(d, c, space));
  EXPECT_FALSE(PremiseSubsumes(a, c, space));
  EXPECT_TRUE(PremiseSubsumes(a, a, space));
  // Anything covers an infeasible premise; an infeasible premise covers nothing else.
  EXPECT_TRUE(PremiseSubsumes(a, Implication({"gwd > 7.0"}), space));
  EXPECT_FALSE(PremiseSubsumes(Implication({"gwd > 7.0"}), a, space));
  EXPECT_EQ(ErrorOf([&] { PremiseSubsumes(a, Implication({"gwd > 5.0"}, "logit > 0"), space); }).code(),
            ErrorCode::kConclusionMismatch);
}

TEST(Subsumes, ReflexiveAndTransitive) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    const auto space = tvtest::RandomSpace(rng, 2);
    std::vector<ThresholdImplication> specs;
    for (int k = 0; k < 8; ++k) {
      auto s = tvtest::RandomImplication(rng, space);
      s.conclusion = ParseConclusion("logit <= 0");
      specs.push_back(s);
    }
    for (const auto& a : specs) {
      EXPECT_TRUE(PremiseSubsumes(a, a, space));
      for (const auto& b : specs) {
        for (const auto& c : specs) {
          if (PremiseSubsumes(a, b, space) && PremiseSubsumes(b, c, space)) {
            EXPECT_TRUE(PremiseSubsumes(a, c, space));
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace treeverify::spec
