#include "hypext/instance_io.hpp"
#include "hypext/random.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace hypext;

TEST(InstanceIO, RoundTripIsExact) {
  Rng rng = make_stream(91, 0);
  Instance inst;
  inst.map = random_lipschitz_map(3, 6, 0.7, rng);
  inst.queries = random_challenge_points(inst.map, 2.0, 3, rng);
  std::stringstream ss;
  write_instance(ss, inst);
  const Instance back = read_instance(ss);
  EXPECT_EQ(back.map.declared_C, inst.map.declared_C);
  ASSERT_EQ(back.map.size(), inst.map.size());
  for (std::size_t i = 0; i < inst.map.size(); ++i) {
    EXPECT_TRUE(back.map.sources[i] == inst.map.sources[i]);
    EXPECT_TRUE(back.map.targets[i] == inst.map.targets[i]);
  }
  ASSERT_EQ(back.queries.size(), 3u);
  EXPECT_TRUE(back.queries[2] == inst.queries[2]);
}

TEST(InstanceIO, CommentsAndNoQueries) {
  std::istringstream in(
      "# a comment\nhypext-instance v1\ndimension 1\ncurvature -1\ndeclared_C 1\n"
      "sources 2\n1 0\n1.5430806348152437 1.1752011936438014\n"
      "targets 2\n1 0  # same\n1 0\nend\n");
  const Instance inst = read_instance(in);
  EXPECT_EQ(inst.map.size(), 2u);
  EXPECT_TRUE(inst.queries.empty());
}

TEST(InstanceIO, Errors) {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_instance(in);
  };
  EXPECT_THROW(parse("bogus v1\n"), FormatError);
  EXPECT_THROW(parse("hypext-instance v1\ndimension 1\ncurvature 0\n"), FormatError);
  EXPECT_THROW(parse("hypext-instance v1\ndimension 1\ncurvature -1\ndeclared_C 1\nsources 1\n2 0\n"),
               FormatError);
  EXPECT_THROW(parse("hypext-instance v1\ndimension 1\ncurvature -1\ndeclared_C 1\nsources 1\n1 0\n"),
               FormatError);
  EXPECT_THROW(parse("hypext-instance v1\ndimension 1\ncurvature -1\ndeclared_C x\n"), FormatError);
}

TEST(PointsIO, RoundTrip) {
  Rng rng = make_stream(92, 0);
  const std::vector<HPoint> pts = sample_ball(HPoint::origin(2), 3.0, 20, rng);
  std::stringstream ss;
  write_points(ss, pts);
  const std::vector<HPoint> back = read_points(ss);
  ASSERT_EQ(back.size(), pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_TRUE(back[i] == pts[i]);
}

TEST(KeyValues, Parse) {
  std::istringstream in("C = 0.5\n# skip\nseed=7\nmethod = barrier # trailing\n");
  const KeyValues kv = KeyValues::parse(in);
  EXPECT_EQ(*kv.number("C"), 0.5);
  EXPECT_EQ(*kv.integer("seed"), 7);
  EXPECT_EQ(*kv.text("method"), "barrier");
  EXPECT_FALSE(kv.number("R").has_value());
  EXPECT_THROW(kv.integer("method"), FormatError);
  std::istringstream bad("no equals sign\n");
  EXPECT_THROW(KeyValues::parse(bad), FormatError);
}

TEST(Format, SeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
  std::ostringstream out;
  write_csv_row(out, {"a", csv_cell(0.5)});
  EXPECT_EQ(out.str(), "a,0.5\n");
}
