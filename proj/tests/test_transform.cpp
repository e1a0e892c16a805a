#include "ltlqbe/oracle.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace ltlqbe;
using namespace ltlqbe::testing;

TEST_CASE("split per negative")
{
  auto e = example1();
  auto parts = split_per_negative(e);
  REQUIRE(parts.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    {
      CHECK(parts[i].positives.size() == 2);
      REQUIRE(parts[i].negatives.size() == 1);
      CHECK(parts[i].negatives[0].facts() == e.negatives[i].facts());
      Problem p;
      p.cls = QueryClass::PathDiamond;
      p.examples = parts[i];
      CHECK(decide(p).separable);
    }
  CHECK(split_per_negative(ExampleSet{e.positives, {}}).empty());
}

TEST_CASE("merging negatives for path Until")
{
  ExampleSet e{{data({{"A", 1}, {"B", 2}}), data({{"B", 3}})},
               {data({{"A", 1}}), data({{"B", 2}, {"A", 3}})}};
  auto out = merge_negatives_for_path_until(e);
  REQUIRE(out.positives.size() == 2);
  REQUIRE(out.negatives.size() == 1);
  // m = max timestamp + 2 = 5.  The first positive is shifted by 1,
  // the second by m; negative i sits at (2i+1)m with an m-long pad.
  const auto& p1 = out.positives[0];
  CHECK(p1.holds(pad_origin, 1));
  CHECK(p1.holds("A", 2));
  CHECK(p1.holds("B", 3));
  CHECK(p1.holds(pad_fill, 2));
  CHECK_FALSE(p1.holds(pad_fill, 3));
  const auto& p2 = out.positives[1];
  CHECK(p2.holds(pad_origin, 5));
  CHECK(p2.holds("B", 8));
  const auto& n = out.negatives[0];
  CHECK(n.holds(pad_origin, 5));
  CHECK(n.holds("A", 6));
  CHECK(n.holds(pad_origin, 15));
  CHECK(n.holds("B", 17));
  CHECK(n.holds("A", 18));
  for (std::size_t t = 6; t < 10; ++t)
    CHECK(n.holds(pad_fill, t));
  CHECK_FALSE(n.holds(pad_fill, 10));

  // No negatives: an empty merged negative.
  auto none = merge_negatives_for_path_until(ExampleSet{e.positives, {}});
  CHECK(none.negatives.size() == 1);
  CHECK(none.negatives[0].empty());

  ExampleSet clash{{data({{pad_origin, 1}})}, {}};
  CHECK_THROWS_AS(merge_negatives_for_path_until(clash), usage_error);
}

TEST_CASE("compiling X offsets into fresh atoms")
{
  ExampleSet e{{data({{"A", 1}, {"B", 3}})}, {}};
  auto out = compile_next_to_diamond(e);
  std::set<Fact> expected = {{"A", 1},    {"B", 3},    {"A__1", 0},
                             {"B__3", 0}, {"B__2", 1}, {"B__1", 2}};
  CHECK(out.positives[0].facts() == expected);

  ExampleSet flat{{data({{"A", 0}, {"B", 0}})}, {data({{"A", 0}})}};
  auto same = compile_next_to_diamond(flat);
  CHECK(same.positives[0].facts() == flat.positives[0].facts());
  CHECK(same.negatives[0].facts() == flat.negatives[0].facts());

  // A@1 vs A@2: X A separates; after compilation an F-free query over
  // the fresh atoms does.
  Problem p;
  p.cls = QueryClass::BranchDiamond;
  p.examples = compile_next_to_diamond(example3a());
  CHECK(separates(p, parse_query("A__1")));
  CHECK(decide(p).separable);
  CHECK(brute_force_decide(p).separable);

  ExampleSet bad{{data({{"A", 1}, {"A__1", 2}})}, {}};
  CHECK_THROWS_AS(compile_next_to_diamond(bad), usage_error);
}
