#include "support.hpp"

#include <doctest.h>

using namespace ltlqbe;
using namespace ltlqbe::testing;

namespace
{
  const Edge* find_edge(const TransitionSystem& ts, std::size_t from,
                        std::size_t to, Color c = Color::Black)
  {
    for (const auto& e : ts.edges(from))
      if (e.to == to && e.color == c)
        return &e;
    return nullptr;
  }

  std::optional<std::size_t> state_named(const TransitionSystem& ts,
                                         const std::string& name)
  {
    for (std::size_t i = 0; i < ts.size(); ++i)
      if (ts.name(i) == name)
        return i;
    return std::nullopt;
  }

  // The single-state system with a full self-loop.
  TransitionSystem universal(const Signature& sig)
  {
    TransitionSystem u;
    u.add_state(sig.all());
    u.add_edge(0, 0, sig.all_with_bottom());
    u.add_initial(0);
    return u;
  }
}

TEST_CASE("system construction")
{
  TransitionSystem ts;
  ts.add_state(1);
  ts.add_state(0);
  ts.add_edge(0, 1, 3);
  CHECK_THROWS_AS(ts.add_edge(0, 1, 1), usage_error);
  CHECK_THROWS_AS(ts.add_edge(1, 0, 1, Color::Red), usage_error);
  CHECK(ts.edge_count() == 1);
  TransitionSystem c(true);
  c.add_state(0);
  c.add_edge(0, 0, 1, Color::Black);
  c.add_edge(0, 0, 1, Color::Red);
  CHECK(c.edge_count() == 2);
}

TEST_CASE("products")
{
  std::mt19937 rng(3);
  auto a = random_system(rng, 5, 3, false);
  Signature sig({"A", "B", "C"});
  auto one = product(std::vector<TransitionSystem>{a});
  CHECK(simulates(one, a));
  CHECK(simulates(a, one));
  auto unit = product(std::vector<TransitionSystem>{a, universal(sig)});
  CHECK(simulates(unit, a));
  CHECK(simulates(a, unit));
  CHECK_THROWS_AS(product(std::vector<TransitionSystem>{}), usage_error);

  // Positives of the product-unravelling example.
  auto e = prod_unrav();
  Signature s4({"A1", "A2", "B1", "B2"});
  auto p = product(std::vector<TransitionSystem>{repr_plain(e.positives[0], s4),
                                                 repr_plain(e.positives[1], s4)});
  auto from = state_named(p, "(3,1)");
  auto to = state_named(p, "(4,3)");
  REQUIRE(from);
  REQUIRE(to);
  CHECK(p.label(*to) == s4.encode({"B1"}));
  const Edge* edge = find_edge(p, *from, *to);
  REQUIRE(edge);
  CHECK(edge->label == s4.encode({"A1", "B2"}));
  auto side = state_named(p, "(5,2)");
  REQUIRE(side);
  REQUIRE(find_edge(p, *from, *side));
  CHECK(find_edge(p, *from, *side)->label == s4.encode({"A2", "B1"}));
}

TEST_CASE("disjoint unions")
{
  std::mt19937 rng(4);
  auto a = random_system(rng, 3, 2, false);
  auto b = random_system(rng, 4, 2, false);
  auto u = disjoint_union({a, b});
  CHECK(u.size() == 7);
  CHECK(u.initial().size() == a.initial().size() + b.initial().size());
  CHECK(disjoint_union({a}).size() == 3);
  CHECK(disjoint_union({}).size() == 0);
  // Being simulated by a union is being simulated by some component,
  // initial state by initial state.
  std::size_t mismatches = 0;
  for (int i = 0; i < 200; ++i)
    {
      auto s = random_system(rng, 2, 2, false, 60);
      auto t1 = random_system(rng, 3, 2, false, 50);
      auto t2 = random_system(rng, 3, 2, false, 50);
      auto tu = disjoint_union({t1, t2});
      bool per_component = true;
      for (auto x : s.initial())
        {
          auto r1 = greatest_simulation(s, t1);
          auto r2 = greatest_simulation(s, t2);
          bool ok = false;
          for (auto y : t1.initial())
            ok = ok || r1.related(x, y);
          for (auto y : t2.initial())
            ok = ok || r2.related(x, y);
          per_component = per_component && ok;
        }
      mismatches += simulates(s, tu) != per_component;
    }
  CHECK(mismatches == 0);
}

TEST_CASE("simulation preorder and containment")
{
  std::mt19937 rng(9);
  std::size_t reflexive = 0, transitive = 0, implies = 0, projection = 0,
              union_law = 0, containment = 0;
  for (int i = 0; i < 300; ++i)
    {
      bool colored = i % 3 == 0;
      auto s = random_system(rng, 1 + rng() % 4, 2, colored, 55);
      auto t = random_system(rng, 1 + rng() % 4, 2, colored, 55);
      auto r = random_system(rng, 1 + rng() % 4, 2, colored, 55);
      reflexive += !simulates(s, s);
      if (simulates(s, t) && simulates(t, r))
        transitive += !simulates(s, r);
      auto p = product(std::vector<TransitionSystem>{s, t});
      projection += !simulates(p, s) || !simulates(p, t);
      union_law += !simulates(s, disjoint_union({s, t}));
      if (!colored)
        {
          bool c = contained_in(s, t);
          if (simulates(s, t))
            implies += !c;
          containment += c != reference_contained(s, t, 8);
        }
    }
  CHECK(reflexive == 0);
  CHECK(transitive == 0);
  CHECK(implies == 0);
  CHECK(projection == 0);
  CHECK(union_law == 0);
  CHECK(containment == 0);
  TransitionSystem col(true);
  col.add_state(0);
  col.add_initial(0);
  CHECK_THROWS_AS(contained_in(col, col), usage_error);
}

TEST_CASE("counterexample extraction")
{
  std::mt19937 rng(12);
  std::size_t runs = 0, trees = 0, bad_runs = 0, bad_trees = 0;
  for (int i = 0; i < 400; ++i)
    {
      bool colored = i % 2 == 0;
      auto s = random_system(rng, 1 + rng() % 5, 2, colored, 50);
      auto t = random_system(rng, 1 + rng() % 3, 2, colored, 50);
      if (!colored && !contained_in(s, t))
        {
          auto r = extract_failing_run(s, t);
          ++runs;
          bad_runs += reference_run_embeds(r, t);
          // It is a run of s.
          bool valid = r.states.size() == r.state_labels.size()
                       && r.edge_labels.size() + 1 == r.states.size();
          bad_runs += !valid;
        }
      if (!simulates(s, t))
        {
          auto tr = extract_failing_subtree(s, t);
          ++trees;
          bad_trees += reference_tree_embeds(tr, t);
          bad_trees += tree_embeds(tr, t);
        }
    }
  CHECK(runs > 20);
  CHECK(trees > 20);
  CHECK(bad_runs == 0);
  CHECK(bad_trees == 0);

  // Unmatched initial labels give a one-node witness.
  TransitionSystem s;
  s.add_state(1);
  s.add_initial(0);
  TransitionSystem t;
  t.add_state(2);
  t.add_initial(0);
  CHECK(extract_failing_run(s, t).states.size() == 1);
  CHECK(extract_failing_subtree(s, t).size() == 1);
  CHECK_THROWS_AS(extract_failing_run(t, t), usage_error);
  CHECK_THROWS_AS(extract_failing_subtree(t, t), usage_error);
}

TEST_CASE("simulation on the Until examples")
{
  {
    auto e = prod_unrav();
    Signature sig({"A1", "A2", "B1", "B2"});
    auto p = product(std::vector<TransitionSystem>{repr_plain(e.positives[0], sig),
                                                   repr_plain(e.positives[1], sig)});
    auto n = repr_plain(e.negatives[0], sig);
    CHECK_FALSE(simulates(p, n));
    // The path 0 -> 3 of the product (both positives are B1-free up to
    // time 2) has no match in the negative, whose B1 sits at time 2:
    // the product is not contained either.
    CHECK_FALSE(contained_in(p, n));
  }
  {
    auto e = u_path_not_tree();
    Signature sig({"A", "B", "C"});
    auto p = product(std::vector<TransitionSystem>{repr_plain(e.positives[0], sig),
                                                   repr_plain(e.positives[1], sig)});
    CHECK(simulates(p, repr_plain(e.negatives[0], sig)));
  }
  {
    auto e = example1();
    Signature sig({"T", "V"});
    auto p = product(std::vector<TransitionSystem>{repr_plain(e.positives[0], sig),
                                                   repr_plain(e.positives[1], sig)});
    std::vector<TransitionSystem> negs;
    for (const auto& d : e.negatives)
      negs.push_back(repr_plain(d, sig));
    auto n = disjoint_union(negs);
    CHECK_FALSE(contained_in(p, n));
    auto r = extract_failing_run(p, n);
    CHECK_FALSE(reference_run_embeds(r, n));
  }
}
