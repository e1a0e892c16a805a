#include "ltlqbe/oracle.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace ltlqbe;
using namespace ltlqbe::testing;

namespace
{
  using QC = QueryClass;

  Verdict run(QC cls, const ExampleSet& e,
              const std::optional<HornOntology>& o = std::nullopt)
  {
    Problem p;
    p.cls = cls;
    p.examples = e;
    p.horn = o;
    return decide(p);
  }

  bool verifies(QC cls, const ExampleSet& e, const std::string& query,
                const std::optional<HornOntology>& o = std::nullopt)
  {
    Problem p;
    p.cls = cls;
    p.examples = e;
    p.horn = o;
    return separates(p, parse_query(query));
  }
}

TEST_CASE("separability of the worked examples")
{
  auto e1 = example1();
  auto v = run(QC::PathDiamond, e1);
  CHECK(v.separable);
  REQUIRE(v.witness);
  CHECK(separates_plain(e1, QC::PathDiamond, *v.witness));
  CHECK(verifies(QC::PathDiamond, e1, "F(T & F F V)"));

  auto o1 = load_horn_ontology(example1_axiom);
  CHECK(run(QC::PathDiamond, example1_horn(), o1).separable);
  CHECK(verifies(QC::PathDiamond, example1_horn(), "F(T & F F V)", o1));
  CHECK_FALSE(verifies(QC::PathDiamond, example1_horn(), "F(T & F F V)"));

  CHECK(run(QC::PathUntil, example1_until()).separable);
  CHECK(verifies(QC::PathUntil, example1_until(), "T U V"));

  CHECK(run(QC::BranchDiamond, example2()).separable);
  CHECK(verifies(QC::BranchDiamond, example2(), "F T & F V"));
  // Under strict semantics F F T asks for T at time 2 or later, which
  // both positives have and neither negative has, so this set is path
  // separable after all.
  CHECK(run(QC::PathDiamond, example2()).separable);
  CHECK(verifies(QC::PathDiamond, example2(), "F F T"));

  CHECK(run(QC::PathNextDiamond, example3a()).separable);
  CHECK_FALSE(run(QC::BranchDiamond, example3a()).separable);
  auto o3 = load_horn_ontology(example3a_axiom);
  for (QC c : all_query_classes())
    CHECK_FALSE(run(c, example3a(), o3).separable);

  CHECK(run(QC::BranchNextDiamond, example3b()).separable);
  CHECK_FALSE(run(QC::BranchDiamond, example3b()).separable);

  CHECK(run(QC::PathUntil, example3c()).separable);
  CHECK(verifies(QC::PathUntil, example3c(), "A U B"));
  CHECK_FALSE(run(QC::BranchNextDiamond, example3c()).separable);

  CHECK(run(QC::SimpleUntil, prod_unrav()).separable);
  CHECK(verifies(QC::SimpleUntil, prod_unrav(), prod_unrav_query));

  CHECK(run(QC::FullUntil, u_path_not_tree()).separable);
  CHECK(verifies(QC::FullUntil, u_path_not_tree(), "(A U B) U C"));
  CHECK_FALSE(run(QC::SimpleUntil, u_path_not_tree()).separable);
}

TEST_CASE("the product-unravelling set has a path Until separator")
{
  // Its only negative has B1 at time 2 alone, while both positives
  // have B1 at time 3 or later; F F F B1 is a path Until query that
  // tells them apart, so the set is path-Until separable.
  auto e = prod_unrav();
  CHECK(verifies(QC::PathUntil, e, "F F F B1"));
  CHECK(run(QC::PathUntil, e).separable);
  CHECK(brute_force_decide(problem(QC::PathUntil, e.positives, e.negatives)).separable);
}

TEST_CASE("trivial and degenerate example sets")
{
  auto d = data({{"A", 1}, {"B", 3}});
  for (QC c : all_query_classes())
    {
      // Identical positive and negative.
      CHECK_FALSE(run(c, ExampleSet{{d}, {d}}).separable);
      // No negatives: true separates.
      auto v = run(c, ExampleSet{{d}, {}});
      CHECK(v.separable);
      REQUIRE(v.witness);
      CHECK(v.witness->op() == Op::Top);
    }
  CHECK_THROWS_AS(run(QC::PathDiamond, ExampleSet{{}, {d}}), usage_error);

  // An inconsistent negative blocks separation; inconsistent positives
  // are dropped.
  auto bot = load_horn_ontology("C -> false");
  ExampleSet bad_neg{{d}, {data({{"C", 0}})}};
  CHECK_FALSE(run(QC::PathDiamond, bad_neg, bot).separable);
  ExampleSet bad_pos{{d, data({{"C", 2}})}, {data({{"B", 3}})}};
  auto v = run(QC::PathDiamond, bad_pos, bot);
  CHECK(v.separable);
  CHECK(verifies(QC::PathDiamond, ExampleSet{{d}, {data({{"B", 3}})}},
                 to_string(*v.witness), bot));
}

TEST_CASE("path search and Horn search agree without axioms")
{
  std::mt19937 rng(41);
  std::vector<std::string> atoms = {"A", "B", "C"};
  HornOntology empty;
  std::size_t mismatches = 0;
  for (int i = 0; i < 150; ++i)
    {
      auto e = random_example_set(rng, atoms, 3, 3, 5, 4);
      QC cls = std::vector<QC>{QC::PathDiamond, QC::PathNextDiamond,
                               QC::PathDiamondCircBlocks}[i % 3];
      auto sig = Signature(std::vector<std::string>(atoms.begin(), atoms.end()));
      std::vector<Timeline> pos, neg;
      for (const auto& d : e.positives)
        pos.push_back(make_timeline(d, sig));
      for (const auto& d : e.negatives)
        neg.push_back(make_timeline(d, sig));
      auto a = dp_path(pos, neg, sig, cls);
      auto b = horn_diamond_search(empty, e, sig, cls);
      mismatches += a.separable != b.separable;
      if (a.separable)
        mismatches += !separates_plain(e, cls, *a.witness);
    }
  CHECK(mismatches == 0);
}

TEST_CASE("Horn search and least-model search agree")
{
  std::mt19937 rng(43);
  std::vector<std::string> atoms = {"A", "B", "C"};
  std::size_t mismatches = 0, total = 0;
  for (int i = 0; i < 120; ++i)
    {
      Problem p;
      p.cls = i % 2 ? QC::PathDiamond : QC::PathNextDiamond;
      p.horn = load_horn_ontology(random_horn_ontology(rng, atoms, 3));
      p.examples = random_example_set(rng, atoms, 2, 2, 4, 4);
      DecideOptions opt;
      opt.horn_search = true;
      auto a = decide(p);
      auto b = decide(p, opt);
      ++total;
      mismatches += a.separable != b.separable;
    }
  CHECK(total == 120);
  CHECK(mismatches == 0);
}

TEST_CASE("witness queries from runs and trees")
{
  Signature sig({"T"});
  Tree t;
  t.label = sig.encode({"T"});
  CHECK(query_from_tree(t, sig, false) == parse_query("T"));
  Run r{{0}, {sig.encode({"T"})}, {}};
  CHECK(query_from_run(r, sig) == parse_query("T"));
  // One step with an empty interval is an X step.
  Run step{{0, 1}, {0, sig.encode({"T"})}, {sig.all_with_bottom()}};
  CHECK(query_from_run(step, sig) == parse_query("X T"));
  Run until{{0, 1}, {0, sig.encode({"T"})}, {0}};
  CHECK(query_from_run(until, sig) == parse_query("F T"));

  // The separating subtree of the product-unravelling set.
  auto e = prod_unrav();
  auto v = run(QC::SimpleUntil, e);
  REQUIRE(v.witness);
  CHECK(in_class(*v.witness, QC::SimpleUntil));
  CHECK(separates_plain(e, QC::SimpleUntil, *v.witness));
}

TEST_CASE("minimization and parallel jobs")
{
  Problem p;
  p.cls = QC::BranchDiamond;
  p.examples = example2();
  DecideOptions m;
  m.minimize = true;
  auto v = decide(p, m);
  REQUIRE(v.witness);
  CHECK(separates(p, *v.witness));
  auto plain = decide(p);
  CHECK(query_size(*v.witness) <= query_size(*plain.witness));

  std::mt19937 rng(44);
  std::vector<std::string> atoms = {"A", "B", "C"};
  std::size_t mismatches = 0;
  for (int i = 0; i < 60; ++i)
    {
      Problem q;
      q.cls = i % 2 ? QC::BranchNextDiamond : QC::FullUntil;
      q.examples = random_example_set(rng, atoms, 3, 3, 5, 4);
      DecideOptions four;
      four.jobs = 4;
      auto a = decide(q);
      auto b = decide(q, four);
      mismatches += a.separable != b.separable;
      if (a.witness && b.witness)
        mismatches += !(*a.witness == *b.witness);
    }
  CHECK(mismatches == 0);
}

TEST_CASE("monotonicity in classes and examples")
{
  std::mt19937 rng(45);
  std::vector<std::string> atoms = {"A", "B", "C"};
  std::size_t violations = 0;
  for (int i = 0; i < 150; ++i)
    {
      auto e = random_example_set(rng, atoms, 3, 3, 5, 4);
      std::map<QC, bool> s;
      for (QC c : all_query_classes())
        s[c] = run(c, e).separable;
      violations += s[QC::PathUntil] && !s[QC::SimpleUntil];
      violations += s[QC::SimpleUntil] && !s[QC::FullUntil];
      violations += s[QC::PathDiamond] && !s[QC::BranchDiamond];
      violations += s[QC::PathDiamond] && !s[QC::PathNextDiamond];
      violations += s[QC::BranchDiamond] && !s[QC::BranchNextDiamond];
      if (e.negatives.size() > 1)
        {
          ExampleSet fewer = e;
          fewer.negatives.pop_back();
          violations += s[QC::SimpleUntil] && !run(QC::SimpleUntil, fewer).separable;
        }
      if (e.positives.size() > 1)
        {
          ExampleSet fewer = e;
          fewer.positives.pop_back();
          violations += s[QC::PathDiamond] && !run(QC::PathDiamond, fewer).separable;
        }
    }
  CHECK(violations == 0);
}

TEST_CASE("common subsequences")
{
  // Words as instances: letter i (1-based) is the fact w[i-1](i).
  auto word = [](const std::string& w) {
    std::vector<Fact> f;
    for (std::size_t i = 0; i < w.size(); ++i)
      f.push_back({std::string(1, w[i]), i + 1});
    return DataInstance(f);
  };
  std::mt19937 rng(46);
  Signature sig({"a", "b"});
  auto random_word = [&](std::size_t max_len) {
    std::string w;
    std::size_t n = 1 + rng() % max_len;
    for (std::size_t i = 0; i < n; ++i)
      w += "ab"[rng() % 2];
    return w;
  };
  std::size_t mismatches = 0;
  for (int i = 0; i < 300; ++i)
    {
      std::vector<std::string> pos, neg;
      for (std::size_t k = 0, n = 1 + rng() % 3; k < n; ++k)
        pos.push_back(random_word(5));
      for (std::size_t k = 0, n = 1 + rng() % 3; k < n; ++k)
        neg.push_back(random_word(5));
      // Some nonempty word over {a, b} that is a subsequence of every
      // positive and of no negative.
      bool expected = false;
      for (std::size_t len = 1; len <= 5 && !expected; ++len)
        for (unsigned bits = 0; bits < (1u << len) && !expected; ++bits)
          {
            std::string u;
            for (std::size_t j = 0; j < len; ++j)
              u += "ab"[(bits >> j) & 1];
            bool ok = true;
            for (const auto& w : pos)
              ok = ok && is_subsequence(u, w);
            for (const auto& w : neg)
              ok = ok && !is_subsequence(u, w);
            expected = ok;
          }
      std::vector<Timeline> tp, tn;
      for (const auto& w : pos)
        tp.push_back(make_timeline(word(w), sig));
      for (const auto& w : neg)
        tn.push_back(make_timeline(word(w), sig));
      PathSearchOptions opt;
      opt.nonempty_letters = true;
      mismatches += dp_path(tp, tn, sig, QC::PathDiamond, opt).separable != expected;
    }
  CHECK(mismatches == 0);
}
