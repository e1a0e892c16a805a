// Shared fixtures for the unit and acceptance tests: the worked example
// sets, random generators, and reference implementations that do not
// go through the library's decision procedures (set-builder ⋖/∇, least
// Horn models on a fixed lasso shape, brute-force run and tree
// matching).

#pragma once

#include "ltlqbe/horn.hpp"
#include "ltlqbe/qbe.hpp"
#include "ltlqbe/repr.hpp"
#include "ltlqbe/transform.hpp"
#include "ltlqbe/tsys.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

namespace ltlqbe::testing
{
  inline DataInstance data(const std::vector<Fact>& facts)
  {
    return DataInstance(facts);
  }

  inline Problem problem(QueryClass cls, std::vector<DataInstance> pos,
                         std::vector<DataInstance> neg)
  {
    Problem p;
    p.cls = cls;
    p.examples.positives = std::move(pos);
    p.examples.negatives = std::move(neg);
    return p;
  }

  // ----------------------------------------------------------------
  // Worked example sets
  // ----------------------------------------------------------------

  // Two positives with T before V (three steps apart at least once),
  // three negatives missing that pattern.
  inline ExampleSet example1()
  {
    return {{data({{"T", 2}, {"V", 4}}), data({{"T", 1}, {"V", 4}})},
            {data({{"T", 1}}), data({{"V", 4}}), data({{"V", 1}, {"T", 2}})}};
  }

  // Example 1 with the first positive's T replaced by H one step
  // earlier; the axiom X H -> T restores it.
  inline ExampleSet example1_horn()
  {
    auto e = example1();
    e.positives[0] = data({{"H", 3}, {"V", 4}});
    return e;
  }

  inline const char* example1_axiom = "X H -> T";

  // The T U V sub-example.
  inline ExampleSet example1_until()
  {
    return {{data({{"T", 1}, {"V", 2}}), data({{"T", 1}, {"T", 2}, {"V", 3}})},
            {data({{"T", 1}, {"V", 3}})}};
  }

  // T and V in both orders: a conjunction of F's, but no path.
  inline ExampleSet example2()
  {
    return {{data({{"T", 2}, {"V", 4}}), data({{"V", 1}, {"T", 4}})},
            {data({{"T", 1}}), data({{"V", 4}})}};
  }

  inline ExampleSet example3a()
  {
    return {{data({{"A", 1}})}, {data({{"A", 2}})}};
  }

  inline const char* example3a_axiom = "X A -> A";

  inline ExampleSet example3b()
  {
    return {{data({{"A", 1}, {"B", 2}}), data({{"A", 2}, {"B", 3}})},
            {data({{"A", 3}, {"B", 5}})}};
  }

  inline ExampleSet example3c()
  {
    return {{data({{"B", 1}}), data({{"A", 1}, {"B", 2}})},
            {data({{"B", 2}})}};
  }

  // Two positives whose product has a separating subtree.  As given,
  // the negative's only B1 is at time 2 and both positives are B1-free
  // up to time 2, so F F F B1 separates the set as well.
  inline ExampleSet prod_unrav()
  {
    return {{data({{"A2", 4}, {"B1", 4}, {"B2", 5}}),
             data({{"A1", 2}, {"B2", 2}, {"B1", 3}})},
            {data({{"B1", 2}, {"B2", 4}})}};
  }

  inline const char* prod_unrav_query =
      "F(((A1 & B2) U B1) & ((A2 & B1) U B2))";

  // Separable by (A U B) U C but by no simple Until query.
  inline ExampleSet u_path_not_tree()
  {
    return {{data({{"B", 2}, {"C", 2}}),
             data({{"A", 2}, {"B", 3}, {"B", 4}, {"C", 4}})},
            {data({{"A", 2}, {"B", 3}, {"B", 5}, {"C", 5}})}};
  }

  inline const char* abc_ontology = "A -> C\nA -> X B\nB -> X X B\nB -> X C\n";

  // ----------------------------------------------------------------
  // Random generators
  // ----------------------------------------------------------------

  inline DataInstance random_instance(std::mt19937& rng,
                                      const std::vector<std::string>& atoms,
                                      std::size_t max_facts,
                                      std::size_t max_time)
  {
    std::vector<Fact> facts;
    std::size_t n = rng() % (max_facts + 1);
    for (std::size_t i = 0; i < n; ++i)
      facts.push_back({atoms[rng() % atoms.size()], rng() % (max_time + 1)});
    return DataInstance(facts);
  }

  inline ExampleSet random_example_set(std::mt19937& rng,
                                       const std::vector<std::string>& atoms,
                                       std::size_t max_pos, std::size_t max_neg,
                                       std::size_t max_facts,
                                       std::size_t max_time)
  {
    ExampleSet e;
    std::size_t np = 1 + rng() % max_pos;
    std::size_t nn = 1 + rng() % max_neg;
    for (std::size_t i = 0; i < np; ++i)
      e.positives.push_back(random_instance(rng, atoms, max_facts, max_time));
    for (std::size_t i = 0; i < nn; ++i)
      e.negatives.push_back(random_instance(rng, atoms, max_facts, max_time));
    return e;
  }

  // Horn axioms over atoms: 1-2 body literals with up to two G/X
  // prefix operators (occasionally a leading F), one head literal
  // (occasionally false).
  inline std::string random_horn_ontology(std::mt19937& rng,
                                          const std::vector<std::string>& atoms,
                                          std::size_t max_axioms)
  {
    auto literal = [&](bool head) {
      std::string s;
      std::size_t k = rng() % 3;
      for (std::size_t i = 0; i < k; ++i)
        s += rng() % 2 ? "G " : "X ";
      if (!head && rng() % 5 == 0)
        s = "F " + s;
      if (head && rng() % 8 == 0)
        return s + "false";
      return s + atoms[rng() % atoms.size()];
    };
    std::string text;
    std::size_t n = 1 + rng() % max_axioms;
    for (std::size_t a = 0; a < n; ++a)
      {
        std::size_t nb = 1 + rng() % 2;
        for (std::size_t b = 0; b < nb; ++b)
          text += (b ? " & " : "") + literal(false);
        text += " -> " + literal(true) + "\n";
      }
    return text;
  }

  // Random query over atoms built with &, X, F and U, of temporal depth
  // at most depth.
  inline Query random_query(std::mt19937& rng,
                            const std::vector<std::string>& atoms,
                            std::size_t depth, bool until = true)
  {
    std::size_t k = depth == 0 ? rng() % 2 : rng() % (until ? 6 : 5);
    switch (k)
      {
      case 0:
        return rng() % 6 == 0 ? q_top() : q_atom(atoms[rng() % atoms.size()]);
      case 1:
        return q_and(q_atom(atoms[rng() % atoms.size()]),
                     depth ? random_query(rng, atoms, depth - 1, until)
                           : q_atom(atoms[rng() % atoms.size()]));
      case 2:
        return q_next(random_query(rng, atoms, depth - 1, until));
      case 3:
        return q_diamond(random_query(rng, atoms, depth - 1, until));
      case 4:
        return q_and(random_query(rng, atoms, depth - 1, until),
                     random_query(rng, atoms, depth - 1, until));
      default:
        return q_until(random_query(rng, atoms, depth - 1, until),
                       random_query(rng, atoms, depth - 1, until));
      }
  }

  // Random system with labels over `bits` atoms.
  inline TransitionSystem random_system(std::mt19937& rng, std::size_t states,
                                        std::size_t bits, bool colored,
                                        std::size_t edge_percent = 35)
  {
    TransitionSystem ts(colored);
    atom_set mask = (atom_set{1} << bits) - 1;
    for (std::size_t i = 0; i < states; ++i)
      ts.add_state(rng() & mask & rng());
    for (std::size_t i = 0; i < states; ++i)
      for (std::size_t j = 0; j < states; ++j)
        for (int c = 0; c < (colored ? 2 : 1); ++c)
          if (rng() % 100 < edge_percent)
            {
              atom_set l = rng() & mask;
              if (rng() % 4 == 0)
                l |= bottom_bit;
              ts.add_edge(i, j, l, c ? Color::Red : Color::Black);
            }
    ts.add_initial(0);
    if (states > 1 && rng() % 3 == 0)
      ts.add_initial(states - 1);
    return ts;
  }

  // ----------------------------------------------------------------
  // Reference implementations
  // ----------------------------------------------------------------

  // ⋖ and ∇ straight from the set-builder definitions over explicit
  // std::set<int>: mu(x) = min{y in e : y > x} must exist for every x
  // in d and hit every element of e.
  struct nabla_result
  {
    bool lessdot = false;
    std::set<int> points;
  };

  inline nabla_result reference_nabla(const std::set<int>& d,
                                      const std::set<int>& e)
  {
    nabla_result r;
    std::set<int> image;
    for (int x : d)
      {
        auto it = e.upper_bound(x);
        if (it == e.end())
          return r;
        image.insert(*it);
        for (int y = x + 1; y < *it; ++y)
          r.points.insert(y);
      }
    r.lessdot = image == e;
    if (!r.lessdot)
      r.points.clear();
    return r;
  }

  // Wrap-around variant on a lasso with periodic zone [m, p): a zone
  // point without a later element of e continues at the least element
  // of e inside the zone, passing through (x, p) and [m, mu(x)).
  inline nabla_result reference_nabla_mp(const std::set<int>& d,
                                         const std::set<int>& e, int m, int p)
  {
    nabla_result r;
    std::set<int> image;
    for (int x : d)
      {
        auto it = e.upper_bound(x);
        if (it != e.end())
          {
            image.insert(*it);
            for (int y = x + 1; y < *it; ++y)
              r.points.insert(y);
            continue;
          }
        if (x < m)
          return r;
        auto w = e.lower_bound(m);
        if (w == e.end())
          return r;
        image.insert(*w);
        for (int y = x + 1; y < p; ++y)
          r.points.insert(y);
        for (int y = m; y < *w; ++y)
          r.points.insert(y);
      }
    r.lessdot = image == e;
    if (!r.lessdot)
      r.points.clear();
    return r;
  }

  inline point_set to_points(const std::set<int>& s)
  {
    point_set out = 0;
    for (int x : s)
      out |= point_set{1} << x;
    return out;
  }

  // The least model of o and d among lassos with the given prefix and
  // loop lengths, by naive forward chaining over the ground Horn
  // clauses of that shape; nullopt when false is derivable.  Every
  // literal G/X-prefix denotes a set of folded positions and holds iff
  // its atom is true on all of them.
  inline std::optional<LassoModel>
  least_lasso_model(const HornOntology& o, const DataInstance& d,
                    std::size_t pre, std::size_t per)
  {
    const std::size_t n = pre + per;
    auto fold = [&](std::size_t t) {
      return t < n ? t : pre + (t - pre) % per;
    };
    // Positions strictly after t, folded: the rest of the prefix and
    // the whole loop.
    auto later = [&](std::size_t t) {
      std::set<std::size_t> out;
      for (std::size_t k = t + 1; k < n + per; ++k)
        out.insert(fold(k));
      return out;
    };
    auto positions = [&](const HornLiteral& l, std::size_t at) {
      std::set<std::size_t> cur{at};
      for (LitOp op : l.prefix)
        {
          std::set<std::size_t> next;
          for (auto t : cur)
            if (op == LitOp::Next)
              next.insert(fold(t + 1));
            else
              for (auto k : later(t))
                next.insert(k);
          cur = std::move(next);
        }
      return cur;
    };
    std::vector<std::set<std::string>> word(n);
    for (const auto& f : d.facts())
      {
        if (f.time >= n)
          throw usage_error("least_lasso_model: shape too short for the data");
        word[f.time].insert(f.atom);
      }
    for (bool changed = true; changed;)
      {
        changed = false;
        for (const auto& ax : o.axioms)
          for (std::size_t at = 0; at < n; ++at)
            {
              bool body = true;
              for (const auto& l : ax.body)
                {
                  if (l.bottom)
                    {
                      body = false;
                      break;
                    }
                  for (auto t : positions(l, at))
                    body = body && word[t].count(l.atom);
                }
              if (!body)
                continue;
              if (ax.head.bottom)
                return std::nullopt;
              for (auto t : positions(ax.head, at))
                changed = word[t].insert(ax.head.atom).second || changed;
            }
      }
    LassoModel m;
    m.prefix.assign(word.begin(), word.begin() + pre);
    m.loop.assign(word.begin() + pre, word.end());
    return m;
  }

  // Does the tree embed into t at state y?  Direct recursion over all
  // choices.
  inline bool reference_tree_at(const Tree& tr, const TransitionSystem& t,
                                std::size_t y)
  {
    if (!subset_of(tr.label, t.label(y)))
      return false;
    for (const auto& c : tr.children)
      {
        bool ok = false;
        for (const auto& e : t.edges(y))
          if (e.color == c.color && subset_of(c.label, e.label)
              && reference_tree_at(c.node, t, e.to))
            {
              ok = true;
              break;
            }
        if (!ok)
          return false;
      }
    return true;
  }

  inline bool reference_tree_embeds(const Tree& tr, const TransitionSystem& t)
  {
    for (auto y : t.initial())
      if (reference_tree_at(tr, t, y))
        return true;
    return false;
  }

  inline bool reference_run_embeds(const Run& r, const TransitionSystem& t)
  {
    std::set<std::size_t> cur;
    for (auto y : t.initial())
      if (subset_of(r.state_labels[0], t.label(y)))
        cur.insert(y);
    for (std::size_t i = 0; i < r.edge_labels.size() && !cur.empty(); ++i)
      {
        std::set<std::size_t> next;
        for (auto y : cur)
          for (const auto& e : t.edges(y))
            if (subset_of(r.edge_labels[i], e.label)
                && subset_of(r.state_labels[i + 1], t.label(e.to)))
              next.insert(e.to);
        cur = std::move(next);
      }
    return !cur.empty();
  }

  // Containment by enumerating every run of s up to `len` steps.
  inline bool reference_contained(const TransitionSystem& s,
                                  const TransitionSystem& t, std::size_t len)
  {
    std::vector<Run> frontier;
    for (auto x : s.initial())
      frontier.push_back(Run{{x}, {s.label(x)}, {}});
    for (std::size_t step = 0; step <= len; ++step)
      {
        std::vector<Run> next;
        for (const auto& r : frontier)
          {
            if (!reference_run_embeds(r, t))
              return false;
            if (step == len)
              continue;
            for (const auto& e : s.edges(r.states.back()))
              {
                Run n = r;
                n.states.push_back(e.to);
                n.state_labels.push_back(s.label(e.to));
                n.edge_labels.push_back(e.label);
                next.push_back(std::move(n));
              }
          }
        frontier = std::move(next);
      }
    return true;
  }

  // Longest-common-subsequence style check: is u a subsequence of w?
  inline bool is_subsequence(const std::string& u, const std::string& w)
  {
    std::size_t i = 0;
    for (char c : w)
      if (i < u.size() && u[i] == c)
        ++i;
    return i == u.size();
  }

  // Direct check of a separator: class membership and truth at 0 on
  // plain data, without the engine's entailment dispatch.
  inline bool separates_plain(const ExampleSet& e, QueryClass cls,
                              const Query& q)
  {
    if (!in_class(q, cls))
      return false;
    for (const auto& d : e.positives)
      if (!eval_data(d, q, 0))
        return false;
    for (const auto& d : e.negatives)
      if (eval_data(d, q, 0))
        return false;
    return true;
  }
}
