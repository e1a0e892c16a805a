// The separability engine.

#include "ltlqbe/qbe.hpp"

#include "ltlqbe/repr.hpp"
#include "ltlqbe/transform.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <future>
#include <numeric>
#include <unordered_map>

namespace ltlqbe
{
  Signature problem_signature(const Problem& p)
  {
    std::set<std::string> atoms = p.examples.atoms();
    if (p.horn)
      {
        auto a = p.horn->user_atoms();
        atoms.insert(a.begin(), a.end());
      }
    if (p.prior)
      {
        auto a = p.prior->atoms();
        atoms.insert(a.begin(), a.end());
      }
    if (atoms.size() > max_signature_size)
      throw usage_error("more than 63 atoms");
    return Signature(std::vector<std::string>(atoms.begin(), atoms.end()));
  }

  bool entailed(const Problem& p, const DataInstance& d, const Query& q)
  {
    if (p.horn)
      {
        auto cm = canonical_model(*p.horn, d);
        return !cm || eval_lasso(cm->lasso, q, 0);
      }
    if (p.prior)
      return prior_entails(*p.prior, d, q);
    return eval_data(d, q, 0);
  }

  bool separates(const Problem& p, const Query& q)
  {
    if (!in_class(q, p.cls))
      return false;
    for (const auto& d : p.examples.positives)
      if (!entailed(p, d, q))
        return false;
    for (const auto& d : p.examples.negatives)
      if (entailed(p, d, q))
        return false;
    return true;
  }

  namespace
  {
    Query letter(atom_set a, const Signature& sig)
    {
      if (a & bottom_bit)
        return q_bot();
      std::vector<Query> qs;
      for (std::size_t i = 0; i < sig.size(); ++i)
        if ((a >> i) & 1)
          qs.push_back(q_atom(sig.name(i)));
      return q_and(qs);
    }

    Verdict separable_with(Query q, std::string note)
    {
      Verdict v;
      v.separable = true;
      v.witness = std::move(q);
      v.note = std::move(note);
      return v;
    }

    Verdict not_separable(std::string note)
    {
      Verdict v;
      v.note = std::move(note);
      return v;
    }
  }

  // ----------------------------------------------------------------
  // Path search
  // ----------------------------------------------------------------

  namespace
  {
    enum class step_kind : unsigned char
    {
      diamond,
      next
    };

    struct path_node
    {
      // Positives: (anchor, current) per instance.
      std::vector<unsigned char> pos;
      // Negatives: per instance and anchor, the set of current points.
      std::vector<std::uint64_t> neg;
      bool used_diamond = false;

      std::string key() const
      {
        std::string k(pos.begin(), pos.end());
        k.push_back(used_diamond ? 1 : 0);
        k.append(reinterpret_cast<const char*>(neg.data()),
                 neg.size() * sizeof(std::uint64_t));
        return k;
      }
      bool accepting() const
      {
        return std::all_of(neg.begin(), neg.end(),
                           [](std::uint64_t w) { return w == 0; });
      }
    };

    struct path_search
    {
      const std::vector<Timeline>& pos;
      const std::vector<Timeline>& neg;
      const Signature& sig;
      QueryClass cls;
      PathSearchOptions opt;

      std::vector<std::vector<std::uint64_t>> pos_future{};
      std::vector<std::vector<std::uint64_t>> neg_future{};
      std::vector<std::size_t> neg_offset{};  // start of each negative in node.neg

      bool blocks() const { return cls == QueryClass::PathDiamondCircBlocks; }
      bool allow_next() const { return cls != QueryClass::PathDiamond; }

      static std::vector<std::uint64_t> futures(const Timeline& t)
      {
        const std::size_t n = t.size();
        std::uint64_t loop = 0;
        for (std::size_t i = t.loop_start; i < n; ++i)
          loop |= std::uint64_t{1} << i;
        std::vector<std::uint64_t> f(n, 0);
        for (std::size_t i = 0; i < n; ++i)
          {
            f[i] = loop;
            for (std::size_t j = i + 1; j < n; ++j)
              f[i] |= std::uint64_t{1} << j;
          }
        return f;
      }

      // Points of t whose label includes letter.
      static std::uint64_t carrying(const Timeline& t, atom_set l)
      {
        std::uint64_t m = 0;
        for (std::size_t i = 0; i < t.size(); ++i)
          if (subset_of(l, t.labels[i]))
            m |= std::uint64_t{1} << i;
        return m;
      }

      // Negative j after appending a step with the given letter.
      void advance_negative(const path_node& from, path_node& to,
                            std::size_t j, step_kind k, atom_set l) const
      {
        const Timeline& t = neg[j];
        const std::size_t n = t.size();
        const std::size_t off = neg_offset[j];
        const std::uint64_t ok = carrying(t, l);
        if (k == step_kind::diamond)
          {
            std::uint64_t reach = 0;
            for (std::size_t a = 0; a < n; ++a)
              if (from.neg[off + a])
                reach |= neg_future[j][a];
            reach &= ok;
            for (std::uint64_t r = reach; r; r &= r - 1)
              {
                std::size_t c = static_cast<std::size_t>(std::countr_zero(r));
                to.neg[off + c] |= std::uint64_t{1} << c;
              }
            return;
          }
        for (std::size_t a = 0; a < n; ++a)
          for (std::uint64_t r = from.neg[off + a]; r; r &= r - 1)
            {
              std::size_t c = static_cast<std::size_t>(std::countr_zero(r));
              std::size_t nx = t.next(c);
              if (!((ok >> nx) & 1))
                continue;
              std::size_t anchor = blocks() ? a : nx;
              to.neg[off + anchor] |= std::uint64_t{1} << nx;
            }
      }

      Verdict run()
      {
        for (const auto* list : {&pos, &neg})
          for (const auto& t : *list)
            if (t.size() > 64)
              throw resource_limit("path search: words longer than 64 points");
        for (const auto& t : pos)
          pos_future.push_back(futures(t));
        std::size_t total = 0;
        for (const auto& t : neg)
          {
            neg_future.push_back(futures(t));
            neg_offset.push_back(total);
            total += t.size();
          }

        struct info
        {
          std::size_t parent;
          step_kind kind;
          atom_set letter;
        };
        std::vector<path_node> nodes;
        std::vector<info> infos;
        std::unordered_map<std::string, std::size_t> seen;

        path_node root;
        root.pos.assign(2 * pos.size(), 0);
        root.neg.assign(total, 0);
        atom_set rho0 = sig.all();
        for (const auto& t : pos)
          rho0 &= t.labels[0];
        for (std::size_t j = 0; j < neg.size(); ++j)
          if (subset_of(rho0, neg[j].labels[0]))
            root.neg[neg_offset[j]] = 1;
        nodes.push_back(root);
        infos.push_back({0, step_kind::diamond, rho0});
        seen.emplace(root.key(), 0);

        auto witness = [&](std::size_t id) {
          std::vector<info> chain;
          for (std::size_t n = id; n != 0; n = infos[n].parent)
            chain.push_back(infos[n]);
          std::reverse(chain.begin(), chain.end());
          // Blocks: letters grouped by F steps, each an X-path.
          std::vector<std::vector<atom_set>> groups{{rho0}};
          std::vector<step_kind> ops;
          for (const auto& s : chain)
            {
              if (blocks() && s.kind == step_kind::next)
                groups.back().push_back(s.letter);
              else
                {
                  groups.push_back({s.letter});
                  ops.push_back(s.kind);
                }
            }
          auto xpath = [&](const std::vector<atom_set>& ls) {
            Query q = letter(ls.back(), sig);
            for (std::size_t i = ls.size() - 1; i-- > 0;)
              q = q_and(letter(ls[i], sig), q_next(q));
            return q;
          };
          Query q = xpath(groups.back());
          for (std::size_t g = groups.size() - 1; g-- > 0;)
            q = q_and(xpath(groups[g]), ops[g] == step_kind::next
                                            ? q_next(q)
                                            : q_diamond(q));
          return q;
        };

        Verdict v;
        auto finish = [&](std::size_t id) {
          v.separable = true;
          v.witness = witness(id);
          v.stats["search_nodes"] = nodes.size();
          return v;
        };
        if (nodes[0].accepting())
          return finish(0);

        std::vector<unsigned char> choice(pos.size());
        for (std::size_t i = 0; i < nodes.size(); ++i)
          {
            const path_node cur = nodes[i];
            auto emit = [&](step_kind k, const std::vector<unsigned char>& cursors,
                            bool first_diamond) -> std::optional<std::size_t> {
              atom_set l = sig.all();
              for (std::size_t p = 0; p < pos.size(); ++p)
                l &= pos[p].labels[cursors[2 * p + 1]];
              if (opt.nonempty_letters && l == 0)
                return std::nullopt;
              path_node nx;
              nx.pos = cursors;
              nx.neg.assign(total, 0);
              nx.used_diamond = cur.used_diamond || first_diamond;
              for (std::size_t j = 0; j < neg.size(); ++j)
                advance_negative(cur, nx, j, k, l);
              auto key = nx.key();
              if (seen.count(key))
                return std::nullopt;
              if (nodes.size() >= opt.node_cap)
                throw resource_limit("path search exceeds "
                                     + std::to_string(opt.node_cap) + " nodes");
              seen.emplace(key, nodes.size());
              nodes.push_back(std::move(nx));
              infos.push_back({i, k, l});
              if (nodes.back().accepting())
                return nodes.size() - 1;
              return std::nullopt;
            };

            const bool may_diamond = !opt.single_diamond || !cur.used_diamond;
            const bool may_next
                = allow_next() && (!opt.single_diamond || cur.used_diamond);
            if (may_next)
              {
                std::vector<unsigned char> c = cur.pos;
                for (std::size_t p = 0; p < pos.size(); ++p)
                  {
                    auto nx = static_cast<unsigned char>(pos[p].next(cur.pos[2 * p + 1]));
                    c[2 * p + 1] = nx;
                    if (!blocks())
                      c[2 * p] = nx;
                  }
                if (auto hit = emit(step_kind::next, c, false))
                  return finish(*hit);
              }
            if (may_diamond)
              {
                // Every combination of later points of the positives.
                std::vector<unsigned char> c(2 * pos.size());
                std::optional<std::size_t> hit;
                std::function<void(std::size_t)> go = [&](std::size_t p) {
                  if (hit)
                    return;
                  if (p == pos.size())
                    {
                      hit = emit(step_kind::diamond, c, true);
                      return;
                    }
                  for (std::uint64_t r = pos_future[p][cur.pos[2 * p]]; r && !hit;
                       r &= r - 1)
                    {
                      auto at = static_cast<unsigned char>(std::countr_zero(r));
                      c[2 * p] = at;
                      c[2 * p + 1] = at;
                      go(p + 1);
                    }
                };
                go(0);
                if (hit)
                  return finish(*hit);
              }
          }
        v.stats["search_nodes"] = nodes.size();
        return v;
      }
    };
  }

  Verdict dp_path(const std::vector<Timeline>& positives,
                  const std::vector<Timeline>& negatives,
                  const Signature& sig, QueryClass cls,
                  const PathSearchOptions& opt)
  {
    if (cls != QueryClass::PathDiamond && cls != QueryClass::PathNextDiamond
        && cls != QueryClass::PathDiamondCircBlocks)
      throw usage_error("dp_path: not a path class: " + to_string(cls));
    if (opt.single_diamond && cls != QueryClass::PathDiamondCircBlocks)
      throw usage_error("dp_path: single_diamond requires path-diamond-blocks");
    if (positives.empty())
      throw usage_error("dp_path: no positive examples");
    Verdict v = path_search{positives, negatives, sig, cls, opt}.run();
    v.note = "path search";
    return v;
  }

  Verdict horn_diamond_search(const HornOntology& o, const ExampleSet& e,
                              const Signature& sig, QueryClass cls,
                              const PathSearchOptions& opt)
  {
    // Common normalization: k bounds every handle end, m is a multiple
    // of every period, so each least model is the lasso of length k+m
    // looping back to k.
    std::vector<CanonicalModel> models;
    std::size_t k = 0;
    std::size_t m = 1;
    for (const auto* list : {&e.positives, &e.negatives})
      for (const auto& d : *list)
        {
          auto cm = canonical_model(o, d);
          if (!cm)
            throw usage_error("horn_diamond_search: inconsistent instance");
          k = std::max(k, cm->lasso.pre());
          m = std::lcm(m, cm->period);
          models.push_back(std::move(*cm));
        }
    if (k + m > 64)
      throw resource_limit("horn_diamond_search: normalized words exceed 64 points");
    auto word = [&](const CanonicalModel& cm) {
      Timeline t;
      t.loop_start = k;
      for (std::size_t n = 0; n < k + m; ++n)
        {
          atom_set l = 0;
          for (std::size_t a = 0; a < sig.size(); ++a)
            if (eval_lasso(cm.lasso, q_atom(sig.name(a)), cm.lasso.fold(n)))
              l |= atom_set{1} << a;
          t.labels.push_back(l);
        }
      return t;
    };
    std::vector<Timeline> pos;
    std::vector<Timeline> neg;
    for (std::size_t i = 0; i < models.size(); ++i)
      (i < e.positives.size() ? pos : neg).push_back(word(models[i]));
    Verdict v = path_search{pos, neg, sig, cls, opt}.run();
    v.note = "horn search (k=" + std::to_string(k) + ", m=" + std::to_string(m) + ")";
    return v;
  }

  // ----------------------------------------------------------------
  // Until classes
  // ----------------------------------------------------------------

  Query query_from_run(const Run& r, const Signature& sig)
  {
    if (r.state_labels.empty() || r.edge_labels.size() + 1 != r.state_labels.size())
      throw usage_error("query_from_run: malformed run");
    Query q = letter(r.state_labels.back(), sig);
    for (std::size_t i = r.edge_labels.size(); i-- > 0;)
      {
        Query lambda = letter(r.edge_labels[i], sig);
        Query step = lambda.op() == Op::Bot   ? q_next(q)
                     : lambda.op() == Op::Top ? q_diamond(q)
                                              : q_until(lambda, q);
        q = q_and(letter(r.state_labels[i], sig), step);
      }
    return q;
  }

  namespace
  {
    Query until_of_edge(const Tree::Child& c, const Signature& sig, bool colored);

    // gamma & the Until queries of the given children.
    Query node_query(const Tree& n, const Signature& sig, bool colored,
                     Color keep)
    {
      if (n.label & bottom_bit)
        return q_bot();
      std::vector<Query> parts{letter(n.label, sig)};
      for (const auto& c : n.children)
        if (!colored || c.color == keep)
          parts.push_back(until_of_edge(c, sig, colored));
      return q_and(parts);
    }

    Query until_of_edge(const Tree::Child& c, const Signature& sig, bool colored)
    {
      Query right = node_query(c.node, sig, colored, Color::Black);
      if (c.label & bottom_bit)
        return q_until(q_bot(), right);
      std::vector<Query> left{letter(c.label, sig)};
      if (colored)
        for (const auto& r : c.node.children)
          if (r.color == Color::Red)
            left.push_back(until_of_edge(r, sig, colored));
      return q_until(q_and(left), right);
    }
  }

  Query query_from_tree(const Tree& t, const Signature& sig, bool colored)
  {
    for (const auto& c : t.children)
      if (colored && c.color == Color::Red)
        throw usage_error("query_from_tree: red edge at the root");
    return node_query(t, sig, colored, Color::Black);
  }

  Verdict decide_until_family(const ExampleSet& e,
                              const std::optional<HornOntology>& o,
                              const Signature& sig, QueryClass cls)
  {
    if (cls != QueryClass::PathUntil && cls != QueryClass::SimpleUntil
        && cls != QueryClass::FullUntil)
      throw usage_error("decide_until_family: not an Until class");
    if (e.positives.empty())
      throw usage_error("decide_until_family: no positive examples");
    if (e.negatives.empty())
      return separable_with(q_top(), "no negatives");

    const bool colored = cls == QueryClass::FullUntil;
    auto build = [&](const DataInstance& d) {
      if (o)
        {
          auto cm = canonical_model(*o, d);
          if (!cm)
            throw usage_error("decide_until_family: inconsistent instance");
          return colored ? repr_lasso_br(cm->lasso, sig) : repr_lasso(cm->lasso, sig);
        }
      return colored ? repr_plain_br(d, sig) : repr_plain(d, sig);
    };
    std::vector<TransitionSystem> ps;
    std::vector<TransitionSystem> ns;
    for (const auto& d : e.positives)
      ps.push_back(build(d));
    for (const auto& d : e.negatives)
      ns.push_back(build(d));
    TransitionSystem prod = product(ps);
    TransitionSystem uni = disjoint_union(ns);

    Verdict v;
    v.stats["product_states"] = prod.size();
    v.stats["negative_states"] = uni.size();
    if (cls == QueryClass::PathUntil)
      {
        v.note = "run containment";
        if (contained_in(prod, uni))
          return v;
        Run r = extract_failing_run(prod, uni);
        v.separable = true;
        v.witness = query_from_run(r, sig);
        return v;
      }
    v.note = colored ? "black/red simulation" : "simulation";
    if (simulates(prod, uni))
      return v;
    Tree t = extract_failing_subtree(prod, uni);
    v.separable = true;
    v.witness = query_from_tree(t, sig, colored);
    v.stats["tree_size"] = t.size();
    return v;
  }

  // ----------------------------------------------------------------
  // Prior ontologies
  // ----------------------------------------------------------------

  namespace
  {
    Query diamond_path(const std::vector<atom_set>& rhos, const Signature& sig)
    {
      Query q = letter(rhos.back(), sig);
      for (std::size_t i = rhos.size() - 1; i-- > 0;)
        q = q_and(letter(rhos[i], sig), q_diamond(q));
      return q;
    }

    Verdict prior_single(const PriorOntology& o, const ExampleSet& e,
                         const Signature& sig, std::size_t node_cap)
    {
      std::size_t bound = 0;
      for (const auto& d : e.negatives)
        bound = std::max(bound, d.max_timestamp() + o.size);
      const std::size_t max_steps = bound + 1;
      std::size_t nodes = 0;
      std::vector<atom_set> rhos;

      auto all_entail = [&](const Query& q) {
        for (const auto& d : e.positives)
          if (!prior_entails(o, d, q))
            return false;
        return true;
      };
      // Negatives that still entail the current prefix; extensions are
      // stronger, so a negative once refuted stays refuted.
      std::function<std::optional<Query>(std::vector<std::size_t>)> go
          = [&](std::vector<std::size_t> live) -> std::optional<Query> {
        Query q = diamond_path(rhos, sig);
        std::vector<std::size_t> still;
        for (auto j : live)
          if (prior_entails(o, e.negatives[j], q))
            still.push_back(j);
        if (still.empty())
          return q;
        if (rhos.size() > max_steps)
          return std::nullopt;
        // Letters the positives accept here; entailment is antitone in
        // the letter, so supersets of a rejected letter are skipped.
        std::vector<atom_set> letters;
        for (atom_set l = 0; l <= sig.all(); ++l)
          letters.push_back(l);
        std::stable_sort(letters.begin(), letters.end(), [](atom_set a, atom_set b) {
          return std::popcount(a) < std::popcount(b);
        });
        std::vector<atom_set> accepted;
        std::vector<atom_set> rejected;
        for (auto l : letters)
          {
            if (std::any_of(rejected.begin(), rejected.end(),
                            [&](atom_set r) { return subset_of(r, l); }))
              continue;
            if (++nodes > node_cap)
              throw resource_limit("prior path search exceeds "
                                   + std::to_string(node_cap) + " nodes");
            rhos.push_back(l);
            (all_entail(diamond_path(rhos, sig)) ? accepted : rejected).push_back(l);
            rhos.pop_back();
          }
        // Larger letters first: they refute more negatives.
        for (auto it = accepted.rbegin(); it != accepted.rend(); ++it)
          {
            rhos.push_back(*it);
            if (auto r = go(still))
              return r;
            rhos.pop_back();
          }
        return std::nullopt;
      };

      std::vector<std::size_t> all(e.negatives.size());
      std::iota(all.begin(), all.end(), 0);
      // The time-0 letter: the largest one entailed by all positives
      // dominates every smaller choice.
      atom_set rho0 = 0;
      for (std::size_t a = 0; a < sig.size(); ++a)
        if (all_entail(q_atom(sig.name(a))))
          rho0 |= atom_set{1} << a;
      rhos.push_back(rho0);
      Verdict v;
      if (auto q = go(all))
        {
          v.separable = true;
          v.witness = *q;
        }
      v.stats["search_nodes"] = nodes;
      return v;
    }
  }

  Verdict prior_path_search(const PriorOntology& o, const ExampleSet& e,
                            const Signature& sig, QueryClass cls,
                            std::size_t node_cap)
  {
    if (cls != QueryClass::PathDiamond && cls != QueryClass::BranchDiamond)
      throw usage_error("Prior ontologies support path-diamond and branch-diamond only");
    if (e.negatives.empty())
      return separable_with(q_top(), "no negatives");
    if (cls == QueryClass::PathDiamond)
      {
        Verdict v = prior_single(o, e, sig, node_cap);
        v.note = "prior path search";
        return v;
      }
    std::vector<Query> parts;
    Verdict out;
    out.note = "prior path search per negative";
    for (const auto& sub : split_per_negative(e))
      {
        Verdict v = prior_single(o, sub, sig, node_cap);
        out.stats["search_nodes"] += v.stats["search_nodes"];
        if (!v.separable)
          return out;
        parts.push_back(*v.witness);
      }
    out.separable = true;
    out.witness = q_and(parts);
    return out;
  }

  // ----------------------------------------------------------------
  // Facade
  // ----------------------------------------------------------------

  namespace
  {
    bool path_class(QueryClass c)
    {
      return c == QueryClass::PathDiamond || c == QueryClass::PathNextDiamond
             || c == QueryClass::PathDiamondCircBlocks;
    }

    // Enumerates q with one subquery replaced by true (or one conjunct
    // dropped), outermost first.
    void weakenings(const Query& q, std::vector<Query>& out)
    {
      out.push_back(q_top());
      switch (q.op())
        {
        case Op::Top:
        case Op::Bot:
        case Op::Atom:
          return;
        case Op::And:
          {
            const auto& k = q.children();
            for (std::size_t i = 0; i < k.size(); ++i)
              {
                std::vector<Query> sub;
                weakenings(k[i], sub);
                for (const auto& w : sub)
                  {
                    auto parts = k;
                    parts[i] = w;
                    out.push_back(q_and(parts));
                  }
              }
            return;
          }
        case Op::Next:
        case Op::Diamond:
          {
            std::vector<Query> sub;
            weakenings(q.body(), sub);
            for (const auto& w : sub)
              out.push_back(q.op() == Op::Next ? q_next(w) : q_diamond(w));
            return;
          }
        case Op::Until:
          {
            std::vector<Query> sub;
            weakenings(q.left(), sub);
            for (const auto& w : sub)
              out.push_back(q_until(w, q.right()));
            sub.clear();
            weakenings(q.right(), sub);
            for (const auto& w : sub)
              out.push_back(q_until(q.left(), w));
            return;
          }
        }
    }
  }

  Query minimize_witness(const Problem& p, const Query& q)
  {
    Query cur = q;
    for (bool changed = true; changed;)
      {
        changed = false;
        std::vector<Query> cands;
        weakenings(cur, cands);
        for (const auto& c : cands)
          if (query_size(c) < query_size(cur) && separates(p, c))
            {
              cur = c;
              changed = true;
              break;
            }
      }
    return cur;
  }

  Verdict decide(const Problem& p, const DecideOptions& opt)
  {
    if (p.horn && p.prior)
      throw usage_error("a problem has at most one ontology");
    if (p.prior && p.cls != QueryClass::PathDiamond
        && p.cls != QueryClass::BranchDiamond)
      throw usage_error("Prior ontologies support path-diamond and branch-diamond only");
    if (p.examples.positives.empty())
      throw usage_error("separability needs at least one positive example");

    const Signature sig = problem_signature(p);
    ExampleSet e;
    std::vector<std::optional<CanonicalModel>> pos_models;
    std::vector<std::optional<CanonicalModel>> neg_models;
    std::size_t dropped = 0;
    for (const auto& d : p.examples.negatives)
      {
        if (p.horn)
          {
            auto cm = canonical_model(*p.horn, d);
            if (!cm)
              return not_separable("negative '" + d.name
                                   + "' is inconsistent with the ontology");
            neg_models.push_back(std::move(cm));
          }
        if (p.prior && !prior_consistent(*p.prior, d))
          return not_separable("negative '" + d.name
                               + "' is inconsistent with the ontology");
        e.negatives.push_back(d);
      }
    for (const auto& d : p.examples.positives)
      {
        if (p.horn)
          {
            auto cm = canonical_model(*p.horn, d);
            if (!cm)
              {
                ++dropped;
                continue;
              }
            pos_models.push_back(std::move(cm));
          }
        if (p.prior && !prior_consistent(*p.prior, d))
          {
            ++dropped;
            continue;
          }
        e.positives.push_back(d);
      }

    Verdict v;
    if (e.positives.empty())
      v = separable_with(q_bot(), "every positive is inconsistent");
    else if (e.negatives.empty())
      v = separable_with(q_top(), "no negatives");
    else if (p.prior)
      v = prior_path_search(*p.prior, e, sig, p.cls, opt.prior_node_cap);
    else if (p.cls == QueryClass::PathUntil || p.cls == QueryClass::SimpleUntil
             || p.cls == QueryClass::FullUntil)
      v = decide_until_family(e, p.horn, sig, p.cls);
    else
      {
        // Path and branch classes over the least models (or the data).
        auto word = [&](const DataInstance& d,
                        const std::optional<CanonicalModel>& cm) {
          return cm ? make_timeline(cm->lasso, sig) : make_timeline(d, sig);
        };
        std::vector<Timeline> pos;
        std::vector<Timeline> neg;
        for (std::size_t i = 0; i < e.positives.size(); ++i)
          pos.push_back(word(e.positives[i], p.horn ? pos_models[i] : std::nullopt));
        for (std::size_t i = 0; i < e.negatives.size(); ++i)
          neg.push_back(word(e.negatives[i], p.horn ? neg_models[i] : std::nullopt));
        PathSearchOptions po;
        po.node_cap = opt.node_cap;
        auto solve = [&](const std::vector<Timeline>& ns,
                         const ExampleSet& sub, QueryClass c) {
          if (p.horn && opt.horn_search)
            return horn_diamond_search(*p.horn, sub, sig, c, po);
          return dp_path(pos, ns, sig, c, po);
        };
        if (path_class(p.cls))
          v = solve(neg, e, p.cls);
        else
          {
            // Branch classes: one path separator per negative.
            QueryClass c = p.cls == QueryClass::BranchDiamond
                               ? QueryClass::PathDiamond
                               : QueryClass::PathDiamondCircBlocks;
            auto subs = split_per_negative(e);
            std::vector<Verdict> parts(subs.size());
            auto one = [&](std::size_t j) {
              return solve({neg[j]}, subs[j], c);
            };
            if (opt.jobs > 1)
              {
                for (std::size_t b = 0; b < subs.size(); b += opt.jobs)
                  {
                    std::vector<std::future<Verdict>> fs;
                    for (std::size_t j = b; j < std::min(subs.size(), b + opt.jobs); ++j)
                      fs.push_back(std::async(std::launch::async, one, j));
                    for (std::size_t j = 0; j < fs.size(); ++j)
                      parts[b + j] = fs[j].get();
                  }
              }
            else
              for (std::size_t j = 0; j < subs.size(); ++j)
                parts[j] = one(j);
            v.note = "path search per negative";
            std::vector<Query> ws;
            v.separable = true;
            for (auto& part : parts)
              {
                for (const auto& [k, n] : part.stats)
                  v.stats[k] += n;
                if (!part.separable)
                  v.separable = false;
                else
                  ws.push_back(*part.witness);
              }
            if (v.separable)
              v.witness = q_and(ws);
          }
      }

    if (dropped)
      {
        v.note += "; dropped " + std::to_string(dropped)
                  + " inconsistent positive(s)";
        v.stats["dropped_positives"] = dropped;
      }
    if (v.separable)
      {
        if (!v.witness || !separates(p, *v.witness))
          throw std::logic_error("internal error: witness "
                                 + (v.witness ? to_string(*v.witness) : "<none>")
                                 + " does not separate the examples");
        if (opt.minimize)
          v.witness = minimize_witness(p, *v.witness);
        v.stats["witness_size"] = query_size(*v.witness);
      }
    return v;
  }
}
