// Brute-force separability by enumeration and by semantic saturation.

#include "ltlqbe/oracle.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <functional>
#include <numeric>
#include <set>
#include <unordered_map>

namespace ltlqbe
{
  // ----------------------------------------------------------------
  // Syntactic enumeration
  // ----------------------------------------------------------------

  namespace
  {
    // true and the conjunctions of at most k atoms.
    std::vector<Query> letters(const Signature& sig, std::size_t k)
    {
      std::vector<Query> out;
      for (atom_set s = 0; s <= sig.all(); ++s)
        {
          if (static_cast<std::size_t>(std::popcount(s)) > k)
            continue;
          std::vector<Query> parts;
          for (std::size_t a = 0; a < sig.size(); ++a)
            if ((s >> a) & 1)
              parts.push_back(q_atom(sig.name(a)));
          out.push_back(q_and(parts));
        }
      return out;
    }

    std::size_t width(const Query& q) { return conjuncts(q).size(); }

    // Conjunctions of a letter and a set of distinct temporal queries,
    // at most k conjuncts in all.
    void conjoin(const std::vector<Query>& ls, const std::vector<Query>& ts,
                 std::size_t k, std::vector<Query>& out)
    {
      std::vector<Query> chosen;
      std::function<void(std::size_t)> go = [&](std::size_t from) {
        for (const auto& l : ls)
          if (width(l) + chosen.size() <= k)
            {
              auto parts = chosen;
              parts.push_back(l);
              out.push_back(q_and(parts));
            }
        for (std::size_t i = from; i < ts.size(); ++i)
          {
            chosen.push_back(ts[i]);
            if (chosen.size() <= k)
              go(i + 1);
            chosen.pop_back();
          }
      };
      go(0);
    }
  }

  std::vector<Query> enumerate_queries(QueryClass cls, const Signature& sig,
                                       std::size_t max_depth,
                                       std::size_t max_conjuncts)
  {
    const std::size_t k = std::max<std::size_t>(max_conjuncts, 1);
    const auto ls = letters(sig, k);
    // Left arguments of path and simple Until: letters and false.
    auto lambdas = letters(sig, k);
    lambdas.push_back(q_bot());

    // Queries of depth <= d, level by level.
    std::vector<Query> level = ls;
    for (std::size_t d = 1; d <= max_depth; ++d)
      {
        std::vector<Query> temporal;
        std::vector<Query> next;
        switch (cls)
          {
          case QueryClass::PathDiamond:
          case QueryClass::PathNextDiamond:
          case QueryClass::PathDiamondCircBlocks:
            for (const auto& q : level)
              {
                temporal.push_back(q_diamond(q));
                if (cls == QueryClass::PathNextDiamond)
                  temporal.push_back(q_next(q));
              }
            if (cls == QueryClass::PathDiamondCircBlocks)
              {
                // Blocks: an X-chain of letters next to at most one F.
                // Generated as r & X(chain) and r & X(chain) & F(q).
                std::vector<Query> chains;
                std::function<void(Query, std::size_t)> grow
                    = [&](Query c, std::size_t left) {
                        chains.push_back(c);
                        if (left == 0)
                          return;
                        for (const auto& l : ls)
                          if (width(l) + 1 <= k)
                            grow(q_and(l, q_next(c)), left - 1);
                      };
                for (const auto& l : ls)
                  grow(l, d);
                for (const auto& c : chains)
                  {
                    // c has depth <= d; add F(q) when depth allows.
                    next.push_back(c);
                    std::size_t cd = temporal_depth(c);
                    if (cd > d)
                      continue;
                    for (const auto& q : level)
                      if (width(c) + 1 <= k && temporal_depth(q) + 1 <= d)
                        next.push_back(q_and(c, q_diamond(q)));
                  }
                break;
              }
            for (const auto& t : temporal)
              for (const auto& l : ls)
                if (width(l) + 1 <= k)
                  next.push_back(q_and(l, t));
            next.insert(next.end(), ls.begin(), ls.end());
            break;
          case QueryClass::BranchDiamond:
          case QueryClass::BranchNextDiamond:
            for (const auto& q : level)
              {
                temporal.push_back(q_diamond(q));
                if (cls == QueryClass::BranchNextDiamond)
                  temporal.push_back(q_next(q));
              }
            conjoin(ls, temporal, k, next);
            break;
          case QueryClass::PathUntil:
          case QueryClass::SimpleUntil:
            for (const auto& q : level)
              for (const auto& l : lambdas)
                temporal.push_back(q_until(l, q));
            if (cls == QueryClass::PathUntil)
              {
                for (const auto& t : temporal)
                  for (const auto& l : ls)
                    if (width(l) + 1 <= k)
                      next.push_back(q_and(l, t));
                next.insert(next.end(), ls.begin(), ls.end());
              }
            else
              conjoin(ls, temporal, k, next);
            break;
          case QueryClass::FullUntil:
            {
              auto lefts = level;
              lefts.push_back(q_bot());
              for (const auto& l : lefts)
                for (const auto& r : level)
                  temporal.push_back(q_until(l, r));
              conjoin(ls, temporal, k, next);
              break;
            }
          }
        // Deduplicate up to conjunct order, keeping the first.
        std::set<std::string> seen;
        level.clear();
        for (auto& q : next)
          if (seen.insert(q.key()).second && in_class(q, cls))
            level.push_back(std::move(q));
      }
    return level;
  }

  // ----------------------------------------------------------------
  // Semantic saturation
  // ----------------------------------------------------------------

  namespace
  {
    // Truth vectors over at most 256 points.
    constexpr std::size_t max_points = 256;
    using bits = std::array<std::uint64_t, max_points / 64>;

    struct bits_hash
    {
      std::size_t operator()(const bits& b) const
      {
        std::size_t h = 0xcbf29ce484222325ull;
        for (auto w : b)
          h = (h ^ w) * 0x100000001b3ull + (h >> 29);
        return h;
      }
    };

    bool test(const bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1; }
    void set(bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }

    bits meet(const bits& a, const bits& b)
    {
      bits c;
      for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = a[i] & b[i];
      return c;
    }

    bits join(const bits& a, const bits& b)
    {
      bits c;
      for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = a[i] | b[i];
      return c;
    }

    // The disjoint union of the example words, laid out consecutively:
    // the successor of a point is the next point except at the end of
    // a word, which continues at the word's loop start.
    struct universe
    {
      struct word
      {
        std::size_t first;
        std::size_t loop;
        std::size_t last;
      };
      std::size_t n = 0;
      std::vector<word> words;
      std::vector<atom_set> label;
      std::vector<std::size_t> pos_origin;
      std::vector<std::size_t> neg_origin;
      bits ends{};  // last points of words

      std::size_t add(const Timeline& t)
      {
        if (n + t.size() > max_points)
          throw resource_limit("oracle: more than 256 points in all");
        for (std::size_t i = 0; i < t.size(); ++i)
          if (t.next(i) != (i + 1 == t.size() ? t.loop_start : i + 1))
            throw usage_error("oracle: timeline is not a lasso");
        std::size_t base = n;
        words.push_back({base, base + t.loop_start, base + t.size() - 1});
        set(ends, base + t.size() - 1);
        label.insert(label.end(), t.labels.begin(), t.labels.end());
        n += t.size();
        return base;
      }

      bits letter(atom_set l) const
      {
        bits b{};
        if (l & bottom_bit)
          return b;
        for (std::size_t i = 0; i < n; ++i)
          if (subset_of(l, label[i]))
            set(b, i);
        return b;
      }

      // Points whose successor satisfies v.
      bits next_of(const bits& v) const
      {
        bits b;
        for (std::size_t i = 0; i < b.size(); ++i)
          {
            std::uint64_t carry = i + 1 < b.size() ? v[i + 1] << 63 : 0;
            b[i] = ((v[i] >> 1) | carry) & ~ends[i];
          }
        for (const auto& w : words)
          if (test(v, w.loop))
            set(b, w.last);
        return b;
      }

      // Points with a strictly later point satisfying v: the whole word
      // if the loop meets v, else the points before the last v point.
      bits diamond_of(const bits& v) const
      {
        bits b{};
        for (const auto& w : words)
          {
            std::size_t hi = w.last + 1;
            bool looped = false;
            for (std::size_t j = w.last + 1; j-- > w.first;)
              if (test(v, j))
                {
                  hi = j;
                  looped = j >= w.loop;
                  break;
                }
            if (hi > w.last)
              continue;
            std::size_t end = looped ? w.last + 1 : hi;
            for (std::size_t j = w.first; j < end; ++j)
              set(b, j);
          }
        return b;
      }

      // l U r: least b with b = next_of(r | (l & b)).
      bits until_of(const bits& l, const bits& r) const
      {
        bits b{};
        for (;;)
          {
            bits c = next_of(join(r, meet(l, b)));
            if (c == b)
              return b;
            b = c;
          }
      }

      bool separating(const bits& v) const
      {
        for (auto o : pos_origin)
          if (!test(v, o))
            return false;
        for (auto o : neg_origin)
          if (test(v, o))
            return false;
        return true;
      }
    };

    // How a vector was first obtained; queries are built on demand.
    struct derivation
    {
      enum kind_t : unsigned char { letter, bottom, next, diamond, until, conj };
      kind_t kind;
      atom_set l = 0;
      std::uint32_t a = 0;
      std::uint32_t b = 0;
    };

    struct found
    {
      std::uint32_t id;
    };

    class saturation
    {
    public:
      saturation(const universe& u, const Signature& sig, QueryClass cls,
                 const OracleBounds& b)
        : u_(u), sig_(sig), cls_(cls), b_(b)
      {
      }

      std::optional<Query> run()
      {
        try
          {
            bottom_ = node(bits{}, {derivation::bottom});
            for (atom_set s = 0; s <= sig_.all(); ++s)
              letters_.push_back(node(u_.letter(s), {derivation::letter, s}));
            switch (cls_)
              {
              case QueryClass::PathDiamond:
              case QueryClass::PathNextDiamond:
                path();
                break;
              case QueryClass::PathDiamondCircBlocks:
                blocks();
                break;
              case QueryClass::PathUntil:
                path_until();
                break;
              case QueryClass::BranchDiamond:
              case QueryClass::BranchNextDiamond:
              case QueryClass::SimpleUntil:
              case QueryClass::FullUntil:
                branching();
                break;
              }
          }
        catch (const found& f)
          {
            return query(f.id);
          }
        return std::nullopt;
      }

      std::size_t vectors() const { return ids_.size(); }

    private:
      using id_t = std::uint32_t;

      // A derivation node (not necessarily a new vector).
      id_t node(bits v, derivation d)
      {
        vals_.push_back(v);
        ders_.push_back(d);
        return static_cast<id_t>(vals_.size() - 1);
      }

      // Records the vector of node x under the class; returns the
      // node now representing it and whether it is new.  Throws found
      // on a separator.
      bool record(bits v, derivation d, std::vector<id_t>& fresh)
      {
        if (ids_.count(v))
          return false;
        if (ids_.size() >= b_.max_vectors)
          throw resource_limit("oracle exceeds " + std::to_string(b_.max_vectors)
                               + " truth vectors");
        id_t x = node(v, d);
        ids_.emplace(v, x);
        fresh.push_back(x);
        if (u_.separating(v))
          throw found{x};
        return true;
      }

      Query query(id_t x) const
      {
        const derivation& d = ders_[x];
        switch (d.kind)
          {
          case derivation::letter:
            {
              std::vector<Query> parts;
              for (std::size_t a = 0; a < sig_.size(); ++a)
                if ((d.l >> a) & 1)
                  parts.push_back(q_atom(sig_.name(a)));
              return q_and(parts);
            }
          case derivation::bottom:
            return q_bot();
          case derivation::next:
            return q_next(query(d.a));
          case derivation::diamond:
            return q_diamond(query(d.a));
          case derivation::until:
            return q_until(query(d.a), query(d.b));
          case derivation::conj:
            return q_and(query(d.a), query(d.b));
          }
        return q_top();
      }

      bool depth_left(std::size_t d) const
      {
        return !b_.max_depth || d <= *b_.max_depth;
      }

      // r & F v and r & X v over the letters r.
      void path()
      {
        std::vector<id_t> frontier;
        for (auto l : letters_)
          record(vals_[l], ders_[l], frontier);
        for (std::size_t d = 1; !frontier.empty() && depth_left(d); ++d)
          {
            std::vector<id_t> fresh;
            for (auto x : frontier)
              {
                std::vector<id_t> steps{
                    node(u_.diamond_of(vals_[x]), {derivation::diamond, 0, x})};
                if (cls_ == QueryClass::PathNextDiamond)
                  steps.push_back(node(u_.next_of(vals_[x]), {derivation::next, 0, x}));
                for (auto s : steps)
                  for (auto l : letters_)
                    record(meet(vals_[l], vals_[s]), {derivation::conj, 0, l, s}, fresh);
              }
            frontier = std::move(fresh);
          }
      }

      // X-paths of letters, then c & F v for X-paths c.
      void blocks()
      {
        std::unordered_map<bits, id_t, bits_hash> xp;
        std::vector<id_t> chains;
        std::vector<id_t> frontier;
        for (auto l : letters_)
          if (xp.emplace(vals_[l], l).second)
            frontier.push_back(l);
        while (!frontier.empty())
          {
            chains.insert(chains.end(), frontier.begin(), frontier.end());
            std::vector<id_t> fresh;
            for (auto x : frontier)
              {
                id_t s = node(u_.next_of(vals_[x]), {derivation::next, 0, x});
                for (auto l : letters_)
                  {
                    bits w = meet(vals_[l], vals_[s]);
                    if (xp.count(w))
                      continue;
                    if (xp.size() >= b_.max_vectors)
                      throw resource_limit("oracle: too many X-paths");
                    id_t c = node(w, {derivation::conj, 0, l, s});
                    xp.emplace(w, c);
                    fresh.push_back(c);
                  }
              }
            frontier = std::move(fresh);
          }
        std::vector<id_t> cur;
        for (auto c : chains)
          record(vals_[c], ders_[c], cur);
        while (!cur.empty())
          {
            std::vector<id_t> fresh;
            for (auto x : cur)
              {
                id_t s = node(u_.diamond_of(vals_[x]), {derivation::diamond, 0, x});
                for (auto c : chains)
                  record(meet(vals_[c], vals_[s]), {derivation::conj, 0, c, s}, fresh);
              }
            cur = std::move(fresh);
          }
      }

      // r & (l U v) with l a letter or false.
      void path_until()
      {
        std::vector<id_t> lambdas = letters_;
        lambdas.push_back(bottom_);
        std::vector<id_t> frontier;
        for (auto l : letters_)
          record(vals_[l], ders_[l], frontier);
        for (std::size_t d = 1; !frontier.empty() && depth_left(d); ++d)
          {
            std::vector<id_t> fresh;
            for (auto x : frontier)
              for (auto l : lambdas)
                {
                  id_t s = node(u_.until_of(vals_[l], vals_[x]),
                                {derivation::until, 0, l, x});
                  for (auto r : letters_)
                    record(meet(vals_[r], vals_[s]), {derivation::conj, 0, r, s}, fresh);
                }
            frontier = std::move(fresh);
          }
      }

      // Conjunction-closed classes: the vectors form a meet-closed
      // family.  Each level adds the temporal generators over vectors
      // new at the previous level and closes under meets.
      void branching()
      {
        std::vector<id_t> all;
        std::vector<id_t> frontier;
        for (auto l : letters_)
          record(vals_[l], ders_[l], frontier);
        all = frontier;
        std::vector<id_t> lambdas = letters_;
        lambdas.push_back(bottom_);
        for (std::size_t d = 1; !frontier.empty() && depth_left(d); ++d)
          {
            std::vector<id_t> fresh;
            const std::size_t old = all.size() - frontier.size();
            auto generator = [&](const bits& g, derivation dg) {
              if (ids_.count(g))
                return;
              std::vector<id_t> added;
              record(g, dg, added);
              id_t gi = added.back();
              const std::size_t n = all.size();
              for (std::size_t i = 0; i < n; ++i)
                record(meet(vals_[all[i]], g), {derivation::conj, 0, all[i], gi}, added);
              all.insert(all.end(), added.begin(), added.end());
              fresh.insert(fresh.end(), added.begin(), added.end());
            };
            switch (cls_)
              {
              case QueryClass::BranchDiamond:
              case QueryClass::BranchNextDiamond:
                for (auto x : frontier)
                  {
                    generator(u_.diamond_of(vals_[x]), {derivation::diamond, 0, x});
                    if (cls_ == QueryClass::BranchNextDiamond)
                      generator(u_.next_of(vals_[x]), {derivation::next, 0, x});
                  }
                break;
              case QueryClass::SimpleUntil:
                for (auto x : frontier)
                  for (auto l : lambdas)
                    generator(u_.until_of(vals_[l], vals_[x]),
                              {derivation::until, 0, l, x});
                break;
              case QueryClass::FullUntil:
                {
                  // Pairs over the previous levels with at least one
                  // argument new at the previous level.
                  std::vector<id_t> prev(all.begin(), all.begin() + old + frontier.size());
                  std::vector<id_t> lefts = prev;
                  lefts.push_back(bottom_);
                  for (std::size_t i = 0; i < lefts.size(); ++i)
                    for (std::size_t j = 0; j < prev.size(); ++j)
                      {
                        bool left_new = i >= old && i < prev.size();
                        bool right_new = j >= old;
                        if (!left_new && !right_new)
                          continue;
                        generator(u_.until_of(vals_[lefts[i]], vals_[prev[j]]),
                                  {derivation::until, 0, lefts[i], prev[j]});
                      }
                  break;
                }
              default:
                break;
              }
            frontier = std::move(fresh);
          }
      }

      const universe& u_;
      const Signature& sig_;
      QueryClass cls_;
      const OracleBounds& b_;
      std::vector<bits> vals_;
      std::vector<derivation> ders_;
      std::vector<id_t> letters_;
      id_t bottom_ = 0;
      std::unordered_map<bits, id_t, bits_hash> ids_;
    };

    Verdict prior_brute_force(const Problem& p, const ExampleSet& e,
                              const Signature& sig, const OracleBounds& b)
    {
      std::size_t depth = b.max_depth ? *b.max_depth : default_depth_bound(p);
      Verdict v;
      v.note = "oracle enumeration";
      auto qs = enumerate_queries(p.cls, sig, depth, b.prior_conjuncts);
      v.stats["queries"] = qs.size();
      for (const auto& q : qs)
        {
          bool ok = true;
          for (const auto& d : e.positives)
            if (!(ok = prior_entails(*p.prior, d, q)))
              break;
          if (!ok)
            continue;
          for (const auto& d : e.negatives)
            if (prior_entails(*p.prior, d, q))
              {
                ok = false;
                break;
              }
          if (ok)
            {
              v.separable = true;
              v.witness = q;
              return v;
            }
        }
      return v;
    }
  }

  std::size_t default_depth_bound(const Problem& p)
  {
    std::size_t maxd = 0;
    for (const auto* list : {&p.examples.positives, &p.examples.negatives})
      for (const auto& d : *list)
        maxd = std::max(maxd, d.max_timestamp());
    if (p.horn)
      {
        std::size_t k = 0;
        std::size_t m = 1;
        for (const auto* list : {&p.examples.positives, &p.examples.negatives})
          for (const auto& d : *list)
            if (auto cm = canonical_model(*p.horn, d))
              {
                k = std::max(k, cm->lasso.pre());
                m = std::lcm(m, cm->period);
              }
        return k + m;
      }
    if (p.prior)
      {
        std::size_t negd = 0;
        for (const auto& d : p.examples.negatives)
          negd = std::max(negd, d.max_timestamp());
        return negd + p.prior->size + 1;
      }
    return maxd + 1;
  }

  Verdict brute_force_decide(const Problem& p, const OracleBounds& b)
  {
    if (p.horn && p.prior)
      throw usage_error("a problem has at most one ontology");
    if (p.examples.positives.empty())
      throw usage_error("separability needs at least one positive example");
    const Signature sig = problem_signature(p);

    // Inconsistent negatives entail every query; inconsistent positives
    // impose nothing.
    auto consistent = [&](const DataInstance& d) {
      if (p.horn)
        return horn_consistent(*p.horn, d);
      if (p.prior)
        return prior_consistent(*p.prior, d);
      return true;
    };
    ExampleSet e;
    for (const auto& d : p.examples.negatives)
      {
        if (!consistent(d))
          {
            Verdict v;
            v.note = "oracle: inconsistent negative";
            return v;
          }
        e.negatives.push_back(d);
      }
    for (const auto& d : p.examples.positives)
      if (consistent(d))
        e.positives.push_back(d);

    Verdict v;
    if (e.positives.empty() || e.negatives.empty())
      {
        v.separable = true;
        v.witness = e.positives.empty() ? q_bot() : q_top();
      }
    else if (p.prior)
      v = prior_brute_force(p, e, sig, b);
    else
      {
        universe u;
        auto word = [&](const DataInstance& d) {
          if (p.horn)
            return make_timeline(canonical_model(*p.horn, d)->lasso, sig);
          return make_timeline(d, sig);
        };
        for (const auto& d : e.positives)
          u.pos_origin.push_back(u.add(word(d)));
        for (const auto& d : e.negatives)
          u.neg_origin.push_back(u.add(word(d)));
        saturation s(u, sig, p.cls, b);
        auto q = s.run();
        v.note = "oracle saturation";
        v.stats["vectors"] = s.vectors();
        if (q)
          {
            v.separable = true;
            v.witness = *q;
          }
      }
    if (v.separable && !separates(p, *v.witness))
      throw std::logic_error("oracle: representative " + to_string(*v.witness)
                             + " does not separate");
    return v;
  }
}
