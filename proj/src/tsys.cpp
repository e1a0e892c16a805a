// Transition systems: composition, simulation, containment and
// counterexample extraction.

#include "ltlqbe/tsys.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>

namespace ltlqbe
{
  std::size_t TransitionSystem::edge_count() const
  {
    std::size_t n = 0;
    for (const auto& e : out_)
      n += e.size();
    return n;
  }

  std::size_t TransitionSystem::add_state(atom_set label, std::string name)
  {
    labels_.push_back(label);
    names_.push_back(name.empty() ? std::to_string(labels_.size() - 1)
                                  : std::move(name));
    out_.emplace_back();
    return labels_.size() - 1;
  }

  void TransitionSystem::add_edge(std::size_t from, std::size_t to,
                                  atom_set label, Color color)
  {
    if (!colored_ && color == Color::Red)
      throw usage_error("red edge in an uncolored transition system");
    for (const auto& e : out_[from])
      if (e.to == to && e.color == color)
        throw usage_error("duplicate edge " + names_[from] + " -> " + names_[to]);
    out_[from].push_back(Edge{to, label, color});
  }

  void TransitionSystem::add_initial(std::size_t s)
  {
    if (std::find(initial_.begin(), initial_.end(), s) == initial_.end())
      initial_.push_back(s);
  }

  // ----------------------------------------------------------------
  // Composition
  // ----------------------------------------------------------------

  namespace
  {
    struct vec_hash
    {
      std::size_t operator()(const std::vector<std::size_t>& v) const
      {
        std::size_t h = v.size();
        for (auto x : v)
          h = h * 1000003u ^ (x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
        return h;
      }
    };
  }

  TransitionSystem product(const std::vector<const TransitionSystem*>& systems,
                           std::size_t max_states)
  {
    if (systems.empty())
      throw usage_error("product of no transition systems");
    const bool colored = systems[0]->colored();
    for (const auto* s : systems)
      if (s->colored() != colored)
        throw usage_error("product of colored and uncolored systems");
    const std::size_t k = systems.size();

    TransitionSystem out(colored);
    std::unordered_map<std::vector<std::size_t>, std::size_t, vec_hash> ids;
    std::vector<std::vector<std::size_t>> tuples;
    auto intern = [&](const std::vector<std::size_t>& t) {
      auto it = ids.find(t);
      if (it != ids.end())
        return it->second;
      if (out.size() >= max_states)
        throw resource_limit("product exceeds " + std::to_string(max_states)
                             + " states");
      atom_set l = ~atom_set{0};
      std::string name = "(";
      for (std::size_t i = 0; i < k; ++i)
        {
          l &= systems[i]->label(t[i]);
          name += (i ? "," : "") + systems[i]->name(t[i]);
        }
      std::size_t id = out.add_state(l, name + ")");
      ids.emplace(t, id);
      tuples.push_back(t);
      return id;
    };

    // Initial tuples: all combinations of initial states.
    std::vector<std::size_t> cur(k);
    std::function<void(std::size_t)> init = [&](std::size_t i) {
      if (i == k)
        {
          out.add_initial(intern(cur));
          return;
        }
      for (auto s : systems[i]->initial())
        {
          cur[i] = s;
          init(i + 1);
        }
    };
    init(0);

    std::vector<std::size_t> target(k);
    for (std::size_t done = 0; done < tuples.size(); ++done)
      {
        const auto from = tuples[done];
        for (Color c : {Color::Black, Color::Red})
          {
            if (c == Color::Red && !colored)
              break;
            std::map<std::vector<std::size_t>, atom_set> edges;
            std::function<void(std::size_t, atom_set)> go = [&](std::size_t i,
                                                                 atom_set l) {
              if (i == k)
                {
                  edges.emplace(target, l);
                  return;
                }
              for (const auto& e : systems[i]->edges(from[i]))
                if (e.color == c)
                  {
                    target[i] = e.to;
                    go(i + 1, l & e.label);
                  }
            };
            go(0, ~atom_set{0});
            for (const auto& [t, l] : edges)
              out.add_edge(done, intern(t), l, c);
          }
      }
    return out;
  }

  TransitionSystem product(const std::vector<TransitionSystem>& systems,
                           std::size_t max_states)
  {
    std::vector<const TransitionSystem*> ptrs;
    for (const auto& s : systems)
      ptrs.push_back(&s);
    return product(ptrs, max_states);
  }

  TransitionSystem disjoint_union(const std::vector<TransitionSystem>& systems)
  {
    bool colored = !systems.empty() && systems[0].colored();
    for (const auto& s : systems)
      if (s.colored() != colored)
        throw usage_error("union of colored and uncolored systems");
    TransitionSystem out(colored);
    std::size_t base = 0;
    for (std::size_t i = 0; i < systems.size(); ++i)
      {
        const auto& s = systems[i];
        for (std::size_t x = 0; x < s.size(); ++x)
          out.add_state(s.label(x), std::to_string(i) + ":" + s.name(x));
        for (std::size_t x = 0; x < s.size(); ++x)
          for (const auto& e : s.edges(x))
            out.add_edge(base + x, base + e.to, e.label, e.color);
        for (auto x : s.initial())
          out.add_initial(base + x);
        base += s.size();
      }
    return out;
  }

  // ----------------------------------------------------------------
  // Simulation
  // ----------------------------------------------------------------

  Simulation greatest_simulation(const TransitionSystem& s,
                                 const TransitionSystem& t)
  {
    Simulation sim;
    sim.s_size = s.size();
    sim.t_size = t.size();
    sim.removed_at.assign(s.size() * t.size(), Simulation::kept);
    for (std::size_t x = 0; x < s.size(); ++x)
      for (std::size_t y = 0; y < t.size(); ++y)
        if (!subset_of(s.label(x), t.label(y)))
          sim.removed_at[x * t.size() + y] = 0;

    // Round-based refinement, so that ranks reflect the round in which
    // a pair lost its last witness (needed for strategy extraction).
    for (std::size_t round = 1;; ++round)
      {
        std::vector<std::size_t> drop;
        for (std::size_t x = 0; x < s.size(); ++x)
          for (std::size_t y = 0; y < t.size(); ++y)
            {
              if (!sim.related(x, y))
                continue;
              for (const auto& ex : s.edges(x))
                {
                  bool matched = false;
                  for (const auto& ey : t.edges(y))
                    if (ey.color == ex.color && subset_of(ex.label, ey.label)
                        && sim.related(ex.to, ey.to))
                      {
                        matched = true;
                        break;
                      }
                  if (!matched)
                    {
                      drop.push_back(x * t.size() + y);
                      break;
                    }
                }
            }
        if (drop.empty())
          break;
        for (auto i : drop)
          sim.removed_at[i] = round;
      }
    return sim;
  }

  bool simulates(const TransitionSystem& s, const TransitionSystem& t)
  {
    if (s.colored() != t.colored())
      throw usage_error("simulation between colored and uncolored systems");
    auto sim = greatest_simulation(s, t);
    for (auto x : s.initial())
      {
        bool ok = false;
        for (auto y : t.initial())
          ok = ok || sim.related(x, y);
        if (!ok)
          return false;
      }
    return true;
  }

  namespace
  {
    struct sim_builder
    {
      const TransitionSystem& s;
      const TransitionSystem& t;
      const Simulation& sim;

      // Builds a tree rooted at x defeating every state of ys (all of
      // which fail to simulate x).
      Tree build(std::size_t x, const std::vector<std::size_t>& ys) const
      {
        Tree node;
        node.state = x;
        node.label = s.label(x);
        // For each y, pick an edge of x that y cannot match with a
        // pair of lower rank; group the ys by the chosen edge.
        std::map<std::size_t, std::vector<std::size_t>> per_edge;
        const auto& ex = s.edges(x);
        for (auto y : ys)
          {
            std::size_t r = sim.rank(x, y);
            if (r == 0)
              continue;  // defeated by the node label
            bool chosen = false;
            for (std::size_t i = 0; i < ex.size() && !chosen; ++i)
              {
                bool all_lower = true;
                for (const auto& ey : t.edges(y))
                  if (ey.color == ex[i].color
                      && subset_of(ex[i].label, ey.label)
                      && sim.rank(ex[i].to, ey.to) >= r)
                    {
                      all_lower = false;
                      break;
                    }
                if (all_lower)
                  {
                    auto& targets = per_edge[i];
                    for (const auto& ey : t.edges(y))
                      if (ey.color == ex[i].color
                          && subset_of(ex[i].label, ey.label))
                        targets.push_back(ey.to);
                    chosen = true;
                  }
              }
            if (!chosen)
              throw std::logic_error("simulation ranks are inconsistent");
          }
        for (auto& [i, targets] : per_edge)
          {
            std::sort(targets.begin(), targets.end());
            targets.erase(std::unique(targets.begin(), targets.end()),
                          targets.end());
            node.children.push_back(
                Tree::Child{ex[i].label, ex[i].color, build(ex[i].to, targets)});
          }
        return node;
      }
    };
  }

  Tree extract_failing_subtree(const TransitionSystem& s,
                               const TransitionSystem& t)
  {
    auto sim = greatest_simulation(s, t);
    for (auto x : s.initial())
      {
        bool ok = false;
        for (auto y : t.initial())
          ok = ok || sim.related(x, y);
        if (!ok)
          return sim_builder{s, t, sim}.build(x, t.initial());
      }
    throw usage_error("extract_failing_subtree: the system is simulated");
  }

  std::size_t Tree::size() const
  {
    std::size_t n = 1;
    for (const auto& c : children)
      n += c.node.size();
    return n;
  }

  std::size_t Tree::depth() const
  {
    std::size_t d = 0;
    for (const auto& c : children)
      d = std::max(d, 1 + c.node.depth());
    return d;
  }

  // ----------------------------------------------------------------
  // Containment
  // ----------------------------------------------------------------

  namespace
  {
    using state_set = std::vector<std::uint64_t>;

    struct set_hash
    {
      std::size_t operator()(const std::pair<std::size_t, state_set>& p) const
      {
        std::size_t h = p.first * 0x9e3779b97f4a7c15ull;
        for (auto w : p.second)
          h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
      }
    };

    bool is_empty(const state_set& s)
    {
      return std::all_of(s.begin(), s.end(), [](std::uint64_t w) { return w == 0; });
    }

    // Breadth-first search over (state of s, states of t matching the
    // run so far).  Returns the failing run, if any.
    std::optional<Run> containment_search(const TransitionSystem& s,
                                          const TransitionSystem& t,
                                          std::size_t max_nodes)
    {
      if (s.colored() || t.colored())
        throw usage_error("containment is defined for uncolored systems");
      const std::size_t words = (t.size() + 63) / 64;
      using node = std::pair<std::size_t, state_set>;
      std::vector<node> nodes;
      std::vector<std::pair<std::size_t, atom_set>> parent;  // (node, edge label)
      std::unordered_map<node, std::size_t, set_hash> seen;

      auto make_run = [&](std::size_t last) {
        Run r;
        std::vector<std::size_t> chain;
        for (std::size_t n = last;; n = parent[n].first)
          {
            chain.push_back(n);
            if (parent[n].first == n)
              break;
          }
        std::reverse(chain.begin(), chain.end());
        for (std::size_t i = 0; i < chain.size(); ++i)
          {
            std::size_t x = nodes[chain[i]].first;
            r.states.push_back(x);
            r.state_labels.push_back(s.label(x));
            if (i > 0)
              r.edge_labels.push_back(parent[chain[i]].second);
          }
        return r;
      };
      auto push = [&](std::size_t x, state_set ys, std::size_t from,
                      atom_set l) -> std::optional<std::size_t> {
        node n{x, std::move(ys)};
        if (seen.count(n))
          return std::nullopt;
        if (nodes.size() >= max_nodes)
          throw resource_limit("containment search exceeds "
                               + std::to_string(max_nodes) + " nodes");
        std::size_t id = nodes.size();
        seen.emplace(n, id);
        nodes.push_back(std::move(n));
        parent.emplace_back(from == static_cast<std::size_t>(-1) ? id : from, l);
        return id;
      };

      for (auto x : s.initial())
        {
          state_set ys(words, 0);
          for (auto y : t.initial())
            if (subset_of(s.label(x), t.label(y)))
              ys[y / 64] |= std::uint64_t{1} << (y % 64);
          auto id = push(x, ys, static_cast<std::size_t>(-1), 0);
          if (id && is_empty(nodes[*id].second))
            return make_run(*id);
        }
      for (std::size_t i = 0; i < nodes.size(); ++i)
        {
          const std::size_t x = nodes[i].first;
          for (const auto& ex : s.edges(x))
            {
              state_set next(words, 0);
              for (std::size_t w = 0; w < words; ++w)
                for (std::uint64_t bits = nodes[i].second[w]; bits; bits &= bits - 1)
                  {
                    std::size_t y = w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits));
                    for (const auto& ey : t.edges(y))
                      if (subset_of(ex.label, ey.label)
                          && subset_of(s.label(ex.to), t.label(ey.to)))
                        next[ey.to / 64] |= std::uint64_t{1} << (ey.to % 64);
                  }
              auto id = push(ex.to, std::move(next), i, ex.label);
              if (id && is_empty(nodes[*id].second))
                return make_run(*id);
            }
        }
      return std::nullopt;
    }
  }

  bool contained_in(const TransitionSystem& s, const TransitionSystem& t,
                    std::size_t max_nodes)
  {
    return !containment_search(s, t, max_nodes).has_value();
  }

  Run extract_failing_run(const TransitionSystem& s, const TransitionSystem& t,
                          std::size_t max_nodes)
  {
    auto r = containment_search(s, t, max_nodes);
    if (!r)
      throw usage_error("extract_failing_run: the system is contained");
    return *r;
  }

  // ----------------------------------------------------------------
  // Brute-force matchers
  // ----------------------------------------------------------------

  bool run_embeds(const Run& r, const TransitionSystem& t)
  {
    std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t i,
                                                           std::size_t y) {
      if (!subset_of(r.state_labels[i], t.label(y)))
        return false;
      if (i + 1 == r.state_labels.size())
        return true;
      for (const auto& e : t.edges(y))
        if (subset_of(r.edge_labels[i], e.label) && go(i + 1, e.to))
          return true;
      return false;
    };
    for (auto y : t.initial())
      if (go(0, y))
        return true;
    return false;
  }

  bool tree_embeds(const Tree& tr, const TransitionSystem& t)
  {
    std::function<bool(const Tree&, std::size_t)> go = [&](const Tree& n,
                                                           std::size_t y) {
      if (!subset_of(n.label, t.label(y)))
        return false;
      for (const auto& c : n.children)
        {
          bool ok = false;
          for (const auto& e : t.edges(y))
            if (e.color == c.color && subset_of(c.label, e.label)
                && go(c.node, e.to))
              {
                ok = true;
                break;
              }
          if (!ok)
            return false;
        }
      return true;
    };
    for (auto y : t.initial())
      if (go(tr, y))
        return true;
    return false;
  }

  std::string to_dot(const TransitionSystem& ts, const Signature& sig)
  {
    std::ostringstream os;
    os << "digraph ts {\n  rankdir=LR;\n";
    for (std::size_t x = 0; x < ts.size(); ++x)
      {
        bool init = std::find(ts.initial().begin(), ts.initial().end(), x)
                    != ts.initial().end();
        os << "  n" << x << " [label=\"" << ts.name(x) << "\\n"
           << sig.format(ts.label(x)) << "\"" << (init ? ", shape=box" : "")
           << "];\n";
      }
    for (std::size_t x = 0; x < ts.size(); ++x)
      for (const auto& e : ts.edges(x))
        os << "  n" << x << " -> n" << e.to << " [label=\""
           << sig.format(e.label) << "\""
           << (e.color == Color::Red ? ", color=red, fontcolor=red" : "")
           << "];\n";
    os << "}\n";
    return os.str();
  }
}
