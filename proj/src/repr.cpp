// Representation systems for data instances and Horn least models.

#include "ltlqbe/repr.hpp"

#include <bit>
#include <deque>
#include <functional>
#include <map>

namespace ltlqbe
{
  namespace
  {
    point_set bit(std::size_t n) { return point_set{1} << n; }

    // Points of [lo, hi).
    point_set range(std::size_t lo, std::size_t hi)
    {
      point_set s = 0;
      for (std::size_t n = lo; n < hi; ++n)
        s |= bit(n);
      return s;
    }

    std::size_t lowest(point_set s)
    {
      return static_cast<std::size_t>(std::countr_zero(s));
    }

    std::string format_points(point_set s)
    {
      std::string out = "{";
      bool first = true;
      for (std::size_t n = 0; n < 64; ++n)
        if ((s >> n) & 1)
          {
            out += (first ? "" : ",") + std::to_string(n);
            first = false;
          }
      return out + "}";
    }
  }

  // ----------------------------------------------------------------
  // The ⋖ / ∇ calculus
  // ----------------------------------------------------------------

  namespace
  {
    std::optional<std::size_t> mu_plain(std::size_t x, point_set e)
    {
      point_set later = x + 1 >= 64 ? 0 : e & ~(bit(x + 1) - 1);
      if (!later)
        return std::nullopt;
      return lowest(later);
    }

    bool onto(point_set d, point_set e,
              const std::function<std::optional<std::size_t>(std::size_t)>& mu)
    {
      if (!d || !e)
        return false;
      point_set image = 0;
      for (point_set r = d; r; r &= r - 1)
        {
          auto y = mu(lowest(r));
          if (!y)
            return false;
          image |= bit(*y);
        }
      return image == e;
    }
  }

  bool lessdot(point_set d, point_set e)
  {
    return onto(d, e, [&](std::size_t x) { return mu_plain(x, e); });
  }

  point_set nabla(point_set d, point_set e)
  {
    point_set out = 0;
    for (point_set r = d; r; r &= r - 1)
      {
        std::size_t x = lowest(r);
        auto y = mu_plain(x, e);
        if (!y)
          throw usage_error("nabla: mu undefined at " + std::to_string(x));
        out |= range(x + 1, *y);
      }
    return out;
  }

  std::optional<std::size_t> mu_mp(std::size_t x, point_set e, std::size_t m,
                                   std::size_t p)
  {
    auto succ = mu_plain(x, e);
    if (succ || x < m)
      return succ;
    point_set zone = e & range(m, p);
    if (!zone)
      return std::nullopt;
    return lowest(zone);
  }

  bool lessdot_mp(point_set d, point_set e, std::size_t m, std::size_t p)
  {
    return onto(d, e, [&](std::size_t x) { return mu_mp(x, e, m, p); });
  }

  point_set nabla_mp(point_set d, point_set e, std::size_t m, std::size_t p)
  {
    point_set out = 0;
    for (point_set r = d; r; r &= r - 1)
      {
        std::size_t x = lowest(r);
        auto y = mu_mp(x, e, m, p);
        if (!y)
          throw usage_error("nabla_mp: mu undefined at " + std::to_string(x));
        if (x < *y)
          out |= range(x + 1, *y);
        else
          out |= range(x + 1, p) | range(m, *y);
      }
    return out;
  }

  // ----------------------------------------------------------------
  // Uncolored systems
  // ----------------------------------------------------------------

  namespace
  {
    // Label of an edge whose intermediate points are s.
    atom_set interval_label(const std::vector<atom_set>& lab, point_set s,
                            const Signature& sig)
    {
      if (!s)
        return sig.all_with_bottom();
      atom_set l = sig.all();
      for (point_set r = s; r; r &= r - 1)
        l &= lab[lowest(r)];
      return l;
    }

    std::vector<atom_set> labels_of(const LassoModel& m, const Signature& sig)
    {
      std::vector<atom_set> lab;
      for (const auto& s : m.prefix)
        lab.push_back(sig.encode(s) & sig.all());
      for (const auto& s : m.loop)
        lab.push_back(sig.encode(s) & sig.all());
      return lab;
    }

    // encode() rejects unknown atoms; keep only the ones in sig.
    std::set<std::string> restrict(const std::set<std::string>& s,
                                   const Signature& sig)
    {
      std::set<std::string> out;
      for (const auto& a : s)
        if (sig.find(a))
          out.insert(a);
      return out;
    }

    LassoModel restrict(const LassoModel& m, const Signature& sig)
    {
      LassoModel out;
      for (const auto& s : m.prefix)
        out.prefix.push_back(restrict(s, sig));
      for (const auto& s : m.loop)
        out.loop.push_back(restrict(s, sig));
      return out;
    }

    constexpr std::size_t max_points = 63;
  }

  TransitionSystem repr_plain(const DataInstance& d, const Signature& sig)
  {
    const std::size_t maxd = d.max_timestamp();
    if (maxd + 2 > max_points)
      throw resource_limit("repr_plain: timestamps beyond 61 are not supported");
    std::vector<atom_set> lab(maxd + 2, 0);
    for (const auto& f : d.facts())
      lab[f.time] |= atom_set{1} << sig.id(f.atom);
    TransitionSystem ts;
    for (std::size_t j = 0; j <= maxd + 1; ++j)
      ts.add_state(lab[j], std::to_string(j));
    for (std::size_t j = 0; j <= maxd + 1; ++j)
      for (std::size_t k = j + 1; k <= maxd + 1; ++k)
        ts.add_edge(j, k, interval_label(lab, range(j + 1, k), sig));
    ts.add_edge(maxd + 1, maxd + 1, sig.all_with_bottom());
    ts.add_initial(0);
    return ts;
  }

  TransitionSystem repr_lasso(const LassoModel& model, const Signature& sig)
  {
    const std::size_t m = model.pre();
    const std::size_t p = m + model.per();
    if (model.loop.empty())
      throw usage_error("repr_lasso: empty loop");
    if (p > max_points)
      throw resource_limit("repr_lasso: lasso longer than 63 positions");
    auto lab = labels_of(restrict(model, sig), sig);
    TransitionSystem ts;
    for (std::size_t n = 0; n < p; ++n)
      ts.add_state(lab[n], std::to_string(n));
    for (std::size_t n = 0; n < p; ++n)
      for (std::size_t k = n + 1; k < p; ++k)
        ts.add_edge(n, k, interval_label(lab, range(n + 1, k), sig));
    for (std::size_t n = m; n < p; ++n)
      for (std::size_t k = m; k <= n; ++k)
        ts.add_edge(n, k,
                    interval_label(lab, range(n + 1, p) | range(m, k), sig));
    ts.add_initial(0);
    return ts;
  }

  TransitionSystem repr_horn(const HornOntology& o, const DataInstance& d,
                             const Signature& sig)
  {
    auto cm = canonical_model(o, d);
    if (!cm)
      throw usage_error("repr_horn: ontology and data are inconsistent");
    return repr_lasso(cm->lasso, sig);
  }

  // ----------------------------------------------------------------
  // Black/red systems
  // ----------------------------------------------------------------

  namespace
  {
    struct br_builder
    {
      std::vector<atom_set> lab;  // labels of points [0, p)
      std::size_t m;              // periodic zone [m, p); m == p: none
      std::size_t p;
      bool with_z;                // plain data: the sink z beyond p
      const Signature& sig;
      const BrOptions& opt;

      TransitionSystem ts{true};
      std::map<std::pair<point_set, point_set>, std::size_t> ids{};
      std::deque<std::pair<point_set, point_set>> work{};
      std::size_t z = 0;
      std::size_t u = 0;

      bool rel(point_set d, point_set e) const
      {
        return m == p ? lessdot(d, e) : lessdot_mp(d, e, m, p);
      }
      point_set between(point_set d, point_set e) const
      {
        return m == p ? nabla(d, e) : nabla_mp(d, e, m, p);
      }

      // Every e with d ⋖ e.  Candidates lie after min(d), or anywhere
      // in the periodic zone.
      std::vector<point_set> successors(point_set d) const
      {
        std::size_t lo = lowest(d) + 1;
        if (m < p)
          lo = std::min(lo, m);
        if (lo >= p)
          return {};
        std::size_t width = p - lo;
        if (width > 24)
          throw resource_limit("black/red system: too many candidate points");
        std::vector<point_set> out;
        for (point_set c = 1; c < (point_set{1} << width); ++c)
          {
            point_set e = c << lo;
            if (std::popcount(e) <= std::popcount(d) && rel(d, e))
              out.push_back(e);
          }
        return out;
      }

      std::size_t state(point_set x, point_set y)
      {
        auto key = std::make_pair(x, y);
        auto it = ids.find(key);
        if (it != ids.end())
          return it->second;
        if (ts.size() >= opt.max_states)
          throw resource_limit("black/red system exceeds "
                               + std::to_string(opt.max_states) + " states");
        atom_set l = sig.all();
        for (point_set r = y; r; r &= r - 1)
          l &= lab[lowest(r)];
        std::size_t id = ts.add_state(l, format_points(x) + format_points(y));
        ids.emplace(key, id);
        work.push_back(key);
        return id;
      }

      TransitionSystem build()
      {
        const atom_set full = sig.all_with_bottom();
        std::size_t root = ts.add_state(lab[0], "0");
        ts.add_initial(root);
        u = ts.add_state(full, "u");
        ts.add_edge(u, u, full, Color::Black);
        ts.add_edge(u, u, full, Color::Red);
        if (with_z)
          {
            z = ts.add_state(0, "z");
            ts.add_edge(z, z, full, Color::Black);
            ts.add_edge(z, z, full, Color::Red);
            ts.add_edge(z, u, full, Color::Red);
            ts.add_edge(root, z, full, Color::Black);
          }
        for (auto g : successors(bit(0)))
          {
            point_set f = between(bit(0), g);
            ts.add_edge(root, state(f, g), interval_label(lab, f, sig),
                        Color::Black);
          }
        while (!work.empty())
          {
            auto [x, y] = work.front();
            work.pop_front();
            std::size_t from = ids.at({x, y});
            for (auto g : successors(y))
              {
                point_set f = between(y, g);
                ts.add_edge(from, state(f, g), interval_label(lab, f, sig),
                            Color::Black);
              }
            if (x)
              for (auto g : successors(x))
                {
                  point_set f = between(x, g);
                  ts.add_edge(from, state(f, g), interval_label(lab, f, sig),
                              Color::Red);
                }
            else
              ts.add_edge(from, u, full, Color::Red);
            if (with_z)
              {
                ts.add_edge(from, z, full, Color::Black);
                if (x)
                  ts.add_edge(from, z, full, Color::Red);
              }
          }
        return std::move(ts);
      }
    };
  }

  TransitionSystem repr_plain_br(const DataInstance& d, const Signature& sig,
                                 const BrOptions& opt)
  {
    const std::size_t maxd = d.max_timestamp();
    if (maxd + 1 > max_points)
      throw resource_limit("repr_plain_br: timestamps beyond 62 are not supported");
    std::vector<atom_set> lab(maxd + 1, 0);
    for (const auto& f : d.facts())
      lab[f.time] |= atom_set{1} << sig.id(f.atom);
    br_builder b{lab, maxd + 1, maxd + 1, true, sig, opt};
    return b.build();
  }

  TransitionSystem repr_lasso_br(const LassoModel& model, const Signature& sig,
                                 const BrOptions& opt)
  {
    if (model.loop.empty())
      throw usage_error("repr_lasso_br: empty loop");
    const std::size_t p = model.pre() + model.per();
    if (p > max_points)
      throw resource_limit("repr_lasso_br: lasso longer than 63 positions");
    br_builder b{labels_of(restrict(model, sig), sig), model.pre(), p, false,
                 sig, opt};
    return b.build();
  }

  TransitionSystem repr_horn_br(const HornOntology& o, const DataInstance& d,
                                const Signature& sig, const BrOptions& opt)
  {
    auto cm = canonical_model(o, d);
    if (!cm)
      throw usage_error("repr_horn_br: ontology and data are inconsistent");
    return repr_lasso_br(cm->lasso, sig, opt);
  }
}
