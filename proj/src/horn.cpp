// Horn ontologies: parsing, the chase computing least models, period
// detection and certain answers.

#include "ltlqbe/horn.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace ltlqbe
{
  // ----------------------------------------------------------------
  // Printing and parsing
  // ----------------------------------------------------------------

  std::string HornLiteral::to_string() const
  {
    std::string s = diamond ? "F " : "";
    for (auto op : prefix)
      s += op == LitOp::Box ? "G " : "X ";
    return s + (bottom ? "false" : atom);
  }

  std::string HornAxiom::to_string() const
  {
    std::string s;
    for (std::size_t i = 0; i < body.size(); ++i)
      s += (i ? " & " : "") + body[i].to_string();
    return s + " -> " + head.to_string();
  }

  std::set<std::string> HornOntology::atoms() const
  {
    std::set<std::string> out;
    for (const auto& a : axioms)
      {
        for (const auto& l : a.body)
          if (!l.bottom)
            out.insert(l.atom);
        if (!a.head.bottom)
          out.insert(a.head.atom);
      }
    return out;
  }

  std::set<std::string> HornOntology::user_atoms() const
  {
    auto out = atoms();
    for (const auto& f : fresh)
      out.erase(f);
    return out;
  }

  namespace
  {
    struct token
    {
      std::string text;  // identifier, "&" or "->"
      std::size_t column;
    };

    std::vector<token> tokenize(const std::string& line, std::size_t lineno)
    {
      std::vector<token> out;
      std::size_t i = 0;
      while (i < line.size())
        {
          char c = line[i];
          if (c == '#')
            break;
          if (std::isspace(static_cast<unsigned char>(c)))
            {
              ++i;
              continue;
            }
          if (c == '&')
            {
              out.push_back({"&", i + 1});
              ++i;
              continue;
            }
          if (c == '-' && i + 1 < line.size() && line[i + 1] == '>')
            {
              out.push_back({"->", i + 1});
              i += 2;
              continue;
            }
          if (std::isalpha(static_cast<unsigned char>(c)))
            {
              std::size_t j = i;
              while (j < line.size()
                     && (std::isalnum(static_cast<unsigned char>(line[j]))
                         || line[j] == '_'))
                ++j;
              out.push_back({line.substr(i, j - i), i + 1});
              i = j;
              continue;
            }
          throw parse_error("unexpected character '" + std::string(1, c) + "'",
                            lineno, i + 1);
        }
      return out;
    }

    // Parses tokens [b, e) as one literal.
    HornLiteral parse_literal(const std::vector<token>& t, std::size_t b,
                              std::size_t e, bool in_body,
                              std::size_t lineno, std::size_t eol)
    {
      HornLiteral lit;
      if (b == e)
        throw parse_error("empty literal", lineno, b < t.size() ? t[b].column : eol);
      for (std::size_t i = b; i < e; ++i)
        {
          const auto& w = t[i].text;
          bool last = i + 1 == e;
          if (!last)
            {
              if (w == "G")
                lit.prefix.push_back(LitOp::Box);
              else if (w == "X")
                lit.prefix.push_back(LitOp::Next);
              else if (w == "F")
                {
                  if (!in_body)
                    throw parse_error("F is not allowed in an axiom head",
                                      lineno, t[i].column);
                  if (i != b)
                    throw parse_error("F may only lead a body literal",
                                      lineno, t[i].column);
                  lit.diamond = true;
                }
              else
                throw parse_error("expected G, X or F before '"
                                  + t[e - 1].text + "'",
                                  lineno, t[i].column);
              continue;
            }
          if (w == "false")
            lit.bottom = true;
          else if (is_valid_atom_name(w))
            lit.atom = w;
          else
            throw parse_error("expected an atom or false, got '" + w + "'",
                              lineno, t[i].column);
        }
      return lit;
    }

    std::string fresh_name(std::set<std::string>& used, std::size_t& counter)
    {
      for (;;)
        {
          std::string n = "ev__" + std::to_string(++counter);
          if (used.insert(n).second)
            return n;
        }
    }
  }

  HornOntology load_horn_ontology(const std::string& text)
  {
    HornOntology o;
    std::vector<HornAxiom> raw;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line))
      {
        ++lineno;
        auto t = tokenize(line, lineno);
        if (t.empty())
          continue;
        std::size_t eol = line.size() + 1;
        std::size_t arrow = t.size();
        for (std::size_t i = 0; i < t.size(); ++i)
          if (t[i].text == "->")
            {
              if (arrow != t.size())
                throw parse_error("more than one '->'", lineno, t[i].column);
              arrow = i;
            }
        if (arrow == t.size())
          throw parse_error("missing '->'", lineno, eol);
        if (arrow == 0)
          throw parse_error("empty axiom body", lineno, t[0].column);
        HornAxiom ax;
        std::size_t b = 0;
        for (std::size_t i = 0; i <= arrow; ++i)
          if (i == arrow || t[i].text == "&")
            {
              ax.body.push_back(parse_literal(t, b, i, true, lineno, eol));
              b = i + 1;
            }
        for (std::size_t i = arrow + 1; i < t.size(); ++i)
          if (t[i].text == "&")
            throw parse_error("an axiom has exactly one head literal",
                              lineno, t[i].column);
        ax.head = parse_literal(t, arrow + 1, t.size(), false, lineno, eol);
        o.size += t.size();
        raw.push_back(std::move(ax));
      }

    // Eliminate F in bodies: F C becomes a fresh Z with X C -> Z and
    // X Z -> Z.
    std::set<std::string> used;
    for (const auto& a : raw)
      {
        for (const auto& l : a.body)
          used.insert(l.atom);
        used.insert(a.head.atom);
      }
    std::size_t counter = 0;
    for (auto& a : raw)
      {
        for (auto& l : a.body)
          {
            if (!l.diamond)
              continue;
            std::string z = fresh_name(used, counter);
            o.fresh.insert(z);
            HornLiteral xc = l;
            xc.diamond = false;
            xc.prefix.insert(xc.prefix.begin(), LitOp::Next);
            HornLiteral zl;
            zl.atom = z;
            HornLiteral xz = zl;
            xz.prefix.push_back(LitOp::Next);
            o.axioms.push_back(HornAxiom{{xc}, zl});
            o.axioms.push_back(HornAxiom{{xz}, zl});
            l = zl;
          }
        o.axioms.push_back(a);
      }
    return o;
  }

  // ----------------------------------------------------------------
  // The chase
  // ----------------------------------------------------------------

  namespace
  {
    enum class term_kind
    {
      atom,
      next,
      box
    };

    // Literals are flattened into terms: atoms first (the last atom is
    // falsum), then X and G terms referring to their operand.
    struct program
    {
      std::vector<std::string> atom_names;  // without falsum
      std::size_t bottom = 0;               // term id of falsum
      std::vector<term_kind> kind;
      std::vector<std::size_t> child;
      struct rule
      {
        std::vector<std::size_t> body;
        std::size_t head;
      };
      std::vector<rule> rules;
      std::vector<std::vector<std::size_t>> body_occ;     // term -> rules
      std::vector<std::vector<std::size_t>> next_parent;  // term -> X terms
      std::vector<std::size_t> boxes;

      std::size_t size() const { return kind.size(); }
    };

    program compile(const HornOntology& o, const std::set<std::string>& extra)
    {
      program p;
      std::set<std::string> names = o.atoms();
      names.insert(extra.begin(), extra.end());
      p.atom_names.assign(names.begin(), names.end());
      std::map<std::string, std::size_t> ids;
      for (const auto& n : p.atom_names)
        {
          ids[n] = p.kind.size();
          p.kind.push_back(term_kind::atom);
          p.child.push_back(0);
        }
      p.bottom = p.kind.size();
      p.kind.push_back(term_kind::atom);
      p.child.push_back(0);

      std::map<std::pair<int, std::size_t>, std::size_t> composite;
      auto term_of = [&](const HornLiteral& l) {
        std::size_t t = l.bottom ? p.bottom : ids.at(l.atom);
        for (auto it = l.prefix.rbegin(); it != l.prefix.rend(); ++it)
          {
            int k = *it == LitOp::Box ? 1 : 0;
            auto key = std::make_pair(k, t);
            auto f = composite.find(key);
            if (f == composite.end())
              {
                std::size_t id = p.kind.size();
                p.kind.push_back(k ? term_kind::box : term_kind::next);
                p.child.push_back(t);
                f = composite.emplace(key, id).first;
              }
            t = f->second;
          }
        return t;
      };
      for (const auto& a : o.axioms)
        {
          program::rule r;
          for (const auto& l : a.body)
            r.body.push_back(term_of(l));
          r.head = term_of(a.head);
          p.rules.push_back(r);
        }
      p.body_occ.resize(p.size());
      p.next_parent.resize(p.size());
      for (std::size_t i = 0; i < p.rules.size(); ++i)
        for (auto t : p.rules[i].body)
          if (std::find(p.body_occ[t].begin(), p.body_occ[t].end(), i)
              == p.body_occ[t].end())
            p.body_occ[t].push_back(i);
      for (std::size_t t = 0; t < p.size(); ++t)
        {
          if (p.kind[t] == term_kind::next)
            p.next_parent[p.child[t]].push_back(t);
          if (p.kind[t] == term_kind::box)
            p.boxes.push_back(t);
        }
      return p;
    }

    constexpr std::size_t never = static_cast<std::size_t>(-1);

    // Least model of the local rules on positions [0, w), where G terms
    // are additionally asserted from their threshold on.  Positions
    // beyond the window are absent, so the result under-approximates
    // the least model; it is exact away from the window end.
    struct window_model
    {
      std::size_t w = 0;
      std::size_t width = 0;
      std::vector<char> facts;  // w * width
      bool bottom = false;

      bool get(std::size_t n, std::size_t t) const
      {
        return facts[n * width + t];
      }
      bool same_type(std::size_t a, std::size_t b) const
      {
        return std::equal(facts.begin() + a * width,
                          facts.begin() + (a + 1) * width,
                          facts.begin() + b * width);
      }
    };

    window_model chase_window(const program& p,
                              const std::vector<std::pair<std::size_t, std::size_t>>& data,
                              const std::vector<std::size_t>& threshold,
                              std::size_t w)
    {
      window_model m;
      m.w = w;
      m.width = p.size();
      m.facts.assign(w * m.width, 0);
      std::vector<std::pair<std::size_t, std::size_t>> work;
      auto add = [&](std::size_t t, std::size_t n) {
        if (n >= w || m.facts[n * m.width + t])
          return;
        m.facts[n * m.width + t] = 1;
        work.emplace_back(t, n);
      };
      for (auto [t, n] : data)
        add(t, n);
      for (std::size_t i = 0; i < p.boxes.size(); ++i)
        if (threshold[i] != never)
          for (std::size_t n = threshold[i]; n < w; ++n)
            add(p.boxes[i], n);
      while (!work.empty())
        {
          auto [t, n] = work.back();
          work.pop_back();
          if (t == p.bottom)
            m.bottom = true;
          for (auto r : p.body_occ[t])
            {
              const auto& rule = p.rules[r];
              bool fire = std::all_of(rule.body.begin(), rule.body.end(),
                                      [&](std::size_t b) { return m.get(n, b); });
              if (fire)
                add(rule.head, n);
            }
          if (p.kind[t] == term_kind::next)
            add(p.child[t], n + 1);
          if (p.kind[t] == term_kind::box)
            {
              add(p.child[t], n + 1);
              add(t, n + 1);
            }
          if (n > 0)
            for (auto parent : p.next_parent[t])
              add(parent, n - 1);
        }
      return m;
    }

    struct period
    {
      std::size_t s = 0;
      std::size_t p = 0;
    };

    // Least handle s, then least period p, such that the types of the
    // trusted window [0, trusted) repeat with period p from max + s on,
    // with at least two full periods observed.
    std::optional<period> find_period(const window_model& m,
                                      std::size_t max_ts,
                                      std::size_t trusted)
    {
      for (std::size_t s = 0; max_ts + s < trusted; ++s)
        {
          std::size_t from = max_ts + s;
          for (std::size_t p = 1; from + 2 * p <= trusted; ++p)
            {
              bool ok = true;
              for (std::size_t n = from; n + p < trusted && ok; ++n)
                ok = m.same_type(n, n + p);
              if (ok)
                return period{s, p};
            }
        }
      return std::nullopt;
    }
  }

  namespace
  {
    // Truth of every literal-term on a lasso, with G as a greatest
    // fixpoint.  Used by the independent model checker.
    std::vector<char> literal_values(const HornLiteral& l, const Timeline& tl,
                                     const Signature& sig)
    {
      const std::size_t n = tl.size();
      std::vector<char> v(n, 0);
      if (!l.bottom)
        if (auto i = sig.find(l.atom))
          for (std::size_t k = 0; k < n; ++k)
            v[k] = (tl.labels[k] >> *i) & 1;
      for (auto it = l.prefix.rbegin(); it != l.prefix.rend(); ++it)
        {
          std::vector<char> r(n, 0);
          if (*it == LitOp::Next)
            for (std::size_t k = 0; k < n; ++k)
              r[k] = v[tl.next(k)];
          else
            {
              std::fill(r.begin(), r.end(), 1);
              bool changed = true;
              while (changed)
                {
                  changed = false;
                  for (std::size_t k = n; k-- > 0;)
                    {
                      std::size_t s = tl.next(k);
                      if (r[k] && !(v[s] && r[s]))
                        {
                          r[k] = 0;
                          changed = true;
                        }
                    }
                }
            }
          v = std::move(r);
        }
      return v;
    }
  }

  bool is_model(const HornOntology& o, const LassoModel& m)
  {
    auto atoms = m.atoms();
    auto oa = o.atoms();
    atoms.insert(oa.begin(), oa.end());
    Signature sig(std::vector<std::string>(atoms.begin(), atoms.end()));
    Timeline tl = make_timeline(m, sig);
    for (const auto& a : o.axioms)
      {
        std::vector<char> body(tl.size(), 1);
        for (const auto& l : a.body)
          {
            if (l.diamond)
              throw usage_error("is_model: ontology has not been loaded");
            auto v = literal_values(l, tl, sig);
            for (std::size_t k = 0; k < tl.size(); ++k)
              body[k] = body[k] && v[k];
          }
        auto head = literal_values(a.head, tl, sig);
        for (std::size_t k = 0; k < tl.size(); ++k)
          if (body[k] && !head[k])
            return false;
      }
    return true;
  }

  std::optional<CanonicalModel>
  canonical_model(const HornOntology& o, const DataInstance& d,
                  const ChaseOptions& opt)
  {
    for (const auto& f : o.fresh)
      if (d.atoms().count(f))
        throw usage_error("data uses the reserved atom '" + f + "'");
    program p = compile(o, d.atoms());
    std::vector<std::pair<std::size_t, std::size_t>> data;
    for (const auto& f : d.facts())
      {
        auto it = std::find(p.atom_names.begin(), p.atom_names.end(), f.atom);
        data.emplace_back(static_cast<std::size_t>(it - p.atom_names.begin()),
                          f.time);
      }
    const std::size_t max_ts = d.max_timestamp();

    for (std::size_t extra = opt.initial_window; max_ts + extra <= opt.max_window;
         extra *= 2)
      {
        const std::size_t w = max_ts + extra;
        std::vector<std::size_t> threshold(p.boxes.size(), never);
        // Outer fixpoint over G-thresholds: a G term becomes true from
        // the last position where its operand fails in the current
        // lasso; thresholds only decrease.
        for (;;)
          {
            window_model small = chase_window(p, data, threshold, w);
            window_model big = chase_window(p, data, threshold, 2 * w);
            if (big.bottom)
              return std::nullopt;
            std::size_t trusted = 0;
            while (trusted < w && big.same_type(trusted, trusted)
                   && std::equal(small.facts.begin() + trusted * p.size(),
                                 small.facts.begin() + (trusted + 1) * p.size(),
                                 big.facts.begin() + trusted * p.size()))
              ++trusted;
            auto per = find_period(big, max_ts, trusted);
            if (!per)
              break;  // enlarge the window
            const std::size_t pre = max_ts + per->s;
            const std::size_t len = pre + per->p;
            bool lowered = false;
            for (std::size_t i = 0; i < p.boxes.size(); ++i)
              {
                std::size_t c = p.child[p.boxes[i]];
                bool loop_ok = true;
                for (std::size_t n = pre; n < len; ++n)
                  loop_ok = loop_ok && big.get(n, c);
                if (!loop_ok)
                  continue;
                std::size_t t = 0;
                for (std::size_t n = 0; n < pre; ++n)
                  if (!big.get(n, c))
                    t = n;
                if (t < threshold[i])
                  {
                    threshold[i] = t;
                    lowered = true;
                  }
              }
            if (lowered)
              continue;

            CanonicalModel cm;
            cm.max_timestamp = max_ts;
            cm.handle = per->s;
            cm.period = per->p;
            auto atoms_at = [&](std::size_t n) {
              std::set<std::string> s;
              for (std::size_t a = 0; a < p.atom_names.size(); ++a)
                if (big.get(n, a))
                  s.insert(p.atom_names[a]);
              return s;
            };
            for (std::size_t n = 0; n < pre; ++n)
              cm.lasso.prefix.push_back(atoms_at(n));
            for (std::size_t n = pre; n < len; ++n)
              cm.lasso.loop.push_back(atoms_at(n));
            for (std::size_t n = 0; n < trusted; ++n)
              cm.window.push_back(atoms_at(n));
            if (!is_model(o, cm.lasso))
              break;  // the extrapolated loop is not yet stable
            return cm;
          }
      }
    throw resource_limit("canonical_model: no period found within window "
                         + std::to_string(opt.max_window));
  }

  bool horn_consistent(const HornOntology& o, const DataInstance& d)
  {
    return canonical_model(o, d).has_value();
  }

  bool certain_answer(const HornOntology& o, const DataInstance& d,
                      const Query& q, std::size_t at)
  {
    auto cm = canonical_model(o, d);
    if (!cm)
      throw usage_error("certain_answer: ontology and data are inconsistent");
    return eval_lasso(cm->lasso, q, cm->lasso.fold(at));
  }

  DepthBounds depth_bounds(const HornOntology& o, const ExampleSet& e)
  {
    DepthBounds b;
    for (const auto* list : {&e.positives, &e.negatives})
      for (const auto& d : *list)
        {
          auto cm = canonical_model(o, d);
          if (!cm)
            throw usage_error("depth_bounds: inconsistent instance");
          b.k = std::max(b.k, d.max_timestamp() + cm->handle);
          b.m = std::lcm(b.m, cm->period);
        }
    return b;
  }
}
