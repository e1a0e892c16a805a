// Prior-fragment ontologies: parsing, lasso evaluation and the search
// for ultimately periodic models.

#include "ltlqbe/prior.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

namespace ltlqbe
{
  POp PriorFormula::op() const { return n_->op; }
  const std::string& PriorFormula::name() const { return n_->name; }
  const std::vector<PriorFormula>& PriorFormula::children() const
  {
    return n_->kids;
  }
  const std::string& PriorFormula::key() const { return n_->key; }

  PriorFormula p_make(POp op, std::vector<PriorFormula> kids, std::string name)
  {
    auto n = std::make_shared<PriorNode>();
    n->op = op;
    n->name = std::move(name);
    n->kids = std::move(kids);
    static const char* tag[] = {"1", "0", "", "!", "&", "|", ">", "G", "F"};
    if (op == POp::Atom)
      n->key = n->name;
    else
      {
        n->key = tag[static_cast<int>(op)];
        if (!n->kids.empty())
          {
            n->key += "(";
            for (std::size_t i = 0; i < n->kids.size(); ++i)
              n->key += (i ? "," : "") + n->kids[i].key();
            n->key += ")";
          }
      }
    return PriorFormula(std::move(n));
  }

  // ----------------------------------------------------------------
  // Parsing and printing
  // ----------------------------------------------------------------

  namespace
  {
    class prior_parser
    {
    public:
      prior_parser(const std::string& s, std::size_t line)
        : s_(s), line_(line)
      {
      }

      PriorFormula parse()
      {
        PriorFormula f = implies();
        skip();
        if (pos_ < s_.size())
          fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return f;
      }

    private:
      const std::string& s_;
      std::size_t line_;
      std::size_t pos_ = 0;

      [[noreturn]] void fail(const std::string& msg)
      {
        throw parse_error(msg, line_, pos_ + 1);
      }

      void skip()
      {
        while (pos_ < s_.size()
               && std::isspace(static_cast<unsigned char>(s_[pos_])))
          ++pos_;
      }

      bool eat(const std::string& tok)
      {
        skip();
        if (s_.compare(pos_, tok.size(), tok) == 0)
          {
            pos_ += tok.size();
            return true;
          }
        return false;
      }

      std::string peek_word()
      {
        skip();
        std::size_t e = pos_;
        while (e < s_.size()
               && (std::isalnum(static_cast<unsigned char>(s_[e]))
                   || s_[e] == '_'))
          ++e;
        return s_.substr(pos_, e - pos_);
      }

      PriorFormula implies()
      {
        PriorFormula l = disj();
        if (eat("->"))
          return p_make(POp::Implies, {l, implies()});
        return l;
      }

      PriorFormula disj()
      {
        PriorFormula l = conj();
        while (eat("|"))
          l = p_make(POp::Or, {l, conj()});
        return l;
      }

      PriorFormula conj()
      {
        PriorFormula l = unary();
        while (eat("&"))
          l = p_make(POp::And, {l, unary()});
        return l;
      }

      PriorFormula unary()
      {
        if (eat("!"))
          return p_make(POp::Not, {unary()});
        std::string w = peek_word();
        if (w == "G" || w == "F")
          {
            pos_ += 1;
            return p_make(w == "G" ? POp::Box : POp::Diamond, {unary()});
          }
        if (w == "X" || w == "U")
          fail("'" + w + "' is not allowed in Prior-fragment axioms");
        return primary();
      }

      PriorFormula primary()
      {
        skip();
        if (pos_ >= s_.size())
          fail("unexpected end of formula");
        if (s_[pos_] == '(')
          {
            ++pos_;
            PriorFormula f = implies();
            if (!eat(")"))
              fail("expected ')'");
            return f;
          }
        std::string w = peek_word();
        if (w.empty())
          fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        if (w == "true" || w == "false")
          {
            pos_ += w.size();
            return p_make(w == "true" ? POp::Top : POp::Bot);
          }
        if (!is_valid_atom_name(w))
          fail("'" + w + "' is not a valid atom name");
        pos_ += w.size();
        return p_make(POp::Atom, {}, w);
      }
    };

    std::string print(const PriorFormula& f, int ctx)
    {
      auto wrap = [&](const std::string& s, int level) {
        return ctx > level ? "(" + s + ")" : s;
      };
      const auto& k = f.children();
      switch (f.op())
        {
        case POp::Top:
          return "true";
        case POp::Bot:
          return "false";
        case POp::Atom:
          return f.name();
        case POp::Not:
          return "!" + print(k[0], 4);
        case POp::Box:
          return "G " + print(k[0], 4);
        case POp::Diamond:
          return "F " + print(k[0], 4);
        case POp::And:
          return wrap(print(k[0], 3) + " & " + print(k[1], 4), 3);
        case POp::Or:
          return wrap(print(k[0], 2) + " | " + print(k[1], 3), 2);
        case POp::Implies:
          return wrap(print(k[0], 2) + " -> " + print(k[1], 1), 1);
        }
      return {};
    }

    void collect_atoms(const PriorFormula& f, std::set<std::string>& out)
    {
      if (f.op() == POp::Atom)
        out.insert(f.name());
      for (const auto& k : f.children())
        collect_atoms(k, out);
    }
  }

  PriorFormula parse_prior_formula(const std::string& text)
  {
    return prior_parser(text, 1).parse();
  }

  std::string to_string(const PriorFormula& f) { return print(f, 0); }

  std::set<std::string> PriorOntology::atoms() const
  {
    std::set<std::string> out;
    for (const auto& a : axioms)
      collect_atoms(a, out);
    return out;
  }

  PriorOntology load_prior_ontology(const std::string& text)
  {
    PriorOntology o;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line))
      {
        ++lineno;
        line = line.substr(0, line.find('#'));
        if (std::all_of(line.begin(), line.end(), [](unsigned char c) {
              return std::isspace(c);
            }))
          continue;
        o.axioms.push_back(prior_parser(line, lineno).parse());
        // Symbol count: every atom, constant, connective and operator.
        std::size_t i = 0;
        while (i < line.size())
          {
            unsigned char c = line[i];
            if (std::isalnum(c) || c == '_')
              {
                while (i < line.size()
                       && (std::isalnum(static_cast<unsigned char>(line[i]))
                           || line[i] == '_'))
                  ++i;
                ++o.size;
              }
            else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>')
              {
                i += 2;
                ++o.size;
              }
            else
              {
                if (c == '!' || c == '&' || c == '|')
                  ++o.size;
                ++i;
              }
          }
      }
    return o;
  }

  PriorFormula prior_of_query(const Query& q)
  {
    switch (q.op())
      {
      case Op::Top:
        return p_make(POp::Top);
      case Op::Bot:
        return p_make(POp::Bot);
      case Op::Atom:
        return p_make(POp::Atom, {}, q.name());
      case Op::And:
        {
          PriorFormula f = prior_of_query(q.children()[0]);
          for (std::size_t i = 1; i < q.children().size(); ++i)
            f = p_make(POp::And, {f, prior_of_query(q.children()[i])});
          return f;
        }
      case Op::Diamond:
        return p_make(POp::Diamond, {prior_of_query(q.body())});
      case Op::Next:
      case Op::Until:
        break;
      }
    throw usage_error("Prior-fragment entailment supports only &/F queries, got '"
                      + to_string(q) + "'");
  }

  // ----------------------------------------------------------------
  // Evaluation on lassos
  // ----------------------------------------------------------------

  namespace
  {
    std::vector<char> values_on(const PriorFormula& f, const Timeline& tl,
                                const Signature& sig)
    {
      const std::size_t n = tl.size();
      const auto& k = f.children();
      std::vector<char> v(n, 0);
      switch (f.op())
        {
        case POp::Top:
          std::fill(v.begin(), v.end(), 1);
          break;
        case POp::Bot:
          break;
        case POp::Atom:
          if (auto i = sig.find(f.name()))
            for (std::size_t p = 0; p < n; ++p)
              v[p] = (tl.labels[p] >> *i) & 1;
          break;
        case POp::Not:
          {
            auto a = values_on(k[0], tl, sig);
            for (std::size_t p = 0; p < n; ++p)
              v[p] = !a[p];
            break;
          }
        case POp::And:
        case POp::Or:
        case POp::Implies:
          {
            auto a = values_on(k[0], tl, sig);
            auto b = values_on(k[1], tl, sig);
            for (std::size_t p = 0; p < n; ++p)
              v[p] = f.op() == POp::And  ? a[p] && b[p]
                     : f.op() == POp::Or ? a[p] || b[p]
                                         : !a[p] || b[p];
            break;
          }
        case POp::Box:
        case POp::Diamond:
          {
            // G: greatest fixpoint of v(p) = a(s) & v(s);
            // F: least fixpoint of v(p) = a(s) | v(s), s = successor.
            bool box = f.op() == POp::Box;
            auto a = values_on(k[0], tl, sig);
            std::fill(v.begin(), v.end(), box ? 1 : 0);
            bool changed = true;
            while (changed)
              {
                changed = false;
                for (std::size_t p = n; p-- > 0;)
                  {
                    std::size_t s = tl.next(p);
                    char nv = box ? (a[s] && v[s]) : (a[s] || v[s]);
                    if (nv != v[p])
                      {
                        v[p] = nv;
                        changed = true;
                      }
                  }
              }
            break;
          }
        }
      return v;
    }
  }

  bool prior_holds(const PriorFormula& f, const LassoModel& m, std::size_t at)
  {
    if (m.loop.empty() || at >= m.pre() + m.per())
      throw usage_error("prior_holds: evaluation point outside the lasso");
    auto atoms = m.atoms();
    collect_atoms(f, atoms);
    Signature sig(std::vector<std::string>(atoms.begin(), atoms.end()));
    return values_on(f, make_timeline(m, sig), sig)[at];
  }

  // ----------------------------------------------------------------
  // Model search
  // ----------------------------------------------------------------

  namespace
  {
    // Formulas compiled to a DAG over distinct subformulas; G/F nodes
    // read their value from a valuation bit instead of evaluating.
    struct compiled
    {
      std::vector<std::string> atoms;
      std::vector<POp> op;
      std::vector<std::vector<std::size_t>> kids;
      std::vector<std::size_t> atom_bit;    // Atom nodes
      std::vector<std::size_t> modal_bit;   // Box/Diamond nodes
      std::vector<std::size_t> modal_node;  // bit -> node
      std::vector<std::size_t> axioms;
      std::optional<std::size_t> query;

      std::size_t add(const PriorFormula& f,
                      std::unordered_map<std::string, std::size_t>& ids)
      {
        auto it = ids.find(f.key());
        if (it != ids.end())
          return it->second;
        std::vector<std::size_t> ks;
        for (const auto& k : f.children())
          ks.push_back(add(k, ids));
        std::size_t id = op.size();
        op.push_back(f.op());
        kids.push_back(ks);
        atom_bit.push_back(0);
        modal_bit.push_back(0);
        if (f.op() == POp::Atom)
          {
            auto a = std::find(atoms.begin(), atoms.end(), f.name());
            atom_bit[id] = static_cast<std::size_t>(a - atoms.begin());
          }
        if (f.op() == POp::Box || f.op() == POp::Diamond)
          {
            modal_bit[id] = modal_node.size();
            modal_node.push_back(id);
          }
        ids.emplace(f.key(), id);
        return id;
      }

      // Values of all nodes at a position with atoms a and valuation v.
      void eval(std::uint64_t a, std::uint64_t v, std::vector<char>& out) const
      {
        out.resize(op.size());
        for (std::size_t i = 0; i < op.size(); ++i)
          {
            const auto& k = kids[i];
            switch (op[i])
              {
              case POp::Top:
                out[i] = 1;
                break;
              case POp::Bot:
                out[i] = 0;
                break;
              case POp::Atom:
                out[i] = (a >> atom_bit[i]) & 1;
                break;
              case POp::Not:
                out[i] = !out[k[0]];
                break;
              case POp::And:
                out[i] = out[k[0]] && out[k[1]];
                break;
              case POp::Or:
                out[i] = out[k[0]] || out[k[1]];
                break;
              case POp::Implies:
                out[i] = !out[k[0]] || out[k[1]];
                break;
              case POp::Box:
              case POp::Diamond:
                out[i] = (v >> modal_bit[i]) & 1;
                break;
              }
          }
      }

      bool axioms_hold(const std::vector<char>& val) const
      {
        return std::all_of(axioms.begin(), axioms.end(),
                           [&](std::size_t a) { return val[a] != 0; });
      }

      // Valuation of the previous position, given this position's
      // atoms/valuation and their node values.
      std::uint64_t step(std::uint64_t v, const std::vector<char>& val) const
      {
        std::uint64_t out = 0;
        for (std::size_t b = 0; b < modal_node.size(); ++b)
          {
            std::size_t n = modal_node[b];
            bool operand = val[kids[n][0]];
            bool here = (v >> b) & 1;
            bool now = op[n] == POp::Box ? operand && here : operand || here;
            if (now)
              out |= std::uint64_t{1} << b;
          }
        return out;
      }
    };

    constexpr std::size_t max_search_bits = 22;

    struct origin
    {
      std::uint64_t atoms = 0;      // atoms at the next position
      std::uint64_t next_val = 0;   // valuation at the next position
      bool tail = false;            // the valuation starts the loop
    };
  }

  std::optional<LassoModel>
  prior_countermodel(const PriorOntology& o, const DataInstance& d,
                     const std::optional<Query>& q)
  {
    std::vector<PriorFormula> formulas = o.axioms;
    std::optional<PriorFormula> qf;
    if (q)
      qf = prior_of_query(*q);

    compiled c;
    {
      std::set<std::string> atoms = o.atoms();
      auto da = d.atoms();
      atoms.insert(da.begin(), da.end());
      if (qf)
        collect_atoms(*qf, atoms);
      c.atoms.assign(atoms.begin(), atoms.end());
      std::unordered_map<std::string, std::size_t> ids;
      for (const auto& f : o.axioms)
        c.axioms.push_back(c.add(f, ids));
      if (qf)
        c.query = c.add(*qf, ids);
    }
    const std::size_t na = c.atoms.size();
    const std::size_t nm = c.modal_node.size();
    if (na + nm > max_search_bits)
      throw resource_limit("prior model search: " + std::to_string(na)
                           + " atoms and " + std::to_string(nm)
                           + " temporal subformulas exceed the search bound");
    const std::uint64_t atom_sets = std::uint64_t{1} << na;
    const std::uint64_t valuations = std::uint64_t{1} << nm;

    std::vector<char> val;
    // Tail: a constant valuation m realized by a loop of letters in
    // A'_m, with witnesses for true F and false G subformulas.
    std::map<std::uint64_t, std::vector<std::uint64_t>> loops;
    if (atom_sets < nm)
      {
        // Few atoms: enumerate the letter sets L of a loop instead.  The
        // valuation follows from L bottom-up (operands of a temporal
        // node only read lower bits): G is on iff its operand holds on
        // all of L, F iff on some letter of L.
        const std::uint64_t sets = std::uint64_t{1} << atom_sets;
        for (std::uint64_t ls = 1; ls < sets; ++ls)
          {
            std::vector<std::uint64_t> letters;
            for (std::uint64_t a = 0; a < atom_sets; ++a)
              if ((ls >> a) & 1)
                letters.push_back(a);
            std::uint64_t m = 0;
            for (std::size_t b = 0; b < nm; ++b)
              {
                std::size_t n = c.modal_node[b];
                bool box = c.op[n] == POp::Box;
                bool on = box;
                for (auto a : letters)
                  {
                    c.eval(a, m, val);
                    bool operand = val[c.kids[n][0]] != 0;
                    if (box && !operand)
                      on = false;
                    if (!box && operand)
                      on = true;
                  }
                if (on)
                  m |= std::uint64_t{1} << b;
              }
            bool ok = true;
            for (auto a : letters)
              {
                c.eval(a, m, val);
                ok = ok && c.axioms_hold(val);
              }
            if (ok)
              loops.emplace(m, letters);
          }
      }
    else
      for (std::uint64_t m = 0; m < valuations; ++m)
      {
        std::vector<std::uint64_t> allowed;
        std::vector<std::vector<char>> values;
        for (std::uint64_t a = 0; a < atom_sets; ++a)
          {
            c.eval(a, m, val);
            if (!c.axioms_hold(val))
              continue;
            bool ok = true;
            for (std::size_t b = 0; b < nm && ok; ++b)
              {
                std::size_t n = c.modal_node[b];
                bool on = (m >> b) & 1;
                bool operand = val[c.kids[n][0]];
                if (c.op[n] == POp::Box && on && !operand)
                  ok = false;
                if (c.op[n] == POp::Diamond && !on && operand)
                  ok = false;
              }
            if (ok)
              {
                allowed.push_back(a);
                values.push_back(val);
              }
          }
        if (allowed.empty())
          continue;
        std::vector<std::uint64_t> loop{allowed.front()};
        bool realizable = true;
        for (std::size_t b = 0; b < nm && realizable; ++b)
          {
            std::size_t n = c.modal_node[b];
            bool on = (m >> b) & 1;
            // A true F needs a letter with the operand; a false G a
            // letter without it.
            bool want;
            if (c.op[n] == POp::Diamond && on)
              want = true;
            else if (c.op[n] == POp::Box && !on)
              want = false;
            else
              continue;
            bool found = false;
            for (std::size_t i = 0; i < allowed.size() && !found; ++i)
              if ((values[i][c.kids[n][0]] != 0) == want)
                {
                  found = true;
                  if (std::find(loop.begin(), loop.end(), allowed[i]) == loop.end())
                    loop.push_back(allowed[i]);
                }
            realizable = found;
          }
        if (realizable)
          loops.emplace(m, std::move(loop));
      }

    // Free positions beyond the data: close under backward steps.
    std::unordered_map<std::uint64_t, origin> free;
    std::deque<std::uint64_t> work;
    for (const auto& [m, loop] : loops)
      {
        free.emplace(m, origin{0, 0, true});
        work.push_back(m);
      }
    while (!work.empty())
      {
        std::uint64_t v = work.front();
        work.pop_front();
        for (std::uint64_t a = 0; a < atom_sets; ++a)
          {
            c.eval(a, v, val);
            if (!c.axioms_hold(val))
              continue;
            std::uint64_t prev = c.step(v, val);
            if (free.emplace(prev, origin{a, v, false}).second)
              work.push_back(prev);
          }
      }

    // Data positions maxD down to 0.
    const std::size_t maxd = d.max_timestamp();
    std::vector<std::uint64_t> required(maxd + 1, 0);
    for (const auto& f : d.facts())
      {
        auto it = std::find(c.atoms.begin(), c.atoms.end(), f.atom);
        required[f.time] |= std::uint64_t{1} << (it - c.atoms.begin());
      }
    // layer[n]: valuations possible at position n, with their origin.
    std::vector<std::unordered_map<std::uint64_t, origin>> layer(maxd + 1);
    for (const auto& [v, from] : free)
      layer[maxd].emplace(v, from);
    std::optional<std::pair<std::uint64_t, std::uint64_t>> start;  // (a, v)
    for (std::size_t n = maxd + 1; n-- > 0 && !start;)
      for (const auto& [v, from] : layer[n])
        {
          for (std::uint64_t a = 0; a < atom_sets; ++a)
            {
              if ((a & required[n]) != required[n])
                continue;
              c.eval(a, v, val);
              if (!c.axioms_hold(val))
                continue;
              if (n == 0)
                {
                  if (!c.query || !val[*c.query])
                    {
                      start = std::make_pair(a, v);
                      break;
                    }
                  continue;
                }
              layer[n - 1].emplace(c.step(v, val), origin{a, v, false});
            }
          if (start)
            break;
        }
    if (!start)
      return std::nullopt;

    // Reconstruct the lasso.
    auto decode = [&](std::uint64_t a) {
      std::set<std::string> s;
      for (std::size_t i = 0; i < na; ++i)
        if ((a >> i) & 1)
          s.insert(c.atoms[i]);
      return s;
    };
    LassoModel model;
    model.prefix.push_back(decode(start->first));
    std::uint64_t v = start->second;
    for (std::size_t n = 0; n < maxd; ++n)
      {
        const origin& from = layer[n].at(v);
        model.prefix.push_back(decode(from.atoms));
        v = from.next_val;
      }
    for (;;)
      {
        const origin& from = free.at(v);
        if (from.tail)
          break;
        model.prefix.push_back(decode(from.atoms));
        v = from.next_val;
      }
    for (auto a : loops.at(v))
      model.loop.push_back(decode(a));
    return model;
  }

  bool prior_consistent(const PriorOntology& o, const DataInstance& d)
  {
    return prior_countermodel(o, d).has_value();
  }

  bool prior_entails(const PriorOntology& o, const DataInstance& d,
                     const Query& q)
  {
    return !prior_countermodel(o, d, q).has_value();
  }
}
