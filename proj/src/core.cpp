// Core domain types and evaluators.

#include "ltlqbe/core.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <unordered_map>

namespace ltlqbe
{
  parse_error::parse_error(const std::string& msg, std::size_t line,
                           std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column)
                         + ": " + msg),
      line_(line), column_(column)
  {
  }

  // ----------------------------------------------------------------
  // Atoms and signatures
  // ----------------------------------------------------------------

  bool is_reserved_word(const std::string& s)
  {
    static const std::set<std::string> reserved = {"X", "F", "G", "U",
                                                   "true", "false"};
    return reserved.count(s) != 0;
  }

  bool is_valid_atom_name(const std::string& s)
  {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0])))
      return false;
    for (char c : s)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
        return false;
    return !is_reserved_word(s);
  }

  Signature::Signature(const std::vector<std::string>& names)
  {
    for (const auto& n : names)
      {
        if (find(n))
          throw usage_error("duplicate atom " + n + " in signature");
        add(n);
      }
  }

  std::size_t Signature::add(const std::string& name)
  {
    if (auto i = find(name))
      return *i;
    if (names_.size() >= max_signature_size)
      throw resource_limit("signature exceeds "
                           + std::to_string(max_signature_size) + " atoms");
    names_.push_back(name);
    return names_.size() - 1;
  }

  std::optional<std::size_t> Signature::find(const std::string& name) const
  {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end())
      return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
  }

  std::size_t Signature::id(const std::string& name) const
  {
    if (auto i = find(name))
      return *i;
    throw usage_error("atom '" + name + "' is not in the signature");
  }

  atom_set Signature::all() const
  {
    return names_.size() == 64 ? ~atom_set{0}
                               : (atom_set{1} << names_.size()) - 1;
  }

  atom_set Signature::encode(const std::set<std::string>& atoms) const
  {
    atom_set s = 0;
    for (const auto& a : atoms)
      if (auto i = find(a))
        s |= atom_set{1} << *i;
    return s;
  }

  std::set<std::string> Signature::decode(atom_set s) const
  {
    std::set<std::string> out;
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (s & (atom_set{1} << i))
        out.insert(names_[i]);
    return out;
  }

  std::string Signature::format(atom_set s) const
  {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (s & (atom_set{1} << i))
        {
          out += (first ? "" : ",") + names_[i];
          first = false;
        }
    if (s & bottom_bit)
      out += first ? "false" : ",false";
    return out + "}";
  }

  // ----------------------------------------------------------------
  // Data instances, example sets, lassos
  // ----------------------------------------------------------------

  DataInstance::DataInstance(const std::vector<Fact>& facts, std::string nm)
    : name(std::move(nm))
  {
    for (const auto& f : facts)
      {
        if (!is_valid_atom_name(f.atom))
          throw usage_error("invalid atom name '" + f.atom + "'");
        facts_.insert(f);
        max_ = std::max(max_, f.time);
      }
  }

  bool DataInstance::holds(const std::string& atom, std::size_t t) const
  {
    return facts_.count(Fact{atom, t}) != 0;
  }

  std::set<std::string> DataInstance::atoms() const
  {
    std::set<std::string> out;
    for (const auto& f : facts_)
      out.insert(f.atom);
    return out;
  }

  std::set<std::string> DataInstance::atoms_at(std::size_t t) const
  {
    std::set<std::string> out;
    for (const auto& f : facts_)
      if (f.time == t)
        out.insert(f.atom);
    return out;
  }

  std::set<std::string> ExampleSet::atoms() const
  {
    std::set<std::string> out;
    for (const auto* list : {&positives, &negatives})
      for (const auto& d : *list)
        for (const auto& f : d.facts())
          out.insert(f.atom);
    return out;
  }

  std::size_t LassoModel::fold(std::size_t n) const
  {
    if (loop.empty())
      throw usage_error("lasso with an empty loop");
    if (n < pre() + per())
      return n;
    return pre() + (n - pre()) % per();
  }

  const std::set<std::string>& LassoModel::at(std::size_t n) const
  {
    std::size_t k = fold(n);
    return k < pre() ? prefix[k] : loop[k - pre()];
  }

  std::set<std::string> LassoModel::atoms() const
  {
    std::set<std::string> out;
    for (const auto* part : {&prefix, &loop})
      for (const auto& s : *part)
        out.insert(s.begin(), s.end());
    return out;
  }

  LassoModel lasso_of(const DataInstance& d)
  {
    LassoModel m;
    m.prefix.resize(d.max_timestamp() + 1);
    for (const auto& f : d.facts())
      m.prefix[f.time].insert(f.atom);
    m.loop.resize(1);
    return m;
  }

  Timeline make_timeline(const LassoModel& m, const Signature& sig)
  {
    if (m.loop.empty())
      throw usage_error("lasso with an empty loop");
    Timeline t;
    for (const auto& s : m.prefix)
      t.labels.push_back(sig.encode(s));
    for (const auto& s : m.loop)
      t.labels.push_back(sig.encode(s));
    t.loop_start = m.pre();
    return t;
  }

  Timeline make_timeline(const DataInstance& d, const Signature& sig)
  {
    Timeline t;
    t.labels.assign(d.max_timestamp() + 2, 0);
    for (const auto& f : d.facts())
      if (auto i = sig.find(f.atom))
        t.labels[f.time] |= atom_set{1} << *i;
    t.loop_start = d.max_timestamp() + 1;
    return t;
  }

  // ----------------------------------------------------------------
  // Queries
  // ----------------------------------------------------------------

  namespace
  {
    Query make(Op op, std::string name, std::vector<Query> kids)
    {
      auto n = std::make_shared<QueryNode>();
      n->op = op;
      n->name = std::move(name);
      n->kids = std::move(kids);
      switch (op)
        {
        case Op::Top:
          n->key = "1";
          break;
        case Op::Bot:
          n->key = "0";
          break;
        case Op::Atom:
          n->key = n->name;
          break;
        case Op::And:
          {
            std::vector<std::string> ks;
            for (const auto& k : n->kids)
              ks.push_back(k.key());
            std::sort(ks.begin(), ks.end());
            n->key = "&(";
            for (std::size_t i = 0; i < ks.size(); ++i)
              n->key += (i ? "," : "") + ks[i];
            n->key += ")";
            break;
          }
        case Op::Next:
          n->key = "X(" + n->kids[0].key() + ")";
          break;
        case Op::Diamond:
          n->key = "F(" + n->kids[0].key() + ")";
          break;
        case Op::Until:
          n->key = "U(" + n->kids[0].key() + "," + n->kids[1].key() + ")";
          break;
        }
      return Query(std::shared_ptr<const QueryNode>(std::move(n)));
    }

    const Query& top_singleton()
    {
      static const Query t = make(Op::Top, "", {});
      return t;
    }
  }

  Query::Query() : n_(top_singleton().n_) {}

  Op Query::op() const { return n_->op; }
  const std::string& Query::name() const { return n_->name; }
  const std::vector<Query>& Query::children() const { return n_->kids; }
  const Query& Query::body() const { return n_->kids.at(0); }
  const Query& Query::left() const { return n_->kids.at(0); }
  const Query& Query::right() const { return n_->kids.at(1); }
  const std::string& Query::key() const { return n_->key; }

  Query q_top() { return top_singleton(); }

  Query q_bot()
  {
    static const Query b = make(Op::Bot, "", {});
    return b;
  }

  Query q_atom(const std::string& name)
  {
    if (!is_valid_atom_name(name))
      throw usage_error("invalid atom name '" + name + "'");
    return make(Op::Atom, name, {});
  }

  Query q_and(const std::vector<Query>& qs)
  {
    std::vector<Query> flat;
    std::set<std::string> seen;
    auto push = [&](const Query& q) {
      if (q.op() == Op::Top)
        return;
      if (seen.insert(q.key()).second)
        flat.push_back(q);
    };
    for (const auto& q : qs)
      {
        if (q.op() == Op::And)
          for (const auto& k : q.children())
            push(k);
        else
          push(q);
      }
    if (flat.empty())
      return q_top();
    if (flat.size() == 1)
      return flat[0];
    return make(Op::And, "", std::move(flat));
  }

  Query q_and(const Query& a, const Query& b) { return q_and({a, b}); }
  Query q_next(const Query& q) { return make(Op::Next, "", {q}); }
  Query q_diamond(const Query& q) { return make(Op::Diamond, "", {q}); }
  Query q_until(const Query& l, const Query& r)
  {
    return make(Op::Until, "", {l, r});
  }

  std::vector<Query> conjuncts(const Query& q)
  {
    if (q.op() == Op::And)
      return q.children();
    if (q.op() == Op::Top)
      return {};
    return {q};
  }

  // ----------------------------------------------------------------
  // Parsing and printing
  // ----------------------------------------------------------------

  namespace
  {
    class query_parser
    {
    public:
      explicit query_parser(const std::string& s) : s_(s) {}

      Query parse()
      {
        Query q = until_expr();
        skip();
        if (pos_ < s_.size())
          fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return q;
      }

    private:
      const std::string& s_;
      std::size_t pos_ = 0;

      [[noreturn]] void fail(const std::string& msg) const
      {
        throw parse_error(msg, 1, pos_ + 1);
      }

      void skip()
      {
        while (pos_ < s_.size()
               && std::isspace(static_cast<unsigned char>(s_[pos_])))
          ++pos_;
      }

      // Reads an identifier without consuming it.
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

      Query until_expr()
      {
        Query l = and_expr();
        if (peek_word() == "U")
          {
            ++pos_;
            Query r = until_expr();
            return q_until(l, r);
          }
        return l;
      }

      Query and_expr()
      {
        std::vector<Query> parts{unary()};
        for (;;)
          {
            skip();
            if (pos_ < s_.size() && s_[pos_] == '&')
              {
                ++pos_;
                parts.push_back(unary());
              }
            else
              break;
          }
        return parts.size() == 1 ? parts[0] : q_and(parts);
      }

      Query unary()
      {
        std::string w = peek_word();
        if (w == "X")
          {
            ++pos_;
            return q_next(unary());
          }
        if (w == "F")
          {
            ++pos_;
            return q_diamond(unary());
          }
        return primary();
      }

      Query primary()
      {
        skip();
        if (pos_ >= s_.size())
          fail("unexpected end of query");
        if (s_[pos_] == '(')
          {
            ++pos_;
            Query q = until_expr();
            skip();
            if (pos_ >= s_.size() || s_[pos_] != ')')
              fail("expected ')'");
            ++pos_;
            return q;
          }
        std::string w = peek_word();
        if (w.empty())
          fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        if (w == "true" || w == "false")
          {
            pos_ += w.size();
            return w == "true" ? q_top() : q_bot();
          }
        if (!is_valid_atom_name(w))
          fail("'" + w + "' is not a valid atom name");
        pos_ += w.size();
        return q_atom(w);
      }
    };

    // Precedence contexts: 0 = operand of nothing / right of U,
    // 1 = conjunct or left of U, 2 = operand of X or F.
    std::string print(const Query& q, int ctx)
    {
      switch (q.op())
        {
        case Op::Top:
          return "true";
        case Op::Bot:
          return "false";
        case Op::Atom:
          return q.name();
        case Op::And:
          {
            std::string s;
            for (std::size_t i = 0; i < q.children().size(); ++i)
              s += (i ? " & " : "") + print(q.children()[i], 1);
            return ctx >= 2 ? "(" + s + ")" : s;
          }
        case Op::Next:
        case Op::Diamond:
          {
            std::string op = q.op() == Op::Next ? "X" : "F";
            std::string b = print(q.body(), 2);
            return b.front() == '(' ? op + b : op + " " + b;
          }
        case Op::Until:
          {
            std::string s = print(q.left(), 1) + " U " + print(q.right(), 0);
            return ctx >= 1 ? "(" + s + ")" : s;
          }
        }
      return {};
    }
  }

  Query parse_query(const std::string& text)
  {
    return query_parser(text).parse();
  }

  std::string to_string(const Query& q) { return print(q, 0); }

  std::size_t temporal_depth(const Query& q)
  {
    std::size_t d = 0;
    for (const auto& k : q.children())
      d = std::max(d, temporal_depth(k));
    switch (q.op())
      {
      case Op::Next:
      case Op::Diamond:
      case Op::Until:
        return d + 1;
      default:
        return d;
      }
  }

  std::size_t query_size(const Query& q)
  {
    std::size_t s = 1;
    for (const auto& k : q.children())
      s += query_size(k);
    return s;
  }

  std::set<std::string> atoms_of(const Query& q)
  {
    std::set<std::string> out;
    if (q.op() == Op::Atom)
      out.insert(q.name());
    for (const auto& k : q.children())
      {
        auto s = atoms_of(k);
        out.insert(s.begin(), s.end());
      }
    return out;
  }

  bool has_until(const Query& q)
  {
    if (q.op() == Op::Until)
      return true;
    for (const auto& k : q.children())
      if (has_until(k))
        return true;
    return false;
  }

  // ----------------------------------------------------------------
  // Classification
  // ----------------------------------------------------------------

  namespace
  {
    // true U q reads as F q and false U q as X q.
    Op view(const Query& q)
    {
      if (q.op() == Op::Until)
        {
          if (q.left().op() == Op::Top)
            return Op::Diamond;
          if (q.left().op() == Op::Bot)
            return Op::Next;
        }
      return q.op();
    }

    const Query& operand(const Query& q)
    {
      return q.op() == Op::Until ? q.right() : q.body();
    }

    bool is_letter(const Query& q)
    {
      return q.op() == Op::Top || q.op() == Op::Bot || q.op() == Op::Atom;
    }

    bool atomic_conj(const Query& q)
    {
      if (q.op() == Op::And)
        return std::all_of(q.children().begin(), q.children().end(),
                           is_letter);
      return is_letter(q);
    }

    // Splits conjuncts into letters and temporal parts.
    std::vector<Query> temporal_conjuncts(const Query& q)
    {
      std::vector<Query> out;
      for (const auto& c : conjuncts(q))
        if (!is_letter(c))
          out.push_back(c);
      return out;
    }

    bool path_nd(const Query& q, bool allow_next)
    {
      auto t = temporal_conjuncts(q);
      if (t.empty())
        return true;
      if (t.size() > 1)
        return false;
      Op v = view(t[0]);
      if (v == Op::Diamond || (allow_next && v == Op::Next))
        return path_nd(operand(t[0]), allow_next);
      return false;
    }

    bool next_chain(const Query& q)
    {
      auto t = temporal_conjuncts(q);
      if (t.empty())
        return true;
      return t.size() == 1 && view(t[0]) == Op::Next
             && next_chain(operand(t[0]));
    }

    bool circ_blocks(const Query& q)
    {
      int nexts = 0;
      int diamonds = 0;
      for (const auto& c : temporal_conjuncts(q))
        {
          Op v = view(c);
          if (v == Op::Next && next_chain(operand(c)))
            ++nexts;
          else if (v == Op::Diamond && circ_blocks(operand(c)))
            ++diamonds;
          else
            return false;
        }
      return nexts <= 1 && diamonds <= 1;
    }

    bool branch(const Query& q, bool allow_next)
    {
      if (is_letter(q))
        return true;
      if (q.op() == Op::And)
        return std::all_of(q.children().begin(), q.children().end(),
                           [&](const Query& k) { return branch(k, allow_next); });
      Op v = view(q);
      if (v == Op::Diamond || (allow_next && v == Op::Next))
        return branch(operand(q), allow_next);
      return false;
    }

    bool path_until(const Query& q)
    {
      auto t = temporal_conjuncts(q);
      if (t.empty())
        return true;
      if (t.size() > 1)
        return false;
      const Query& c = t[0];
      if (c.op() == Op::Until)
        return atomic_conj(c.left()) && path_until(c.right());
      return path_until(c.body());
    }

    bool simple_until(const Query& q)
    {
      if (q.op() == Op::Until && !atomic_conj(q.left()))
        return false;
      return std::all_of(q.children().begin(), q.children().end(),
                         simple_until);
    }
  }

  const std::vector<QueryClass>& all_query_classes()
  {
    static const std::vector<QueryClass> all = {
      QueryClass::PathDiamond,   QueryClass::PathNextDiamond,
      QueryClass::PathDiamondCircBlocks, QueryClass::BranchDiamond,
      QueryClass::BranchNextDiamond, QueryClass::PathUntil,
      QueryClass::SimpleUntil,   QueryClass::FullUntil};
    return all;
  }

  std::string to_string(QueryClass c)
  {
    switch (c)
      {
      case QueryClass::PathDiamond:
        return "path-diamond";
      case QueryClass::PathNextDiamond:
        return "path-next-diamond";
      case QueryClass::PathDiamondCircBlocks:
        return "path-diamond-blocks";
      case QueryClass::BranchDiamond:
        return "branch-diamond";
      case QueryClass::BranchNextDiamond:
        return "branch-next-diamond";
      case QueryClass::PathUntil:
        return "path-until";
      case QueryClass::SimpleUntil:
        return "simple-until";
      case QueryClass::FullUntil:
        return "full-until";
      }
    return "?";
  }

  QueryClass parse_query_class(const std::string& s)
  {
    for (auto c : all_query_classes())
      if (to_string(c) == s)
        return c;
    throw usage_error("unknown query class '" + s + "'");
  }

  bool in_class(const Query& q, QueryClass c)
  {
    switch (c)
      {
      case QueryClass::PathDiamond:
        return path_nd(q, false);
      case QueryClass::PathNextDiamond:
        return path_nd(q, true);
      case QueryClass::PathDiamondCircBlocks:
        return circ_blocks(q);
      case QueryClass::BranchDiamond:
        return branch(q, false);
      case QueryClass::BranchNextDiamond:
        return branch(q, true);
      case QueryClass::PathUntil:
        return path_until(q);
      case QueryClass::SimpleUntil:
        return simple_until(q);
      case QueryClass::FullUntil:
        return true;
      }
    return false;
  }

  std::set<QueryClass> classify(const Query& q)
  {
    std::set<QueryClass> out;
    for (auto c : all_query_classes())
      if (in_class(q, c))
        out.insert(c);
    return out;
  }

  bool conjunction_closed(QueryClass c)
  {
    return c == QueryClass::BranchDiamond
           || c == QueryClass::BranchNextDiamond
           || c == QueryClass::SimpleUntil || c == QueryClass::FullUntil;
  }

  // ----------------------------------------------------------------
  // Evaluation
  // ----------------------------------------------------------------

  namespace
  {
    // Finite truth tables on positions 0..h; values near h may be
    // under-approximated, which never matters for positions whose
    // witnesses lie within the horizon.
    using table = std::vector<char>;

    table data_table(const DataInstance& d, const Query& q, std::size_t h,
                     std::unordered_map<std::string, table>& memo)
    {
      if (auto it = memo.find(q.key()); it != memo.end())
        return it->second;
      table t(h + 1, 0);
      switch (q.op())
        {
        case Op::Top:
          std::fill(t.begin(), t.end(), 1);
          break;
        case Op::Bot:
          break;
        case Op::Atom:
          for (const auto& f : d.facts())
            if (f.atom == q.name() && f.time <= h)
              t[f.time] = 1;
          break;
        case Op::And:
          std::fill(t.begin(), t.end(), 1);
          for (const auto& k : q.children())
            {
              table s = data_table(d, k, h, memo);
              for (std::size_t n = 0; n <= h; ++n)
                t[n] = t[n] && s[n];
            }
          break;
        case Op::Next:
          {
            table s = data_table(d, q.body(), h, memo);
            for (std::size_t n = 0; n < h; ++n)
              t[n] = s[n + 1];
            break;
          }
        case Op::Diamond:
        case Op::Until:
          {
            table phi(h + 1, 1);
            if (q.op() == Op::Until)
              phi = data_table(d, q.left(), h, memo);
            table psi = data_table(d, q.op() == Op::Until ? q.right()
                                                          : q.body(),
                                   h, memo);
            for (std::size_t n = 0; n <= h; ++n)
              for (std::size_t m = n + 1; m <= h; ++m)
                {
                  if (psi[m])
                    {
                      t[n] = 1;
                      break;
                    }
                  if (!phi[m])
                    break;
                }
            break;
          }
        }
      memo.emplace(q.key(), t);
      return t;
    }

    std::vector<char> eval_rec(const Timeline& tl, const Signature& sig,
                               const Query& q,
                               std::unordered_map<std::string,
                                                  std::vector<char>>& memo)
    {
      if (auto it = memo.find(q.key()); it != memo.end())
        return it->second;
      const std::size_t n = tl.size();
      std::vector<char> r(n, 0);
      switch (q.op())
        {
        case Op::Top:
          std::fill(r.begin(), r.end(), 1);
          break;
        case Op::Bot:
          break;
        case Op::Atom:
          if (auto i = sig.find(q.name()))
            for (std::size_t k = 0; k < n; ++k)
              r[k] = (tl.labels[k] >> *i) & 1;
          break;
        case Op::And:
          std::fill(r.begin(), r.end(), 1);
          for (const auto& c : q.children())
            {
              auto s = eval_rec(tl, sig, c, memo);
              for (std::size_t k = 0; k < n; ++k)
                r[k] = r[k] && s[k];
            }
          break;
        case Op::Next:
          {
            auto s = eval_rec(tl, sig, q.body(), memo);
            for (std::size_t k = 0; k < n; ++k)
              r[k] = s[tl.next(k)];
            break;
          }
        case Op::Diamond:
        case Op::Until:
          {
            std::vector<char> phi(n, 1);
            if (q.op() == Op::Until)
              phi = eval_rec(tl, sig, q.left(), memo);
            auto psi = eval_rec(tl, sig,
                                q.op() == Op::Until ? q.right() : q.body(),
                                memo);
            // Least fixpoint of r(k) = psi(k+1) | (phi(k+1) & r(k+1)).
            bool changed = true;
            while (changed)
              {
                changed = false;
                for (std::size_t k = n; k-- > 0;)
                  {
                    std::size_t s = tl.next(k);
                    if (!r[k] && (psi[s] || (phi[s] && r[s])))
                      {
                        r[k] = 1;
                        changed = true;
                      }
                  }
              }
            break;
          }
        }
      memo.emplace(q.key(), r);
      return r;
    }
  }

  bool eval_data(const DataInstance& d, const Query& q, std::size_t at)
  {
    std::size_t h = std::max(d.max_timestamp(), at) + temporal_depth(q) + 1;
    std::unordered_map<std::string, table> memo;
    return data_table(d, q, h, memo)[at];
  }

  std::vector<char> eval_timeline(const Timeline& t, const Signature& sig,
                                  const Query& q)
  {
    std::unordered_map<std::string, std::vector<char>> memo;
    return eval_rec(t, sig, q, memo);
  }

  bool eval_lasso(const LassoModel& m, const Query& q, std::size_t at)
  {
    if (m.loop.empty())
      throw usage_error("lasso with an empty loop");
    if (at >= m.pre() + m.per())
      throw usage_error("evaluation point outside the lasso");
    auto atoms = m.atoms();
    Signature sig(std::vector<std::string>(atoms.begin(), atoms.end()));
    return eval_timeline(make_timeline(m, sig), sig, q)[at];
  }

  // ----------------------------------------------------------------
  // Normalization of X/F queries into block paths
  // ----------------------------------------------------------------

  namespace
  {
    // A query in block form: letters required at fixed offsets from
    // the current point, plus eventualities evaluated from it.
    struct block_form
    {
      std::map<std::size_t, std::vector<Query>> at;
      std::vector<block_form> later;
    };

    block_form shift(block_form b, std::size_t k)
    {
      block_form out;
      for (auto& [off, ls] : b.at)
        out.at[off + k] = ls;
      for (auto& l : b.later)
        out.later.push_back(shift(l, k));
      return out;
    }

    void merge(block_form& into, const block_form& b)
    {
      for (const auto& [off, ls] : b.at)
        {
          auto& v = into.at[off];
          v.insert(v.end(), ls.begin(), ls.end());
        }
      into.later.insert(into.later.end(), b.later.begin(), b.later.end());
    }

    block_form to_block(const Query& q)
    {
      block_form b;
      switch (q.op())
        {
        case Op::Top:
          break;
        case Op::Bot:
        case Op::Atom:
          b.at[0].push_back(q);
          break;
        case Op::And:
          for (const auto& k : q.children())
            merge(b, to_block(k));
          break;
        case Op::Next:
          // X(p & F r) == X p & F X r
          b = shift(to_block(q.body()), 1);
          break;
        case Op::Diamond:
          b.later.push_back(to_block(q.body()));
          break;
        case Op::Until:
          throw usage_error("normalize_next_diamond: query contains U");
        }
      return b;
    }

    Query next_path(const std::map<std::size_t, std::vector<Query>>& at)
    {
      if (at.empty())
        return q_top();
      std::size_t hi = at.rbegin()->first;
      Query q = q_top();
      for (std::size_t off = hi + 1; off-- > 0;)
        {
          std::vector<Query> parts;
          if (auto it = at.find(off); it != at.end())
            parts = it->second;
          if (off < hi)
            parts.push_back(q_next(q));
          q = q_and(parts);
        }
      return q;
    }

    // F(p & F a & F b) == F(p & F a) & F(p & F b): the eventualities
    // are antitone in time, so the earliest witness of p serves all.
    std::vector<Query> paths(const block_form& b)
    {
      Query head = next_path(b.at);
      if (b.later.empty())
        return {head};
      std::vector<Query> out;
      for (const auto& l : b.later)
        for (const auto& p : paths(l))
          out.push_back(q_and(head, q_diamond(p)));
      return out;
    }
  }

  std::vector<Query> normalize_next_diamond(const Query& q)
  {
    std::vector<Query> out;
    std::set<std::string> seen;
    for (const auto& p : paths(to_block(q)))
      if (seen.insert(p.key()).second)
        out.push_back(p);
    return out;
  }
}
