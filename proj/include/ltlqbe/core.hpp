// Core domain types: signatures, data instances, positive temporal
// queries, example sets, lasso models, and the strict-semantics
// evaluators over finite data and ultimately periodic words.
//
// All temporal operators are strict: X q holds at n iff q holds at
// n+1, F q iff q holds at some m > n, and p U q iff q holds at some
// m > n with p holding at every k strictly between n and m.  Hence
// X q is equivalent to false U q and F q to true U q.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ltlqbe
{
  // ----------------------------------------------------------------
  // Errors
  // ----------------------------------------------------------------

  // Malformed textual input (queries, ontologies, JSON documents).
  class parse_error : public std::runtime_error
  {
  public:
    parse_error(const std::string& msg, std::size_t line, std::size_t column);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
  };

  // A caller violated a documented precondition (wrong class, clash of
  // fresh names, unsupported combination...).
  class usage_error : public std::invalid_argument
  {
  public:
    using std::invalid_argument::invalid_argument;
  };

  // A configured search or construction cap was exceeded.
  class resource_limit : public std::runtime_error
  {
  public:
    using std::runtime_error::runtime_error;
  };

  // ----------------------------------------------------------------
  // Atoms and signatures
  // ----------------------------------------------------------------

  // Words that cannot be used as atom names in any of the grammars.
  bool is_reserved_word(const std::string& s);

  // True iff s matches [A-Za-z][A-Za-z0-9_]* and is not reserved.
  bool is_valid_atom_name(const std::string& s);

  // Atom sets are bit masks over a signature; bit 63 stands for the
  // falsum letter that edge labels of transition systems may carry.
  using atom_set = std::uint64_t;
  inline constexpr atom_set bottom_bit = atom_set{1} << 63;
  inline constexpr std::size_t max_signature_size = 63;

  inline bool subset_of(atom_set a, atom_set b) { return (a & ~b) == 0; }

  class Signature
  {
  public:
    Signature() = default;
    explicit Signature(const std::vector<std::string>& names);

    // Adds name if absent and returns its index.
    std::size_t add(const std::string& name);
    std::optional<std::size_t> find(const std::string& name) const;
    std::size_t id(const std::string& name) const;
    const std::string& name(std::size_t i) const { return names_[i]; }
    const std::vector<std::string>& names() const { return names_; }
    std::size_t size() const { return names_.size(); }

    // All atoms, without and with the falsum letter.
    atom_set all() const;
    atom_set all_with_bottom() const { return all() | bottom_bit; }

    atom_set encode(const std::set<std::string>& atoms) const;
    std::set<std::string> decode(atom_set s) const;
    // Human-readable rendering such as {A,B,false}.
    std::string format(atom_set s) const;

  private:
    std::vector<std::string> names_;
  };

  // ----------------------------------------------------------------
  // Data instances and example sets
  // ----------------------------------------------------------------

  struct Fact
  {
    std::string atom;
    std::size_t time = 0;
    auto operator<=>(const Fact&) const = default;
  };

  class DataInstance
  {
  public:
    DataInstance() = default;
    explicit DataInstance(const std::vector<Fact>& facts, std::string name = {});

    const std::set<Fact>& facts() const { return facts_; }
    std::size_t max_timestamp() const { return max_; }
    bool holds(const std::string& atom, std::size_t t) const;
    std::set<std::string> atoms() const;
    std::set<std::string> atoms_at(std::size_t t) const;
    bool empty() const { return facts_.empty(); }

    std::string name;

  private:
    std::set<Fact> facts_;
    std::size_t max_ = 0;
  };

  struct ExampleSet
  {
    std::vector<DataInstance> positives;
    std::vector<DataInstance> negatives;

    std::set<std::string> atoms() const;
  };

  // An ultimately periodic word: prefix positions 0..pre-1 followed by
  // the loop repeated forever.
  struct LassoModel
  {
    std::vector<std::set<std::string>> prefix;
    std::vector<std::set<std::string>> loop;

    std::size_t pre() const { return prefix.size(); }
    std::size_t per() const { return loop.size(); }
    // Atom set at an arbitrary timepoint of the denoted word.
    const std::set<std::string>& at(std::size_t n) const;
    // Folds an arbitrary timepoint into [0, pre+per).
    std::size_t fold(std::size_t n) const;
    std::set<std::string> atoms() const;
  };

  // The lasso denoted by plain data: atoms are false after the last
  // timestamp.
  LassoModel lasso_of(const DataInstance& d);

  // Internal encoding of a lasso as label masks; position n has the
  // successor n+1, except the last one whose successor is loop_start.
  struct Timeline
  {
    std::vector<atom_set> labels;
    std::size_t loop_start = 0;

    std::size_t size() const { return labels.size(); }
    std::size_t next(std::size_t n) const
    {
      return n + 1 < labels.size() ? n + 1 : loop_start;
    }
  };

  Timeline make_timeline(const LassoModel& m, const Signature& sig);
  Timeline make_timeline(const DataInstance& d, const Signature& sig);

  // ----------------------------------------------------------------
  // Queries
  // ----------------------------------------------------------------

  enum class Op
  {
    Top,
    Bot,
    Atom,
    And,
    Next,
    Diamond,
    Until
  };

  struct QueryNode;

  // Immutable, cheaply copyable handle on a query tree.
  class Query
  {
  public:
    Query();  // true

    Op op() const;
    const std::string& name() const;  // Atom only
    const std::vector<Query>& children() const;
    // Unary nodes: the operand.  Until: left() and right().
    const Query& body() const;
    const Query& left() const;
    const Query& right() const;

    // Canonical key: equal for queries equal up to conjunct order.
    const std::string& key() const;
    bool operator==(const Query& o) const { return key() == o.key(); }
    bool operator<(const Query& o) const { return key() < o.key(); }

    explicit Query(std::shared_ptr<const QueryNode> n) : n_(std::move(n)) {}

  private:
    std::shared_ptr<const QueryNode> n_;
  };

  struct QueryNode
  {
    Op op;
    std::string name;
    std::vector<Query> kids;
    std::string key;
  };

  Query q_top();
  Query q_bot();
  Query q_atom(const std::string& name);
  // Flattens nested conjunctions, drops true conjuncts and duplicates;
  // an empty list yields true and a singleton its only element.
  Query q_and(const std::vector<Query>& qs);
  Query q_and(const Query& a, const Query& b);
  Query q_next(const Query& q);
  Query q_diamond(const Query& q);
  Query q_until(const Query& l, const Query& r);

  // Conjuncts of q (q itself when q is not a conjunction).
  std::vector<Query> conjuncts(const Query& q);

  // Text syntax: identifiers, true, false, unary X and F (tightest),
  // & (middle) and right-associative U (loosest), parentheses.
  Query parse_query(const std::string& text);
  std::string to_string(const Query& q);

  std::size_t temporal_depth(const Query& q);
  std::size_t query_size(const Query& q);
  std::set<std::string> atoms_of(const Query& q);
  bool has_until(const Query& q);

  // ----------------------------------------------------------------
  // Query classes
  // ----------------------------------------------------------------

  enum class QueryClass
  {
    PathDiamond,            // r0 & F(r1 & F(...))
    PathNextDiamond,        // r0 & o1(r1 & o2(...)), o in {X, F}
    PathDiamondCircBlocks,  // r0 & F(r1 & F(...)), each ri an X-path
    BranchDiamond,          // atoms, &, F
    BranchNextDiamond,      // atoms, &, X, F
    PathUntil,              // r0 & (l1 U (r1 & (l2 U ...)))
    SimpleUntil,            // no U inside a left argument of U
    FullUntil               // unrestricted
  };

  const std::vector<QueryClass>& all_query_classes();
  std::string to_string(QueryClass c);
  // Accepts the command-line spellings (path-diamond, ...).
  QueryClass parse_query_class(const std::string& s);

  bool in_class(const Query& q, QueryClass c);
  std::set<QueryClass> classify(const Query& q);

  // Classes closed under conjunction.
  bool conjunction_closed(QueryClass c);

  // ----------------------------------------------------------------
  // Evaluation
  // ----------------------------------------------------------------

  // Truth of q at `at` in the interpretation making exactly d's facts
  // true.  Uses finite truth tables over a horizon past the last
  // timestamp.
  bool eval_data(const DataInstance& d, const Query& q, std::size_t at);

  // Truth of q at `at` (< pre + per) in the word denoted by m.
  bool eval_lasso(const LassoModel& m, const Query& q, std::size_t at);

  // Truth values of q at every position of a timeline; atoms absent
  // from sig are false everywhere.
  std::vector<char> eval_timeline(const Timeline& t, const Signature& sig,
                                  const Query& q);

  // Rewrites a query without Until into a list of queries of the shape
  // r0 & F(r1 & F(...)) with every ri an X-path, whose conjunction is
  // equivalent to q.
  std::vector<Query> normalize_next_diamond(const Query& q);
}
