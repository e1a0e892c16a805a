// Prior-fragment ontologies: boolean combinations of atoms under the
// strict temporal operators G (always later) and F (eventually later).
// Consistency and certain answers to F-queries are decided by searching
// ultimately periodic models: in the periodic tail every G/F
// subformula has a constant truth value, and earlier positions are
// obtained by stepping that valuation backwards.

#pragma once

#include "ltlqbe/core.hpp"

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ltlqbe
{
  enum class POp
  {
    Top,
    Bot,
    Atom,
    Not,
    And,
    Or,
    Implies,
    Box,
    Diamond
  };

  struct PriorNode;

  // Immutable formula handle.
  class PriorFormula
  {
  public:
    explicit PriorFormula(std::shared_ptr<const PriorNode> n) : n_(std::move(n)) {}

    POp op() const;
    const std::string& name() const;  // Atom only
    const std::vector<PriorFormula>& children() const;
    // Structural key; equal formulas have equal keys.
    const std::string& key() const;

  private:
    std::shared_ptr<const PriorNode> n_;
  };

  struct PriorNode
  {
    POp op;
    std::string name;
    std::vector<PriorFormula> kids;
    std::string key;
  };

  PriorFormula p_make(POp op, std::vector<PriorFormula> kids = {},
                      std::string name = {});

  // Grammar: '->' (loosest, right-associative), '|', '&', then the unary
  // '!', 'G', 'F'; atoms, true, false and parentheses.  X is rejected.
  PriorFormula parse_prior_formula(const std::string& text);
  std::string to_string(const PriorFormula& f);

  struct PriorOntology
  {
    std::vector<PriorFormula> axioms;
    std::size_t size = 0;  // symbol count of the source text

    std::set<std::string> atoms() const;
  };

  // One axiom per nonblank line; '#' starts a comment.
  PriorOntology load_prior_ontology(const std::string& text);

  // Translates a query built from atoms, true, false, & and F.
  PriorFormula prior_of_query(const Query& q);

  // Truth of f at position `at` (< pre + per) of the word denoted by m.
  // Evaluated by fixpoints on the lasso, independently of the model
  // search below.
  bool prior_holds(const PriorFormula& f, const LassoModel& m, std::size_t at);

  // A model of o and d (all axioms at all positions, every fact of d
  // true) in which q, if given, is false at 0; nullopt if none exists.
  // The model is returned as a lasso over the atoms of o, d and q.
  std::optional<LassoModel>
  prior_countermodel(const PriorOntology& o, const DataInstance& d,
                     const std::optional<Query>& q = std::nullopt);

  bool prior_consistent(const PriorOntology& o, const DataInstance& d);

  // True iff q holds at 0 in every model of o and d (vacuously true
  // when they are inconsistent).  q must be built from atoms, true,
  // false, & and F.
  bool prior_entails(const PriorOntology& o, const DataInstance& d,
                     const Query& q);
}
