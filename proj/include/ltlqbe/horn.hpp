// Horn temporal ontologies: axioms C1 & ... & Ck -> C whose literals
// are atoms or false under a prefix of G (always, strictly later) and
// X (next).  Body literals may additionally start with one F; such a
// literal F C is replaced at load time by a fresh atom Z together with
// the axioms X C -> Z and X Z -> Z.
//
// Every consistent (ontology, data) pair has a least model, which is
// ultimately periodic: from max timestamp + s on, the atoms repeat with
// period p.  Certain answers to positive queries are their truth values
// in that model.

#pragma once

#include "ltlqbe/core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ltlqbe
{
  enum class LitOp
  {
    Box,
    Next
  };

  struct HornLiteral
  {
    std::vector<LitOp> prefix;  // outermost first
    std::string atom;           // ignored when bottom
    bool bottom = false;
    bool diamond = false;       // leading F; only before loading

    std::string to_string() const;
  };

  struct HornAxiom
  {
    std::vector<HornLiteral> body;
    HornLiteral head;

    std::string to_string() const;
  };

  struct HornOntology
  {
    std::vector<HornAxiom> axioms;
    // Number of symbols of the source text (atoms, operators, &, ->).
    std::size_t size = 0;
    // Atoms introduced by the F-elimination rewrite.
    std::set<std::string> fresh;

    // Atoms mentioned by the axioms, fresh ones included.
    std::set<std::string> atoms() const;
    // Atoms mentioned by the axioms, without fresh ones.
    std::set<std::string> user_atoms() const;
  };

  // One axiom per nonblank line; '#' starts a comment.
  HornOntology load_horn_ontology(const std::string& text);

  struct CanonicalModel
  {
    LassoModel lasso;       // over data atoms, ontology atoms and fresh atoms
    std::size_t max_timestamp = 0;
    std::size_t handle = 0;  // s: lasso.pre() == max_timestamp + s
    std::size_t period = 1;  // p: lasso.per() == p
    // The materialized window the lasso was read from (trusted part).
    std::vector<std::set<std::string>> window;
  };

  struct ChaseOptions
  {
    std::size_t initial_window = 64;  // added to the max timestamp
    std::size_t max_window = 1 << 16;
  };

  // The least model, or nullopt when the pair is inconsistent.
  std::optional<CanonicalModel>
  canonical_model(const HornOntology& o, const DataInstance& d,
                  const ChaseOptions& opt = {});

  bool horn_consistent(const HornOntology& o, const DataInstance& d);

  // Truth of q at `at` in the least model; throws usage_error when the
  // pair is inconsistent.
  bool certain_answer(const HornOntology& o, const DataInstance& d,
                      const Query& q, std::size_t at);

  // True iff every axiom holds at every position of m (literals are
  // evaluated on the infinite word m denotes).  Independent of the
  // chase; used to validate its output.
  bool is_model(const HornOntology& o, const LassoModel& m);

  struct DepthBounds
  {
    std::size_t k = 0;  // max over instances of max timestamp + s
    std::size_t m = 1;  // a common period: the lcm of the periods
  };

  // Throws usage_error if some instance is inconsistent with o.
  DepthBounds depth_bounds(const HornOntology& o, const ExampleSet& e);
}
