// The separability engine: given positive and negative examples, a
// query class and optionally an ontology, decide whether some query of
// the class is certain at 0 on every positive and on no negative, and
// produce such a query.

#pragma once

#include "ltlqbe/core.hpp"
#include "ltlqbe/horn.hpp"
#include "ltlqbe/prior.hpp"
#include "ltlqbe/tsys.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ltlqbe
{
  struct Problem
  {
    QueryClass cls = QueryClass::PathDiamond;
    ExampleSet examples;
    std::optional<HornOntology> horn;
    std::optional<PriorOntology> prior;
  };

  struct Verdict
  {
    bool separable = false;
    std::optional<Query> witness;
    // Which route or preprocessing produced the verdict.
    std::string note;
    std::map<std::string, std::size_t> stats;
  };

  struct DecideOptions
  {
    // Greedily weaken the witness while it still separates.
    bool minimize = false;
    // Worker threads for per-negative subproblems.
    unsigned jobs = 1;
    // Use the Horn search over the common k/m normalization instead of
    // the per-instance least models for path classes.
    bool horn_search = false;
    // Cap on search nodes of the path searches.
    std::size_t node_cap = 5000000;
    // Cap on candidate letters tried by the Prior path search.
    std::size_t prior_node_cap = 20000;
  };

  // Signature of a problem: atoms of the examples and of the ontology
  // (without atoms introduced by F-elimination).
  Signature problem_signature(const Problem& p);

  // Certain truth of q at 0 on d under the problem's ontology.
  bool entailed(const Problem& p, const DataInstance& d, const Query& q);

  // True iff q belongs to p.cls, is certain on every consistent
  // positive and on no negative.
  bool separates(const Problem& p, const Query& q);

  Verdict decide(const Problem& p, const DecideOptions& opt = {});

  // Search over the path shapes on ultimately periodic words.  Each
  // step appends an F or X step whose letter is the intersection of
  // the positives' labels at their guessed positions; every negative
  // keeps the set of points where the query built so far can be
  // matched, and the search accepts when all these sets are empty.
  struct PathSearchOptions
  {
    // Letters after the first must be nonempty (common subsequences).
    bool nonempty_letters = false;
    // Exactly one leading F followed by X steps only (common subwords);
    // requires PathDiamondCircBlocks.
    bool single_diamond = false;
    std::size_t node_cap = 5000000;
  };

  Verdict dp_path(const std::vector<Timeline>& positives,
                  const std::vector<Timeline>& negatives,
                  const Signature& sig, QueryClass cls,
                  const PathSearchOptions& opt = {});

  // The same search on the k/m normalization of the Horn least models,
  // with letters read off certain answers.  Requires consistency.
  Verdict horn_diamond_search(const HornOntology& o, const ExampleSet& e,
                              const Signature& sig, QueryClass cls,
                              const PathSearchOptions& opt = {});

  // Until classes via representation systems: containment for path
  // Until, simulation for simple Until and colored simulation for full
  // Until.
  Verdict decide_until_family(const ExampleSet& e,
                              const std::optional<HornOntology>& o,
                              const Signature& sig, QueryClass cls);

  Query query_from_run(const Run& r, const Signature& sig);
  Query query_from_tree(const Tree& t, const Signature& sig, bool colored);

  // Bounded search for F-path separators under a Prior ontology; the
  // branch class is split per negative.
  Verdict prior_path_search(const PriorOntology& o, const ExampleSet& e,
                            const Signature& sig, QueryClass cls,
                            std::size_t node_cap = 20000);

  // Greedy weakening: replaces subqueries by true while the result
  // still separates p.
  Query minimize_witness(const Problem& p, const Query& q);
}
