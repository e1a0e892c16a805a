// Brute-force ground truth for separability.
//
// enumerate_queries lists the queries of a class syntactically.
// brute_force_decide works semantically: every query denotes a truth
// vector (its truth value at every point of every example word), and
// the vectors of a class are saturated under the class's constructors
// until no new vector appears.  A vector true at the origin of every
// positive and false at the origin of every negative is a separator;
// each vector keeps the first query that produced it.

#pragma once

#include "ltlqbe/qbe.hpp"

#include <optional>
#include <vector>

namespace ltlqbe
{
  // Queries of cls over sig of temporal depth at most max_depth in which
  // every conjunction has at most max_conjuncts conjuncts.  Letters are
  // true or conjunctions of atoms; false only appears as the left
  // argument of an Until.  Duplicate-free up to conjunct order.
  std::vector<Query> enumerate_queries(QueryClass cls, const Signature& sig,
                                       std::size_t max_depth,
                                       std::size_t max_conjuncts);

  struct OracleBounds
  {
    // Temporal depth bound; unset saturates to the fixpoint, which is
    // exact.  Ignored for path-diamond-blocks.
    std::optional<std::size_t> max_depth;
    // Cap on distinct truth vectors.
    std::size_t max_vectors = 400000;
    // Prior ontologies: depth bound (unset: the sufficiency bound of
    // default_depth_bound) and conjunct bound of the enumeration.
    std::size_t prior_conjuncts = 3;
  };

  // Depth sufficient for separation: max timestamp + 1 without an
  // ontology, k + m under Horn, max timestamp + |O| + 1 under Prior.
  std::size_t default_depth_bound(const Problem& p);

  Verdict brute_force_decide(const Problem& p, const OracleBounds& b = {});
}
