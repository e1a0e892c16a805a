// Transition systems representing a data instance (or the least model
// of a Horn ontology and a data instance) for Until queries: a query
// holds at 0 iff its tree embeds into the computation tree of the
// system.  The uncolored systems serve path and simple Until queries;
// the black/red systems serve unrestricted Until queries, where red
// edges carry Until subqueries nested in a left argument.
//
// States of the black/red systems are pairs (X, Y) of timepoint sets:
// Y are the points where the current Until subquery is witnessed and X
// the points strictly between a start point and its witness.

#pragma once

#include "ltlqbe/core.hpp"
#include "ltlqbe/horn.hpp"
#include "ltlqbe/tsys.hpp"

#include <cstdint>
#include <optional>

namespace ltlqbe
{
  // Sets of timepoints below 64.
  using point_set = std::uint64_t;

  // d ⋖ e: mu(x) = min{y in e : x < y} is total on d and onto e.
  bool lessdot(point_set d, point_set e);
  // Union of the open intervals (x, mu(x)); requires lessdot(d, e).
  point_set nabla(point_set d, point_set e);

  // The wrap-around variants for a lasso whose periodic zone is
  // [M, P): a zone point without a later element of e continues at
  // the least element of e inside the zone, and the points between are
  // (x, P) ∪ [M, mu(x)).  With M == P they coincide with the plain ones.
  std::optional<std::size_t> mu_mp(std::size_t x, point_set e, std::size_t m,
                                   std::size_t p);
  bool lessdot_mp(point_set d, point_set e, std::size_t m, std::size_t p);
  point_set nabla_mp(point_set d, point_set e, std::size_t m, std::size_t p);

  // States 0..max+1, the last one an empty sink with a full self-loop;
  // edge j -> k labelled with the atoms true throughout (j, k), plus
  // falsum when the interval is empty.
  TransitionSystem repr_plain(const DataInstance& d, const Signature& sig);

  // States 0..pre+per-1 of a lasso with forward edges and wrap-around
  // edges inside the loop.  Atoms outside sig are ignored.
  TransitionSystem repr_lasso(const LassoModel& m, const Signature& sig);
  // repr_lasso of the least model; throws usage_error if inconsistent.
  TransitionSystem repr_horn(const HornOntology& o, const DataInstance& d,
                             const Signature& sig);

  struct BrOptions
  {
    std::size_t max_states = 200000;
  };

  // Black/red system over subsets of [0, max], with the sink z for
  // points beyond the data and the state u absorbing vacuous left
  // arguments.
  TransitionSystem repr_plain_br(const DataInstance& d, const Signature& sig,
                                 const BrOptions& opt = {});
  // Black/red system over subsets of [0, pre+per) of a lasso, using the
  // wrap-around calculus.
  TransitionSystem repr_lasso_br(const LassoModel& m, const Signature& sig,
                                 const BrOptions& opt = {});
  TransitionSystem repr_horn_br(const HornOntology& o, const DataInstance& d,
                                const Signature& sig, const BrOptions& opt = {});
}
