// Example-set reductions: splitting negatives for conjunction-closed
// classes, merging negatives into one padded instance for path Until
// queries, and compiling X-offsets into fresh atoms so that X/F
// separability becomes F separability.

#pragma once

#include "ltlqbe/core.hpp"

#include <string>
#include <vector>

namespace ltlqbe
{
  // One example set (E+, {d}) per negative d.
  std::vector<ExampleSet> split_per_negative(const ExampleSet& e);

  // Names of the pad atoms used by merge_negatives_for_path_until.
  inline const std::string pad_origin = "B__pad";
  inline const std::string pad_fill = "C__pad";

  // Produces an example set with at most two positives and exactly one
  // negative that is separable by a path Until query iff e is.  Time-0
  // atoms are first factored out: only negatives satisfying the common
  // time-0 atoms of the positives are kept, then all time-0 facts are
  // dropped.  Every instance is shifted so that a B__pad fact marks its
  // origin and C__pad fills its inner positions; the negatives are
  // concatenated into a single instance.  With a single positive the
  // shifted copy is added next to the 1-shifted one.
  ExampleSet merge_negatives_for_path_until(const ExampleSet& e);

  // Name of the fresh atom standing for "A holds k steps later".
  std::string shifted_atom_name(const std::string& atom, std::size_t k);

  // Adds A__k(l) whenever A(l+k) holds, for 1 <= k <= m with m the
  // largest positive timestamp and A ranging over the atoms of the
  // positives.
  ExampleSet compile_next_to_diamond(const ExampleSet& e);
}
