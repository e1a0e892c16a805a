// Finite labelled transition systems.  States carry atom sets, edges
// carry subsets of the signature plus the falsum letter, and edges are
// optionally colored black or red.  A system S is simulated by T when
// every finite subtree of S's computation tree maps homomorphically
// into T's, with labels growing along the map; containment is the
// restriction of this to single runs.

#pragma once

#include "ltlqbe/core.hpp"

#include <string>
#include <vector>

namespace ltlqbe
{
  enum class Color
  {
    Black,
    Red
  };

  struct Edge
  {
    std::size_t to;
    atom_set label;
    Color color = Color::Black;
  };

  class TransitionSystem
  {
  public:
    explicit TransitionSystem(bool colored = false) : colored_(colored) {}

    bool colored() const { return colored_; }
    std::size_t size() const { return labels_.size(); }
    std::size_t edge_count() const;

    std::size_t add_state(atom_set label, std::string name = {});
    // Throws usage_error on a second edge with the same (from, to,
    // color), or on a red edge in an uncolored system.
    void add_edge(std::size_t from, std::size_t to, atom_set label,
                  Color color = Color::Black);
    void add_initial(std::size_t s);

    atom_set label(std::size_t s) const { return labels_[s]; }
    const std::string& name(std::size_t s) const { return names_[s]; }
    const std::vector<Edge>& edges(std::size_t s) const { return out_[s]; }
    const std::vector<std::size_t>& initial() const { return initial_; }

  private:
    bool colored_;
    std::vector<atom_set> labels_;
    std::vector<std::string> names_;
    std::vector<std::vector<Edge>> out_;
    std::vector<std::size_t> initial_;
  };

  // Reachable part of the synchronous product: node and edge labels are
  // intersected, colors must agree.  Throws resource_limit beyond
  // max_states.
  TransitionSystem product(const std::vector<const TransitionSystem*>& systems,
                           std::size_t max_states = 2000000);
  TransitionSystem product(const std::vector<TransitionSystem>& systems,
                           std::size_t max_states = 2000000);

  TransitionSystem disjoint_union(const std::vector<TransitionSystem>& systems);

  // Greatest simulation relation, with the refinement round in which
  // each pair was removed (0 = labels already incomparable).
  struct Simulation
  {
    std::size_t s_size = 0;
    std::size_t t_size = 0;
    static constexpr std::size_t kept = static_cast<std::size_t>(-1);
    std::vector<std::size_t> removed_at;  // s_size * t_size

    bool related(std::size_t x, std::size_t y) const
    {
      return removed_at[x * t_size + y] == kept;
    }
    std::size_t rank(std::size_t x, std::size_t y) const
    {
      return removed_at[x * t_size + y];
    }
  };

  Simulation greatest_simulation(const TransitionSystem& s,
                                 const TransitionSystem& t);

  // True iff every initial state of s is simulated by some initial
  // state of t.
  bool simulates(const TransitionSystem& s, const TransitionSystem& t);

  // True iff every finite run of s from an initial state is matched by
  // an equally long run of t from an initial state with larger labels.
  bool contained_in(const TransitionSystem& s, const TransitionSystem& t,
                    std::size_t max_nodes = 5000000);

  struct Run
  {
    std::vector<std::size_t> states;        // states of s
    std::vector<atom_set> state_labels;     // one per state
    std::vector<atom_set> edge_labels;      // one per step
  };

  // A shortest run of s without a matching run in t.
  Run extract_failing_run(const TransitionSystem& s, const TransitionSystem& t,
                          std::size_t max_nodes = 5000000);

  struct Tree
  {
    struct Child;
    std::size_t state = 0;  // state of s this node was unfolded from
    atom_set label = 0;
    std::vector<Child> children;

    std::size_t size() const;
    std::size_t depth() const;
  };

  struct Tree::Child
  {
    atom_set label;
    Color color;
    Tree node;
  };

  // A finite subtree of s's computation tree (rooted at an initial
  // state) that does not embed into the computation tree of t from any
  // initial state.
  Tree extract_failing_subtree(const TransitionSystem& s,
                               const TransitionSystem& t);

  // Brute-force checks used to validate extracted witnesses.
  bool run_embeds(const Run& r, const TransitionSystem& t);
  bool tree_embeds(const Tree& tr, const TransitionSystem& t);

  std::string to_dot(const TransitionSystem& ts, const Signature& sig);
}
