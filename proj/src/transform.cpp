// Example-set reductions.

#include "ltlqbe/transform.hpp"

#include <algorithm>

namespace ltlqbe
{
  std::vector<ExampleSet> split_per_negative(const ExampleSet& e)
  {
    std::vector<ExampleSet> out;
    for (const auto& d : e.negatives)
      out.push_back(ExampleSet{e.positives, {d}});
    return out;
  }

  namespace
  {
    // Facts of d shifted by k, plus an origin marker at k and the fill
    // atom strictly between k and k + len.
    void add_padded(std::vector<Fact>& out, const DataInstance& d,
                    std::size_t k, std::size_t len)
    {
      for (const auto& f : d.facts())
        out.push_back({f.atom, f.time + k});
      out.push_back({pad_origin, k});
      for (std::size_t j = k + 1; j < k + len; ++j)
        out.push_back({pad_fill, j});
    }

    DataInstance without_time_zero(const DataInstance& d)
    {
      std::vector<Fact> facts;
      for (const auto& f : d.facts())
        if (f.time != 0)
          facts.push_back(f);
      return DataInstance(facts, d.name);
    }
  }

  ExampleSet merge_negatives_for_path_until(const ExampleSet& e)
  {
    if (e.positives.empty())
      throw usage_error("merge_negatives_for_path_until: no positives");
    auto atoms = e.atoms();
    if (atoms.count(pad_origin) || atoms.count(pad_fill))
      throw usage_error("merge_negatives_for_path_until: pad atom names "
                        "already occur in the example set");

    // Factor out the time-0 atoms common to all positives.
    std::set<std::string> rho = e.positives[0].atoms_at(0);
    for (const auto& d : e.positives)
      {
        std::set<std::string> keep;
        auto here = d.atoms_at(0);
        std::set_intersection(rho.begin(), rho.end(), here.begin(),
                              here.end(), std::inserter(keep, keep.end()));
        rho = keep;
      }
    std::vector<DataInstance> pos;
    std::vector<DataInstance> neg;
    for (const auto& d : e.positives)
      pos.push_back(without_time_zero(d));
    for (const auto& d : e.negatives)
      {
        auto here = d.atoms_at(0);
        if (std::includes(here.begin(), here.end(), rho.begin(), rho.end()))
          neg.push_back(without_time_zero(d));
      }

    std::size_t m = 0;
    for (const auto* list : {&pos, &neg})
      for (const auto& d : *list)
        m = std::max(m, d.max_timestamp());
    m += 2;

    ExampleSet out;
    {
      std::vector<Fact> f;
      add_padded(f, pos[0], 1, pos[0].max_timestamp());
      out.positives.push_back(DataInstance(f, pos[0].name + "''"));
    }
    std::size_t first = pos.size() == 1 ? 0 : 1;
    for (std::size_t i = first; i < pos.size(); ++i)
      {
        std::vector<Fact> f;
        add_padded(f, pos[i], m, pos[i].max_timestamp());
        out.positives.push_back(DataInstance(f, pos[i].name + "'"));
      }
    std::vector<Fact> f;
    for (std::size_t i = 0; i < neg.size(); ++i)
      add_padded(f, neg[i], (2 * i + 1) * m, m);
    out.negatives.push_back(DataInstance(f, "merged"));
    return out;
  }

  std::string shifted_atom_name(const std::string& atom, std::size_t k)
  {
    return atom + "__" + std::to_string(k);
  }

  ExampleSet compile_next_to_diamond(const ExampleSet& e)
  {
    std::size_t m = 0;
    std::set<std::string> base;
    for (const auto& d : e.positives)
      {
        m = std::max(m, d.max_timestamp());
        auto a = d.atoms();
        base.insert(a.begin(), a.end());
      }
    auto existing = e.atoms();
    for (const auto& a : base)
      for (std::size_t k = 1; k <= m; ++k)
        if (existing.count(shifted_atom_name(a, k)))
          throw usage_error("compile_next_to_diamond: fresh atom '"
                            + shifted_atom_name(a, k) + "' already occurs");

    auto compile = [&](const DataInstance& d) {
      std::vector<Fact> facts(d.facts().begin(), d.facts().end());
      for (const auto& f : d.facts())
        if (base.count(f.atom))
          for (std::size_t k = 1; k <= m && k <= f.time; ++k)
            facts.push_back({shifted_atom_name(f.atom, k), f.time - k});
      return DataInstance(facts, d.name);
    };
    ExampleSet out;
    for (const auto& d : e.positives)
      out.positives.push_back(compile(d));
    for (const auto& d : e.negatives)
      out.negatives.push_back(compile(d));
    return out;
  }
}
