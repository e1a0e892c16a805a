// Command-line front end.
//
//   ltlqbe separable --class C --input E.json [--ontology O --ontology-kind K]
//   ltlqbe eval --query Q --data D.json [--at N] [--ontology O ...]
//   ltlqbe canonical --ontology O --data D.json [--window N]
//   ltlqbe from-words --positives w1,w2 --negatives w3 [--mode M]
//
// Exit codes: 0 separable / true, 1 not separable / false, 2 usage or
// parse error, 3 resource cap hit, 4 engine/oracle disagreement.

#include "ltlqbe/horn.hpp"
#include "ltlqbe/io.hpp"
#include "ltlqbe/oracle.hpp"
#include "ltlqbe/prior.hpp"
#include "ltlqbe/qbe.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <iostream>

namespace
{
  using namespace ltlqbe;
  using json = nlohmann::json;

  enum exit_code
  {
    exit_yes = 0,
    exit_no = 1,
    exit_usage = 2,
    exit_resource = 3,
    exit_disagree = 4
  };

  struct ontology_args
  {
    std::string path;
    std::string kind = "horn";
  };

  void add_ontology_flags(CLI::App* cmd, ontology_args& o)
  {
    cmd->add_option("--ontology", o.path, "ontology file (one axiom per line)");
    cmd->add_option("--ontology-kind", o.kind, "horn or prior")
        ->check(CLI::IsMember({"horn", "prior"}));
  }

  void load_ontology(const ontology_args& o, Problem& p)
  {
    if (o.path.empty())
      return;
    std::string text = read_file(o.path);
    if (o.kind == "prior")
      p.prior = load_prior_ontology(text);
    else
      p.horn = load_horn_ontology(text);
  }

  json verdict_json(const Verdict& v, QueryClass cls, bool emit_query)
  {
    json j;
    j["format"] = 1;
    j["class"] = to_string(cls);
    j["separable"] = v.separable;
    if (emit_query && v.witness)
      j["witness"] = to_string(*v.witness);
    j["note"] = v.note;
    j["stats"] = json::object();
    for (const auto& [k, n] : v.stats)
      j["stats"][k] = n;
    return j;
  }

  // ----------------------------------------------------------------

  struct separable_args
  {
    std::string cls;
    std::string input;
    ontology_args onto;
    bool emit_query = false;
    bool minimize = false;
    bool oracle_check = false;
    bool horn_search = false;
    unsigned jobs = 1;
    std::size_t node_cap = DecideOptions{}.node_cap;
  };

  int run_separable(const separable_args& a)
  {
    Problem p;
    p.cls = parse_query_class(a.cls);
    p.examples = parse_example_set(read_file(a.input));
    load_ontology(a.onto, p);
    DecideOptions opt;
    opt.minimize = a.minimize;
    opt.jobs = a.jobs;
    opt.horn_search = a.horn_search;
    opt.node_cap = a.node_cap;
    Verdict v = decide(p, opt);
    json out = verdict_json(v, p.cls, a.emit_query);
    if (a.oracle_check)
      {
        OracleBounds b;
        if (p.prior)
          b.max_depth = 3;
        Verdict o = brute_force_decide(p, b);
        out["oracle"] = o.separable;
        // Under Prior the oracle is depth-bounded: only a separator it
        // finds and the engine misses is a disagreement.
        bool bad = p.prior ? (o.separable && !v.separable)
                           : (o.separable != v.separable);
        if (bad)
          {
            std::cout << out.dump() << '\n';
            std::cerr << "ltlqbe: engine and oracle disagree\n";
            return exit_disagree;
          }
      }
    std::cout << out.dump() << '\n';
    return v.separable ? exit_yes : exit_no;
  }

  // ----------------------------------------------------------------

  struct eval_args
  {
    std::string query;
    std::string data;
    std::size_t at = 0;
    ontology_args onto;
  };

  int run_eval(const eval_args& a)
  {
    Query q = parse_query(a.query);
    DataInstance d = parse_data_instance(read_file(a.data));
    Problem p;
    load_ontology(a.onto, p);
    bool answer;
    if (p.prior)
      {
        if (a.at != 0)
          throw usage_error("Prior certain answers are evaluated at 0 only");
        answer = prior_entails(*p.prior, d, q);
      }
    else if (p.horn)
      answer = !horn_consistent(*p.horn, d) || certain_answer(*p.horn, d, q, a.at);
    else
      answer = eval_data(d, q, a.at);
    std::cout << (answer ? "true" : "false") << '\n';
    return answer ? exit_yes : exit_no;
  }

  // ----------------------------------------------------------------

  struct canonical_args
  {
    std::string ontology;
    std::string data;
    std::size_t window = ChaseOptions{}.initial_window;
  };

  int run_canonical(const canonical_args& a)
  {
    HornOntology o = load_horn_ontology(read_file(a.ontology));
    DataInstance d = parse_data_instance(read_file(a.data));
    ChaseOptions opt;
    opt.initial_window = a.window;
    auto cm = canonical_model(o, d, opt);
    json j;
    j["format"] = 1;
    j["consistent"] = cm.has_value();
    if (cm)
      {
        json lasso = json::parse(lasso_to_json(cm->lasso));
        j["prefix"] = lasso["prefix"];
        j["loop"] = lasso["loop"];
        j["max_timestamp"] = cm->max_timestamp;
        j["s"] = cm->handle;
        j["p"] = cm->period;
        j["window"] = cm->window.size();
      }
    std::cout << j.dump() << '\n';
    return cm ? exit_yes : exit_no;
  }

  // ----------------------------------------------------------------

  struct words_args
  {
    std::string positives;
    std::string negatives;
    std::string mode = "subsequence";
    bool emit_query = false;
  };

  // Letter i (1-based) of w becomes the fact w[i-1](i).
  DataInstance word_instance(const std::string& w)
  {
    std::vector<Fact> facts;
    for (std::size_t i = 0; i < w.size(); ++i)
      {
        if (!std::isalpha(static_cast<unsigned char>(w[i])))
          throw usage_error("words must consist of letters: '" + w + "'");
        facts.push_back({std::string(1, w[i]), i + 1});
      }
    return DataInstance(facts, w);
  }

  std::vector<std::string> split_words(const std::string& s)
  {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i)
      if (i == s.size() || s[i] == ',')
        {
          out.push_back(s.substr(start, i - start));
          start = i + 1;
        }
    if (s.empty())
      out.clear();
    return out;
  }

  int run_from_words(const words_args& a)
  {
    ExampleSet e;
    for (const auto& w : split_words(a.positives))
      e.positives.push_back(word_instance(w));
    for (const auto& w : split_words(a.negatives))
      e.negatives.push_back(word_instance(w));
    if (e.positives.empty())
      throw usage_error("from-words needs at least one positive word");
    auto atoms = e.atoms();
    Signature sig(std::vector<std::string>(atoms.begin(), atoms.end()));
    std::vector<Timeline> pos;
    std::vector<Timeline> neg;
    for (const auto& d : e.positives)
      pos.push_back(make_timeline(d, sig));
    for (const auto& d : e.negatives)
      neg.push_back(make_timeline(d, sig));
    PathSearchOptions opt;
    opt.nonempty_letters = true;
    QueryClass cls = QueryClass::PathDiamond;
    if (a.mode == "subword")
      {
        cls = QueryClass::PathDiamondCircBlocks;
        opt.single_diamond = true;
      }
    Verdict v = dp_path(pos, neg, sig, cls, opt);
    json out = verdict_json(v, cls, a.emit_query);
    out["mode"] = a.mode;
    std::cout << out.dump() << '\n';
    return v.separable ? exit_yes : exit_no;
  }
}

int main(int argc, char** argv)
{
  CLI::App app{"Query by example for positive LTL"};
  app.require_subcommand(1);

  separable_args sep;
  auto* s = app.add_subcommand("separable", "decide separability of an example set");
  s->add_option("--class", sep.cls, "query class")
      ->required()
      ->check(CLI::IsMember({"path-diamond", "path-next-diamond",
                             "path-diamond-blocks", "branch-diamond",
                             "branch-next-diamond", "path-until",
                             "simple-until", "full-until"}));
  s->add_option("--input", sep.input, "example set (JSON)")->required();
  add_ontology_flags(s, sep.onto);
  s->add_flag("--emit-query", sep.emit_query, "include the separating query");
  s->add_flag("--minimize", sep.minimize, "greedily weaken the witness");
  s->add_flag("--oracle-check", sep.oracle_check,
              "cross-check against brute force (exit 4 on disagreement)");
  s->add_flag("--horn-search", sep.horn_search,
              "path classes under Horn: search the common normalization");
  s->add_option("--jobs", sep.jobs, "threads for per-negative subproblems")
      ->check(CLI::PositiveNumber);
  s->add_option("--node-cap", sep.node_cap, "path search node cap");

  eval_args ev;
  auto* e = app.add_subcommand("eval", "evaluate a query on a data instance");
  e->add_option("--query", ev.query, "query text")->required();
  e->add_option("--data", ev.data, "data instance (JSON)")->required();
  e->add_option("--at", ev.at, "time point");
  add_ontology_flags(e, ev.onto);

  canonical_args can;
  auto* c = app.add_subcommand("canonical", "print the least model of a Horn ontology and data");
  c->add_option("--ontology", can.ontology, "Horn ontology file")->required();
  c->add_option("--data", can.data, "data instance (JSON)")->required();
  c->add_option("--window", can.window, "initial chase window beyond the data");

  words_args wa;
  auto* w = app.add_subcommand("from-words", "common subsequence / subword separability");
  w->add_option("--positives", wa.positives, "comma-separated words")->required();
  w->add_option("--negatives", wa.negatives, "comma-separated words");
  w->add_option("--mode", wa.mode, "subsequence or subword")
      ->check(CLI::IsMember({"subsequence", "subword"}));
  w->add_flag("--emit-query", wa.emit_query, "include the separating query");

  try
    {
      app.parse(argc, argv);
    }
  catch (const CLI::CallForHelp& ex)
    {
      return app.exit(ex);
    }
  catch (const CLI::ParseError& ex)
    {
      app.exit(ex);
      return exit_usage;
    }

  try
    {
      if (s->parsed())
        return run_separable(sep);
      if (e->parsed())
        return run_eval(ev);
      if (c->parsed())
        return run_canonical(can);
      return run_from_words(wa);
    }
  catch (const parse_error& ex)
    {
      std::cerr << "ltlqbe: parse error: " << ex.what() << '\n';
      return exit_usage;
    }
  catch (const usage_error& ex)
    {
      std::cerr << "ltlqbe: " << ex.what() << '\n';
      return exit_usage;
    }
  catch (const resource_limit& ex)
    {
      std::cerr << "ltlqbe: resource limit: " << ex.what() << '\n';
      return exit_resource;
    }
  catch (const std::logic_error& ex)
    {
      std::cerr << "ltlqbe: self-check failed: " << ex.what() << '\n';
      return exit_disagree;
    }
}
