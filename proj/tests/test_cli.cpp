// Runs the command-line tool as a subprocess.  LTLQBE_CLI and
// LTLQBE_TEST_DATA are set by the build.

#include "ltlqbe/core.hpp"
#include "ltlqbe/io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <sys/wait.h>

using namespace ltlqbe;
using json = nlohmann::json;

namespace
{
  struct result
  {
    int code = -1;
    std::string out;
  };

  // Runs the tool with the given arguments; stderr is merged into the
  // output.
  result cli(const std::string& args)
  {
    std::string cmd = std::string(LTLQBE_CLI) + " " + args + " 2>&1";
    result r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0)
      r.out.append(buf.data(), n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }

  std::string data(const std::string& file)
  {
    return std::string(LTLQBE_TEST_DATA) + "/" + file;
  }
}

TEST_CASE("separable")
{
  auto r = cli("separable --class path-diamond --emit-query --input "
               + data("example1.json"));
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["format"] == 1);
  CHECK(j["separable"] == true);
  REQUIRE(j.contains("witness"));
  Query q = parse_query(j["witness"].get<std::string>());
  auto e = parse_example_set(read_file(data("example1.json")));
  for (const auto& d : e.positives)
    CHECK(eval_data(d, q, 0));
  for (const auto& d : e.negatives)
    CHECK_FALSE(eval_data(d, q, 0));
  CHECK(j["stats"].is_object());

  r = cli("separable --class path-diamond --input " + data("example3a.json"));
  CHECK(r.code == 1);
  CHECK(json::parse(r.out)["separable"] == false);
  CHECK_FALSE(json::parse(r.out).contains("witness"));

  r = cli("separable --class branch-diamond --oracle-check --minimize --input "
          + data("example2.json"));
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["oracle"] == true);

  r = cli("separable --class path-diamond --emit-query --input "
          + data("example1_horn.json") + " --ontology " + data("example1.ltl"));
  CHECK(r.code == 0);

  r = cli("separable --class path-diamond --input " + data("prior.json")
          + " --ontology " + data("prior.ltl") + " --ontology-kind prior"
          + " --oracle-check --emit-query");
  CHECK(r.code == 0);
}

TEST_CASE("errors and exit codes")
{
  auto r = cli("separable --class path-diamond --input " + data("malformed.json"));
  CHECK(r.code == 2);
  // The diagnostic carries line:column.
  CHECK(r.out.find("2:") != std::string::npos);
  CHECK(r.out.find("parse error") != std::string::npos);

  CHECK(cli("separable --class nope --input " + data("example1.json")).code == 2);
  CHECK(cli("separable --class path-diamond").code == 2);
  CHECK(cli("separable --class path-diamond --input /nonexistent.json").code == 2);
  CHECK(cli("").code == 2);
  CHECK(cli("eval --query 'F (' --data " + data("p1.json")).code == 2);

  // A node cap of 1 cannot finish the path search.
  auto capped = cli("separable --class path-diamond --node-cap 1 --input "
                    + data("example1.json"));
  CHECK(capped.code == 3);
}

TEST_CASE("eval")
{
  auto r = cli("eval --query 'F(T & F F V)' --data " + data("p1.json"));
  CHECK(r.code == 0);
  CHECK(r.out == "true\n");
  CHECK(cli("eval --query true --data " + data("t2.json")).out == "true\n");
  auto f = cli("eval --query 'F V' --data " + data("t2.json"));
  CHECK(f.code == 1);
  CHECK(f.out == "false\n");
  CHECK(cli("eval --query T --at 2 --data " + data("t2.json")).code == 0);
  CHECK(cli("eval --query 'F(T & F F V)' --data " + data("h.json")).code == 1);
  CHECK(cli("eval --query 'F(T & F F V)' --data " + data("h.json")
            + " --ontology " + data("example1.ltl"))
            .code
        == 0);
}

TEST_CASE("canonical")
{
  auto r = cli("canonical --ontology " + data("abc.ltl") + " --data " + data("a0.json"));
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["consistent"] == true);
  CHECK(j["p"] == 2);
  CHECK(j["s"] == 1);
  CHECK(j["max_timestamp"] == 0);

  // Re-evaluating queries on the printed lasso matches eval.
  LassoModel m;
  for (const auto& s : j["prefix"])
    m.prefix.push_back(s.get<std::set<std::string>>());
  for (const auto& s : j["loop"])
    m.loop.push_back(s.get<std::set<std::string>>());
  for (const char* q : {"C & X B", "F (B & X C)", "X X C", "F A", "B U C"})
    {
      bool lasso = eval_lasso(m, parse_query(q), 0);
      auto e = cli(std::string("eval --query '") + q + "' --data " + data("a0.json")
                   + " --ontology " + data("abc.ltl"));
      CHECK(e.code == (lasso ? 0 : 1));
    }

  auto empty = cli("canonical --ontology " + data("empty.ltl") + " --data "
                   + data("t2.json"));
  CHECK(json::parse(empty.out)["p"] == 1);
}

TEST_CASE("from-words")
{
  auto r = cli("from-words --positives ab,cab --negatives ba --emit-query");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["separable"] == true);
  CHECK(cli("from-words --positives ab --negatives ab").code == 1);
  CHECK(cli("from-words --positives a --negatives b").code == 0);
  CHECK(cli("from-words --positives a --negatives a").code == 1);
  CHECK(cli("from-words --positives abc,xbcy --negatives bxc --mode subword").code == 0);
  // The common subwords b and c both occur in cb.
  CHECK(cli("from-words --positives abc,bxc --negatives cb --mode subword").code == 1);
  CHECK(cli("from-words --positives ab,ba --negatives c --mode subword").code == 0);
  CHECK(cli("from-words --positives a1").code == 2);
}
