// JSON readers and writers.

#include "ltlqbe/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace ltlqbe
{
  using json = nlohmann::json;

  namespace
  {
    // Translates a byte offset into line/column for diagnostics.
    parse_error located(const std::string& text, std::size_t byte,
                        const std::string& msg)
    {
      std::size_t line = 1;
      std::size_t col = 1;
      for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        {
          if (text[i] == '\n')
            {
              ++line;
              col = 1;
            }
          else
            ++col;
        }
      return parse_error(msg, line, col);
    }

    json parse_json(const std::string& text)
    {
      try
        {
          return json::parse(text);
        }
      catch (const json::parse_error& e)
        {
          throw located(text, e.byte > 0 ? e.byte - 1 : 0, e.what());
        }
    }

    [[noreturn]] void schema(const std::string& msg)
    {
      throw parse_error("schema: " + msg, 0, 0);
    }

    void check_format(const json& j)
    {
      if (!j.is_object())
        schema("top-level value must be an object");
      if (!j.contains("format") || j["format"] != 1)
        schema("missing or unsupported \"format\" (expected 1)");
    }

    DataInstance instance_from(const json& j, const std::string& fallback)
    {
      if (!j.is_object() || !j.contains("facts") || !j["facts"].is_array())
        schema("instance must be an object with a \"facts\" array");
      std::vector<Fact> facts;
      for (const auto& f : j["facts"])
        {
          if (!f.is_array() || f.size() != 2 || !f[0].is_string()
              || !f[1].is_number_integer() || f[1].get<long long>() < 0)
            schema("fact must be [\"Atom\", nonnegative integer]");
          auto name = f[0].get<std::string>();
          if (!is_valid_atom_name(name))
            schema("invalid atom name '" + name + "'");
          facts.push_back({name, static_cast<std::size_t>(f[1].get<long long>())});
        }
      std::string name = fallback;
      if (j.contains("name") && j["name"].is_string())
        name = j["name"].get<std::string>();
      return DataInstance(facts, name);
    }

    json instance_to(const DataInstance& d)
    {
      json facts = json::array();
      for (const auto& f : d.facts())
        facts.push_back(json::array({f.atom, f.time}));
      return json{{"name", d.name}, {"facts", facts}};
    }
  }

  ExampleSet parse_example_set(const std::string& text)
  {
    json j = parse_json(text);
    check_format(j);
    ExampleSet e;
    for (const char* side : {"positives", "negatives"})
      {
        if (!j.contains(side))
          continue;
        if (!j[side].is_array())
          schema(std::string("\"") + side + "\" must be an array");
        auto& list = std::string(side) == "positives" ? e.positives
                                                      : e.negatives;
        std::size_t i = 0;
        for (const auto& inst : j[side])
          list.push_back(instance_from(inst, std::string(side, 3) + std::to_string(++i)));
      }
    if (j.contains("signature"))
      {
        if (!j["signature"].is_array())
          schema("\"signature\" must be an array");
        std::set<std::string> declared;
        for (const auto& a : j["signature"])
          {
            if (!a.is_string() || !is_valid_atom_name(a.get<std::string>()))
              schema("invalid signature entry");
            declared.insert(a.get<std::string>());
          }
        for (const auto& a : e.atoms())
          if (!declared.count(a))
            schema("atom '" + a + "' is missing from \"signature\"");
      }
    return e;
  }

  DataInstance parse_data_instance(const std::string& text)
  {
    json j = parse_json(text);
    check_format(j);
    return instance_from(j, "data");
  }

  std::string example_set_to_json(const ExampleSet& e)
  {
    json j;
    j["format"] = 1;
    auto atoms = e.atoms();
    j["signature"] = std::vector<std::string>(atoms.begin(), atoms.end());
    j["positives"] = json::array();
    j["negatives"] = json::array();
    for (const auto& d : e.positives)
      j["positives"].push_back(instance_to(d));
    for (const auto& d : e.negatives)
      j["negatives"].push_back(instance_to(d));
    return j.dump();
  }

  std::string lasso_to_json(const LassoModel& m)
  {
    json j;
    j["format"] = 1;
    j["prefix"] = json::array();
    j["loop"] = json::array();
    for (const auto& s : m.prefix)
      j["prefix"].push_back(std::vector<std::string>(s.begin(), s.end()));
    for (const auto& s : m.loop)
      j["loop"].push_back(std::vector<std::string>(s.begin(), s.end()));
    return j.dump();
  }

  std::string read_file(const std::string& path)
  {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw usage_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
}
