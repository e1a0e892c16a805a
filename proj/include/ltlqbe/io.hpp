// JSON front end for example sets, data instances and lassos.  All
// documents carry a top-level "format": 1 field.
//
//   {"format":1, "signature":["T","V"],
//    "positives":[{"name":"p1","facts":[["T",2],["V",4]]}],
//    "negatives":[...]}

#pragma once

#include "ltlqbe/core.hpp"

#include <string>

namespace ltlqbe
{
  // Parse errors carry line and column of the offending JSON text.
  ExampleSet parse_example_set(const std::string& json_text);
  // A data document is {"format":1, "facts":[...]} (a "name" is
  // optional).
  DataInstance parse_data_instance(const std::string& json_text);

  std::string example_set_to_json(const ExampleSet& e);
  std::string lasso_to_json(const LassoModel& m);

  std::string read_file(const std::string& path);
}
