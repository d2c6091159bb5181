#pragma once

#include <string>
#include <vector>

#include "jsonoid/json.hpp"

namespace jsonoid {

struct Violation {
  std::string path;     // JSON pointer into the document
  std::string keyword;  // schema keyword that failed
  std::string message;
};

struct ValidationOutcome {
  bool valid = true;
  std::vector<Violation> violations;
};

// Validates a document against a schema emitted by this project. The
// validator covers exactly the emitted keyword subset (closed objects,
// tuple items, the discovery format detectors, oneOf as
// exactly-one-branch) and raises std::invalid_argument on any keyword it
// does not implement rather than silently ignoring a constraint.
// $schema and x-jsonoid-* keys are ignored.
ValidationOutcome validate(const Json& schema, const Json& doc);

}  // namespace jsonoid
