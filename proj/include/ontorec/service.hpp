#pragma once

#include <string>

#include "ontorec/ontology.hpp"
#include "ontorec/rules.hpp"

namespace httplib {
class Server;
}

namespace ontorec {

// Everything a request needs, fully loaded up front and immutable afterwards.
struct ServiceContext {
  RuleBase rules;
  AnnotationMap annotations;
  SemanticDistanceMatrix matrix;
  RecommendOptions defaults;
  bool strip_query = true;  // url normalization for incoming histories
};

// Routes:
//   POST /recommend  {"visited": [url, ...], "k"?: int, "threshold"?: float}
//     200 {"recommendations": [{"urls": [...], "instance": s, "confidence": f}]}
//     400 malformed body, 422 when no visited url maps to an instance
//   GET /health      {"status": "ok", "rules": n}
// The context must outlive the server.
void register_routes(httplib::Server& server, const ServiceContext& ctx);

}  // namespace ontorec
