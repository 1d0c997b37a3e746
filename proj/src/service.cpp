#include "ontorec/service.hpp"

#include <httplib.h>

#include <json.hpp>

#include "ontorec/errors.hpp"
#include "ontorec/log.hpp"
#include "ontorec/mapper.hpp"

namespace ontorec {

namespace {

using nlohmann::json;

void reply_error(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", message}}.dump(), "application/json");
}

}  // namespace

void register_routes(httplib::Server& server, const ServiceContext& ctx) {
  server.Get("/health", [&ctx](const httplib::Request&, httplib::Response& res) {
    res.set_content(json{{"status", "ok"}, {"rules", ctx.rules.size()}}.dump(),
                    "application/json");
  });

  server.Post("/recommend", [&ctx](const httplib::Request& req,
                                   httplib::Response& res) {
    const json body = json::parse(req.body, nullptr, /*allow_exceptions=*/false);
    if (body.is_discarded() || !body.is_object()) {
      reply_error(res, 400, "body must be a JSON object");
      return;
    }
    const auto visited = body.find("visited");
    if (visited == body.end() || !visited->is_array()) {
      reply_error(res, 400, "missing 'visited' url array");
      return;
    }
    std::vector<std::string> urls;
    urls.reserve(visited->size());
    for (const auto& element : *visited) {
      if (!element.is_string()) {
        reply_error(res, 400, "'visited' entries must be strings");
        return;
      }
      urls.push_back(normalize_url(element.get<std::string>(), ctx.strip_query));
    }

    RecommendOptions opts = ctx.defaults;
    if (const auto k = body.find("k"); k != body.end()) {
      if (!k->is_number_unsigned() || k->get<uint64_t>() == 0) {
        reply_error(res, 400, "'k' must be a positive integer");
        return;
      }
      opts.max_results = k->get<uint64_t>();
    }
    if (const auto threshold = body.find("threshold"); threshold != body.end()) {
      if (!threshold->is_number() || threshold->get<double>() < 0.0 ||
          threshold->get<double>() > 1.0) {
        reply_error(res, 400, "'threshold' must be a number in [0, 1]");
        return;
      }
      opts.threshold = threshold->get<double>();
    }

    const auto history = map_url_history(urls, ctx.annotations, opts.map);
    if (history.empty()) {
      reply_error(res, 422, "no visited url maps to a known instance");
      return;
    }

    const auto recommendations =
        recommend_instances(history, ctx.rules, ctx.annotations, ctx.matrix, opts);
    json items = json::array();
    for (const Recommendation& rec : recommendations) {
      items.push_back(json{{"urls", rec.pages},
                           {"instance", rec.instance},
                           {"confidence", rec.confidence}});
    }
    res.set_content(json{{"recommendations", items}}.dump(), "application/json");
  });
}

}  // namespace ontorec
