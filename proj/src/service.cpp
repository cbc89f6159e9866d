#include "peerpanel/service.hpp"

#include <httplib.h>

#include <thread>

#include "peerpanel/errors.hpp"

namespace peerpanel {

namespace {

json string_array() { return {{"type", "array"}, {"items", {{"type", "string"}}}}; }

json enum_of(std::initializer_list<std::string_view> values) {
  json e = json::array();
  for (auto v : values) e.push_back(v);
  return {{"type", "string"}, {"enum", e}};
}

json label_schema() {
  json e = json::array();
  for (auto l : kAllLabels) e.push_back(to_string(l));
  return {{"type", "string"}, {"enum", e}};
}

json non_empty_string() { return {{"type", "string"}, {"minLength", 1}}; }

json review_schema() {
  const json grounding = {
      {"type", "object"},
      {"required", {"source", "locator", "quote"}},
      {"properties",
       {{"source", enum_of({"manuscript_span", "literature_item"})},
        {"locator", {{"type", "string"}}},
        {"quote", non_empty_string()}}}};
  const json axis = {{"type", "object"},
                     {"required", {"text", "grounding"}},
                     {"properties",
                      {{"text", {{"type", "string"}}},
                       {"grounding", {{"type", "array"}, {"items", grounding}}}}}};
  json axes_props = json::object();
  json axes_required = json::array();
  for (auto a : kAllAxes) {
    axes_props[std::string(to_string(a))] = axis;
    axes_required.push_back(to_string(a));
  }
  return {{"$schema", "https://json-schema.org/draft/2020-12/schema"},
          {"title", "ReviewReport"},
          {"type", "object"},
          {"required", {"persona", "paper_id", "stage", "summary", "axes", "recommendation"}},
          {"properties",
           {{"persona", non_empty_string()},
            {"paper_id", non_empty_string()},
            {"stage", enum_of({"pre_rebuttal", "post_rebuttal"})},
            {"summary", {{"type", "string"}}},
            {"strengths", string_array()},
            {"weaknesses", string_array()},
            {"axes",
             {{"type", "object"},
              {"required", axes_required},
              {"properties", axes_props},
              {"additionalProperties", false}}},
            {"recommendation", label_schema()},
            {"grounded", {{"type", "boolean"}}},
            {"retry_count", {{"type", "integer"}, {"minimum", 0}}},
            {"response", {{"type", "string"}}}}}};
}

json rebuttal_schema() {
  const json claim = {{"type", "object"},
                      {"required", {"kind", "value"}},
                      {"properties",
                       {{"kind", enum_of({"reviewer_claim", "literature_item"})},
                        {"value", non_empty_string()}}}};
  return {{"$schema", "https://json-schema.org/draft/2020-12/schema"},
          {"title", "Rebuttal"},
          {"type", "object"},
          {"required", {"paper_id", "text", "cited_claims"}},
          {"properties",
           {{"paper_id", non_empty_string()},
            {"config_id", {{"type", "string"}}},
            {"text", {{"type", "string"}}},
            {"cited_claims", {{"type", "array"}, {"minItems", 1}, {"items", claim}}},
            {"regenerations", {{"type", "integer"}, {"minimum", 0}}},
            {"flagged", {{"type", "boolean"}}}}}};
}

json metareview_schema() {
  const json fact = {
      {"type", "object"},
      {"required", {"claim", "verdict", "significance"}},
      {"properties",
       {{"claim", {{"type", "string"}}},
        {"source_persona", {{"type", "string"}}},
        {"quote", {{"type", "string"}}},
        {"verdict", enum_of({"supported_manuscript", "supported_literature", "unsupported"})},
        {"significance", {{"type", "number"}, {"minimum", 0}, {"maximum", 1}}}}}};
  json section_props = json::object();
  json section_required = json::array();
  for (const char* s : {"stance_summary", "common_strengths_weaknesses", "rebuttal_effectiveness",
                        "stance_shifts", "lingering_concerns"}) {
    section_props[s] = non_empty_string();
    section_required.push_back(s);
  }
  return {{"$schema", "https://json-schema.org/draft/2020-12/schema"},
          {"title", "MetaReview"},
          {"type", "object"},
          {"required", {"sections", "decision"}},
          {"properties",
           {{"sections",
             {{"type", "object"}, {"required", section_required}, {"properties", section_props}}},
            {"facts", {{"type", "array"}, {"items", fact}}},
            {"decision", label_schema()}}}};
}

json literature_schema() {
  const json item = {{"type", "object"},
                     {"required", {"item_id", "title", "abstract", "year"}},
                     {"properties",
                      {{"item_id", non_empty_string()},
                       {"title", {{"type", "string"}}},
                       {"abstract", {{"type", "string"}}},
                       {"year", {{"type", "integer"}}},
                       {"venue", {{"type", {"string", "null"}}}}}}};
  return {{"$schema", "https://json-schema.org/draft/2020-12/schema"},
          {"title", "LiteratureSummary"},
          {"type", "object"},
          {"required", {"paper_id", "queries", "ranked_items", "summary"}},
          {"properties",
           {{"paper_id", non_empty_string()},
            {"queries", string_array()},
            {"ranked_items", {{"type", "array"}, {"items", item}}},
            {"summary", {{"type", "string"}}},
            {"complete", {{"type", "boolean"}}},
            {"regenerations", {{"type", "integer"}, {"minimum", 0}}}}}};
}

}  // namespace

json record_schemas() {
  const auto review = review_schema();
  auto post = review;
  post["properties"]["stage"] = enum_of({"post_rebuttal"});
  auto pre = review;
  pre["properties"]["stage"] = enum_of({"pre_rebuttal"});
  return {{"reviewer", pre},
          {"post_rebuttal", post},
          {"author", rebuttal_schema()},
          {"metareview", metareview_schema()},
          {"literature", literature_schema()},
          {"qc_annotation",
           {{"$schema", "https://json-schema.org/draft/2020-12/schema"},
            {"title", "QcAnnotation"},
            {"type", "object"},
            {"required", {"verdict"}},
            {"properties",
             {{"verdict", enum_of({"agree", "disagree"})}, {"note", {{"type", "string"}}}}}}}};
}

struct Service::Impl {
  RunStore& runs;
  arena::ArenaStore& arenas;
  HumanTaskQueue& tasks;
  std::string token;
  httplib::Server server;
  std::thread thread;

  Impl(RunStore& r, arena::ArenaStore& a, HumanTaskQueue& t, std::string tok)
      : runs(r), arenas(a), tasks(t), token(std::move(tok)) {
    routes();
  }

  static void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(2), "application/json");
  }

  static void error(httplib::Response& res, int status, const std::string& message) {
    reply(res, status, {{"error", message}});
  }

  void routes() {
    server.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", "*");
      if (req.method == "OPTIONS") {
        res.set_header("Access-Control-Allow-Headers", "Authorization, Content-Type");
        res.status = 204;
        return httplib::Server::HandlerResponse::Handled;
      }
      if (!token.empty() && req.get_header_value("Authorization") != "Bearer " + token) {
        error(res, 401, "missing or wrong bearer token");
        return httplib::Server::HandlerResponse::Handled;
      }
      return httplib::Server::HandlerResponse::Unhandled;
    });
    server.set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
          try {
            std::rethrow_exception(ep);
          } catch (const PreconditionError& e) {
            error(res, 400, e.what());
          } catch (const SchemaError& e) {
            error(res, 400, e.what());
          } catch (const IoError& e) {
            error(res, 404, e.what());
          } catch (const std::exception& e) {
            error(res, 500, e.what());
          }
        });

    server.Get("/schemas", [](const httplib::Request&, httplib::Response& res) {
      reply(res, 200, record_schemas());
    });

    server.Get("/tasks", [this](const httplib::Request& req, httplib::Response& res) {
      const auto kind = req.get_param_value("kind");
      json out = json::array();
      if (kind.empty() || kind == "human") {
        for (const auto& t : tasks.list(req.get_param_value("status") != "all")) {
          out.push_back(t);
        }
      }
      reply(res, 200, out);
    });

    server.Get(R"(/tasks/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      auto t = tasks.get(req.matches[1]);
      if (!t) return error(res, 404, "no such task");
      reply(res, 200, *t);
    });

    server.Post(R"(/tasks/([^/]+)/submit)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  json body;
                  try {
                    body = json::parse(req.body);
                  } catch (const json::exception& e) {
                    return error(res, 400, std::string("body is not JSON: ") + e.what());
                  }
                  const auto result = tasks.submit(req.matches[1], body);
                  switch (result.status) {
                    case SubmitStatus::Accepted:
                      return reply(res, 200, {{"status", "accepted"}});
                    case SubmitStatus::NotFound: return error(res, 404, result.message);
                    case SubmitStatus::Conflict: return error(res, 409, result.message);
                    case SubmitStatus::Invalid: return error(res, 400, result.message);
                  }
                });

    server.Get("/runs", [this](const httplib::Request&, httplib::Response& res) {
      json out = json::array();
      for (const auto& run : runs.runs()) out.push_back({{"run_id", run}, {"papers", runs.papers(run)}});
      reply(res, 200, out);
    });

    server.Get(R"(/runs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string run = req.matches[1];
      check_path_component(run);
      if (!std::filesystem::exists(runs.run_dir(run))) return error(res, 404, "no such run");
      json papers = json::array();
      for (const auto& p : runs.papers(run)) {
        auto index = runs.load_index(run, p);
        papers.push_back({{"paper_id", p}, {"index", index ? *index : json(nullptr)}});
      }
      reply(res, 200, {{"run_id", run}, {"papers", papers}});
    });

    server.Get(R"(/runs/([^/]+)/papers/([^/]+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 const std::string run = req.matches[1];
                 const std::string paper = req.matches[2];
                 check_path_component(run);
                 check_path_component(paper);
                 reply(res, 200, runs.load_record(run, paper));
               });

    server.Get("/arena", [this](const httplib::Request&, httplib::Response& res) {
      reply(res, 200, arenas.arenas());
    });

    server.Get(R"(/arena/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      auto report = arenas.report(req.matches[1]);
      if (!report) return error(res, 404, "no such arena");
      reply(res, 200, *report);
    });

    server.Get(R"(/arena/([^/]+)/qc)", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, 200, arenas.qc(req.matches[1]));
    });

    server.Post(R"(/arena/([^/]+)/qc/([^/]+))",
                [this](const httplib::Request& req, httplib::Response& res) {
                  json body;
                  try {
                    body = json::parse(req.body);
                  } catch (const json::exception& e) {
                    return error(res, 400, std::string("body is not JSON: ") + e.what());
                  }
                  if (!body.is_object() || !body.contains("verdict") ||
                      !body.at("verdict").is_string()) {
                    return error(res, 400, "body needs a \"verdict\" string");
                  }
                  arenas.annotate(req.matches[1], req.matches[2],
                                  body.at("verdict").get<std::string>(), body.value("note", ""));
                  reply(res, 200, arenas.qc(req.matches[1]));
                });
  }
};

Service::Service(RunStore& runs, arena::ArenaStore& arenas, HumanTaskQueue& tasks,
                 std::string token)
    : impl_(std::make_unique<Impl>(runs, arenas, tasks, std::move(token))) {}

Service::~Service() { stop(); }

int Service::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) throw IoError("cannot bind " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void Service::listen(const std::string& host, int port) {
  if (!impl_->server.listen(host, port)) {
    throw IoError("cannot listen on " + host + ":" + std::to_string(port));
  }
}

void Service::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace peerpanel
