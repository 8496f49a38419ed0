#pragma once

// HTTP/JSON front end for the session store.
//
//   POST /sessions                          {"n":5,"tiers":9,"names":[...]}
//   GET  /sessions/{id}
//   POST /sessions/{id}/assignments         {"alternative":"01101","tier":3}
//   PUT  /sessions/{id}/assignments/{alt}   {"tier":2}
//   GET  /sessions/{id}/predictions?alts=01101,11000
//   GET  /sessions/{id}/theta
//
// Every body is JSON and carries "version"; errors are {code, message,
// version}.

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "httplib.h"

#include "cautious/service.hpp"

namespace cautious::service {

inline const char* kJsonType = "application/json";

inline void send(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJsonType);
}

inline void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message,
                       const Json& version = nullptr) {
  send(res, status, Json{{"code", code}, {"message", message}, {"version", version}});
}

inline Json parse_body(const httplib::Request& req) {
  Json body = Json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw ServiceError(400, "bad_json", "request body must be a JSON object");
  }
  return body;
}

template <class T>
T required(const Json& body, const char* field) {
  if (!body.contains(field)) throw ServiceError(400, "validation", std::string("missing field '") + field + "'");
  try {
    return body.at(field).get<T>();
  } catch (const Json::exception&) {
    throw ServiceError(400, "validation", std::string("field '") + field + "' has the wrong type");
  }
}

inline Alternative parse_alternative(const std::string& text) {
  try {
    return Alternative::parse(text);
  } catch (const Error& e) {
    throw ServiceError(400, "validation", e.what());
  }
}

inline std::vector<Alternative> parse_alternative_list(const std::string& text) {
  std::vector<Alternative> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_alternative(item));
  }
  return out;
}

class HttpService {
 public:
  explicit HttpService(SessionOptions options = {}, Clock clock = utc_now) : store_(std::move(options), std::move(clock)) {
    routes();
  }

  httplib::Server& server() { return server_; }
  SessionStore& store() { return store_; }

  bool listen(const std::string& host, int port) { return server_.listen(host, port); }
  int bind_any(const std::string& host) { return server_.bind_to_any_port(host); }
  bool serve_bound() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }

 private:
  // Runs a handler, mapping library errors onto JSON error bodies. `session`
  // is filled in by handlers so that errors can echo its version.
  template <class F>
  void guarded(httplib::Response& res, F&& handler) {
    std::shared_ptr<Session> session;
    auto version = [&]() -> Json { return session ? Json(session->snapshot()->version) : Json(nullptr); };
    try {
      handler(session);
    } catch (const ServiceError& e) {
      send_error(res, e.status(), e.code(), e.what(), version());
    } catch (const SearchBudgetExceeded& e) {
      send_error(res, 503, "search_budget", e.what(), version());
    } catch (const ValidationError& e) {
      send_error(res, 400, "validation", e.what(), version());
    } catch (const DimensionError& e) {
      send_error(res, 400, "dimension", e.what(), version());
    } catch (const IngestionError& e) {
      send_error(res, 400, "ingestion", e.what(), version());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what(), version());
    }
  }

  void routes() {
    server_.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&](std::shared_ptr<Session>& session) {
        const Json body = parse_body(req);
        const int n = required<int>(body, "n");
        const int tiers = required<int>(body, "tiers");
        std::vector<std::string> names;
        if (body.contains("names")) names = required<std::vector<std::string>>(body, "names");
        session = store_.create(n, std::move(names), tiers);
        send(res, 201, state_json(*session, *session->snapshot()));
      });
    });

    server_.Get(R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&](std::shared_ptr<Session>& session) {
        session = store_.find(req.matches[1]);
        send(res, 200, state_json(*session, *session->snapshot()));
      });
    });

    server_.Post(R"(/sessions/([^/]+)/assignments)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&](std::shared_ptr<Session>& session) {
        session = store_.find(req.matches[1]);
        const Json body = parse_body(req);
        const auto alt = parse_alternative(required<std::string>(body, "alternative"));
        const int tier = required<int>(body, "tier");
        send(res, 200, assignment_json(*session->assign(alt, tier)));
      });
    });

    server_.Put(R"(/sessions/([^/]+)/assignments/([01]+))",
                [this](const httplib::Request& req, httplib::Response& res) {
                  guarded(res, [&](std::shared_ptr<Session>& session) {
                    session = store_.find(req.matches[1]);
                    const auto alt = parse_alternative(req.matches[2]);
                    const int tier = required<int>(parse_body(req), "tier");
                    send(res, 200, assignment_json(*session->assign(alt, tier, true)));
                  });
                });

    server_.Get(R"(/sessions/([^/]+)/predictions)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&](std::shared_ptr<Session>& session) {
        session = store_.find(req.matches[1]);
        const auto alts = parse_alternative_list(req.has_param("alts") ? req.get_param_value("alts") : "");
        const auto view = session->predictions(alts);
        send(res, 200, predictions_json(view, session->revisions(view)));
      });
    });

    server_.Get(R"(/sessions/([^/]+)/theta)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&](std::shared_ptr<Session>& session) {
        session = store_.find(req.matches[1]);
        send(res, 200, theta_json(*session->snapshot()));
      });
    });

    server_.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) send_error(res, res.status, "not_found", "no such route");
    });
  }

  SessionStore store_;
  httplib::Server server_;
};

}  // namespace cautious::service
