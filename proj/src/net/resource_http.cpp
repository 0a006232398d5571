// Copyright 2026 The ehrshare Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ehrshare/net/resource_http.hpp"

#include <memory>

#include "ehrshare/net/http.hpp"

namespace ehrshare::net {
namespace {

using nlohmann::json;
using resource::Direction;

Bytes key_header(const httplib::Request& req, const char* name) {
  const auto value = req.get_header_value(name);
  if (value.empty()) throw Error(Errc::validation, std::string(name) + " header is required");
  try {
    return base64_decode(value);
  } catch (const Error&) {
    throw Error(Errc::validation, std::string(name) + " is not valid base64");
  }
}

httplib::Headers bearer(const std::string& token) { return {{"Authorization", "Bearer " + token}}; }

Direction parse_direction(const std::string& s) {
  if (s == "incoming") return Direction::incoming;
  if (s == "outgoing") return Direction::outgoing;
  throw Error(Errc::validation, "direction must be incoming or outgoing");
}

}  // namespace

json metadata_to_json(const resource::EhrMetadata& m) {
  return {{"resource_id", m.resource_id},
          {"owner_id", m.owner_id},
          {"filename", m.filename},
          {"media_type", resource::media_type_name(m.media_type)},
          {"size_bytes", m.size_bytes},
          {"created_at", m.created_at}};
}

resource::EhrMetadata metadata_from_json(const json& j) {
  return {j.at("resource_id").get<std::string>(),
          j.at("owner_id").get<std::string>(),
          j.at("filename").get<std::string>(),
          resource::parse_media_type(j.at("media_type").get<std::string>()),
          j.at("size_bytes").get<std::uint64_t>(),
          j.at("created_at").get<std::int64_t>()};
}

json share_to_json(const resource::ShareRequest& s) {
  return {{"share_id", s.share_id},
          {"resource_id", s.resource_id},
          {"delegator_id", s.delegator_id},
          {"delegatee_id", s.delegatee_id},
          {"status", resource::share_status_name(s.status)},
          {"expiry", s.expiry ? json(*s.expiry) : json(nullptr)},
          {"created_at", s.created_at},
          {"updated_at", s.updated_at},
          {"break_glass", s.break_glass},
          {"threshold", s.threshold},
          {"shares", s.shares}};
}

resource::ShareRequest share_from_json(const json& j) {
  resource::ShareRequest s;
  s.share_id = j.at("share_id").get<std::string>();
  s.resource_id = j.at("resource_id").get<std::string>();
  s.delegator_id = j.at("delegator_id").get<std::string>();
  s.delegatee_id = j.at("delegatee_id").get<std::string>();
  s.status = resource::parse_share_status(j.at("status").get<std::string>());
  if (!j.at("expiry").is_null()) s.expiry = j.at("expiry").get<std::int64_t>();
  s.created_at = j.at("created_at").get<std::int64_t>();
  s.updated_at = j.at("updated_at").get<std::int64_t>();
  s.break_glass = j.at("break_glass").get<bool>();
  s.threshold = j.at("threshold").get<std::size_t>();
  s.shares = j.at("shares").get<std::size_t>();
  return s;
}

void mount_resource_routes(httplib::Server& server,
                           resource::ResourceService& service,
                           const auth::TokenVerifier& verifier) {
  server.Post("/ehr", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto caller = authenticate(req, verifier);
      if (!req.is_multipart_form_data() || !req.has_file("file")) {
        throw Error(Errc::validation, "multipart field 'file' is required");
      }
      const auto file = req.get_file_value("file");
      const std::string type_text =
          req.has_file("media_type") ? req.get_file_value("media_type").content : file.content_type;
      const auto meta = service.upload_ehr(
          caller.sub, as_bytes(file.content), file.filename, resource::parse_media_type(type_text),
          {key_header(req, kSecretKeyHeader), key_header(req, kSigningKeyHeader)});
      write_json(res, metadata_to_json(meta), 201);
    });
  });

  server.Get("/ehr", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto listing = service.list_ehrs(authenticate(req, verifier).sub);
      json owned = json::array(), shared = json::array();
      for (const auto& m : listing.owned) owned.push_back(metadata_to_json(m));
      for (const auto& m : listing.shared) shared.push_back(metadata_to_json(m));
      write_json(res, {{"owned", owned}, {"shared", shared}});
    });
  });

  server.Get(R"(/ehr/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto caller = authenticate(req, verifier);
      auto got = service.retrieve_ehr(caller.sub, req.matches[1], key_header(req, kSecretKeyHeader));
      res.status = 200;
      res.set_header("X-Filename", got.metadata.filename);
      res.set_header("X-Resource-Id", got.metadata.resource_id);
      res.set_header("X-Via-Proxy", got.via_proxy ? "true" : "false");
      res.set_header("Cache-Control", "no-store");
      // Streamed straight from the decrypted buffer to skip a copy.
      auto body = std::make_shared<Bytes>(std::move(got.plaintext));
      res.set_content_provider(
          body->size(), std::string(resource::media_type_name(got.metadata.media_type)),
          [body](std::size_t offset, std::size_t length, httplib::DataSink& sink) {
            return sink.write(reinterpret_cast<const char*>(body->data()) + offset, length);
          });
    });
  });

  server.Post("/shares", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto caller = authenticate(req, verifier);
      const json body = parse_json_body(req.body);
      write_json(res,
                 share_to_json(service.request_share(caller.sub, body.at("resource_id").get<std::string>())),
                 201);
    });
  });

  server.Post(R"(/shares/([^/]+)/answer)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto caller = authenticate(req, verifier);
      const json body = parse_json_body(req.body);
      resource::AnswerRequest answer;
      const auto decision = body.at("decision").get<std::string>();
      if (decision == "accept") {
        answer.decision = resource::Decision::accept;
        answer.keys.secret_key = base64_decode(body.at("secret_key").get<std::string>());
        answer.keys.signing_key = base64_decode(body.at("signing_key").get<std::string>());
        if (body.contains("expiry") && !body["expiry"].is_null()) {
          answer.expiry = from_millis(body["expiry"].get<std::int64_t>());
        }
        answer.threshold = body.value("threshold", std::size_t{1});
        answer.shares = body.value("shares", std::size_t{1});
      } else if (decision != "decline") {
        throw Error(Errc::validation, "decision must be accept or decline");
      }
      write_json(res, share_to_json(service.answer_share(caller.sub, req.matches[1], answer)));
    });
  });

  server.Post(R"(/shares/([^/]+)/revoke)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto caller = authenticate(req, verifier);
      write_json(res, share_to_json(service.revoke_share(caller.sub, req.matches[1])));
    });
  });

  server.Get("/shares", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto caller = authenticate(req, verifier);
      const auto direction = parse_direction(req.get_param_value("direction"));
      json out = json::array();
      for (const auto& s : service.list_share_requests(caller.sub, direction)) {
        out.push_back(share_to_json(s));
      }
      write_json(res, {{"shares", out}});
    });
  });
}

HttpResourceClient::HttpResourceClient(std::string base_url) : base_url_(std::move(base_url)) {}

resource::EhrMetadata HttpResourceClient::upload(const std::string& access_token,
                                                 const std::string& filename,
                                                 resource::MediaType type,
                                                 const std::string& content,
                                                 const resource::RequestKeys& keys) const {
  auto headers = bearer(access_token);
  headers.emplace(kSecretKeyHeader, base64_encode(keys.secret_key));
  headers.emplace(kSigningKeyHeader, base64_encode(keys.signing_key));
  const httplib::MultipartFormDataItems items{
      {"file", content, filename, std::string(resource::media_type_name(type))}};
  auto cli = make_client(base_url_);
  return metadata_from_json(json::parse(expect_ok(cli.Post("/ehr", headers, items)).body));
}

resource::EhrListing HttpResourceClient::list_ehrs(const std::string& access_token) const {
  auto cli = make_client(base_url_);
  const json got = json::parse(expect_ok(cli.Get("/ehr", bearer(access_token))).body);
  resource::EhrListing out;
  for (const auto& m : got.at("owned")) out.owned.push_back(metadata_from_json(m));
  for (const auto& m : got.at("shared")) out.shared.push_back(metadata_from_json(m));
  return out;
}

httplib::Result HttpResourceClient::retrieve_raw(const std::string& access_token,
                                                 const std::string& resource_id,
                                                 ByteView secret_key) const {
  auto headers = bearer(access_token);
  headers.emplace(kSecretKeyHeader, base64_encode(secret_key));
  auto cli = make_client(base_url_);
  std::string body;
  auto result = cli.Get(
      "/ehr/" + resource_id, headers,
      [&](const httplib::Response& r) {
        if (r.has_header("Content-Length")) body.reserve(std::stoull(r.get_header_value("Content-Length")));
        return true;
      },
      [&](const char* data, std::size_t n) {
        body.append(data, n);
        return true;
      });
  if (result) result->body = std::move(body);
  expect_ok(result);
  return result;
}

resource::Retrieved HttpResourceClient::retrieve(const std::string& access_token,
                                                 const std::string& resource_id,
                                                 ByteView secret_key) const {
  const auto result = retrieve_raw(access_token, resource_id, secret_key);
  resource::Retrieved out;
  out.metadata.resource_id = result->get_header_value("X-Resource-Id");
  out.metadata.filename = result->get_header_value("X-Filename");
  out.metadata.media_type = resource::parse_media_type(result->get_header_value("Content-Type"));
  out.metadata.size_bytes = result->body.size();
  out.plaintext.assign(result->body.begin(), result->body.end());
  out.via_proxy = result->get_header_value("X-Via-Proxy") == "true";
  return out;
}

resource::ShareRequest HttpResourceClient::request_share(const std::string& access_token,
                                                         const std::string& resource_id) const {
  auto cli = make_client(base_url_);
  const json body = {{"resource_id", resource_id}};
  return share_from_json(
      json::parse(expect_ok(cli.Post("/shares", bearer(access_token), body.dump(), "application/json")).body));
}

resource::ShareRequest HttpResourceClient::answer_share(const std::string& access_token,
                                                        const std::string& share_id,
                                                        const resource::AnswerRequest& answer) const {
  json body = {{"decision", answer.decision == resource::Decision::accept ? "accept" : "decline"}};
  if (answer.decision == resource::Decision::accept) {
    body["secret_key"] = base64_encode(answer.keys.secret_key);
    body["signing_key"] = base64_encode(answer.keys.signing_key);
    body["expiry"] = answer.expiry ? json(to_millis(*answer.expiry)) : json(nullptr);
    body["threshold"] = answer.threshold;
    body["shares"] = answer.shares;
  }
  auto cli = make_client(base_url_);
  return share_from_json(json::parse(
      expect_ok(cli.Post("/shares/" + share_id + "/answer", bearer(access_token), body.dump(),
                         "application/json"))
          .body));
}

resource::ShareRequest HttpResourceClient::revoke_share(const std::string& access_token,
                                                        const std::string& share_id) const {
  auto cli = make_client(base_url_);
  return share_from_json(json::parse(
      expect_ok(cli.Post("/shares/" + share_id + "/revoke", bearer(access_token), "", "application/json"))
          .body));
}

std::vector<resource::ShareRequest> HttpResourceClient::list_shares(const std::string& access_token,
                                                                    Direction direction) const {
  auto cli = make_client(base_url_);
  const std::string q = direction == Direction::incoming ? "incoming" : "outgoing";
  const json got = json::parse(expect_ok(cli.Get("/shares?direction=" + q, bearer(access_token))).body);
  std::vector<resource::ShareRequest> out;
  for (const auto& s : got.at("shares")) out.push_back(share_from_json(s));
  return out;
}

}  // namespace ehrshare::net
