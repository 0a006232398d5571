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

#pragma once

#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "ehrshare/auth/user_directory.hpp"
#include "ehrshare/resource/resource_service.hpp"

namespace ehrshare::net {

// Per-request key headers, base64. Only meaningful over TLS.
inline constexpr const char* kSecretKeyHeader = "X-Secret-Key";
inline constexpr const char* kSigningKeyHeader = "X-Signing-Key";

nlohmann::json metadata_to_json(const resource::EhrMetadata& m);
resource::EhrMetadata metadata_from_json(const nlohmann::json& j);
nlohmann::json share_to_json(const resource::ShareRequest& s);
resource::ShareRequest share_from_json(const nlohmann::json& j);

// POST /ehr (multipart "file"), GET /ehr, GET /ehr/{id}, POST /shares,
// POST /shares/{id}/answer, POST /shares/{id}/revoke, GET /shares?direction=.
void mount_resource_routes(httplib::Server& server,
                           resource::ResourceService& service,
                           const auth::TokenVerifier& verifier);

class HttpResourceClient {
 public:
  explicit HttpResourceClient(std::string base_url);

  resource::EhrMetadata upload(const std::string& access_token,
                               const std::string& filename,
                               resource::MediaType type,
                               const std::string& content,
                               const resource::RequestKeys& keys) const;
  resource::EhrListing list_ehrs(const std::string& access_token) const;
  resource::Retrieved retrieve(const std::string& access_token,
                               const std::string& resource_id,
                               ByteView secret_key) const;
  // Same, without copying the body out of the response.
  httplib::Result retrieve_raw(const std::string& access_token,
                               const std::string& resource_id,
                               ByteView secret_key) const;
  resource::ShareRequest request_share(const std::string& access_token,
                                       const std::string& resource_id) const;
  resource::ShareRequest answer_share(const std::string& access_token,
                                      const std::string& share_id,
                                      const resource::AnswerRequest& answer) const;
  resource::ShareRequest revoke_share(const std::string& access_token,
                                      const std::string& share_id) const;
  std::vector<resource::ShareRequest> list_shares(const std::string& access_token,
                                                  resource::Direction direction) const;

 private:
  std::string base_url_;
};

}  // namespace ehrshare::net
