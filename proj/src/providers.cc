// Copyright 2026 The gec-eval Authors.
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

#include "gec/providers.h"

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

namespace gec {
namespace {

using json = nlohmann::json;

std::string Token(const HttpOptions& options) {
  if (options.token_env.empty()) return {};
  const char* value = std::getenv(options.token_env.c_str());
  if (value == nullptr || *value == '\0') {
    throw ConfigError("environment variable " + options.token_env +
                      " is not set");
  }
  return value;
}

json PostJson(const Endpoint& endpoint, const HttpOptions& options,
              const json& body) {
  httplib::Client client(endpoint.base);
  client.set_connection_timeout(options.timeout_seconds, 0);
  client.set_read_timeout(options.timeout_seconds, 0);
  httplib::Headers headers;
  if (std::string token = Token(options); !token.empty()) {
    headers.emplace("Authorization", "Bearer " + token);
  }
  auto res = client.Post(endpoint.path, headers, body.dump(), "application/json");
  if (!res) {
    throw ProviderError(endpoint.base + endpoint.path + ": " +
                        httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw ProviderError(endpoint.base + endpoint.path + ": HTTP " +
                        std::to_string(res->status));
  }
  try {
    return json::parse(res->body);
  } catch (const json::exception& e) {
    throw ProviderError(endpoint.base + endpoint.path + ": bad JSON: " +
                        e.what());
  }
}

std::string ChatContent(const Endpoint& endpoint, const HttpOptions& options,
                        const std::string& prompt) {
  json body = {{"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
               {"temperature", 0}};
  if (!options.model.empty()) body["model"] = options.model;
  json reply = PostJson(endpoint, options, body);
  try {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    throw ProviderError(endpoint.base + endpoint.path +
                        ": reply has no choices[0].message.content");
  }
}

}  // namespace

Endpoint ParseEndpoint(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint '" + url + "' has no scheme");
  }
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ConfigError("unsupported scheme in '" + url + "'");
  }
  const std::size_t host_start = scheme_end + 3;
  const std::size_t slash = url.find('/', host_start);
  Endpoint e;
  e.base = url.substr(0, slash);
  e.path = slash == std::string::npos ? "/" : url.substr(slash);
  if (e.base.size() == host_start) {
    throw ConfigError("endpoint '" + url + "' has no host");
  }
  return e;
}

HttpChatJudgeClient::HttpChatJudgeClient(std::string id, const std::string& url,
                                         HttpOptions options)
    : id_(std::move(id)),
      endpoint_(ParseEndpoint(url)),
      options_(std::move(options)) {}

std::string HttpChatJudgeClient::Complete(const JudgeRequest& request) {
  return ChatContent(endpoint_, options_, request.prompt);
}

HttpPerplexityProvider::HttpPerplexityProvider(const std::string& url,
                                               HttpOptions options)
    : endpoint_(ParseEndpoint(url)), options_(std::move(options)) {}

double HttpPerplexityProvider::Perplexity(const Sentence& sentence) {
  json reply = PostJson(endpoint_, options_, {{"text", sentence.Join()}});
  double value = 0;
  try {
    value = reply.at("perplexity").get<double>();
  } catch (const json::exception&) {
    throw ProviderError("perplexity reply has no numeric 'perplexity'");
  }
  if (!(value > 0)) throw ProviderError("perplexity must be positive");
  return value;
}

HttpMetaJudge::HttpMetaJudge(const std::string& url, HttpOptions options)
    : endpoint_(ParseEndpoint(url)), options_(std::move(options)) {}

std::size_t HttpMetaJudge::Choose(const Sentence& source,
                                  std::span<const Sentence> candidates) {
  std::string prompt =
      "Pick the best grammatical correction of the source sentence. "
      "Answer with the candidate number only.\n\nSource: " +
      source.Join() + "\n";
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    prompt += std::to_string(i + 1) + ". " + candidates[i].Join() + "\n";
  }
  const std::string answer = ChatContent(endpoint_, options_, prompt);
  std::size_t pos = answer.find_first_of("0123456789");
  if (pos == std::string::npos) {
    throw ProviderError("meta judge answer '" + answer + "' names no candidate");
  }
  const std::size_t pick = std::strtoul(answer.c_str() + pos, nullptr, 10);
  if (pick < 1 || pick > candidates.size()) {
    throw ProviderError("meta judge picked out-of-range candidate " +
                        std::to_string(pick));
  }
  return pick - 1;
}

}  // namespace gec
