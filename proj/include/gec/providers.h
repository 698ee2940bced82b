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

// HTTP-backed implementations of the external model interfaces. Tokens are
// read from environment variables; an empty variable name sends no
// Authorization header.

#ifndef GEC_PROVIDERS_H_
#define GEC_PROVIDERS_H_

#include <string>

#include "gec/ensemble.h"
#include "gec/judge.h"
#include "gec/metrics.h"

namespace gec {

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;  // starts with '/'
};

// Throws ConfigError for anything that is not http(s)://host[:port][/path].
Endpoint ParseEndpoint(const std::string& url);

struct HttpOptions {
  std::string token_env;
  int timeout_seconds = 60;
  std::string model;  // optional "model" field for chat requests
};

// POST {"model", "messages": [{"role": "user", "content": prompt}]} and
// returns choices[0].message.content.
class HttpChatJudgeClient : public JudgeClient {
 public:
  HttpChatJudgeClient(std::string id, const std::string& url,
                      HttpOptions options);
  std::string id() const override { return id_; }
  std::string Complete(const JudgeRequest& request) override;

 private:
  std::string id_;
  Endpoint endpoint_;
  HttpOptions options_;
};

// POST {"text": "..."} and reads {"perplexity": x}.
class HttpPerplexityProvider : public PerplexityProvider {
 public:
  HttpPerplexityProvider(const std::string& url, HttpOptions options);
  double Perplexity(const Sentence& sentence) override;

 private:
  Endpoint endpoint_;
  HttpOptions options_;
};

// Asks a chat endpoint to name the best candidate by number (1-based).
class HttpMetaJudge : public MetaJudgeClient {
 public:
  HttpMetaJudge(const std::string& url, HttpOptions options);
  std::size_t Choose(const Sentence& source,
                     std::span<const Sentence> candidates) override;

 private:
  Endpoint endpoint_;
  HttpOptions options_;
};

}  // namespace gec

#endif  // GEC_PROVIDERS_H_
