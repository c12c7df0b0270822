#include "csp/llm/client.hpp"

#include <cmath>
#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "csp/util/errors.hpp"
#include "csp/util/rng.hpp"

namespace csp {

using nlohmann::json;

std::string CallContext::key() const {
  return game_id + "/" + std::to_string(round) + "/" + player_id;
}

std::string chat_request_body(const ChatRequest& req) {
  json j;
  j["model"] = req.model;
  j["messages"] = json::array({
      json{{"role", "system"}, {"content", req.system}},
      json{{"role", "user"}, {"content", req.user}},
  });
  j["temperature"] = req.temperature;
  j["top_p"] = req.top_p;
  j["max_tokens"] = req.max_output_tokens;
  return j.dump();
}

std::string embed_request_body(const std::string& model,
                               const std::vector<std::string>& texts) {
  json j;
  j["model"] = model;
  j["input"] = texts;
  return j.dump();
}

namespace {

std::string body_excerpt(const std::string& body) {
  constexpr size_t kMax = 200;
  return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

class HttpTransport : public Transport {
 public:
  explicit HttpTransport(HttpOptions opts) : opts_(std::move(opts)) {}

  std::string chat(const ChatRequest& req, const CallContext&) override {
    json j = post("/v1/chat/completions", chat_request_body(req));
    try {
      return j.at("choices").at(0).at("message").at("content")
          .get<std::string>();
    } catch (const json::exception& e) {
      throw TransportError(std::string("malformed chat response: ") + e.what());
    }
  }

  std::vector<std::vector<double>> embed(
      const std::vector<std::string>& texts) override {
    if (texts.empty()) throw ParameterError("embed: texts must be non-empty");
    json j = post("/v1/embeddings", embed_request_body(opts_.embed_model, texts));
    std::vector<std::vector<double>> out;
    try {
      for (const auto& item : j.at("data"))
        out.push_back(item.at("embedding").get<std::vector<double>>());
    } catch (const json::exception& e) {
      throw TransportError(std::string("malformed embeddings response: ") +
                           e.what());
    }
    if (out.size() != texts.size())
      throw TransportError("embeddings response count mismatch");
    for (const auto& v : out)
      if (v.size() != out.front().size())
        throw TransportError("embedding dimension mismatch across batch");
    return out;
  }

 private:
  json post(const std::string& path, const std::string& body) {
    httplib::Client client(opts_.endpoint);
    client.set_read_timeout(opts_.timeout_ms / 1000,
                            (opts_.timeout_ms % 1000) * 1000);
    client.set_connection_timeout(opts_.timeout_ms / 1000,
                                  (opts_.timeout_ms % 1000) * 1000);
    httplib::Headers headers;
    if (const char* key = std::getenv(opts_.api_key_env.c_str()))
      headers.emplace("Authorization", std::string("Bearer ") + key);
    auto res = client.Post(path, headers, body, "application/json");
    if (!res) {
      const bool timeout = res.error() == httplib::Error::ConnectionTimeout ||
                           res.error() == httplib::Error::Read;
      throw TransportError("http request failed: " + httplib::to_string(res.error()),
                           timeout);
    }
    if (res->status < 200 || res->status >= 300)
      throw TransportError("http status " + std::to_string(res->status) + ": " +
                               body_excerpt(res->body),
                           res->status >= 500);
    try {
      return json::parse(res->body);
    } catch (const json::exception& e) {
      throw TransportError(std::string("response is not valid JSON: ") +
                           e.what());
    }
  }

  HttpOptions opts_;
};

}  // namespace

std::unique_ptr<Transport> make_http_transport(const HttpOptions& opts) {
  return std::make_unique<HttpTransport>(opts);
}

std::vector<double> mock_embedding(const std::string& text, size_t dim) {
  uint64_t state = fnv1a64(text);
  std::vector<double> v(dim);
  double norm2 = 0.0;
  for (size_t i = 0; i < dim; ++i) {
    // uniform in [-1, 1)
    v[i] = ((splitmix64_next(state) >> 11) * 0x1.0p-53) * 2.0 - 1.0;
    norm2 += v[i] * v[i];
  }
  if (norm2 > 0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& x : v) x *= inv;
  } else {
    v[0] = 1.0;
  }
  return v;
}

void MockTransport::script(const std::string& key, const std::string& response) {
  std::lock_guard<std::mutex> lock(mu_);
  script_[key] = response;
}

void MockTransport::set_fallback(
    std::function<std::string(const ChatRequest&, const CallContext&)> fn) {
  std::lock_guard<std::mutex> lock(mu_);
  fallback_ = std::move(fn);
}

void MockTransport::fail_next(int times, bool retryable) {
  std::lock_guard<std::mutex> lock(mu_);
  fail_next_ = times;
  fail_retryable_ = retryable;
}

std::string MockTransport::chat(const ChatRequest& req, const CallContext& ctx) {
  std::lock_guard<std::mutex> lock(mu_);
  seen_.push_back({req, ctx});
  if (fail_next_ > 0) {
    --fail_next_;
    throw TransportError("mock transport failure", fail_retryable_);
  }
  auto it = script_.find(ctx.key());
  if (it != script_.end()) return it->second;
  if (fallback_) return fallback_(req, ctx);
  return req.user;
}

std::vector<std::vector<double>> MockTransport::embed(
    const std::vector<std::string>& texts) {
  if (texts.empty()) throw ParameterError("embed: texts must be non-empty");
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(mock_embedding(t, embed_dim_));
  return out;
}

std::vector<MockTransport::SeenRequest> MockTransport::seen() const {
  std::lock_guard<std::mutex> lock(mu_);
  return seen_;
}

}  // namespace csp
