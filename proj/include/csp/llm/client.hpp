#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace csp {

struct ChatRequest {
  std::string model;
  std::string system;
  std::string user;
  double temperature = 0.5;
  double top_p = 0.9;
  int max_output_tokens = 512;
};

// Identifies the simulation step a request belongs to; the mock transport
// keys scripted responses by it.
struct CallContext {
  std::string game_id;
  int round = 0;
  std::string player_id;

  std::string key() const;
};

// Canonical JSON body for POST /v1/chat/completions (sorted keys).
std::string chat_request_body(const ChatRequest& req);
std::string embed_request_body(const std::string& model,
                               const std::vector<std::string>& texts);

class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string chat(const ChatRequest& req, const CallContext& ctx) = 0;
  virtual std::vector<std::vector<double>> embed(
      const std::vector<std::string>& texts) = 0;
};

struct HttpOptions {
  std::string endpoint;  // e.g. http://localhost:8000
  std::string embed_model;
  int timeout_ms = 60000;
  std::string api_key_env = "CSP_API_KEY";
};

// OpenAI-compatible chat-completions / embeddings client.
std::unique_ptr<Transport> make_http_transport(const HttpOptions& opts);

class MockTransport : public Transport {
 public:
  // Scripted responses keyed by CallContext ("game/round/player"); the
  // fallback function handles unscripted requests. Default fallback
  // echoes the user prompt.
  MockTransport() = default;

  void script(const std::string& key, const std::string& response);
  void set_fallback(std::function<std::string(const ChatRequest&,
                                              const CallContext&)> fn);
  void fail_next(int times, bool retryable = true);
  void set_embed_dim(size_t dim) { embed_dim_ = dim; }

  std::string chat(const ChatRequest& req, const CallContext& ctx) override;
  std::vector<std::vector<double>> embed(
      const std::vector<std::string>& texts) override;

  // Requests seen, in arrival order; used by causality audits.
  struct SeenRequest {
    ChatRequest req;
    CallContext ctx;
  };
  std::vector<SeenRequest> seen() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::string> script_;
  std::function<std::string(const ChatRequest&, const CallContext&)> fallback_;
  int fail_next_ = 0;
  bool fail_retryable_ = true;
  size_t embed_dim_ = 64;
  std::vector<SeenRequest> seen_;
};

// Deterministic unit vector derived from the text alone; what
// MockTransport::embed returns per text.
std::vector<double> mock_embedding(const std::string& text, size_t dim);

}  // namespace csp
