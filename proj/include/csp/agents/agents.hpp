#pragma once

#include <functional>
#include <string>

#include "csp/agents/prompts.hpp"
#include "csp/core/types.hpp"
#include "csp/llm/client.hpp"
#include "csp/text/idf.hpp"

namespace csp {

// Rule-based prefix stripping: markdown headers, "Here is ..." /
// "The modified document is:" style lead-ins, code fences. `llm_cleaner`
// (may be null) is invoked only when a prefix pattern remains after the
// rule pass. Throws Error("empty generation") when nothing survives.
std::string clean_generated_text(
    const std::string& raw,
    const std::function<std::string(const std::string&)>& llm_cleaner = nullptr);

// First `limit` tokenizer tokens rejoined with single spaces; text at or
// under the limit is returned unchanged.
std::string truncate_tokens(const std::string& text, int limit);

struct ScriptedContext {
  const BackgroundCorpus* corpus = nullptr;  // term rarity for term_injector
};

Document scripted_agent_step(ScriptedKind kind, const GameView& view,
                             const ScriptedContext& ctx = {});

struct LlmParams {
  double temperature = 0.5;
  double top_p = 0.9;
  int token_limit = 256;
  int retries = 3;
  int backoff_base_ms = 250;  // exponential backoff between attempts
};

// Full agent pipeline: build prompts, chat, clean, truncate. After all
// retries fail the agent falls back to its previous document and the
// resulting Document carries fallback = true.
Document llm_agent_step(GameView& view, const Player& player,
                        const PromptVariant& variant, Transport& llm,
                        const LlmParams& params,
                        const PromptTemplates& templates);

}  // namespace csp
