#include "csp/agents/agents.hpp"

#include <algorithm>
#include <chrono>
#include <regex>
#include <thread>

#include "csp/text/tokenize.hpp"
#include "csp/util/errors.hpp"

namespace csp {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t nl = s.find('\n', pos);
    if (nl == std::string::npos) {
      lines.push_back(s.substr(pos));
      break;
    }
    lines.push_back(s.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

// "Here is ...", "Here's ...", "The modified/edited/... document (text) is",
// optionally followed by a colon.
const std::regex& prefix_head() {
  static const std::regex re(
      R"(^\s*(here('s| is| are)\b[^:]*|(the\s+)?(modified|edited|updated|revised|new|final)?\s*document(\s+text)?\s+is[^:]*|sure[,!.]?[^:]*)\s*:?\s*$)",
      std::regex::icase);
  return re;
}

const std::regex& prefix_inline() {
  static const std::regex re(
      R"(^\s*(here('s| is| are)\b[^:]*|(the\s+)?(modified|edited|updated|revised|new|final)?\s*document(\s+text)?\s+is[^:]*)\s*:\s*(\S.*)$)",
      std::regex::icase);
  return re;
}

bool looks_like_residual_prefix(const std::string& text) {
  auto lines = split_lines(text);
  for (const auto& raw : lines) {
    const std::string line = trim(raw);
    if (line.empty()) continue;
    return line.size() > 1 && line.back() == ':' &&
           tokenize(line).size() <= 10;
  }
  return false;
}

std::string strip_prefixes(const std::string& raw) {
  auto lines = split_lines(raw);
  size_t begin = 0, end = lines.size();

  // code fences
  while (begin < end && trim(lines[begin]).empty()) ++begin;
  if (begin < end && trim(lines[begin]).rfind("```", 0) == 0) ++begin;
  while (end > begin && trim(lines[end - 1]).empty()) --end;
  if (end > begin && trim(lines[end - 1]).rfind("```", 0) == 0) --end;

  std::string inline_rest;
  for (; begin < end; ++begin) {
    const std::string line = trim(lines[begin]);
    if (line.empty()) continue;
    if (line[0] == '#') continue;  // leading markdown header
    if (std::regex_match(line, prefix_head())) continue;
    std::smatch m;
    if (std::regex_match(line, m, prefix_inline())) {
      inline_rest = m[m.size() - 1].str();
      ++begin;
    }
    break;
  }

  std::string out;
  if (!inline_rest.empty()) out = inline_rest;
  for (size_t i = begin; i < end; ++i) {
    if (!out.empty()) out += "\n";
    out += lines[i];
  }
  return trim(out);
}

}  // namespace

std::string clean_generated_text(
    const std::string& raw,
    const std::function<std::string(const std::string&)>& llm_cleaner) {
  std::string text = strip_prefixes(raw);
  if (llm_cleaner && looks_like_residual_prefix(text)) {
    text = strip_prefixes(llm_cleaner(text));
  }
  if (text.empty()) throw Error("empty generation");
  return text;
}

std::string truncate_tokens(const std::string& text, int limit) {
  if (limit < 1) throw ParameterError("truncate_tokens: limit must be >= 1");
  const TokenStream tokens = tokenize(text);
  if (static_cast<int>(tokens.size()) <= limit) return text;
  std::string out;
  for (int i = 0; i < limit; ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

namespace {

Document make_next_doc(const GameView& view, const std::string& player_id,
                       std::string text, bool fallback = false) {
  Document d;
  d.player_id = player_id;
  d.round = view.round_number;
  d.text = std::move(text);
  d.token_count = static_cast<int>(tokenize(d.text).size());
  d.doc_id = make_doc_id(view.competition_id, view.query.id, view.round_number,
                         player_id);
  d.fallback = fallback;
  return d;
}

const VisibleRound* last_ranked_round(const GameView& view) {
  for (auto it = view.history.rbegin(); it != view.history.rend(); ++it)
    if (!it->ranking.empty()) return &*it;
  return nullptr;
}

}  // namespace

Document scripted_agent_step(ScriptedKind kind, const GameView& view,
                             const ScriptedContext& ctx) {
  const std::string& pid = view.own_current_doc.player_id;
  switch (kind) {
    case ScriptedKind::noop:
      return make_next_doc(view, pid, view.own_current_doc.text);
    case ScriptedKind::copycat: {
      const VisibleRound* prev = last_ranked_round(view);
      if (!prev) return make_next_doc(view, pid, view.own_current_doc.text);
      const std::string& winner = top_of(prev->ranking).player_id;
      return make_next_doc(view, pid, doc_of(prev->documents, winner).text);
    }
    case ScriptedKind::term_injector: {
      const TokenStream own = tokenize(view.own_current_doc.text);
      const TokenStream qterms = tokenize(view.query.text);
      auto df_of = [&](const std::string& t) -> long {
        return ctx.corpus ? ctx.corpus->idf.df_of(t) : 0;
      };
      // prefer terms missing from the document; rarest (lowest df) first
      std::string best;
      bool best_missing = false;
      long best_df = 0;
      for (const auto& t : qterms) {
        const bool missing = std::find(own.begin(), own.end(), t) == own.end();
        const long df = df_of(t);
        const bool better =
            best.empty() || (missing && !best_missing) ||
            (missing == best_missing &&
             (df < best_df || (df == best_df && t < best)));
        if (better) {
          best = t;
          best_missing = missing;
          best_df = df;
        }
      }
      if (best.empty())
        return make_next_doc(view, pid, view.own_current_doc.text);
      return make_next_doc(view, pid, view.own_current_doc.text + " " + best);
    }
  }
  throw ParameterError("unknown scripted agent kind");
}

Document llm_agent_step(GameView& view, const Player& player,
                        const PromptVariant& variant, Transport& llm,
                        const LlmParams& params,
                        const PromptTemplates& templates) {
  PromptBundle bundle =
      variant.kind == PromptKind::listwise
          ? build_listwise_prompt(view, player, variant, params.token_limit,
                                  templates)
          : build_pairwise_prompt(view, player, variant, params.token_limit,
                                  templates);

  ChatRequest req;
  req.model = player.agent.model;
  req.system = bundle.system_prompt;
  req.user = bundle.user_prompt;
  req.temperature = params.temperature;
  req.top_p = params.top_p;
  // room for prefixes the cleaner strips
  req.max_output_tokens = 2 * params.token_limit;

  CallContext ctx{view.query.id, view.round_number,
                  view.own_current_doc.player_id};

  auto cleaner = [&](const std::string& text) {
    ChatRequest clean_req = req;
    clean_req.system.clear();
    clean_req.user = build_clean_prompt(text, templates);
    return llm.chat(clean_req, ctx);
  };

  for (int attempt = 0; attempt <= params.retries; ++attempt) {
    if (attempt > 0 && params.backoff_base_ms > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(
          params.backoff_base_ms << (attempt - 1)));
    }
    try {
      const std::string raw = llm.chat(req, ctx);
      const std::string cleaned = clean_generated_text(raw, cleaner);
      return make_next_doc(view, view.own_current_doc.player_id,
                           truncate_tokens(cleaned, params.token_limit));
    } catch (const Error&) {
      // transport failure or empty generation; retry, then fall back
    }
  }
  return make_next_doc(view, view.own_current_doc.player_id,
                       view.own_current_doc.text, /*fallback=*/true);
}

}  // namespace csp
