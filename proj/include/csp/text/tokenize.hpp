#pragma once

#include <cctype>
#include <string>
#include <vector>

namespace csp {

using TokenStream = std::vector<std::string>;

// Lowercase, split on runs of non-alphanumeric characters, digits kept.
inline TokenStream tokenize(const std::string& text) {
  TokenStream out;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// Tokenize and rejoin with single spaces. Document equality for copy
// detection and uniqueness measures is defined over this form.
inline std::string normalize_text(const std::string& text) {
  TokenStream toks = tokenize(text);
  std::string out;
  for (size_t i = 0; i < toks.size(); ++i) {
    if (i) out.push_back(' ');
    out += toks[i];
  }
  return out;
}

}  // namespace csp
