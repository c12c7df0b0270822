#include <doctest.h>

#include "csp/text/tokenize.hpp"

using namespace csp;

TEST_CASE("tokenize lowercases and splits on non-alphanumeric runs") {
  CHECK(tokenize("Hello, World!") == TokenStream{"hello", "world"});
  CHECK(tokenize("  a--b..c  ") == TokenStream{"a", "b", "c"});
  CHECK(tokenize("") == TokenStream{});
  CHECK(tokenize("!!!") == TokenStream{});
}

TEST_CASE("digits are kept as token characters") {
  CHECK(tokenize("bm25 top-10") == TokenStream{"bm25", "top", "10"});
  CHECK(tokenize("3.14") == TokenStream{"3", "14"});
}

TEST_CASE("normalize_text rejoins with single spaces and is idempotent") {
  CHECK(normalize_text("Hello,   World!") == "hello world");
  CHECK(normalize_text("") == "");
  const std::string n = normalize_text("A  B;;C");
  CHECK(normalize_text(n) == n);
}

TEST_CASE("punctuation-only differences normalize equal") {
  CHECK(normalize_text("the cat sat.") == normalize_text("The cat, sat"));
}
