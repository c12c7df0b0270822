#include "csp/text/idf.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "csp/util/errors.hpp"

namespace csp {

namespace fs = std::filesystem;

StopwordList load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open stopword list: " + path);
  StopwordList out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::string lower;
    for (char c : line) lower.push_back(static_cast<char>(std::tolower(
        static_cast<unsigned char>(c))));
    out.terms.insert(lower);
  }
  return out;
}

void CorpusBuilder::add_document(const TokenStream& tokens) {
  ++docs_;
  std::set<std::string> distinct;
  for (const auto& raw : tokens) {
    const std::string t = normalizer_ ? normalizer_(raw) : raw;
    if (t.empty()) continue;
    tokens_ += 1.0;
    ++tf_[t];
    distinct.insert(t);
  }
  for (const auto& t : distinct) ++df_[t];
}

BackgroundCorpus CorpusBuilder::build() const {
  if (docs_ == 0) throw ParameterError("corpus is empty");
  BackgroundCorpus c;
  c.idf.doc_count = docs_;
  c.idf.df.insert(df_.begin(), df_.end());
  c.total_tokens = tokens_;
  c.avg_dl = tokens_ > 0 ? tokens_ / static_cast<double>(docs_) : 1.0;
  if (tokens_ > 0)
    for (const auto& [t, f] : tf_) c.collection_lm[t] = f / tokens_;
  return c;
}

BackgroundCorpus build_corpus_from_path(const std::string& path,
                                        TermNormalizer normalizer) {
  CorpusBuilder builder(std::move(normalizer));
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      std::ifstream in(f);
      std::stringstream ss;
      ss << in.rdbuf();
      builder.add_text(ss.str());
    }
  } else {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open corpus: " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      try {
        auto j = nlohmann::json::parse(line);
        builder.add_text(j.at("text").get<std::string>());
      } catch (const nlohmann::json::exception& e) {
        throw SchemaError("corpus line " + std::to_string(line_no) + ": " +
                          e.what());
      }
    }
  }
  return builder.build();
}

}  // namespace csp
