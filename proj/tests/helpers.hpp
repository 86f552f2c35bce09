#ifndef MOST_TEST_HELPERS_HPP
#define MOST_TEST_HELPERS_HPP

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "most/parser.hpp"
#include "most/trace.hpp"

namespace most_test {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline most::Program parse_corpus(const std::string& name) {
  return most::parse_program(read_file(std::string(CORPUS_DIR) + "/" + name));
}

// Builds traces from the canonical text form, interning display names in a
// shared environment so traces built together share free names.
struct TB {
  most::NameTable& names;
  std::map<std::string, most::Chan> env;

  explicit TB(most::NameTable& n) : names(n) {}

  most::Chan chan(const std::string& s) {
    auto it = env.find(s);
    if (it != env.end()) return it->second;
    most::Chan c = names.fresh_chan(s);
    env.emplace(s, c);
    return c;
  }

  most::Trace t(const std::string& text) {
    std::vector<most::TraceElem> elems;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
      most::Sign sign;
      if (tok == "O") sign = most::Sign::Out;
      else if (tok == "I") sign = most::Sign::In;
      else if (tok == "S") sign = most::Sign::Sync;
      else if (tok == "C") sign = most::Sign::Constr;
      else FAIL("bad sign: " << tok);
      in >> tok;
      if (tok == "close") {
        in >> tok;
        elems.push_back(most::elem_close(sign, chan(tok)));
      } else if (tok == "chan") {
        in >> tok;
        most::Chan a = chan(tok);
        in >> tok;  // [b]
        REQUIRE(tok.front() == '[');
        REQUIRE(tok.back() == ']');
        most::Chan b = chan(tok.substr(1, tok.size() - 2));
        elems.push_back(most::elem_chan(sign, a, b));
      } else {
        auto dot = tok.find('.');
        REQUIRE(dot != std::string::npos);
        most::Chan a = chan(tok.substr(0, dot));
        most::Lab l = names.label(tok.substr(dot + 1));
        elems.push_back(most::elem_label(sign, a, l));
      }
      if (in >> tok) REQUIRE(tok == ";");
    }
    return most::Trace::canon(std::move(elems));
  }

  most::TraceSet set(std::initializer_list<std::string> texts) {
    most::TraceSet out;
    for (auto& s : texts) out.insert(t(s));
    return out;
  }
};

inline std::string dump(const most::TraceSet& ts, const most::NameTable& names) {
  std::string out;
  for (auto& line : most::sorted_trace_texts(ts, names)) out += line + "\n";
  return out;
}

}  // namespace most_test

#endif
