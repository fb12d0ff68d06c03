#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "effhol/surface.hpp"

#ifndef CORPUS_DIR
#define CORPUS_DIR "corpus"
#endif

namespace effhol::testing {

inline std::string corpus_path(const std::string& name) { return std::string(CORPUS_DIR) + "/" + name; }

inline std::string read_corpus(const std::string& name) {
  std::ifstream in(corpus_path(name));
  if (!in) throw std::runtime_error("missing corpus file " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Doc load_corpus(const std::string& name) { return parse_doc(read_corpus(name)); }

}  // namespace effhol::testing
