#include "sigmadae/initfile.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace sigmadae {

namespace {

int parse_order(const std::string& s, int line) {
  int r = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), r);
  if (ec != std::errc() || p != s.data() + s.size() || r < 0)
    throw InitFileError("derivative order must be a nonnegative integer, got '" + s + "'", line);
  return r;
}

double parse_value(const std::string& s, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw InitFileError("not a number: '" + s + "'", line);
  return v;
}

}  // namespace

InitData parse_init(std::string_view text, const DaeModel& model) {
  InitData init;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream fields(raw);
    std::vector<std::string> tok;
    for (std::string w; fields >> w;) tok.push_back(w);
    if (tok.empty()) continue;

    const bool guess = tok[0] == "guess";
    if (tok.size() != (guess ? 4u : 3u))
      throw InitFileError("expected '[guess] name order value'", line);
    const std::string& name = tok[guess ? 1 : 0];
    const auto j = model.variable_index(name);
    if (!j) throw InitFileError("unknown variable '" + name + "'", line);
    const DerivPair p{*j, parse_order(tok[guess ? 2 : 1], line)};
    const double v = parse_value(tok[guess ? 3 : 2], line);
    if (init.values.contains(p) || init.guesses.contains(p))
      throw InitFileError("'" + name + "' order " + std::to_string(p.order) + " given twice", line);
    (guess ? init.guesses : init.values)[p] = v;
  }
  return init;
}

InitData parse_init_file(const std::string& path, const DaeModel& model) {
  std::ifstream f(path);
  if (!f) throw InitFileError("cannot read " + path, 0);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_init(buf.str(), model);
}

}  // namespace sigmadae
