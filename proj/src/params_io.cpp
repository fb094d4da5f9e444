#include <cctype>
#include <fstream>
#include <istream>
#include <string>

#include "qdyn/counterexample.hpp"
#include "qdyn/errors.hpp"

namespace qdyn {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw InvalidOperand("params: value of '" + key + "' is not a number: '" + text + "'");
  }
  return v;
}

}  // namespace

MapParams parse_params(std::istream& in) {
  MapParams p;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidOperand("params: line " + std::to_string(line_no) + " is not key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "theta") p.theta = parse_number(key, value);
    else if (key == "t1") p.t1 = parse_number(key, value);
    else if (key == "t2") p.t2 = parse_number(key, value);
    else if (key == "t3") p.t3 = parse_number(key, value);
    else if (key == "t4") p.t4 = parse_number(key, value);
    else if (key == "delta") p.delta = parse_number(key, value);
    else if (key == "rate") {
      if (value != "default-pole") {
        throw InvalidOperand("params: unsupported rate '" + value + "' (only default-pole)");
      }
      p.gamma = RateFunction::pole_rate();
      p.f1 = RateFunction::pole_switch();
      p.f2 = RateFunction::pole_switch();
    } else if (key == "smoothing") {
      if (value == "whole-segment") p.smoothing = Smoothing::whole_segment;
      else if (value == "rotation-only") p.smoothing = Smoothing::rotation_only;
      else throw InvalidOperand("params: unknown smoothing '" + value + "'");
    } else {
      throw InvalidOperand("params: unknown key '" + key + "' on line " + std::to_string(line_no));
    }
  }
  p.validate();
  return p;
}

MapParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidOperand("params: cannot open " + path.string());
  return parse_params(in);
}

}  // namespace qdyn
