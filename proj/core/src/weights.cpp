#include "sl2hat/weights.hpp"

#include <charconv>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sl2hat {

Weight weyl_reflect(int index, const Weight& w) {
  if (index != 0 && index != 1) {
    throw std::invalid_argument("weyl_reflect: simple root index must be 0 or 1, got " +
                                std::to_string(index));
  }
  return weyl_reflect(static_cast<SimpleRoot>(index), w);
}

std::string to_string(const Weight& w) {
  std::ostringstream os;
  os << w.level << "*L0 + (" << w.alpha1_index << "/2)*a1 + " << w.delta_depth << "*delta";
  return os.str();
}

namespace {

std::int64_t to_int(const std::string& s) {
  std::int64_t v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) throw std::invalid_argument("parse_weight: bad integer '" + s + "'");
  return v;
}

}  // namespace

Weight parse_weight(std::string_view text) {
  std::string compact;
  compact.reserve(text.size());
  for (char c : text) {
    if (c != ' ' && c != '\t') compact.push_back(c);
  }
  static const std::regex pattern(R"(^([+-]?\d+)\*L0\+\(([+-]?\d+)/2\)\*a1\+([+-]?\d+)\*delta$)");
  std::smatch m;
  if (!std::regex_match(compact, m, pattern)) {
    throw std::invalid_argument("parse_weight: expected 'n*L0 + (x/2)*a1 + d*delta', got '" +
                                std::string(text) + "'");
  }
  return {to_int(m[1].str()), to_int(m[2].str()), to_int(m[3].str())};
}

}  // namespace sl2hat
