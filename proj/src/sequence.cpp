#include "davenport/sequence.hpp"

#include <cctype>

namespace davenport {

namespace {

void skip_ws(const std::string& s, size_t& i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

int parse_int(const std::string& s, size_t& i) {
  skip_ws(s, i);
  size_t start = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == start)
    throw Error(ErrorCode::ParseError,
                "expected an element index in sequence literal '" + s + "'");
  if (i - start > 9)
    throw Error(ErrorCode::ParseError, "element index out of range in '" + s + "'");
  return std::stoi(s.substr(start, i - start));
}

}  // namespace

Sequence Sequence::parse_literal(int universe, const std::string& text) {
  size_t i = 0;
  skip_ws(text, i);
  if (i >= text.size() || text[i] != '[')
    throw Error(ErrorCode::ParseError,
                "sequence literal must start with '[': '" + text + "'");
  ++i;
  Sequence s(universe);
  skip_ws(text, i);
  if (i < text.size() && text[i] == ']') {
    ++i;
  } else {
    for (;;) {
      int g = parse_int(text, i);
      if (g < 0 || g >= universe)
        throw Error(ErrorCode::ParseError,
                    "element index " + std::to_string(g) +
                        " outside [0," + std::to_string(universe) + ")");
      s.add(g);
      skip_ws(text, i);
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      if (i < text.size() && text[i] == ']') {
        ++i;
        break;
      }
      throw Error(ErrorCode::ParseError,
                  "expected ',' or ']' in sequence literal '" + text + "'");
    }
  }
  skip_ws(text, i);
  if (i != text.size())
    throw Error(ErrorCode::ParseError,
                "trailing characters after sequence literal '" + text + "'");
  return s;
}

}  // namespace davenport
