// Maps JSON pointers back to byte offsets in the source text. The JSON
// library discards positions after parsing, so this re-scans the text.
#include <cctype>
#include <string>
#include <vector>

#include "tempodag/spec_format.hpp"

namespace tempodag {

namespace {

class Scanner {
 public:
  explicit Scanner(const std::string& text) : text_(text) {}

  std::size_t pos() const { return pos_; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  // Decoded string; escapes other than \" and \\ are kept loosely.
  bool read_string(std::string& out) {
    if (!eat('"')) return false;
    out.clear();
    while (pos_ < text_.size()) {
      char c = text_[pos_++];
      if (c == '"') return true;
      if (c == '\\' && pos_ < text_.size()) c = text_[pos_++];
      out += c;
    }
    return false;
  }

  bool skip_value() {
    const char c = peek();
    std::string ignored;
    if (c == '"') return read_string(ignored);
    if (c == '{') {
      ++pos_;
      if (eat('}')) return true;
      do {
        if (!read_string(ignored) || !eat(':') || !skip_value()) return false;
      } while (eat(','));
      return eat('}');
    }
    if (c == '[') {
      ++pos_;
      if (eat(']')) return true;
      do {
        if (!skip_value()) return false;
      } while (eat(','));
      return eat(']');
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::string_view(",}] \t\r\n").find(text_[pos_]) == std::string_view::npos) ++pos_;
    return pos_ > start;
  }

  // Positions the cursor at member `key` of the object at the cursor.
  bool enter_member(const std::string& key) {
    if (!eat('{')) return false;
    if (peek() == '}') return false;
    std::string name;
    do {
      if (!read_string(name) || !eat(':')) return false;
      if (name == key) {
        skip_ws();
        return true;
      }
      if (!skip_value()) return false;
    } while (eat(','));
    return false;
  }

  bool enter_element(std::size_t index) {
    if (!eat('[')) return false;
    if (peek() == ']') return false;
    for (std::size_t i = 0;; ++i) {
      if (i == index) {
        skip_ws();
        return true;
      }
      if (!skip_value() || !eat(',')) return false;
    }
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
};

std::vector<std::string> split_pointer(const std::string& pointer) {
  std::vector<std::string> tokens;
  if (pointer.empty()) return tokens;
  std::string current;
  for (std::size_t i = 1; i <= pointer.size(); ++i) {
    if (i == pointer.size() || pointer[i] == '/') {
      tokens.push_back(current);
      current.clear();
    } else if (pointer[i] == '~' && i + 1 < pointer.size()) {
      current += pointer[++i] == '1' ? '/' : '~';
    } else {
      current += pointer[i];
    }
  }
  return tokens;
}

}  // namespace

std::optional<std::size_t> locate_pointer(const std::string& text, const std::string& pointer) {
  Scanner s(text);
  s.skip_ws();
  std::size_t found = s.pos();
  if (found >= text.size()) return std::nullopt;
  for (const auto& token : split_pointer(pointer)) {
    const char c = s.peek();
    bool ok = false;
    if (c == '{') {
      ok = s.enter_member(token);
    } else if (c == '[') {
      const bool numeric = !token.empty() && token.find_first_not_of("0123456789") == std::string::npos;
      ok = numeric && s.enter_element(std::stoul(token));
    }
    if (!ok) break;
    found = s.pos();
  }
  return found;
}

}  // namespace tempodag
