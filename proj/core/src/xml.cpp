#include "nocsim/xml.hpp"

#include <cctype>

#include "nocsim/types.hpp"

namespace nocsim::xml {

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::string_view file)
      : text_(text), file_(file) {}

  Element parse_document() {
    skip_misc();
    if (eof()) fail("document has no root element");
    Element root = parse_element();
    skip_misc();
    if (!eof()) fail("trailing content after root element");
    return root;
  }

 private:
  std::string_view text_;
  std::string_view file_;
  std::size_t pos_ = 0;
  int line_ = 1;

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  bool starts_with(std::string_view s) const {
    return text_.substr(pos_, s.size()) == s;
  }

  void expect(char c) {
    if (eof() || peek() != c)
      fail(std::string("expected '") + c + "'");
    advance();
  }

  [[noreturn]] void fail(const std::string& reason) const {
    throw ConfigError(std::string(file_) + ":" + std::to_string(line_) +
                      ": " + reason);
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek())))
      advance();
  }

  void skip_until(std::string_view terminator) {
    while (!eof() && !starts_with(terminator)) advance();
    if (eof()) fail("unterminated '" + std::string(terminator) + "'");
    for (std::size_t i = 0; i < terminator.size(); ++i) advance();
  }

  // Whitespace, comments and processing instructions between elements.
  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<!--")) {
        skip_until("-->");
      } else if (starts_with("<?")) {
        skip_until("?>");
      } else {
        return;
      }
    }
  }

  std::string parse_name() {
    std::size_t start = pos_;
    while (!eof()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
          c == '-' || c == '.' || c == ':') {
        advance();
      } else {
        break;
      }
    }
    if (pos_ == start) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string decode_entities(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '&') {
        out.push_back(raw[i]);
        continue;
      }
      auto take = [&](std::string_view entity, char value) {
        if (raw.substr(i, entity.size()) == entity) {
          out.push_back(value);
          i += entity.size() - 1;
          return true;
        }
        return false;
      };
      if (!take("&amp;", '&') && !take("&lt;", '<') && !take("&gt;", '>') &&
          !take("&quot;", '"') && !take("&apos;", '\''))
        fail("unknown entity reference");
    }
    return out;
  }

  std::string parse_attribute_value() {
    if (eof() || (peek() != '"' && peek() != '\''))
      fail("expected quoted attribute value");
    char quote = advance();
    std::size_t start = pos_;
    while (!eof() && peek() != quote) advance();
    if (eof()) fail("unterminated attribute value");
    std::string value = decode_entities(text_.substr(start, pos_ - start));
    advance();
    return value;
  }

  Element parse_element() {
    expect('<');
    Element el;
    el.line = line_;
    el.name = parse_name();
    for (;;) {
      skip_ws();
      if (eof()) fail("unterminated element '" + el.name + "'");
      if (peek() == '/') {
        advance();
        expect('>');
        return el;
      }
      if (peek() == '>') {
        advance();
        parse_content(el);
        return el;
      }
      std::string attr = parse_name();
      skip_ws();
      expect('=');
      skip_ws();
      el.attributes.emplace_back(std::move(attr), parse_attribute_value());
    }
  }

  void parse_content(Element& el) {
    for (;;) {
      std::size_t start = pos_;
      while (!eof() && peek() != '<') advance();
      if (pos_ > start)
        el.text += decode_entities(text_.substr(start, pos_ - start));
      if (eof()) fail("unterminated element '" + el.name + "'");
      if (starts_with("<!--")) {
        skip_until("-->");
        continue;
      }
      if (starts_with("</")) {
        advance();
        advance();
        std::string name = parse_name();
        if (name != el.name)
          fail("mismatched closing tag '" + name + "' for '" + el.name + "'");
        skip_ws();
        expect('>');
        return;
      }
      el.children.push_back(parse_element());
    }
  }
};

}  // namespace

const Element* Element::child(std::string_view name) const {
  for (const Element& c : children)
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<const Element*> Element::children_named(
    std::string_view name) const {
  std::vector<const Element*> out;
  for (const Element& c : children)
    if (c.name == name) out.push_back(&c);
  return out;
}

std::optional<std::string> Element::attribute(std::string_view name) const {
  for (const auto& [key, value] : attributes)
    if (key == name) return value;
  return std::nullopt;
}

std::string Element::require_attribute(std::string_view name,
                                       std::string_view file) const {
  if (auto v = attribute(name)) return *v;
  throw ConfigError(std::string(file) + ": element '" + this->name +
                    "' (line " + std::to_string(line) +
                    ") is missing attribute '" + std::string(name) + "'");
}

Element parse(std::string_view text, std::string_view file) {
  return Parser(text, file).parse_document();
}

void collect_named(const Element& root, std::string_view name,
                   std::vector<const Element*>& out) {
  if (root.name == name) out.push_back(&root);
  for (const Element& c : root.children) collect_named(c, name, out);
}

const Element* find_named(const Element& root, std::string_view name) {
  if (root.name == name) return &root;
  for (const Element& c : root.children)
    if (const Element* found = find_named(c, name)) return found;
  return nullptr;
}

}  // namespace nocsim::xml
