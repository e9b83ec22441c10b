#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nocsim::xml {

// Minimal XML document model covering what the descriptor files use:
// elements, attributes, text, comments, prolog. No namespaces, no DTDs.
struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  std::string text;
  int line = 0;

  const Element* child(std::string_view name) const;
  std::vector<const Element*> children_named(std::string_view name) const;
  std::optional<std::string> attribute(std::string_view name) const;

  // Attribute lookup that throws ConfigError naming the element and file.
  std::string require_attribute(std::string_view name,
                                std::string_view file) const;
};

// Parses a document and returns its root element. Throws ConfigError with
// file, line and reason on malformed input.
Element parse(std::string_view text, std::string_view file);

// Recursive search helpers used by the descriptor loaders.
void collect_named(const Element& root, std::string_view name,
                   std::vector<const Element*>& out);
const Element* find_named(const Element& root, std::string_view name);

}  // namespace nocsim::xml
