#include <doctest.h>

#include "nocsim/types.hpp"
#include "nocsim/xml.hpp"

using namespace nocsim;

TEST_CASE("xml: elements, attributes, nesting") {
  const auto root = xml::parse(R"(<?xml version="1.0"?>
    <!-- comment -->
    <network flitSize="32">
      <nodes>
        <node id="0"><xPos value="1"/></node>
        <node id="1"/>
      </nodes>
    </network>)",
                               "test.xml");
  CHECK(root.name == "network");
  CHECK(root.attribute("flitSize") == "32");
  const auto* nodes = root.child("nodes");
  REQUIRE(nodes != nullptr);
  CHECK(nodes->children_named("node").size() == 2);
  CHECK(nodes->children[0].child("xPos")->attribute("value") == "1");
}

TEST_CASE("xml: entities and single quotes") {
  const auto root =
      xml::parse("<a name='x &amp; y &lt;z&gt;'>body &amp; text</a>", "t");
  CHECK(root.attribute("name") == "x & y <z>");
  CHECK(root.text == "body & text");
}

TEST_CASE("xml: errors carry file and line") {
  CHECK_THROWS_AS(xml::parse("<a><b></a>", "bad.xml"), ConfigError);
  CHECK_THROWS_AS(xml::parse("<a attr=oops/>", "bad.xml"), ConfigError);
  CHECK_THROWS_AS(xml::parse("", "bad.xml"), ConfigError);
  CHECK_THROWS_AS(xml::parse("<a/><b/>", "bad.xml"), ConfigError);
  try {
    xml::parse("<a>\n<b>\n</c>\n</a>", "bad.xml");
    FAIL("expected throw");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bad.xml:3") != std::string::npos);
  }
}

TEST_CASE("xml: recursive search") {
  const auto root =
      xml::parse("<r><x><task id='1'/></x><task id='2'/></r>", "t");
  std::vector<const xml::Element*> tasks;
  xml::collect_named(root, "task", tasks);
  CHECK(tasks.size() == 2);
  CHECK(xml::find_named(root, "task") != nullptr);
  CHECK(xml::find_named(root, "missing") == nullptr);
}
