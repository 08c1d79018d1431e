#include <doctest.h>

#include "fixtures.hpp"
#include "majinlink/error.hpp"
#include "majinlink/ingest.hpp"
#include "markup.hpp"
#include "zip_archive.hpp"

using namespace majinlink;
using fixture::EpubSpec;
using fixture::make_epub;

TEST_SUITE("epub") {

TEST_CASE("single chapter") {
  EpubSpec spec;
  spec.chapters = {"<p>Hello World</p>"};
  CHECK(extract_epub_text(make_epub(spec)) == "Hello World");
}

TEST_CASE("spine order, blank line between documents") {
  EpubSpec spec;
  spec.chapters = {"<h1>One</h1><p>first para</p>", "<p>second</p>\n<p>third</p>"};
  CHECK(extract_epub_text(make_epub(spec)) == "One\nfirst para\n\nsecond\nthird");
}

TEST_CASE("deflated chapters") {
  EpubSpec spec;
  spec.deflate_chapters = true;
  std::string big;
  for (int i = 0; i < 500; ++i) big += "<p>paragraph " + std::to_string(i) + "</p>";
  spec.chapters = {big, "<p>end</p>"};
  const auto text = extract_epub_text(make_epub(spec));
  CHECK(text.rfind("paragraph 0\nparagraph 1\n", 0) == 0);
  CHECK(text.size() > 5000);
  CHECK(text.substr(text.size() - 5) == "\n\nend");
}

TEST_CASE("script, style and head dropped; entities decoded; no markup left") {
  EpubSpec spec;
  spec.chapters = {
      "<script>var x = '<p>no</p>';</script><style>p{}</style>"
      "<p>Fish &amp; chips &lt;3 &#233;t&#xE9; &eacute;&nbsp;x</p>"
      "<div>a<br/>b</div><p>  spaced   out  </p><!-- comment --><![CDATA[raw < text]]>"};
  const auto text = extract_epub_text(make_epub(spec));
  CHECK(text.find("var x") == std::string::npos);
  CHECK(text.find("p{}") == std::string::npos);
  CHECK(text.find("Chapter") == std::string::npos);  // <title> in <head>
  CHECK(text.find("Fish & chips <3 \xC3\xA9t\xC3\xA9 \xC3\xA9") != std::string::npos);
  CHECK(text.find("spaced out") != std::string::npos);
  CHECK(text.find("comment") == std::string::npos);
}

TEST_CASE("no '<' from markup on well-formed input") {
  EpubSpec spec;
  spec.chapters = {"<p>alpha <em>beta</em> <a href=\"x\">gamma</a></p><ul><li>delta</li></ul>"};
  const auto text = extract_epub_text(make_epub(spec));
  CHECK(text.find('<') == std::string::npos);
  CHECK(text.find("alpha beta gamma") != std::string::npos);
}

TEST_CASE("OPF identifiers and title") {
  EpubSpec spec;
  spec.title = "The &amp; Title";
  spec.identifiers = {"urn:uuid:1234", " 978-0-306-40615-7 "};
  spec.chapters = {"<p>x</p>"};
  const auto content = extract_epub(make_epub(spec));
  REQUIRE(content.title);
  CHECK(*content.title == "The & Title");
  REQUIRE(content.raw_identifiers.size() == 2);
  CHECK(content.raw_identifiers[1] == "978-0-306-40615-7");
  const auto ids = normalize_identifiers(content.raw_identifiers);
  CHECK(ids.size() == 1);
}

TEST_CASE("structural failures are extraction errors") {
  EpubSpec spec;
  spec.chapters = {"<p>x</p>"};
  auto good = make_epub(spec);

  SUBCASE("corrupted zip") {
    std::vector<std::byte> junk(good.begin(), good.begin() + 40);
    CHECK_THROWS_AS(extract_epub_text(junk), ExtractionError);
  }
  SUBCASE("not a zip at all") {
    CHECK_THROWS_AS(extract_epub_text(fixture::to_bytes("plain text, no archive here at all")), ExtractionError);
  }
  SUBCASE("missing container") {
    fixture::ZipWriter zip;
    zip.add("mimetype", "application/epub+zip");
    CHECK_THROWS_AS(extract_epub_text(zip.finish()), ExtractionError);
  }
  SUBCASE("missing package document") {
    fixture::ZipWriter zip;
    zip.add("META-INF/container.xml", "<container><rootfiles><rootfile full-path=\"a.opf\"/></rootfiles></container>");
    CHECK_THROWS_AS(extract_epub_text(zip.finish()), ExtractionError);
  }
  SUBCASE("undecodable document") {
    EpubSpec bad;
    bad.chapters = {"<p>\xFF\xFE broken</p>"};
    CHECK_THROWS_AS(extract_epub_text(make_epub(bad)), ExtractionError);
  }
  SUBCASE("CRC mismatch") {
    // Flip a byte inside the stored chapter payload.
    std::string raw(reinterpret_cast<const char*>(good.data()), good.size());
    const auto pos = raw.find("<p>x</p>");
    REQUIRE(pos != std::string::npos);
    raw[pos + 3] = 'y';
    CHECK_THROWS_AS(extract_epub_text(fixture::to_bytes(raw)), ExtractionError);
  }
  CHECK(std::is_base_of_v<Error, ExtractionError>);
}

TEST_CASE("zip archive reader") {
  fixture::ZipWriter zip;
  zip.add("a.txt", "stored");
  zip.add("b.txt", std::string(10000, 'z'), true);
  zip.add("empty", "", true);
  const auto bytes = zip.finish();
  detail::ZipArchive archive(bytes);
  CHECK(archive.entries().size() == 3);
  CHECK(archive.read("a.txt") == std::optional<std::string>("stored"));
  CHECK(archive.read("b.txt") == std::optional<std::string>(std::string(10000, 'z')));
  CHECK(archive.read("empty") == std::optional<std::string>(""));
  CHECK_FALSE(archive.read("nope"));
}

TEST_CASE("markup helpers") {
  CHECK(detail::decode_entities("&lt;&gt;&amp;&quot;&apos;&#65;&#x42;&bogus;") == "<>&\"'AB&bogus;");
  CHECK(detail::tag_attribute("<item id=\"x\" HREF='a b.xhtml'/>", "href") == std::optional<std::string>("a b.xhtml"));
  CHECK_FALSE(detail::tag_attribute("<item id=\"x\"/>", "href"));
  CHECK(detail::xhtml_to_text("<html><head><title>T</title></head><body><p>a</p><p>b</p></body></html>") == "a\nb");
  CHECK(detail::valid_utf8("plain \xC3\xA9"));
  CHECK_FALSE(detail::valid_utf8("\xC3"));
  CHECK_FALSE(detail::valid_utf8("\xED\xA0\x80"));  // surrogate
}

}  // TEST_SUITE
