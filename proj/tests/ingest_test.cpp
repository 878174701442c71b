#include <gtest/gtest.h>

#include <random>

#include "ruomis/ingest.hpp"
#include "ruomis/network_fetcher.hpp"
#include "test_util.hpp"

namespace ruomis::ingest {
namespace {

using ruomis::testing::fixture_path;

std::vector<std::string> raw_texts(const std::vector<Comment>& comments) {
  std::vector<std::string> out;
  for (const auto& c : comments) out.push_back(c.raw_text);
  return out;
}

FixtureFetcher fixtures() { return FixtureFetcher::from_map_file(fixture_path("fixture_map.tsv")); }

const ExtractionRules kSingleRules{"#comments .comment", std::string("p.text"), std::nullopt};
const ExtractionRules kChainRules{"li.comment", std::string(".body"), std::string(".pager a.next")};

TEST(ExtractComments, ThreeCommentsInDocumentOrder) {
  auto fetcher = fixtures();
  auto comments = extract_comments(fetcher.fetch("http://shop.example/nokia-108"),
                                   kSingleRules, "nokia-108");
  ASSERT_EQ(comments.size(), 3u);
  EXPECT_EQ(raw_texts(comments),
            (std::vector<std::string>{"Iss mobile ka camera acha ha",
                                      "Battery timing & sound bohat achi hai",
                                      "Do it contain skype???"}));
  EXPECT_EQ(comments[0].id, "nokia-108#1");
  EXPECT_EQ(comments[2].id, "nokia-108#3");
  for (const auto& c : comments) {
    EXPECT_EQ(c.product_id, "nokia-108");
    EXPECT_EQ(c.language_hint, LanguageHint::kUnknown);
  }
}

TEST(ExtractComments, WholeNodeTextWithoutTextSelector) {
  auto fetcher = fixtures();
  auto comments = extract_comments(fetcher.fetch("http://shop.example/nokia-108"),
                                   ExtractionRules{".comment", std::nullopt, std::nullopt}, "n");
  ASSERT_EQ(comments.size(), 3u);
  EXPECT_EQ(comments[0].raw_text, "ali Iss mobile ka camera acha ha");
}

TEST(ExtractComments, ZeroMatchesIsEmpty) {
  auto fetcher = fixtures();
  EXPECT_TRUE(extract_comments(fetcher.fetch("http://shop.example/empty"), kSingleRules, "e").empty());
}

TEST(ExtractComments, InvalidSelector) {
  try {
    extract_comments("<p>x</p>", ExtractionRules{"div > p", std::nullopt, std::nullopt}, "p");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidSelector);
  }
  EXPECT_THROW(extract_comments("<p>x</p>", ExtractionRules{"p", std::string("[x]"), std::nullopt}, "p"),
               Error);
}

TEST(ExtractComments, SkipsBlankNodesWithoutConsumingOrdinal) {
  auto comments = extract_comments("<i class=c>a</i><i class=c> &nbsp; </i><i class=c>b</i>",
                                   ExtractionRules{".c", std::nullopt, std::nullopt}, "p");
  ASSERT_EQ(comments.size(), 2u);
  EXPECT_EQ(comments[1].id, "p#2");
  EXPECT_EQ(comments[1].raw_text, "b");
}

TEST(CrawlProductPage, FollowsChainedPages) {
  auto fetcher = fixtures();
  auto batch = crawl_product_page("http://shop.example/p1/comments?page=1", kChainRules,
                                  fetcher, "p1", CrawlOptions{5});
  EXPECT_EQ(batch.source, "http://shop.example/p1/comments?page=1");
  ASSERT_EQ(batch.comments.size(), 4u);
  EXPECT_EQ(raw_texts(batch.comments),
            (std::vector<std::string>{"The pictures are very clear.", "Worst phone ever",
                                      "Zabardast phone, paisa wasool", "Lol thanx..."}));
  for (std::size_t i = 0; i < 4; ++i)
    EXPECT_EQ(batch.comments[i].id, "p1#" + std::to_string(i + 1));
}

TEST(CrawlProductPage, HonorsPageLimit) {
  auto fetcher = fixtures();
  auto batch = crawl_product_page("http://shop.example/p1/comments?page=1", kChainRules,
                                  fetcher, "p1", CrawlOptions{1});
  EXPECT_EQ(batch.comments.size(), 2u);
  EXPECT_THROW(crawl_product_page("http://shop.example/p1/comments?page=1", kChainRules,
                                  fetcher, "p1", CrawlOptions{0}),
               Error);
}

TEST(CrawlProductPage, UnknownStartUrlIsFetchError) {
  auto fetcher = fixtures();
  try {
    crawl_product_page("http://shop.example/missing", kChainRules, fetcher, "p1", CrawlOptions{3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kFetch);
    EXPECT_EQ(e.subject(), "http://shop.example/missing");
  }
}

TEST(CrawlProductPage, CycleIsDetected) {
  auto fetcher = fixtures();
  ExtractionRules rules{".comment", std::nullopt, std::string("a.next")};
  try {
    crawl_product_page("http://shop.example/cycle/a", rules, fetcher, "c", CrawlOptions{10});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCrawlCycle);
    EXPECT_EQ(e.subject(), "http://shop.example/cycle/a");
  }
  // A limit that stops before the repeat is not a cycle.
  auto batch = crawl_product_page("http://shop.example/cycle/a", rules, fetcher, "c", CrawlOptions{2});
  EXPECT_EQ(raw_texts(batch.comments), (std::vector<std::string>{"first", "second"}));
}

TEST(FixtureFetcher, MissingFileIsFetchError) {
  FixtureFetcher f;
  f.add("http://x/", "/nonexistent/page.html");
  try {
    f.fetch("http://x/");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kFetch);
  }
}

TEST(ResolveUrl, CommonReferenceForms) {
  const std::string base = "http://shop.example/phones/nokia/comments?page=1";
  EXPECT_EQ(resolve_url(base, "?page=2"), "http://shop.example/phones/nokia/comments?page=2");
  EXPECT_EQ(resolve_url(base, "/a/b"), "http://shop.example/a/b");
  EXPECT_EQ(resolve_url(base, "page2.html"), "http://shop.example/phones/nokia/page2.html");
  EXPECT_EQ(resolve_url(base, "../x?y=1#frag"), "http://shop.example/phones/x?y=1");
  EXPECT_EQ(resolve_url(base, "//cdn.example/z"), "http://cdn.example/z");
  EXPECT_EQ(resolve_url(base, "https://other.example/q"), "https://other.example/q");
  EXPECT_EQ(resolve_url("http://h", "next"), "http://h/next");
}

TEST(NetworkFetcher, SplitsOrigin) {
  EXPECT_EQ(split_origin("http://h.example:8080/a/b?c=1"),
            (std::pair<std::string, std::string>{"http://h.example:8080", "/a/b?c=1"}));
  EXPECT_EQ(split_origin("https://h.example"),
            (std::pair<std::string, std::string>{"https://h.example", "/"}));
}

// Generated documents: extraction is deterministic and yields one comment per
// marked node. The generator counts its own marked nodes as the oracle.
TEST(ExtractionProperty, CountMatchesGeneratedNodes) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coin(0, 3), depth_step(0, 2), word(0, 4);
  const char* words[] = {"acha", "bura", "phone", "&amp;", "zabardast"};
  for (int round = 0; round < 200; ++round) {
    std::string doc = "<html><body>";
    std::size_t expected = 0;
    std::vector<std::string> expected_text;
    int open = 0;
    for (int i = 0; i < 30; ++i) {
      int r = coin(rng);
      if (r == 0 && open < 5) {
        doc += "<section class=wrap>";
        ++open;
      } else if (r == 1 && open > 0) {
        doc += "</section>";
        --open;
      } else if (r == 2) {
        std::string w = words[word(rng)];
        doc += "<div class='comment x'>  " + w + "\n <b>" + w + "</b></div>";
        std::string plain = w == "&amp;" ? "&" : w;
        expected_text.push_back(plain + " " + plain);
        ++expected;
      } else {
        doc += "<div class=other>" + std::string(words[word(rng)]) + "</div>";
      }
    }
    doc += "</body></html>";
    ExtractionRules rules{"div.comment", std::nullopt, std::nullopt};
    auto a = extract_comments(doc, rules, "g");
    auto b = extract_comments(doc, rules, "g");
    ASSERT_EQ(a.size(), expected) << doc;
    ASSERT_EQ(raw_texts(a), expected_text);
    ASSERT_EQ(a, b);
  }
}

}  // namespace
}  // namespace ruomis::ingest
