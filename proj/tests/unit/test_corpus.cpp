#include <algorithm>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "gen.hpp"
#include "llano/corpus.hpp"
#include "llano/error.hpp"
#include "llano/io.hpp"

using namespace llano;
using llano::testing::Gen;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an llano::Error");
  return ErrorKind::InvalidArgument;
}

std::filesystem::path tmp(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "llano_corpus_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

Corpus random_corpus(Gen& g, std::size_t n) {
  std::vector<Document> docs;
  for (std::size_t i = 0; i < n; ++i) {
    std::optional<std::string> adapted, origin, topic;
    if (g.chance(0.7)) adapted = g.text();
    if (g.chance(0.5)) origin = g.word();
    if (g.chance(0.5)) topic = "tema \"" + g.word() + "\",\n" + g.word();
    docs.push_back(Document::make(std::to_string(i * 3 + 1), g.text() + " fin", adapted, origin, topic));
  }
  return Corpus(std::move(docs));
}

std::vector<std::string> ids(const Corpus& c) {
  std::vector<std::string> out;
  for (const auto& d : c.documents()) out.push_back(d.id);
  return out;
}

}  // namespace

TEST_CASE("load csv") {
  const auto c = parse_corpus("id,original\n1,hola mundo\n2,adiós\n", CorpusFormat::Csv);
  REQUIRE(c.size() == 2);
  CHECK(c.documents()[0].word_count == 2);
  CHECK(c.documents()[1].word_count == 1);
  CHECK_FALSE(c.documents()[0].adapted.has_value());
}

TEST_CASE("load errors") {
  CHECK(kind_of([] { parse_corpus("id,original\n7,a\n7,b\n", CorpusFormat::Csv); }) ==
        ErrorKind::DuplicateId);
  CHECK(kind_of([] { parse_corpus("{\"id\":\"1\"}\n", CorpusFormat::Jsonl); }) ==
        ErrorKind::MissingField);
  try {
    parse_corpus("{\"id\":\"1\"}\n", CorpusFormat::Jsonl);
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("original") != std::string::npos);
    CHECK(msg.find("row 1") != std::string::npos);
  }
  CHECK(kind_of([] { parse_corpus("id,original\n", CorpusFormat::Csv); }) ==
        ErrorKind::EmptyCorpus);
  CHECK(kind_of([] { parse_corpus("", CorpusFormat::Jsonl); }) == ErrorKind::EmptyCorpus);
  CHECK(kind_of([] { parse_corpus("id,original\n1,\xFF\n", CorpusFormat::Csv); }) ==
        ErrorKind::EncodingError);
  CHECK(kind_of([] { parse_corpus("id\n1\n", CorpusFormat::Csv); }) == ErrorKind::MissingField);
  CHECK(kind_of([] { parse_corpus("id,original\n1,   \n", CorpusFormat::Csv); }) ==
        ErrorKind::MissingField);
  CHECK(kind_of([] { parse_corpus("{nope\n", CorpusFormat::Jsonl); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { load_corpus("/nonexistent/c.csv", CorpusFormat::Csv); }) ==
        ErrorKind::IoError);
}

TEST_CASE("jsonl accepts numeric ids and BOM") {
  const auto c = parse_corpus("\xEF\xBB\xBF{\"id\":5,\"original\":\"uno dos\",\"adapted\":null}\n",
                              CorpusFormat::Jsonl);
  REQUIRE(c.size() == 1);
  CHECK(c.documents()[0].id == "5");
}

TEST_CASE("format from path") {
  CHECK(corpus_format_from_path("a/b.csv") == CorpusFormat::Csv);
  CHECK(corpus_format_from_path("b.jsonl") == CorpusFormat::Jsonl);
  CHECK(kind_of([] { corpus_format_from_path("b.txt"); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("stats examples") {
  const Corpus one({Document::make("1", "hola mundo")});
  const auto s = corpus_stats(one, TextField::Original);
  CHECK(s.n_samples == 1);
  CHECK(s.avg_words == 2.0);
  CHECK(s.avg_lines == 1.0);
  CHECK(s.avg_word_length_chars == 4.5);

  const auto empty = corpus_stats(Corpus{}, TextField::Original);
  CHECK(empty.n_samples == 0);
  CHECK(empty.avg_words == 0.0);
  CHECK(empty.avg_lines == 0.0);
  CHECK(empty.avg_word_length_chars == 0.0);

  const Corpus two({Document::make("1", "a b c"), Document::make("2", "dd ee")});
  const auto t = corpus_stats(two, TextField::Original);
  CHECK(t.avg_words == 2.5);
  CHECK(t.avg_word_length_chars == doctest::Approx(1.4).epsilon(1e-15));

  CHECK(kind_of([&] { corpus_stats(two, TextField::Adapted); }) == ErrorKind::MissingAdaptation);
}

TEST_CASE("stats invariant under reordering") {
  Gen g(7);
  for (int round = 0; round < 50; ++round) {
    auto docs = random_corpus(g, 1 + g.below(12)).documents();
    const auto a = corpus_stats(Corpus(docs), TextField::Original);
    std::shuffle(docs.begin(), docs.end(), g.engine());
    const auto b = corpus_stats(Corpus(docs), TextField::Original);
    CHECK(a.n_samples == b.n_samples);
    CHECK(a.avg_words == doctest::Approx(b.avg_words).epsilon(1e-12));
    CHECK(a.avg_lines == doctest::Approx(b.avg_lines).epsilon(1e-12));
    CHECK(a.avg_word_length_chars == doctest::Approx(b.avg_word_length_chars).epsilon(1e-12));
  }
}

TEST_CASE("write then load round trip") {
  const Corpus small({Document::make("1", "uno", "u"), Document::make("2", "dos")});
  write_corpus(small, tmp("small.csv"), CorpusFormat::Csv);
  CHECK(load_corpus(tmp("small.csv"), CorpusFormat::Csv) == small);

  const Corpus quoted({Document::make("a", "dijo \"sí\",\ny luego\r\nno", "línea 1\n\nlínea 3")});
  write_corpus(quoted, tmp("quoted.csv"), CorpusFormat::Csv);
  CHECK(load_corpus(tmp("quoted.csv"), CorpusFormat::Csv) == quoted);

  CHECK(kind_of([&] { write_corpus(small, "/proc/llano/denied.csv", CorpusFormat::Csv); }) ==
        ErrorKind::IoError);
}

TEST_CASE("round trip property, both formats") {
  Gen g(11);
  for (int round = 0; round < 100; ++round) {
    const auto c = random_corpus(g, 1 + g.below(8));
    for (auto fmt : {CorpusFormat::Csv, CorpusFormat::Jsonl}) {
      CHECK(parse_corpus(serialize_corpus(c, fmt), fmt) == c);
    }
  }
}

TEST_CASE("id ordering") {
  CHECK(id_less("2", "10"));
  CHECK_FALSE(id_less("10", "2"));
  CHECK(id_less("a10", "a2"));
  CHECK(id_less("10", "a"));
}

TEST_CASE("smallest subset") {
  const Corpus c({Document::make("1", "a b c d e"), Document::make("2", "a b"),
                  Document::make("3", "a b c d e f g h i")});
  const auto s = build_subset(c, {SubsetKind::Smallest, 2});
  CHECK(ids(s) == std::vector<std::string>{"2", "1"});

  const Corpus ties({Document::make("10", "x"), Document::make("9", "y"), Document::make("2", "z w")});
  CHECK(ids(build_subset(ties, {SubsetKind::Smallest, 1})) == std::vector<std::string>{"9"});
}

TEST_CASE("smallest subset optimality property") {
  Gen g(3);
  for (int round = 0; round < 50; ++round) {
    const auto c = random_corpus(g, 5 + g.below(30));
    const std::size_t k = 1 + g.below(c.size());
    const auto s = build_subset(c, {SubsetKind::Smallest, k});
    REQUIRE(s.size() == k);
    std::size_t max_in = 0;
    for (const auto& d : s.documents()) max_in = std::max(max_in, d.word_count);
    for (const auto& d : c.documents()) {
      if (!s.find(d.id)) CHECK(d.word_count >= max_in);
    }
  }
}

TEST_CASE("random subset") {
  Gen g(5);
  const auto c = random_corpus(g, 20);
  const SubsetSpec spec{SubsetKind::Random, 5, 42};
  const auto a = build_subset(c, spec);
  const auto b = build_subset(c, spec);
  CHECK(a == b);
  CHECK(a.size() == 5);
  // Corpus order is kept.
  std::vector<std::size_t> pos;
  for (const auto& d : a.documents()) {
    pos.push_back(static_cast<std::size_t>(&*c.find(d.id) - c.documents().data()));
  }
  CHECK(std::is_sorted(pos.begin(), pos.end()));
  // Membership does not depend on input order.
  auto docs = c.documents();
  std::shuffle(docs.begin(), docs.end(), g.engine());
  const auto shuffled = build_subset(Corpus(docs), spec);
  auto ia = ids(a), is = ids(shuffled);
  std::sort(ia.begin(), ia.end());
  std::sort(is.begin(), is.end());
  CHECK(ia == is);

  CHECK(kind_of([&] { build_subset(c, {SubsetKind::Random, 3}); }) == ErrorKind::MissingSeed);
  CHECK(build_subset(c, {SubsetKind::Random, 20, 1}).size() == 20);
}

TEST_CASE("categories subset") {
  const Corpus c({Document::make("1", "a", {}, "A"), Document::make("2", "b", {}, "A"),
                  Document::make("3", "c", {}, "B"), Document::make("4", "d", {}, "B")});
  const auto s = build_subset(c, {SubsetKind::Categories, 2, {}, GroupKey::Origin});
  REQUIRE(s.size() == 2);
  std::set<std::string> groups;
  for (const auto& d : s.documents()) groups.insert(*d.origin);
  CHECK(groups == std::set<std::string>{"A", "B"});

  CHECK(kind_of([&] { build_subset(c, {SubsetKind::Categories, 2, {}, GroupKey::Topic}); }) ==
        ErrorKind::MissingGroupKey);
  CHECK(kind_of([&] { build_subset(c, {SubsetKind::Categories, 2}); }) ==
        ErrorKind::MissingGroupKey);
  CHECK(kind_of([&] { build_subset(c, {SubsetKind::Smallest, 5}); }) ==
        ErrorKind::SizeExceedsCorpus);
}
