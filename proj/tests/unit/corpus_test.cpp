#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <sstream>

#include "evgen/corpus.hpp"
#include "generators.hpp"

namespace evgen {
namespace {

using ::testing::ElementsAre;

std::vector<std::string> norms(std::string_view text) { return token_norms(text); }

TEST(Tokenize, SplitsOnNonAlphanumerics) {
  EXPECT_THAT(norms("treatment with metformin"),
              ElementsAre("treatment", "with", "metformin"));
  EXPECT_THAT(norms("IL-6 levels"), ElementsAre("il", "6", "levels"));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize(" ,.;() ").empty());
}

TEST(Tokenize, OffsetsPointAtSourceBytes) {
  const std::string text = "  HbA1c rose (p<0.05)";
  auto tokens = tokenize(text);
  ASSERT_EQ(tokens.size(), 5u);
  EXPECT_EQ(text.substr(tokens[0].start, tokens[0].end - tokens[0].start), "HbA1c");
  EXPECT_EQ(tokens[0].norm, "hba1c");
  EXPECT_EQ(tokens[2].norm, "p");
  EXPECT_EQ(tokens[3].norm, "0");
  EXPECT_EQ(tokens[4].norm, "05");
}

TEST(Tokenize, HandlesNonAsciiLetters) {
  auto tokens = tokenize("Über Straße naïve");
  ASSERT_EQ(tokens.size(), 3u);
  EXPECT_EQ(tokens[0].norm, "über");
  EXPECT_EQ(tokens[1].norm, "straße");
  EXPECT_EQ(tokens[2].norm, "naïve");
}

TEST(Tokenize, InvalidUtf8DoesNotThrow) {
  const std::string bad = "ab\xff\xfe" "cd";
  EXPECT_NO_THROW(tokenize(bad));
}

TEST(SplitSentences, TerminatorsFollowedByUppercase) {
  EXPECT_EQ(split_sentences("A x. B y? C z!").size(), 3u);
  auto one = split_sentences("no terminator");
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].start, 0u);
  EXPECT_EQ(one[0].end, 13u);
}

TEST(SplitSentences, MetforminPassagePassageHasTwoSentences) {
  const std::string passage =
      "Lifestyle changes and treatment with metformin both reduced the incidence "
      "of diabetes in persons at high risk. The lifestyle intervention was more "
      "effective than metformin";
  auto sentences = split_sentences(passage);
  ASSERT_EQ(sentences.size(), 2u);
  EXPECT_EQ(passage.substr(sentences[0].start, sentences[0].end - sentences[0].start),
            "Lifestyle changes and treatment with metformin both reduced the incidence "
            "of diabetes in persons at high risk.");
  EXPECT_EQ(sentences[1].index, 1u);
}

TEST(SplitSentences, LowercaseAfterPeriodDoesNotSplit) {
  EXPECT_EQ(split_sentences("Dose was 2.5 mg. e.g. this stays.").size(), 1u);
  EXPECT_EQ(split_sentences("").size(), 0u);
  EXPECT_EQ(split_sentences("   ").size(), 0u);
}

TEST(SplitSentences, ExcludesSurroundingWhitespace) {
  const std::string text = "  First one.   Second one.  ";
  auto s = split_sentences(text);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(text.substr(s[0].start, s[0].end - s[0].start), "First one.");
  EXPECT_EQ(text.substr(s[1].start, s[1].end - s[1].start), "Second one.");
}

TEST(Document, TitleBecomesSentenceZero) {
  Document doc("d1", "Metformin trial", "It worked. Results held.");
  ASSERT_EQ(doc.sentences().size(), 3u);
  EXPECT_EQ(doc.sentences()[0].field, Field::kTitle);
  EXPECT_EQ(doc.text(doc.sentences()[0]), "Metformin trial");
  EXPECT_EQ(doc.text(doc.sentences()[2]), "Results held.");
  EXPECT_EQ(doc.tokens()[0].norm, "metformin");
  for (const auto& s : doc.sentences())
    for (std::size_t t = s.token_begin; t < s.token_end; ++t)
      EXPECT_EQ(doc.tokens()[t].sentence_index, s.index);
}

TEST(Document, BlankTitleAddsNoSentence) {
  Document doc("d1", "   ", "Only body.");
  ASSERT_EQ(doc.sentences().size(), 1u);
  EXPECT_EQ(doc.sentences()[0].field, Field::kBody);
}

TEST(Document, NormalizesToNfc) {
  // "e" + combining acute accent becomes the precomposed code point.
  Document doc("d", "", "Caf\x65\xcc\x81 study.");
  EXPECT_EQ(doc.body(), "Caf\xc3\xa9 study.");
  EXPECT_EQ(doc.tokens()[0].norm, "caf\xc3\xa9");
}

TEST(ParseCorpus, SingleLine) {
  std::istringstream in(R"({"id":"d1","title":"T","abstract":"A b."})");
  auto parsed = parse_corpus(in);
  ASSERT_EQ(parsed.documents.size(), 1u);
  EXPECT_EQ(parsed.documents[0].id(), "d1");
  EXPECT_EQ(parsed.documents[0].body(), "A b.");
}

TEST(ParseCorpus, EmptyStream) {
  std::istringstream in("");
  EXPECT_TRUE(parse_corpus(in).documents.empty());
}

TEST(ParseCorpus, MissingIdIsReportedWithLine) {
  std::istringstream in(R"({"title":"T","abstract":"A."})");
  try {
    parse_corpus(in);
    FAIL() << "expected CorpusError";
  } catch (const CorpusError& e) {
    EXPECT_EQ(e.kind(), CorpusError::Kind::kMissingField);
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.detail(), "id");
  }
}

TEST(ParseCorpus, MalformedAndWrongTypes) {
  std::istringstream bad("{\"id\":\"a\",\"title\":\"\",\"abstract\":\"x\"}\n{not json\n");
  try {
    parse_corpus(bad);
    FAIL();
  } catch (const CorpusError& e) {
    EXPECT_EQ(e.kind(), CorpusError::Kind::kMalformedLine);
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream typed(R"({"id":"a","title":3,"abstract":"x"})");
  EXPECT_THROW(parse_corpus(typed), CorpusError);
}

TEST(ParseCorpus, DuplicateIdStrictAndLenient) {
  const std::string text =
      "{\"id\":\"a\",\"title\":\"\",\"abstract\":\"First.\"}\n"
      "\n"
      "{\"id\":\"a\",\"title\":\"\",\"abstract\":\"Second.\"}\n"
      "garbage\n"
      "{\"id\":\"b\",\"title\":\"\",\"abstract\":\"Third.\",\"extra\":1}\n";
  std::istringstream strict(text);
  try {
    parse_corpus(strict);
    FAIL();
  } catch (const CorpusError& e) {
    EXPECT_EQ(e.kind(), CorpusError::Kind::kDuplicateId);
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.detail(), "a");
  }
  std::istringstream lenient(text);
  auto parsed = parse_corpus(lenient, ParseMode::kLenient);
  ASSERT_EQ(parsed.documents.size(), 2u);
  EXPECT_EQ(parsed.documents[0].body(), "First.");
  EXPECT_EQ(parsed.documents[1].id(), "b");
  ASSERT_EQ(parsed.skipped.size(), 2u);
  EXPECT_EQ(parsed.skipped[0].kind, CorpusError::Kind::kDuplicateId);
  EXPECT_EQ(parsed.skipped[1].line, 4u);
}

// Offset soundness: sentence spans cover everything but whitespace, and the
// text between consecutive spans is whitespace only.
TEST(CorpusProperties, SentenceSpansReconstructText) {
  testing::Rng rng(11);
  for (int round = 0; round < 200; ++round) {
    testing::CorpusShape shape;
    shape.max_docs = 3;
    auto corpus = testing::random_corpus(rng, shape);
    for (const auto& doc : corpus.documents) {
      std::size_t cursor = 0;
      for (const auto& s : doc.sentences()) {
        ASSERT_LT(s.start, s.end);
        if (s.field == Field::kTitle) continue;
        for (std::size_t i = cursor; i < s.start; ++i) ASSERT_EQ(doc.body()[i], ' ');
        cursor = s.end;
      }
      for (std::size_t i = cursor; i < doc.body().size(); ++i)
        ASSERT_EQ(doc.body()[i], ' ');
    }
  }
}

TEST(CorpusProperties, TokenSlicesLowercaseToNorm) {
  const std::vector<std::string> samples = {
      "Metformin (500 mg) REDUCED HbA1c. The T2DM cohort... Ok?",
      "ÄRZTE und Patienten. Überraschend gut!", "x1-y2_z3 foo/bar"};
  for (const auto& text : samples) {
    const std::string norm_text = nfc_normalize(text);
    for (const auto& tok : tokenize(norm_text)) {
      std::string slice = norm_text.substr(tok.start, tok.end - tok.start);
      EXPECT_EQ(token_norms(slice).size(), 1u);
      EXPECT_EQ(token_norms(slice)[0], tok.norm);
    }
  }
}

TEST(CorpusProperties, TokenizeIsIdempotentOverNorms) {
  testing::Rng rng(5);
  const std::vector<std::string> pieces = {"Alpha", "beta-2", "(GAMMA)", "δelta", "x.y",
                                           "IL-6", "3,4", "Ünïcode", "   "};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  for (int round = 0; round < 200; ++round) {
    std::string text;
    for (int i = 0; i < 8; ++i) text += pieces[pick(rng)] + " ";
    auto first = token_norms(text);
    std::string joined;
    for (const auto& n : first) joined += n + " ";
    EXPECT_EQ(token_norms(joined), first) << text;
  }
}

TEST(CorpusProperties, ParsingIsDeterministic) {
  std::ostringstream jsonl;
  testing::Rng rng(3);
  auto corpus = testing::random_corpus(rng, {});
  for (const auto& d : corpus.documents)
    jsonl << "{\"id\":\"" << d.id() << "\",\"title\":\"" << d.title()
          << "\",\"abstract\":\"" << d.body() << "\"}\n";
  std::istringstream a(jsonl.str()), b(jsonl.str());
  auto first = parse_corpus(a).documents;
  auto second = parse_corpus(b).documents;
  EXPECT_EQ(first, second);
  ASSERT_EQ(first.size(), corpus.documents.size());
  for (std::size_t i = 0; i < first.size(); ++i)
    EXPECT_EQ(first[i].id(), corpus.documents[i].id());
}

}  // namespace
}  // namespace evgen
