#include <doctest.h>

#include "support.hpp"
#include "textbends/errors.hpp"
#include "textbends/nested.hpp"

using namespace textbends;
using tbtest::doc;

TEST_CASE("builder derives words and facts in load order") {
    const auto c = tbtest::hand_corpus();
    REQUIRE(c.document_count() == 3);
    REQUIRE(c.vocabulary_size() == 3);
    CHECK(c.lemma(0) == "a");
    CHECK(c.lemma(1) == "b");
    CHECK(c.lemma(2) == "c");

    const auto d1 = c.facts_of(0);
    REQUIRE(d1.size() == 2);
    CHECK(d1[0].count == 2);
    CHECK(d1[0].tf == 1.0);
    CHECK(d1[1].count == 1);
    CHECK(d1[1].tf == 0.75);
    CHECK(c.max_count(0) == 2);
    CHECK(c.token_count(0) == 3);
    CHECK(c.distinct_terms(0) == 2);
    CHECK(c.token_count(2) == 1);
    CHECK(c.author_of(2).gender == Gender::female);
}

TEST_CASE("most frequent word of every generated document has tf exactly 1") {
    const auto g = generate(tbtest::small_config(0.0003, 5));
    const auto& c = g.corpus;
    for (DocIndex d = 0; d < c.document_count(); ++d) {
        bool seen = false;
        for (const auto& f : c.facts_of(d)) {
            CHECK(f.tf <= 1.0);
            CHECK(f.tf >= c.tf_floor());
            if (f.count == c.max_count(d)) {
                CHECK(f.tf == 1.0);
                seen = true;
            }
        }
        CHECK(seen);
    }
}

TEST_CASE("shared dimension rows are interned") {
    CorpusBuilder b;
    auto x = doc(1, "a b");
    auto y = doc(2, "b c");
    y.lastname = x.lastname;
    b.add(x);
    b.add(y);
    const auto c = std::move(b).build();
    CHECK(c.tables().authors.size() == 1);
    CHECK(c.tables().times.size() == 1);
    CHECK(c.tables().locations.size() == 1);
}

TEST_CASE("builder rejects duplicate ids and malformed tokens") {
    CorpusBuilder b;
    b.add(doc(1, "a"));
    CHECK_THROWS_AS(b.add(doc(1, "b")), IntegrityError);
    auto bad = doc(2, "a");
    bad.tokens = {"a b"};
    CHECK_THROWS_AS(b.add(bad), IntegrityError);
}

TEST_CASE("nested rendering round-trips") {
    const auto c = tbtest::random_corpus(11);
    const auto nested = to_nested(c);
    REQUIRE(nested.size() == c.document_count());
    const auto back = from_nested(nested, c.tf_floor());
    CHECK(back == c);

    CHECK(nested[0].words.size() == c.facts_of(0).size());
}

TEST_CASE("nested records with inconsistent word counts are rejected") {
    auto nested = to_nested(tbtest::hand_corpus());
    nested[0].words[0].count += 1;
    CHECK_THROWS_AS(from_nested(nested), IntegrityError);

    nested = to_nested(tbtest::hand_corpus());
    nested[1].words[0].tf = 0.1;
    CHECK_THROWS_AS(from_nested(nested), IntegrityError);
}

TEST_CASE("dangling foreign keys name the offending document") {
    auto t = tbtest::hand_corpus().tables();
    t.documents[1].author_id = 99;
    try {
        Corpus c(t);
        FAIL("expected IntegrityError");
    } catch (const IntegrityError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("document 2") != std::string::npos);
        CHECK(msg.find("author_id 99") != std::string::npos);
    }
}

TEST_CASE("stale tf column is caught by the full check only") {
    auto t = tbtest::hand_corpus().tables();
    t.facts[1].tf = 0.9;
    CHECK_THROWS_AS(Corpus(t, Corpus::Check::full), IntegrityError);
    CHECK_NOTHROW(Corpus(t, Corpus::Check::keys_only));
}

TEST_CASE("unsorted facts are rejected") {
    auto t = tbtest::hand_corpus().tables();
    std::swap(t.facts[0], t.facts[1]);
    CHECK_THROWS_AS(Corpus(t, Corpus::Check::keys_only), IntegrityError);
}

TEST_CASE("time hierarchy") {
    const auto tp = TimePoint::decompose(0, *parse_iso8601("2015-09-17 13:45:00"));
    CHECK(tp.year == 2015);
    CHECK(tp.month == 9);
    CHECK(tp.day == 17);
    CHECK(tp.hour == 13);
    CHECK(tp.minute == 45);
}

TEST_CASE("iso-8601 forms") {
    CHECK(parse_iso8601("2015-09-17") == 1442448000);
    CHECK(parse_iso8601("2015-09-17 00:00:00") == 1442448000);
    CHECK(parse_iso8601("2015-09-17T00:00:00Z") == 1442448000);
    CHECK_FALSE(parse_iso8601("2015-13-01").has_value());
    CHECK_FALSE(parse_iso8601("yesterday").has_value());
    CHECK(format_iso8601(1442448000) == "2015-09-17T00:00:00Z");
}

TEST_CASE("enum names") {
    CHECK(parse_gender("female") == Gender::female);
    CHECK_FALSE(parse_gender("x").has_value());
    CHECK(to_string(TagKind::mention) == "mention");
    CHECK(parse_entity_kind("organization") == EntityKind::organization);
}
