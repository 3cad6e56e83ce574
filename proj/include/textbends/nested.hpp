#pragma once

#include <span>
#include <vector>

#include "textbends/model.hpp"

namespace textbends {

struct NestedWord {
    std::string lemma;
    std::uint32_t count = 0;
    double tf = 0.0;

    bool operator==(const NestedWord&) const = default;
};

/// One document with every dimension row embedded, so that a reader needs no
/// joins. Embedded ids are informational; from_nested renumbers them.
struct NestedDocument {
    std::uint64_t doc_id = 0;
    std::string raw_text;
    std::string clean_text;
    std::string lemma_text;
    Author author;
    TimePoint time;
    GeoLocation location;
    std::vector<Tag> tags;
    std::vector<NamedEntity> entities;
    std::vector<NestedWord> words;  // ascending word id of the source corpus

    bool operator==(const NestedDocument&) const = default;
};

std::vector<NestedDocument> to_nested(const Corpus& corpus);

/// Rebuilds the snowflake tables. Word sub-records must agree with lemma_text
/// (counts exactly, tf to 1e-12) or an IntegrityError is raised.
Corpus from_nested(std::span<const NestedDocument> records, double tf_floor = 0.5);

}  // namespace textbends
