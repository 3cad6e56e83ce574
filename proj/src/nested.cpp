#include "textbends/nested.hpp"

#include <cmath>
#include <map>

#include "textbends/errors.hpp"
#include "textbends/weighting.hpp"

namespace textbends {

std::vector<NestedDocument> to_nested(const Corpus& corpus) {
    const auto& t = corpus.tables();
    std::vector<NestedDocument> out;
    out.reserve(t.documents.size());
    for (DocIndex d = 0; d < t.documents.size(); ++d) {
        const auto& doc = t.documents[d];
        auto row = [&](const auto& table, std::uint32_t id, const char* what) -> const auto& {
            if (id >= table.size())
                throw IntegrityError("document " + std::to_string(doc.doc_id) + ": dangling " + what + " " +
                                     std::to_string(id));
            return table[id];
        };
        NestedDocument n;
        n.doc_id = doc.doc_id;
        n.raw_text = doc.raw_text;
        n.clean_text = doc.clean_text;
        n.lemma_text = doc.lemma_text;
        n.author = row(t.authors, doc.author_id, "author_id");
        n.time = row(t.times, doc.time_id, "time_id");
        n.location = row(t.locations, doc.location_id, "location_id");
        for (auto id : doc.tag_ids) n.tags.push_back(row(t.tags, id, "tag_id"));
        for (auto id : doc.entity_ids) n.entities.push_back(row(t.entities, id, "entity_id"));
        for (const auto& f : corpus.facts_of(d)) n.words.push_back(NestedWord{t.words[f.word].lemma, f.count, f.tf});
        out.push_back(std::move(n));
    }
    return out;
}

Corpus from_nested(std::span<const NestedDocument> records, double tf_floor) {
    CorpusBuilder builder(tf_floor);
    for (const auto& n : records) {
        DocumentInput in;
        in.doc_id = n.doc_id;
        in.raw_text = n.raw_text;
        in.clean_text = n.clean_text;
        for (auto tok : split_tokens(n.lemma_text)) in.tokens.emplace_back(tok);
        in.gender = n.author.gender;
        in.age = n.author.age;
        in.firstname = n.author.firstname;
        in.lastname = n.author.lastname;
        in.timestamp = n.time.full_date;
        in.x = n.location.x;
        in.y = n.location.y;
        for (const auto& tag : n.tags) in.tags.emplace_back(tag.label, tag.kind);
        for (const auto& e : n.entities) in.entities.emplace_back(e.label, e.kind);

        std::map<std::string, std::uint32_t> expected;
        std::uint32_t f_max = 0;
        for (const auto& tok : in.tokens) f_max = std::max(f_max, ++expected[tok]);
        const std::string label = "nested document " + std::to_string(n.doc_id);
        if (expected.size() != n.words.size())
            throw IntegrityError(label + ": word sub-records do not match lemma_text");
        for (const auto& w : n.words) {
            auto it = expected.find(w.lemma);
            if (it == expected.end() || it->second != w.count)
                throw IntegrityError(label + ": word '" + w.lemma + "' count does not match lemma_text");
            if (std::abs(tf_augmented(w.count, f_max, tf_floor) - w.tf) > 1e-12)
                throw IntegrityError(label + ": stored tf of '" + w.lemma + "' disagrees with recomputed value");
        }
        builder.add(std::move(in));
    }
    return std::move(builder).build();
}

}  // namespace textbends
