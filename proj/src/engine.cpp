#include "textbends/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "digest.hpp"
#include "textbends/errors.hpp"
#include "textbends/weighting.hpp"

namespace textbends {

std::string_view to_string(Executor e) {
    switch (e) {
        case Executor::columnar: return "columnar";
        case Executor::mapreduce: return "mapreduce";
        case Executor::oracle: return "oracle";
    }
    return "?";
}

std::optional<Executor> parse_executor(std::string_view s) {
    if (s == "columnar") return Executor::columnar;
    if (s == "mapreduce") return Executor::mapreduce;
    if (s == "oracle") return Executor::oracle;
    return std::nullopt;
}

std::string key_to_string(const ResultKey& key) {
    if (const auto* s = std::get_if<std::string>(&key)) return *s;
    return std::to_string(std::get<std::uint64_t>(key));
}

bool ranks_before(const RankedEntry& a, const RankedEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.key < b.key;
}

void apply_topk(std::vector<RankedEntry>& entries, std::uint32_t k) {
    if (entries.size() > k) {
        std::partial_sort(entries.begin(), entries.begin() + k, entries.end(), ranks_before);
        entries.resize(k);
    } else {
        std::sort(entries.begin(), entries.end(), ranks_before);
    }
}

std::vector<std::string> ExecutionPlan::names(StageKind kind) const {
    std::vector<std::string> out;
    for (const auto& s : stages)
        if (s.kind == kind) out.push_back(s.name);
    return out;
}

bool ExecutionPlan::has(StageKind kind, std::string_view name) const {
    return std::any_of(stages.begin(), stages.end(), [&](const PlanStage& s) { return s.kind == kind && s.name == name; });
}

ExecutionPlan plan(const QuerySpec& spec, Executor executor) {
    ExecutionPlan p;
    p.executor = executor;
    p.query_id = spec.query_id;
    const bool time = uses_time_window(spec.query_id);
    const bool geo = uses_geo_box(spec.query_id);
    const bool documents = task_of(spec.query_id) == Task::documents;

    p.stages.push_back({StageKind::join, "c5"});
    p.stages.push_back({StageKind::join, "c6"});
    if (time) p.stages.push_back({StageKind::join, "c7"});
    if (geo) p.stages.push_back({StageKind::join, "c8"});
    p.stages.push_back({StageKind::filter, "c1"});
    if (time) p.stages.push_back({StageKind::filter, "c2"});
    if (geo) p.stages.push_back({StageKind::filter, "c3"});
    if (documents) p.stages.push_back({StageKind::filter, "c4"});
    if (documents) p.stages.push_back({StageKind::nested, "Q_nW"});
    p.stages.push_back({StageKind::nested, spec.scheme == Scheme::tfidf ? "Q_nD" : "Q_DL"});
    p.stages.push_back({StageKind::group_by, documents ? "DocumentFacts.ID_Document" : "WordDimension.Word"});
    p.stages.push_back({StageKind::topk, "c_tk"});
    return p;
}

namespace {

void check_plan(const ExecutionPlan& p, const QuerySpec& spec) {
    if (p.query_id != spec.query_id) throw ConfigError("execution plan was built for a different query");
    validate(spec);
}

/// Semi-join of each dimension against its predicate, then a scan of the
/// document table's foreign keys.
std::vector<std::uint8_t> filter_documents(const Corpus& corpus, const FilterSet& f) {
    const auto& t = corpus.tables();
    std::vector<std::uint8_t> author_ok(t.authors.size(), 1), time_ok(t.times.size(), 1),
        location_ok(t.locations.size(), 1);
    if (f.gender)
        for (const auto& a : t.authors) author_ok[a.author_id] = a.gender == *f.gender;
    if (f.time_window)
        for (const auto& tp : t.times)
            time_ok[tp.time_id] = tp.full_date >= f.time_window->start && tp.full_date <= f.time_window->end;
    if (f.geo_box) {
        const auto& g = *f.geo_box;
        for (const auto& l : t.locations)
            location_ok[l.location_id] = l.x >= g.x_start && l.x <= g.x_end && l.y >= g.y_start && l.y <= g.y_end;
    }
    std::vector<std::uint8_t> members(t.documents.size(), 0);
    for (std::size_t d = 0; d < t.documents.size(); ++d) {
        const auto& doc = t.documents[d];
        members[d] = author_ok[doc.author_id] && time_ok[doc.time_id] && location_ok[doc.location_id];
    }
    return members;
}

/// Word ids of the search terms present in the vocabulary, ascending.
std::vector<WordId> resolve_terms(const Corpus& corpus, const FilterSet& f) {
    std::vector<WordId> ids;
    if (!f.search_terms) return ids;
    for (const auto& term : *f.search_terms)
        if (auto id = corpus.find_word(term)) ids.push_back(*id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

const WordFact* find_in(std::span<const WordFact> facts, WordId w) {
    auto it = std::lower_bound(facts.begin(), facts.end(), w, [](const WordFact& f, WordId x) { return f.word < x; });
    return it != facts.end() && it->word == w ? &*it : nullptr;
}

}  // namespace

RankedResult execute_columnar(const ExecutionPlan& p, const Corpus& corpus, const QuerySpec& spec) {
    check_plan(p, spec);
    RankedResult result;
    result.task = spec.task;

    auto members = filter_documents(corpus, spec.filters);
    const auto stats = FilteredStats::compute(corpus, std::move(members), spec.params);
    if (stats.N == 0) return result;
    const bool bm25 = p.has(StageKind::nested, "Q_DL");

    auto weight = [&](const WordFact& f) {
        const double tf = fact_tf(corpus, f, spec.params);
        const double idf_value = idf(stats.N, stats.doc_freq[f.word]);
        if (!bm25) return tf * idf_value;
        return bm25_weight(tf, idf_value, stats.doc_length[f.doc], stats.avgdl, spec.params);
    };

    std::vector<RankedEntry> entries;
    if (spec.task == Task::keywords) {
        // gamma over WordDimension.Word with F = {sum(f_w)}
        std::vector<double> sums(corpus.vocabulary_size(), 0.0);
        for (DocIndex d = 0; d < corpus.document_count(); ++d) {
            if (!stats.contains(d)) continue;
            for (const auto& f : corpus.facts_of(d)) {
                sums[f.word] += weight(f);
                ++result.retrieved_rows;
            }
        }
        for (WordId w = 0; w < sums.size(); ++w)
            if (stats.doc_freq[w] > 0) entries.push_back({corpus.lemma(w), sums[w]});
    } else {
        // gamma over DocumentFacts.ID_Document restricted to the search terms
        const auto terms = resolve_terms(corpus, spec.filters);
        for (DocIndex d = 0; d < corpus.document_count() && !terms.empty(); ++d) {
            if (!stats.contains(d)) continue;
            const auto facts = corpus.facts_of(d);
            double sum = 0.0;
            std::uint64_t hits = 0;
            for (WordId t : terms) {
                if (const auto* f = find_in(facts, t)) {
                    sum += weight(*f);
                    ++hits;
                }
            }
            if (hits == 0) continue;
            result.retrieved_rows += hits;
            entries.push_back({corpus.documents()[d].doc_id, sum});
        }
    }
    result.total_matching = entries.size();
    apply_topk(entries, spec.k);
    result.entries = std::move(entries);
    return result;
}

double selectivity(const QuerySpec& spec, const Corpus& corpus) {
    if (corpus.document_count() == 0) throw DomainError("selectivity of an empty corpus is undefined");
    const auto total = corpus.facts().size();
    if (total == 0) throw DomainError("selectivity of a corpus without fact rows is undefined");
    const auto members = filter_documents(corpus, spec.filters);
    const auto terms = resolve_terms(corpus, spec.filters);
    std::uint64_t retrieved = 0;
    for (DocIndex d = 0; d < corpus.document_count(); ++d) {
        if (!members[d]) continue;
        const auto facts = corpus.facts_of(d);
        if (spec.task == Task::keywords) {
            retrieved += facts.size();
        } else {
            for (WordId t : terms) retrieved += find_in(facts, t) != nullptr;
        }
    }
    return 1.0 - static_cast<double>(retrieved) / static_cast<double>(total);
}

bool equivalent(const RankedResult& a, const RankedResult& b, double rel_tol, std::string* why) {
    auto fail = [&](std::string msg) {
        if (why) *why = std::move(msg);
        return false;
    };
    if (a.task != b.task) return fail("task differs");
    if (a.total_matching != b.total_matching)
        return fail("candidate count " + std::to_string(a.total_matching) + " vs " + std::to_string(b.total_matching));
    if (a.retrieved_rows != b.retrieved_rows)
        return fail("retrieved rows " + std::to_string(a.retrieved_rows) + " vs " + std::to_string(b.retrieved_rows));
    if (a.entries.size() != b.entries.size())
        return fail("entry count " + std::to_string(a.entries.size()) + " vs " + std::to_string(b.entries.size()));
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        const auto& x = a.entries[i];
        const auto& y = b.entries[i];
        if (x.key != y.key)
            return fail("rank " + std::to_string(i + 1) + ": key " + key_to_string(x.key) + " vs " + key_to_string(y.key));
        const double scale = std::max(std::abs(x.score), std::abs(y.score));
        if (std::abs(x.score - y.score) > rel_tol * scale) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "rank %zu (%s): score %.17g vs %.17g", i + 1, key_to_string(x.key).c_str(),
                          x.score, y.score);
            return fail(buf);
        }
    }
    return true;
}

std::string result_checksum(const RankedResult& r) {
    detail::Sha256 h;
    std::string line = std::string(to_string(r.task)) + '\n' + std::to_string(r.total_matching) + '\n' +
                       std::to_string(r.retrieved_rows) + '\n';
    h.update(line);
    for (const auto& e : r.entries) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%a", e.score);
        h.update(key_to_string(e.key) + '\t' + buf + '\n');
    }
    return h.hex_digest();
}

}  // namespace textbends
