#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "rng.hpp"
#include "textbends/errors.hpp"
#include "textbends/gencorpus.hpp"

namespace textbends {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

// Independent random streams, one per generated attribute.
enum Stream : std::uint64_t {
    kGender = 1,
    kDay,
    kQuadrant,
    kAuthor,
    kClock,
    kCoords,
    kLength,
    kTokens,
    kInjection,
    kTags,
    kAges,
};

constexpr std::string_view kConsonants = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";

/// Bijective syllable spelling of `code`: 70 CV syllables, at least two per word.
std::string spell(std::uint64_t code) {
    const std::uint64_t base = kConsonants.size() * kVowels.size();
    std::size_t length = 2;
    std::uint64_t span = base * base;
    while (code >= span) {
        code -= span;
        span *= base;
        ++length;
    }
    std::string word;
    for (std::size_t i = 0; i < length; ++i) {
        const auto syllable = code % base;
        code /= base;
        word += kConsonants[syllable / kVowels.size()];
        word += kVowels[syllable % kVowels.size()];
    }
    return word;
}

std::vector<std::string> make_vocabulary(const GeneratorConfig& c) {
    std::unordered_set<std::string> reserved(c.guaranteed_terms.begin(), c.guaranteed_terms.end());
    std::vector<std::string> vocab;
    vocab.reserve(c.vocab_size);
    for (std::uint64_t code = 0; vocab.size() < c.vocab_size; ++code) {
        auto w = spell(code);
        if (!reserved.contains(w)) vocab.push_back(std::move(w));
    }
    return vocab;
}

class ZipfSampler {
  public:
    ZipfSampler(std::size_t n, double exponent) : cdf_(n) {
        double total = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            total += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
            cdf_[r] = total;
        }
    }

    std::size_t sample(detail::Rng& rng) const {
        const double u = rng.uniform01() * cdf_.back();
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
    }

  private:
    std::vector<double> cdf_;
};

constexpr std::string_view kFirstMale[] = {"james", "john", "robert", "michael", "david", "daniel", "paul", "mark"};
constexpr std::string_view kFirstFemale[] = {"mary", "linda", "susan", "karen", "lisa", "nancy", "sarah", "emma"};
constexpr std::string_view kLast[] = {"smith", "jones", "brown", "miller", "davis", "garcia", "wilson", "moore"};
constexpr std::string_view kEntities[] = {"paris", "acme", "nasa", "iphone", "obama", "london", "google", "tesla"};
constexpr EntityKind kEntityKinds[] = {EntityKind::location,     EntityKind::organization, EntityKind::organization,
                                       EntityKind::product,      EntityKind::person,       EntityKind::location,
                                       EntityKind::organization, EntityKind::product};

}  // namespace

void GeneratorConfig::validate() const {
    if (!(sf > 0.0) || !std::isfinite(sf)) throw ConfigError("scale factor must be positive");
    if (docs_per_unit_sf == 0) throw ConfigError("docs_per_unit_sf must be positive");
    if (vocab_size < 1) throw ConfigError("vocab_size must be at least 1");
    if (min_tokens < 1) throw ConfigError("min_tokens must be at least 1");
    if (max_tokens < min_tokens) throw ConfigError("max_tokens must be at least min_tokens");
    if (!(start_ts < end_ts)) throw ConfigError("time range start must precede its end");
    if (!(x_min < x_max) || !(y_min < y_max)) throw ConfigError("geo range must be non-empty");
    if (!(zipf_exponent > 0.0)) throw ConfigError("zipf_exponent must be positive");
    if (!(guaranteed_term_rate >= 0.0 && guaranteed_term_rate <= 1.0))
        throw ConfigError("guaranteed_term_rate must lie in [0, 1]");
    if (!(tf_floor >= 0.0 && tf_floor < 1.0)) throw ConfigError("tf_floor must lie in [0, 1)");
    for (const auto& t : guaranteed_terms)
        if (t.empty() || t.find_first_of(" \t\r\n") != std::string::npos)
            throw ConfigError("guaranteed terms must be non-empty single tokens");
}

std::uint64_t GeneratorConfig::document_count() const {
    return static_cast<std::uint64_t>(std::llround(sf * static_cast<double>(docs_per_unit_sf)));
}

GeneratedCorpus generate(const GeneratorConfig& c) {
    c.validate();
    const std::uint64_t n = c.document_count();
    const auto vocab = make_vocabulary(c);
    const ZipfSampler zipf(vocab.size(), c.zipf_exponent);

    const std::uint64_t days = static_cast<std::uint64_t>((c.end_ts - c.start_ts + kSecondsPerDay - 1) / kSecondsPerDay);
    const auto gender_perm = detail::Rng(c.seed, kGender).permutation(n);
    const auto day_perm = detail::Rng(c.seed, kDay).permutation(n);
    const auto quad_perm = detail::Rng(c.seed, kQuadrant).permutation(n);
    const auto author_perm = detail::Rng(c.seed, kAuthor).permutation(n);
    detail::Rng clock(c.seed, kClock), coords(c.seed, kCoords), lengths(c.seed, kLength), tokens(c.seed, kTokens),
        tag_rng(c.seed, kTags);

    // Each guaranteed term lands in a fixed, seeded choice of documents.
    std::vector<std::vector<std::string>> injected(n);
    if (n > 0) {
        const auto per_term = static_cast<std::uint64_t>(std::ceil(c.guaranteed_term_rate * static_cast<double>(n)));
        for (std::size_t j = 0; j < c.guaranteed_terms.size(); ++j) {
            const auto perm = detail::Rng(c.seed, kInjection + 100 * (j + 1)).permutation(n);
            for (std::uint64_t i = 0; i < std::min(per_term, n); ++i) injected[perm[i]].push_back(c.guaranteed_terms[j]);
        }
    }

    const double x_mid = 0.5 * (c.x_min + c.x_max);
    const double y_mid = 0.5 * (c.y_min + c.y_max);

    CorpusBuilder builder(c.tf_floor);
    for (std::uint64_t i = 0; i < n; ++i) {
        DocumentInput in;
        in.doc_id = i;

        std::uint64_t author = i;
        if (c.author_pool > 0) author = author_perm[i] % c.author_pool;
        const bool female = (c.author_pool > 0 ? author : gender_perm[i]) % 2 == 1;
        in.gender = female ? Gender::female : Gender::male;
        const auto& firsts = female ? kFirstFemale : kFirstMale;
        in.firstname = std::string(firsts[author % std::size(kFirstMale)]);
        in.lastname = std::string(kLast[(author / std::size(kFirstMale)) % std::size(kLast)]) + "-" + std::to_string(author);
        in.age = 18 + static_cast<std::uint32_t>(detail::Rng(c.seed, kAges + 1000 + author).below(53));

        const std::uint64_t day = day_perm[i] % days;
        const std::int64_t day_start = c.start_ts + static_cast<std::int64_t>(day) * kSecondsPerDay;
        const std::int64_t day_span = std::min(kSecondsPerDay, c.end_ts - day_start);
        in.timestamp = day_start + static_cast<std::int64_t>(clock.below(static_cast<std::uint64_t>(day_span)));

        const std::uint64_t quadrant = quad_perm[i] % 4;
        const double x_lo = (quadrant & 1) ? x_mid : c.x_min;
        const double y_lo = (quadrant & 2) ? y_mid : c.y_min;
        in.x = x_lo + coords.uniform01() * (x_mid - c.x_min);
        in.y = y_lo + coords.uniform01() * (y_mid - c.y_min);

        const auto length = c.min_tokens + lengths.below(c.max_tokens - c.min_tokens + 1);
        in.tokens.reserve(length + injected[i].size());
        for (std::uint64_t k = 0; k < length; ++k) in.tokens.push_back(vocab[zipf.sample(tokens)]);
        for (auto& term : injected[i]) {
            const auto pos = tokens.below(in.tokens.size() + 1);
            in.tokens.insert(in.tokens.begin() + static_cast<std::ptrdiff_t>(pos), term);
        }

        std::string raw, clean;
        const auto hashtags = tag_rng.below(3);
        const bool mention = tag_rng.uniform01() < 0.3;
        const bool entity = tag_rng.uniform01() < 0.4;
        if (mention) {
            const auto user = "user" + std::to_string(tag_rng.below(100));
            in.tags.emplace_back(user, TagKind::mention);
            raw += "@" + user + " ";
        }
        for (std::size_t k = 0; k < in.tokens.size(); ++k) {
            if (k) {
                raw += ' ';
                clean += ' ';
            }
            std::string word = in.tokens[k];
            clean += word;
            if (k == 0 && word[0] >= 'a' && word[0] <= 'z') word[0] = static_cast<char>(word[0] - 'a' + 'A');
            raw += word;
        }
        for (std::uint64_t h = 0; h < hashtags; ++h) {
            const auto topic = "topic" + std::to_string(tag_rng.below(40));
            if (std::find(in.tags.begin(), in.tags.end(), std::pair{topic, TagKind::hashtag}) != in.tags.end()) continue;
            in.tags.emplace_back(topic, TagKind::hashtag);
            raw += " #" + topic;
        }
        if (entity) {
            const auto e = tag_rng.below(std::size(kEntities));
            in.entities.emplace_back(std::string(kEntities[e]), kEntityKinds[e]);
        }
        in.raw_text = std::move(raw);
        in.clean_text = std::move(clean);
        builder.add(std::move(in));
    }

    GeneratedCorpus out{std::move(builder).build(), {}};
    out.manifest = make_manifest(out.corpus, c.sf, c.seed);
    return out;
}

}  // namespace textbends
