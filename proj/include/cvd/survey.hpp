#pragma once

// Comparative survey: deterministic generation of the 90-question study from
// a 10-image corpus, and tallying of collected answers.
//
// Question layout, per base image in file-name order:
//   protan 0.25, 0.50, 0.75, 1.00, deuteran 0.25, 0.50, 0.75, 1.00, control (degree 0)
// Controls alternate protan / deuteran by base image index (even: protan).
//
// Each question shows simulate(base) and offers five options: the four
// correction variants rendered as simulate(correct(base)) plus a copy of the
// presented image ("no_improvement"). Corrections run in the RGB domain with
// profile (beta, alpha_p, alpha_d, alpha_n) = (d, d, 0, 1-d) for protan
// questions and (d, 0, d, 1-d) for deuteran questions.
//
// Option order: one std::mt19937_64 stream seeded with the survey seed,
// consumed question by question. Each question starts from the canonical
// label order and runs Fisher-Yates for i = 4..1, drawing j in [0, i] by
// rejection sampling: draw r; reject while r >= 2^64 - (2^64 mod (i+1));
// j = r mod (i+1).

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cvd/correct.hpp"
#include "cvd/error.hpp"
#include "cvd/image_io.hpp"
#include "cvd/simulate.hpp"

namespace cvd {

inline constexpr std::string_view kSurveyFormat = "cvd-survey/1";
inline constexpr std::size_t kCorpusSize = 10;
inline constexpr std::size_t kQuestionCount = 90;
inline constexpr std::size_t kOptionCount = 5;
inline constexpr std::size_t kControlCount = 10;
inline constexpr double kExpectedControlRate = static_cast<double>(kControlCount) / kQuestionCount;
inline constexpr std::array<double, 4> kSurveyDegrees = {0.25, 0.5, 0.75, 1.0};

enum class OptionLabel { MethodAEq, MethodANoEq, MethodBEq, MethodBNoEq, NoImprovement };

inline constexpr std::array<OptionLabel, 5> kAllLabels = {OptionLabel::MethodAEq, OptionLabel::MethodANoEq,
                                                         OptionLabel::MethodBEq, OptionLabel::MethodBNoEq,
                                                         OptionLabel::NoImprovement};
inline constexpr std::array<OptionLabel, 4> kMethodLabels = {OptionLabel::MethodAEq, OptionLabel::MethodANoEq,
                                                            OptionLabel::MethodBEq, OptionLabel::MethodBNoEq};

inline std::string_view to_string(OptionLabel l) {
    switch (l) {
        case OptionLabel::MethodAEq: return "method_a_eq";
        case OptionLabel::MethodANoEq: return "method_a_noeq";
        case OptionLabel::MethodBEq: return "method_b_eq";
        case OptionLabel::MethodBNoEq: return "method_b_noeq";
        case OptionLabel::NoImprovement: return "no_improvement";
    }
    return "no_improvement";
}

inline std::optional<OptionLabel> option_label_from_string(std::string_view s) {
    for (OptionLabel l : kAllLabels) {
        if (to_string(l) == s) return l;
    }
    return std::nullopt;
}

/// Correction variant behind a method label. NoImprovement has none.
inline std::optional<CorrectionOptions> correction_for(OptionLabel l) {
    switch (l) {
        case OptionLabel::MethodAEq: return CorrectionOptions{Method::A, ColorSpace::RGB, true};
        case OptionLabel::MethodANoEq: return CorrectionOptions{Method::A, ColorSpace::RGB, false};
        case OptionLabel::MethodBEq: return CorrectionOptions{Method::B, ColorSpace::RGB, true};
        case OptionLabel::MethodBNoEq: return CorrectionOptions{Method::B, ColorSpace::RGB, false};
        case OptionLabel::NoImprovement: return std::nullopt;
    }
    return std::nullopt;
}

enum class CvdType { Protan, Deuteran };

inline std::string_view to_string(CvdType t) { return t == CvdType::Protan ? "protan" : "deuteran"; }

inline std::optional<CvdType> cvd_type_from_string(std::string_view s) {
    if (s == "protan") return CvdType::Protan;
    if (s == "deuteran") return CvdType::Deuteran;
    return std::nullopt;
}

struct Question {
    std::size_t number = 0;  ///< 1-based
    std::string base_image;
    CvdType cvd_type = CvdType::Protan;
    double degree = 0.0;
    std::array<OptionLabel, 5> option_order = kAllLabels;  ///< display order, position 0 = "A"

    [[nodiscard]] SimSpec sim_spec() const {
        return cvd_type == CvdType::Protan ? SimSpec{degree, 0.0} : SimSpec{0.0, degree};
    }

    [[nodiscard]] FuzzyProfile correction_profile() const {
        FuzzyProfile p;
        p.beta = degree;
        p.alpha_p = cvd_type == CvdType::Protan ? degree : 0.0;
        p.alpha_d = cvd_type == CvdType::Deuteran ? degree : 0.0;
        p.alpha_n = 1.0 - degree;
        return p;
    }

    friend bool operator==(const Question&, const Question&) = default;
};

struct SurveySpec {
    std::uint64_t seed = 0;
    std::vector<Question> questions;

    /// Throws ValidationError when the layout invariants do not hold.
    void validate() const {
        std::vector<std::string> problems;
        if (questions.size() != kQuestionCount) {
            problems.push_back("expected " + std::to_string(kQuestionCount) + " questions, got " +
                               std::to_string(questions.size()));
        }
        std::size_t controls = 0;
        for (std::size_t i = 0; i < questions.size(); ++i) {
            const auto& q = questions[i];
            if (q.number != i + 1) problems.push_back("question " + std::to_string(i + 1) + " has number " + std::to_string(q.number));
            if (q.degree == 0.0) ++controls;
            else if (std::find(kSurveyDegrees.begin(), kSurveyDegrees.end(), q.degree) == kSurveyDegrees.end()) {
                problems.push_back("question " + std::to_string(q.number) + " has degree outside the grid");
            }
            auto sorted = q.option_order;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
                problems.push_back("question " + std::to_string(q.number) + " option order is not a permutation");
            }
        }
        if (controls != kControlCount) {
            problems.push_back("expected " + std::to_string(kControlCount) + " control questions, got " + std::to_string(controls));
        }
        if (!problems.empty()) throw ValidationError(std::move(problems));
    }

    friend bool operator==(const SurveySpec&, const SurveySpec&) = default;
};

/// Uniform integer in [0, bound) from a 64-bit engine, by rejection.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = bound == 0 ? 0 : std::uint64_t(0) - (std::uint64_t(0) - bound) % bound;
    // limit == 0 means bound divides 2^64: every draw is accepted.
    for (;;) {
        const std::uint64_t r = rng();
        if (limit == 0 || r < limit) return r % bound;
    }
}

inline std::array<OptionLabel, 5> shuffled_labels(std::mt19937_64& rng) {
    auto order = kAllLabels;
    for (std::size_t i = order.size() - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(rng, i + 1));
        std::swap(order[i], order[j]);
    }
    return order;
}

/// Question layout for the given base-image ids (already in corpus order).
inline SurveySpec layout_survey(const std::vector<std::string>& base_ids, std::uint64_t seed) {
    if (base_ids.size() != kCorpusSize) {
        throw ConfigError("survey corpus must contain exactly " + std::to_string(kCorpusSize) + " images, found " +
                          std::to_string(base_ids.size()));
    }
    SurveySpec spec;
    spec.seed = seed;
    std::mt19937_64 rng(seed);
    std::size_t number = 1;
    auto add = [&](const std::string& base, CvdType type, double degree) {
        Question q;
        q.number = number++;
        q.base_image = base;
        q.cvd_type = type;
        q.degree = degree;
        q.option_order = shuffled_labels(rng);
        spec.questions.push_back(q);
    };
    for (std::size_t k = 0; k < base_ids.size(); ++k) {
        for (CvdType type : {CvdType::Protan, CvdType::Deuteran}) {
            for (double d : kSurveyDegrees) add(base_ids[k], type, d);
        }
        add(base_ids[k], k % 2 == 0 ? CvdType::Protan : CvdType::Deuteran, 0.0);
    }
    return spec;
}

struct QuestionImages {
    Image8 presented;
    std::vector<Image8> options;  ///< in display order
};

struct SurveyBundle {
    SurveySpec spec;
    std::vector<QuestionImages> images;  ///< parallel to spec.questions
};

struct CorpusImage {
    std::string id;
    Image8 image;
};

/// Renders one question's presented image and its option images in display order.
inline QuestionImages render_question(const Question& q, const Image8& base) {
    const SimSpec sim = q.sim_spec();
    const FuzzyProfile profile = q.correction_profile();
    Image8 presented = simulate(base, sim);
    std::vector<Image8> options;
    options.reserve(kOptionCount);
    for (OptionLabel label : q.option_order) {
        if (auto opts = correction_for(label)) options.push_back(simulate(correct(base, profile, *opts), sim));
        else options.push_back(presented);
    }
    return {std::move(presented), std::move(options)};
}

inline SurveyBundle generate_survey(const std::vector<CorpusImage>& corpus, std::uint64_t seed) {
    std::vector<std::string> ids;
    for (const auto& c : corpus) ids.push_back(c.id);
    SurveyBundle bundle{layout_survey(ids, seed), {}};
    bundle.images.reserve(bundle.spec.questions.size());
    for (const auto& q : bundle.spec.questions) {
        const auto it = std::find_if(corpus.begin(), corpus.end(), [&](const CorpusImage& c) { return c.id == q.base_image; });
        bundle.images.push_back(render_question(q, it->image));
    }
    return bundle;
}

/// Loads every .png / .bmp file of `dir`, sorted by file name; ids are file stems.
inline std::vector<CorpusImage> load_corpus(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw ConfigError("corpus directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (ext == ".png" || ext == ".bmp") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.size() != kCorpusSize) {
        throw ConfigError("survey corpus must contain exactly " + std::to_string(kCorpusSize) + " images, found " +
                          std::to_string(files.size()) + " in " + dir.string());
    }
    std::vector<CorpusImage> out;
    for (const auto& f : files) out.push_back({f.stem().string(), read_image(f)});
    return out;
}

inline std::string question_image_name(std::size_t number, std::optional<std::size_t> option_position) {
    char buf[32];
    if (option_position) std::snprintf(buf, sizeof buf, "q%02zu_opt%c.png", number, static_cast<char>('A' + *option_position));
    else std::snprintf(buf, sizeof buf, "q%02zu_presented.png", number);
    return buf;
}

inline nlohmann::json survey_to_json(const SurveySpec& spec) {
    nlohmann::json labels = nlohmann::json::array();
    for (OptionLabel l : kAllLabels) labels.push_back(to_string(l));
    nlohmann::json questions = nlohmann::json::array();
    for (const auto& q : spec.questions) {
        nlohmann::json order = nlohmann::json::array();
        for (OptionLabel l : q.option_order) order.push_back(to_string(l));
        questions.push_back({{"number", q.number},
                             {"base_image", q.base_image},
                             {"cvd_type", to_string(q.cvd_type)},
                             {"degree", q.degree},
                             {"options", labels},
                             {"option_order", order}});
    }
    return {{"format", kSurveyFormat},
            {"seed", spec.seed},
            {"expected_control_rate", kExpectedControlRate},
            {"labels", labels},
            {"questions", questions}};
}

inline SurveySpec survey_from_json(const nlohmann::json& j) {
    SurveySpec spec;
    try {
        if (j.at("format").get<std::string>() != kSurveyFormat) throw ParseError("unsupported survey format", 0, "format");
        spec.seed = j.at("seed").get<std::uint64_t>();
        const auto& qs = j.at("questions");
        for (std::size_t i = 0; i < qs.size(); ++i) {
            const auto& qj = qs[i];
            const std::string path = "questions[" + std::to_string(i) + "]";
            Question q;
            q.number = qj.at("number").get<std::size_t>();
            q.base_image = qj.at("base_image").get<std::string>();
            const auto type = cvd_type_from_string(qj.at("cvd_type").get<std::string>());
            if (!type) throw ParseError("unknown cvd_type", 0, path + ".cvd_type");
            q.cvd_type = *type;
            q.degree = qj.at("degree").get<double>();
            const auto& order = qj.at("option_order");
            if (order.size() != kOptionCount) throw ParseError("option_order must have 5 entries", 0, path + ".option_order");
            for (std::size_t k = 0; k < kOptionCount; ++k) {
                const auto label = option_label_from_string(order[k].get<std::string>());
                if (!label) throw ParseError("unknown option label", 0, path + ".option_order");
                q.option_order[k] = *label;
            }
            spec.questions.push_back(q);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed survey spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

inline SurveySpec read_survey(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    try {
        return survey_from_json(nlohmann::json::parse(bytes.begin(), bytes.end()));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

/// Writes spec.json and every q{NN}_{presented|optA..optE}.png into `dir`.
inline void write_survey(const SurveyBundle& bundle, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::string text = survey_to_json(bundle.spec).dump(2) + "\n";
    write_file_bytes(dir / "spec.json", std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    for (std::size_t i = 0; i < bundle.spec.questions.size(); ++i) {
        const auto n = bundle.spec.questions[i].number;
        write_image(dir / question_image_name(n, std::nullopt), bundle.images[i].presented);
        for (std::size_t k = 0; k < bundle.images[i].options.size(); ++k) {
            write_image(dir / question_image_name(n, k), bundle.images[i].options[k]);
        }
    }
}

// ---------------------------------------------------------------------------
// Responses

struct SurveyAnswer {
    std::size_t question = 0;  ///< 1-based question number
    std::string label;
};

struct SurveyResponse {
    std::string respondent_id;
    std::vector<SurveyAnswer> answers;
};

inline nlohmann::json response_to_json(const SurveyResponse& r) {
    nlohmann::json answers = nlohmann::json::array();
    for (const auto& a : r.answers) answers.push_back({{"question", a.question}, {"label", a.label}});
    return {{"respondent_id", r.respondent_id}, {"answers", answers}};
}

inline SurveyResponse response_from_json(const nlohmann::json& j) {
    try {
        SurveyResponse r;
        r.respondent_id = j.at("respondent_id").get<std::string>();
        for (const auto& a : j.at("answers")) r.answers.push_back({a.at("question").get<std::size_t>(), a.at("label").get<std::string>()});
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed survey response: ") + e.what());
    }
}

/// Throws ValidationError naming every answer that references an unknown
/// question or label.
inline void validate_responses(const SurveySpec& spec, const std::vector<SurveyResponse>& responses) {
    std::vector<std::string> problems;
    for (const auto& r : responses) {
        for (const auto& a : r.answers) {
            if (a.question < 1 || a.question > spec.questions.size()) {
                problems.push_back("respondent '" + r.respondent_id + "': unknown question " + std::to_string(a.question));
            }
            if (!option_label_from_string(a.label)) {
                problems.push_back("respondent '" + r.respondent_id + "': unknown label '" + a.label + "' for question " +
                                   std::to_string(a.question));
            }
        }
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

/// Append-only JSON-lines log, one record per respondent.
class ResponseLog {
public:
    explicit ResponseLog(std::filesystem::path path) : path_(std::move(path)) {}

    void append(const SurveyResponse& r) {
        const std::string line = response_to_json(r).dump() + "\n";
        std::lock_guard lock(mu_);
        std::ofstream out(path_, std::ios::binary | std::ios::app);
        if (!out) throw IoError("cannot open response log " + path_.string());
        out.write(line.data(), static_cast<std::streamsize>(line.size()));
        out.flush();
        if (!out) throw IoError("append failed for " + path_.string());
    }

    /// Every complete record. A torn final line (no trailing newline) is ignored.
    [[nodiscard]] std::vector<SurveyResponse> read_all() const {
        std::lock_guard lock(mu_);
        std::vector<SurveyResponse> out;
        std::ifstream in(path_, std::ios::binary);
        if (!in) return out;
        std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        std::size_t start = 0;
        while (true) {
            const std::size_t nl = content.find('\n', start);
            if (nl == std::string::npos) break;
            const std::string_view line(content.data() + start, nl - start);
            start = nl + 1;
            if (line.empty()) continue;
            try {
                out.push_back(response_from_json(nlohmann::json::parse(line)));
            } catch (const nlohmann::json::parse_error& e) {
                throw ParseError(std::string("corrupt response log record: ") + e.what());
            }
        }
        return out;
    }

    [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    mutable std::mutex mu_;
};

// ---------------------------------------------------------------------------
// Tally

/// Pick counts and percentages over a fixed label set.
struct PercentGroup {
    std::map<std::string, std::size_t> counts;
    std::map<std::string, double> percent;
    std::size_t total = 0;
};

struct TallyReport {
    std::size_t respondents = 0;
    std::size_t total_answers = 0;
    double control_rate = 0.0;  ///< share of no_improvement picks, in percent
    double expected_control_rate = 100.0 * kExpectedControlRate;
    PercentGroup overall;                                    ///< all five labels
    PercentGroup positive;                                   ///< method labels only
    std::map<std::string, PercentGroup> per_type;            ///< type -> method labels, degree > 0
    std::map<std::string, std::map<std::string, PercentGroup>> per_type_degree;  ///< type -> degree -> method labels
};

namespace detail {

inline PercentGroup make_group(bool with_no_improvement) {
    PercentGroup g;
    for (OptionLabel l : kAllLabels) {
        if (l == OptionLabel::NoImprovement && !with_no_improvement) continue;
        g.counts[std::string(to_string(l))] = 0;
        g.percent[std::string(to_string(l))] = 0.0;
    }
    return g;
}

inline void finish_group(PercentGroup& g) {
    g.total = 0;
    for (const auto& [label, n] : g.counts) g.total += n;
    for (auto& [label, pct] : g.percent) {
        pct = g.total == 0 ? 0.0 : 100.0 * static_cast<double>(g.counts[label]) / static_cast<double>(g.total);
    }
}

inline std::string degree_key(double d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.2f", d);
    return buf;
}

}  // namespace detail

inline TallyReport tally(const SurveySpec& spec, const std::vector<SurveyResponse>& responses) {
    validate_responses(spec, responses);
    TallyReport report;
    report.respondents = responses.size();
    report.overall = detail::make_group(true);
    report.positive = detail::make_group(false);
    for (CvdType t : {CvdType::Protan, CvdType::Deuteran}) {
        const std::string type(to_string(t));
        report.per_type[type] = detail::make_group(false);
        for (double d : kSurveyDegrees) report.per_type_degree[type][detail::degree_key(d)] = detail::make_group(false);
    }

    for (const auto& r : responses) {
        for (const auto& a : r.answers) {
            const Question& q = spec.questions[a.question - 1];
            ++report.total_answers;
            ++report.overall.counts[a.label];
            if (a.label == to_string(OptionLabel::NoImprovement)) continue;
            ++report.positive.counts[a.label];
            if (q.degree > 0.0) {
                const std::string type(to_string(q.cvd_type));
                ++report.per_type[type].counts[a.label];
                ++report.per_type_degree[type][detail::degree_key(q.degree)].counts[a.label];
            }
        }
    }

    detail::finish_group(report.overall);
    detail::finish_group(report.positive);
    for (auto& [type, g] : report.per_type) detail::finish_group(g);
    for (auto& [type, by_degree] : report.per_type_degree) {
        for (auto& [deg, g] : by_degree) detail::finish_group(g);
    }
    report.control_rate = report.overall.percent[std::string(to_string(OptionLabel::NoImprovement))];
    return report;
}

inline nlohmann::json group_to_json(const PercentGroup& g) {
    return {{"total", g.total}, {"counts", g.counts}, {"percent", g.percent}};
}

inline nlohmann::json tally_to_json(const TallyReport& r) {
    nlohmann::json per_type = nlohmann::json::object();
    for (const auto& [type, g] : r.per_type) per_type[type] = group_to_json(g);
    nlohmann::json per_type_degree = nlohmann::json::object();
    for (const auto& [type, by_degree] : r.per_type_degree) {
        for (const auto& [deg, g] : by_degree) per_type_degree[type][deg] = group_to_json(g);
    }
    return {{"respondents", r.respondents},
            {"total_answers", r.total_answers},
            {"control_rate", r.control_rate},
            {"expected_control_rate", r.expected_control_rate},
            {"overall", group_to_json(r.overall)},
            {"positive", group_to_json(r.positive)},
            {"per_type", per_type},
            {"per_type_degree", per_type_degree}};
}

/// One row per (group, label): group,type,degree,label,count,percent
inline std::string tally_to_csv(const TallyReport& r) {
    std::ostringstream out;
    out << "group,type,degree,label,count,percent\n";
    auto rows = [&](const std::string& group, const std::string& type, const std::string& degree, const PercentGroup& g) {
        for (const auto& [label, n] : g.counts) {
            char pct[32];
            std::snprintf(pct, sizeof pct, "%.4f", g.percent.at(label));
            out << group << ',' << type << ',' << degree << ',' << label << ',' << n << ',' << pct << '\n';
        }
    };
    rows("overall", "", "", r.overall);
    rows("positive", "", "", r.positive);
    for (const auto& [type, g] : r.per_type) rows("per_type", type, "", g);
    for (const auto& [type, by_degree] : r.per_type_degree) {
        for (const auto& [deg, g] : by_degree) rows("per_type_degree", type, deg, g);
    }
    return out.str();
}

}  // namespace cvd
