#pragma once

// Weighted Ishihara test: plate definitions, sessions, scoring and the
// linear fuzzification of scores into a FuzzyProfile.
//
// Plate file (JSON):
//
//   {
//     "format": "cvd-plates/1",
//     "plates": [
//       { "id": "01", "image": "plates/01.png", "kind": "demonstration", "weight": 0.5,
//         "answers": [
//           { "label": "12", "normal": 1, "protan": 0, "deuteran": 0, "canonical": true },
//           { "label": "nothing seen", "distractor": true }
//         ] },
//       ...
//     ]
//   }
//
// Plates are presented in file order.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cvd/error.hpp"
#include "cvd/image_io.hpp"
#include "cvd/profile.hpp"

namespace cvd {

inline constexpr std::string_view kPlateFormat = "cvd-plates/1";

enum class PlateKind { Demonstration, Diagnosis, Hidden, Masked };

inline std::string_view to_string(PlateKind k) {
    switch (k) {
        case PlateKind::Demonstration: return "demonstration";
        case PlateKind::Diagnosis: return "diagnosis";
        case PlateKind::Hidden: return "hidden";
        case PlateKind::Masked: return "masked";
    }
    return "diagnosis";
}

inline std::optional<PlateKind> plate_kind_from_string(std::string_view s) {
    if (s == "demonstration") return PlateKind::Demonstration;
    if (s == "diagnosis") return PlateKind::Diagnosis;
    if (s == "hidden") return PlateKind::Hidden;
    if (s == "masked") return PlateKind::Masked;
    return std::nullopt;
}

struct AnswerOption {
    std::string label;
    double w_normal = 0.0;
    double w_protan = 0.0;
    double w_deuteran = 0.0;
    bool canonical = false;   ///< the reading of a normal observer
    bool distractor = false;  ///< explicitly carries no credit
};

struct PlateDefinition {
    std::string id;
    std::string image_ref;
    PlateKind kind = PlateKind::Diagnosis;
    std::vector<AnswerOption> answers;
    double weight = 1.0;
};

/// Immutable, validated plate collection in presentation order.
class PlateSet {
public:
    PlateSet() = default;

    /// Throws ValidationError listing every violated invariant.
    explicit PlateSet(std::vector<PlateDefinition> plates) : plates_(std::move(plates)) {
        std::vector<std::string> problems;
        std::set<std::string> seen;
        if (plates_.empty()) problems.emplace_back("plate set is empty");
        for (const auto& p : plates_) {
            const std::string tag = "plate '" + p.id + "'";
            if (p.id.empty()) problems.emplace_back("plate with empty id");
            if (!seen.insert(p.id).second) problems.push_back("duplicate plate id '" + p.id + "'");
            if (p.image_ref.empty()) problems.push_back(tag + ": image reference is empty");
            if (!(p.weight > 0.0) || !std::isfinite(p.weight)) problems.push_back(tag + ": weight must be > 0");
            if (p.answers.size() < 2) problems.push_back(tag + ": needs at least 2 answer options");
            const auto canonical = std::count_if(p.answers.begin(), p.answers.end(),
                                                 [](const AnswerOption& a) { return a.canonical; });
            if (canonical != 1) {
                problems.push_back(tag + ": exactly one canonical-normal option required, found " +
                                   std::to_string(canonical));
            }
            for (const auto& a : p.answers) {
                const std::string otag = tag + " option '" + a.label + "'";
                const bool finite = std::isfinite(a.w_normal) && std::isfinite(a.w_protan) && std::isfinite(a.w_deuteran);
                if (!finite || a.w_normal < 0.0 || a.w_protan < 0.0 || a.w_deuteran < 0.0) {
                    problems.push_back(otag + ": credits must be finite and non-negative");
                }
                const bool any_credit = a.w_normal > 0.0 || a.w_protan > 0.0 || a.w_deuteran > 0.0;
                if (a.distractor && any_credit) problems.push_back(otag + ": distractor must carry no credit");
                if (!a.distractor && !any_credit) {
                    problems.push_back(otag + ": option without credit must be flagged as distractor");
                }
            }
        }
        if (problems.empty()) {
            const RawMax m = maxima(plates_);
            if (!(m.normal > 0.0)) problems.emplace_back("no option carries normal credit");
            if (!(m.protan > 0.0)) problems.emplace_back("no option carries protan credit");
            if (!(m.deuteran > 0.0)) problems.emplace_back("no option carries deuteran credit");
        }
        if (!problems.empty()) throw ValidationError(std::move(problems));
    }

    [[nodiscard]] const std::vector<PlateDefinition>& plates() const noexcept { return plates_; }
    [[nodiscard]] std::size_t size() const noexcept { return plates_.size(); }

    [[nodiscard]] const PlateDefinition* find(std::string_view id) const {
        for (const auto& p : plates_) {
            if (p.id == id) return &p;
        }
        return nullptr;
    }

    [[nodiscard]] std::vector<std::string> ids() const {
        std::vector<std::string> out;
        out.reserve(plates_.size());
        for (const auto& p : plates_) out.push_back(p.id);
        return out;
    }

private:
    struct RawMax {
        double normal = 0.0, protan = 0.0, deuteran = 0.0;
    };

    static RawMax maxima(const std::vector<PlateDefinition>& plates) {
        RawMax m;
        for (const auto& p : plates) {
            for (const auto& a : p.answers) {
                m.normal = std::max(m.normal, a.w_normal);
                m.protan = std::max(m.protan, a.w_protan);
                m.deuteran = std::max(m.deuteran, a.w_deuteran);
            }
        }
        return m;
    }

    std::vector<PlateDefinition> plates_;
};

namespace detail {

inline std::size_t line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

inline const nlohmann::json& require_field(const nlohmann::json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw ParseError("expected an object", 0, path);
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError("missing field", 0, path + "." + key);
    return *it;
}

inline std::string require_string(const nlohmann::json& obj, const char* key, const std::string& path) {
    const auto& v = require_field(obj, key, path);
    if (!v.is_string()) throw ParseError("expected a string", 0, path + "." + key);
    return v.get<std::string>();
}

inline double optional_number(const nlohmann::json& obj, const char* key, const std::string& path, double fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number()) throw ParseError("expected a number", 0, path + "." + key);
    return it->get<double>();
}

inline bool optional_bool(const nlohmann::json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) return false;
    if (!it->is_boolean()) throw ParseError("expected a boolean", 0, path + "." + key);
    return it->get<bool>();
}

}  // namespace detail

/// Parses and validates a plate document held in memory.
inline PlateSet parse_plates(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed plate file: ") + e.what(), detail::line_of_offset(text, e.byte));
    }
    if (!doc.is_object()) throw ParseError("plate file must be a JSON object", 1);
    if (detail::require_string(doc, "format", "$") != kPlateFormat) {
        throw ParseError("unsupported plate format, expected " + std::string(kPlateFormat), 0, "$.format");
    }
    const auto& plates_json = detail::require_field(doc, "plates", "$");
    if (!plates_json.is_array()) throw ParseError("expected an array", 0, "$.plates");

    std::vector<PlateDefinition> plates;
    for (std::size_t i = 0; i < plates_json.size(); ++i) {
        const auto& pj = plates_json[i];
        const std::string path = "$.plates[" + std::to_string(i) + "]";
        PlateDefinition p;
        p.id = detail::require_string(pj, "id", path);
        p.image_ref = detail::require_string(pj, "image", path);
        const std::string kind = detail::require_string(pj, "kind", path);
        const auto k = plate_kind_from_string(kind);
        if (!k) throw ParseError("unknown plate kind '" + kind + "'", 0, path + ".kind");
        p.kind = *k;
        p.weight = detail::optional_number(pj, "weight", path, 1.0);
        const auto& answers = detail::require_field(pj, "answers", path);
        if (!answers.is_array()) throw ParseError("expected an array", 0, path + ".answers");
        for (std::size_t j = 0; j < answers.size(); ++j) {
            const auto& aj = answers[j];
            const std::string apath = path + ".answers[" + std::to_string(j) + "]";
            AnswerOption a;
            a.label = detail::require_string(aj, "label", apath);
            a.w_normal = detail::optional_number(aj, "normal", apath, 0.0);
            a.w_protan = detail::optional_number(aj, "protan", apath, 0.0);
            a.w_deuteran = detail::optional_number(aj, "deuteran", apath, 0.0);
            a.canonical = detail::optional_bool(aj, "canonical", apath);
            a.distractor = detail::optional_bool(aj, "distractor", apath);
            p.answers.push_back(std::move(a));
        }
        plates.push_back(std::move(p));
    }
    return PlateSet(std::move(plates));
}

inline PlateSet load_plates(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    return parse_plates(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

/// One user's pass through a plate sequence.
struct TestSession {
    std::string session_id;
    std::vector<std::string> plate_order;
    std::map<std::string, std::size_t> responses;  ///< plate id -> option index
    bool completed = false;

    static TestSession start(std::string id, const PlateSet& plates) {
        return TestSession{std::move(id), plates.ids(), {}, false};
    }

    void refresh_completion() {
        completed = std::all_of(plate_order.begin(), plate_order.end(),
                                [&](const std::string& id) { return responses.contains(id); });
    }
};

/// Records (or replaces) the answer to one plate. Throws DomainError for an
/// unknown plate or out-of-range option.
inline void record_answer(TestSession& session, const PlateSet& plates, const std::string& plate_id,
                          std::size_t option_index) {
    if (std::find(session.plate_order.begin(), session.plate_order.end(), plate_id) == session.plate_order.end()) {
        throw DomainError("plate '" + plate_id + "' is not part of session " + session.session_id);
    }
    const PlateDefinition* plate = plates.find(plate_id);
    if (plate == nullptr) throw DomainError("unknown plate '" + plate_id + "'");
    if (option_index >= plate->answers.size()) {
        throw DomainError("option index " + std::to_string(option_index) + " out of range for plate '" + plate_id + "'");
    }
    session.responses[plate_id] = option_index;
    session.refresh_completion();
}

/// First unanswered plate in presentation order, or nullptr once all are answered.
inline const PlateDefinition* next_plate(const TestSession& session, const PlateSet& plates) {
    for (const auto& id : session.plate_order) {
        if (!session.responses.contains(id)) return plates.find(id);
    }
    return nullptr;
}

struct RawScores {
    double s_normal = 0.0, s_protan = 0.0, s_deuteran = 0.0;
    double max_normal = 0.0, max_protan = 0.0, max_deuteran = 0.0;
};

inline RawScores score_session(const TestSession& session, const PlateSet& plates) {
    if (!session.completed) throw StateError("session " + session.session_id + " is not completed");
    RawScores r;
    for (const auto& id : session.plate_order) {
        const PlateDefinition* plate = plates.find(id);
        if (plate == nullptr) throw NotFoundError("unknown plate '" + id + "' in session " + session.session_id);
        const auto it = session.responses.find(id);
        if (it == session.responses.end()) throw StateError("plate '" + id + "' unanswered");
        if (it->second >= plate->answers.size()) throw DomainError("option index out of range for plate '" + id + "'");
        const AnswerOption& chosen = plate->answers[it->second];
        double mn = 0.0, mp = 0.0, md = 0.0;
        for (const auto& a : plate->answers) {
            mn = std::max(mn, a.w_normal);
            mp = std::max(mp, a.w_protan);
            md = std::max(md, a.w_deuteran);
        }
        r.s_normal += plate->weight * chosen.w_normal;
        r.s_protan += plate->weight * chosen.w_protan;
        r.s_deuteran += plate->weight * chosen.w_deuteran;
        r.max_normal += plate->weight * mn;
        r.max_protan += plate->weight * mp;
        r.max_deuteran += plate->weight * md;
    }
    return r;
}

/// Linear membership: each degree is its score over the achievable maximum,
/// and beta = 1 - alpha_n.
inline FuzzyProfile fuzzify(const RawScores& s) {
    auto ratio = [](double v, double max) { return max > 0.0 ? std::clamp(v / max, 0.0, 1.0) : 0.0; };
    FuzzyProfile p;
    p.alpha_n = ratio(s.s_normal, s.max_normal);
    p.alpha_p = ratio(s.s_protan, s.max_protan);
    p.alpha_d = ratio(s.s_deuteran, s.max_deuteran);
    p.beta = std::clamp(1.0 - p.alpha_n, 0.0, 1.0);
    return p;
}

inline nlohmann::json session_to_json(const TestSession& s) {
    nlohmann::json responses = nlohmann::json::object();
    for (const auto& [id, idx] : s.responses) responses[id] = idx;
    return {{"session_id", s.session_id}, {"plate_order", s.plate_order}, {"responses", responses},
            {"completed", s.completed}};
}

inline TestSession session_from_json(const nlohmann::json& j) {
    try {
        TestSession s;
        s.session_id = j.at("session_id").get<std::string>();
        s.plate_order = j.at("plate_order").get<std::vector<std::string>>();
        for (const auto& [id, idx] : j.at("responses").items()) s.responses[id] = idx.get<std::size_t>();
        s.refresh_completion();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed session document: ") + e.what());
    }
}

}  // namespace cvd
