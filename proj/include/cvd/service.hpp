#pragma once

// HTTP API over the core library.
//
//   GET  /api/plates                    plate list with image URLs
//   POST /api/test                      start a session -> {session_id, next}
//   GET  /api/test/{session}/next       next unanswered plate (null when done)
//   POST /api/test/{session}/answer     {plate_id, option_index}
//   GET  /api/test/{session}/result     profile document, once completed
//   POST /api/simulate                  image + alpha_p, alpha_d -> PNG
//   POST /api/correct                   image + profile + method/domain/equalize -> PNG
//   GET  /api/survey/question/{n}       question metadata + image URLs
//   POST /api/survey/response           {respondent_id, answers: [{question, label}]}
//   GET  /api/survey/stats              tally report
//   GET  /                              static UI bundle
//
// Images are sent either as multipart/form-data (file field "image", the other
// parameters as form fields) or as a raw request body with parameters in the
// query string. Errors are returned as {"error": {"code", "message"}}.
//
// Data directory layout:
//   plates.json, plate images   (plate file location overridable)
//   sessions/<id>.json          test sessions
//   profiles/<id>.json          completed profiles
//   survey/spec.json + q*.png   generated survey bundle
//   survey/responses.jsonl      survey answers
//   ui/                         web UI bundle

#include <charconv>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <type_traits>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "cvd/correct.hpp"
#include "cvd/image_io.hpp"
#include "cvd/ishihara.hpp"
#include "cvd/profile_io.hpp"
#include "cvd/simulate.hpp"
#include "cvd/survey.hpp"

namespace cvd {

enum class ApiErrorCode {
    SessionNotFound,
    SessionIncomplete,
    BadDegreeRange,
    BadImage,
    BadOption,
    BadRequest,
    PayloadTooLarge,
    NotFound,
    SurveyUnavailable,
    Internal,
};

inline std::string_view to_string(ApiErrorCode c) {
    switch (c) {
        case ApiErrorCode::SessionNotFound: return "session_not_found";
        case ApiErrorCode::SessionIncomplete: return "session_incomplete";
        case ApiErrorCode::BadDegreeRange: return "bad_degree_range";
        case ApiErrorCode::BadImage: return "bad_image";
        case ApiErrorCode::BadOption: return "bad_option";
        case ApiErrorCode::BadRequest: return "bad_request";
        case ApiErrorCode::PayloadTooLarge: return "payload_too_large";
        case ApiErrorCode::NotFound: return "not_found";
        case ApiErrorCode::SurveyUnavailable: return "survey_unavailable";
        case ApiErrorCode::Internal: return "internal_error";
    }
    return "internal_error";
}

inline int http_status(ApiErrorCode c) {
    switch (c) {
        case ApiErrorCode::SessionNotFound: return 404;
        case ApiErrorCode::SessionIncomplete: return 409;
        case ApiErrorCode::BadDegreeRange: return 400;
        case ApiErrorCode::BadImage: return 415;
        case ApiErrorCode::BadOption: return 422;
        case ApiErrorCode::BadRequest: return 400;
        case ApiErrorCode::PayloadTooLarge: return 413;
        case ApiErrorCode::NotFound: return 404;
        case ApiErrorCode::SurveyUnavailable: return 503;
        case ApiErrorCode::Internal: return 500;
    }
    return 500;
}

class ApiError : public Error {
public:
    ApiError(ApiErrorCode code, const std::string& message) : Error(message), code_(code) {}

    [[nodiscard]] ApiErrorCode code() const noexcept { return code_; }
    [[nodiscard]] int status() const noexcept { return http_status(code_); }

private:
    ApiErrorCode code_;
};

/// Strict decimal in [0,1]. Anything else is bad_degree_range.
inline double parse_degree(const std::string& text, const char* name) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc{} || ptr != last || !(v >= 0.0 && v <= 1.0)) {
        throw ApiError(ApiErrorCode::BadDegreeRange, std::string(name) + " must be a decimal in [0,1], got '" + text + "'");
    }
    return v;
}

/// Directory-backed test sessions. Each session has its own mutex so
/// mutations of one session are serialized while different sessions proceed
/// concurrently.
class SessionStore {
public:
    SessionStore(std::filesystem::path dir, const PlateSet& plates) : dir_(std::move(dir)), plates_(plates) {
        std::filesystem::create_directories(dir_);
    }

    std::string create() {
        std::string id;
        {
            std::lock_guard lock(rng_mu_);
            static constexpr char kHex[] = "0123456789abcdef";
            do {
                id.clear();
                for (int i = 0; i < 16; ++i) id.push_back(kHex[rng_() % 16]);
            } while (std::filesystem::exists(path_for(id)));
        }
        auto entry = acquire(id, true);
        std::lock_guard lock(entry->mu);
        entry->session = TestSession::start(id, plates_);
        persist(entry->session);
        return id;
    }

    /// Runs `fn(session)` under the session's lock; persists when `mutate` is set.
    template <typename Fn>
    auto with_session(const std::string& id, bool mutate, Fn&& fn) -> std::invoke_result_t<Fn&, TestSession&> {
        auto entry = acquire(id, false);
        if (!entry) throw NotFoundError("session '" + id + "' not found");
        std::lock_guard lock(entry->mu);
        if constexpr (std::is_void_v<decltype(fn(entry->session))>) {
            fn(entry->session);
            if (mutate) persist(entry->session);
        } else {
            auto result = fn(entry->session);
            if (mutate) persist(entry->session);
            return result;
        }
    }

private:
    struct Entry {
        std::mutex mu;
        TestSession session;
    };

    std::shared_ptr<Entry> acquire(const std::string& id, bool create) {
        if (!valid_session_id(id)) return nullptr;
        std::lock_guard lock(map_mu_);
        if (auto it = entries_.find(id); it != entries_.end()) return it->second;
        auto entry = std::make_shared<Entry>();
        if (!create) {
            const auto p = path_for(id);
            if (!std::filesystem::exists(p)) return nullptr;
            const auto bytes = read_file_bytes(p);
            entry->session = session_from_json(nlohmann::json::parse(bytes.begin(), bytes.end()));
        }
        entries_[id] = entry;
        return entry;
    }

    void persist(const TestSession& s) { atomic_write_text(path_for(s.session_id), session_to_json(s).dump(2) + "\n"); }

    [[nodiscard]] std::filesystem::path path_for(const std::string& id) const { return dir_ / (id + ".json"); }

    std::filesystem::path dir_;
    const PlateSet& plates_;
    std::mutex map_mu_;
    std::map<std::string, std::shared_ptr<Entry>> entries_;
    std::mutex rng_mu_;
    std::mt19937_64 rng_{std::random_device{}()};
};

struct ServiceConfig {
    std::filesystem::path data_dir;
    std::optional<std::filesystem::path> plates_file;  ///< default: data_dir/plates.json
    std::optional<std::filesystem::path> ui_dir;       ///< default: data_dir/ui
    std::size_t max_upload_bytes = 16u * 1024u * 1024u;
};

class Service {
public:
    explicit Service(ServiceConfig cfg)
        : cfg_(std::move(cfg)),
          plates_file_(cfg_.plates_file.value_or(cfg_.data_dir / "plates.json")),
          plates_(load_plates(plates_file_)),
          sessions_(cfg_.data_dir / "sessions", plates_),
          profiles_(cfg_.data_dir / "profiles"),
          survey_dir_(cfg_.data_dir / "survey"),
          responses_(survey_dir_ / "responses.jsonl") {
        std::filesystem::create_directories(survey_dir_);
    }

    [[nodiscard]] const PlateSet& plates() const noexcept { return plates_; }
    [[nodiscard]] const ProfileStore& profiles() const noexcept { return profiles_; }

    void register_routes(httplib::Server& server) {
        server.set_payload_max_length(cfg_.max_upload_bytes + (1u << 20));

        server.Get("/api/plates", wrap([this](const httplib::Request&, httplib::Response& res) {
            nlohmann::json list = nlohmann::json::array();
            for (const auto& p : plates_.plates()) list.push_back(plate_json(p));
            send_json(res, {{"plates", list}});
        }));

        server.Post("/api/test", wrap([this](const httplib::Request&, httplib::Response& res) {
            const std::string id = sessions_.create();
            send_json(res, progress_json(id), 201);
        }));

        server.Get(R"(/api/test/([^/]+)/next)", wrap([this](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.matches[1];
            send_json(res, progress_json(id));
        }));

        server.Post(R"(/api/test/([^/]+)/answer)", wrap([this](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.matches[1];
            const nlohmann::json body = parse_json_body(req);
            std::string plate_id;
            std::size_t option = 0;
            try {
                plate_id = body.at("plate_id").get<std::string>();
                const auto& o = body.at("option_index");
                if (!o.is_number_integer() || o.get<std::int64_t>() < 0) throw ApiError(ApiErrorCode::BadOption, "option_index must be a non-negative integer");
                option = o.get<std::size_t>();
            } catch (const nlohmann::json::exception& e) {
                throw ApiError(ApiErrorCode::BadRequest, std::string("expected {plate_id, option_index}: ") + e.what());
            }
            with_session(id, true, [&](TestSession& s) {
                try {
                    record_answer(s, plates_, plate_id, option);
                } catch (const DomainError& e) {
                    throw ApiError(ApiErrorCode::BadOption, e.what());
                }
            });
            send_json(res, progress_json(id));
        }));

        server.Get(R"(/api/test/([^/]+)/result)", wrap([this](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.matches[1];
            const ProfileDocument doc = result_for(id);
            send_json(res, profile_to_json(doc));
        }));

        server.Post("/api/simulate", wrap([this](const httplib::Request& req, httplib::Response& res) {
            const Image8 img = upload_image(req);
            const SimSpec spec{parse_degree(param(req, "alpha_p"), "alpha_p"), parse_degree(param(req, "alpha_d"), "alpha_d")};
            send_image(req, res, simulate(img, spec));
        }));

        server.Post("/api/correct", wrap([this](const httplib::Request& req, httplib::Response& res) {
            const Image8 img = upload_image(req);
            const FuzzyProfile profile = request_profile(req);
            send_image(req, res, correct(img, profile, request_options(req)));
        }));

        server.Get(R"(/api/survey/question/(\d+))", wrap([this](const httplib::Request& req, httplib::Response& res) {
            const auto spec = survey();
            const std::size_t n = std::stoul(req.matches[1]);
            if (n < 1 || n > spec->questions.size()) throw ApiError(ApiErrorCode::NotFound, "no question " + std::to_string(n));
            send_json(res, question_json(spec->questions[n - 1]));
        }));

        server.Post("/api/survey/response", wrap([this](const httplib::Request& req, httplib::Response& res) {
            const auto spec = survey();
            SurveyResponse r;
            try {
                r = response_from_json(parse_json_body(req));
            } catch (const ParseError& e) {
                throw ApiError(ApiErrorCode::BadRequest, e.what());
            }
            if (r.respondent_id.empty()) throw ApiError(ApiErrorCode::BadRequest, "respondent_id is required");
            try {
                validate_responses(*spec, {r});
            } catch (const ValidationError& e) {
                throw ApiError(ApiErrorCode::BadOption, e.what());
            }
            responses_.append(r);
            send_json(res, {{"accepted", true}, {"respondent_id", r.respondent_id}, {"answers", r.answers.size()}});
        }));

        server.Get("/api/survey/stats", wrap([this](const httplib::Request&, httplib::Response& res) {
            const auto spec = survey();
            send_json(res, tally_to_json(tally(*spec, responses_.read_all())));
        }));

        if (std::filesystem::is_directory(survey_dir_)) server.set_mount_point("/survey", survey_dir_.string());
        const auto plate_root = plates_file_.parent_path().empty() ? std::filesystem::path(".") : plates_file_.parent_path();
        server.set_mount_point("/plate-images", plate_root.string());
        const auto ui = cfg_.ui_dir.value_or(cfg_.data_dir / "ui");
        if (std::filesystem::is_directory(ui)) server.set_mount_point("/", ui.string());
    }

    /// Profile of a completed session; computed once, then served from the store.
    ProfileDocument result_for(const std::string& id) {
        return with_session(id, false, [&](TestSession& s) {
            if (!s.completed) throw ApiError(ApiErrorCode::SessionIncomplete, "session '" + id + "' is not completed");
            if (auto stored = profiles_.get(id)) return *stored;
            ProfileDocument doc{id, utc_timestamp_now(), fuzzify(score_session(s, plates_))};
            profiles_.put(doc);
            return doc;
        });
    }

private:
    using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

    static Handler wrap(Handler inner) {
        return [inner = std::move(inner)](const httplib::Request& req, httplib::Response& res) {
            try {
                inner(req, res);
            } catch (const ApiError& e) {
                send_error(res, e.code(), e.what());
            } catch (const std::exception& e) {
                send_error(res, ApiErrorCode::Internal, e.what());
            }
        };
    }

    static void send_error(httplib::Response& res, ApiErrorCode code, const std::string& message) {
        res.status = http_status(code);
        const nlohmann::json body = {{"error", {{"code", to_string(code)}, {"message", message}}}};
        res.set_content(body.dump(), "application/json");
    }

    static void send_json(httplib::Response& res, const nlohmann::json& body, int status = 200) {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    }

    static nlohmann::json parse_json_body(const httplib::Request& req) {
        try {
            return nlohmann::json::parse(req.body);
        } catch (const nlohmann::json::parse_error& e) {
            throw ApiError(ApiErrorCode::BadRequest, std::string("malformed JSON body: ") + e.what());
        }
    }

    template <typename Fn>
    auto with_session(const std::string& id, bool mutate, Fn&& fn) -> std::invoke_result_t<Fn&, TestSession&> {
        try {
            return sessions_.with_session(id, mutate, std::forward<Fn>(fn));
        } catch (const NotFoundError& e) {
            throw ApiError(ApiErrorCode::SessionNotFound, e.what());
        }
    }

    nlohmann::json plate_json(const PlateDefinition& p) const {
        nlohmann::json options = nlohmann::json::array();
        for (const auto& a : p.answers) options.push_back(a.label);
        return {{"id", p.id},
                {"kind", to_string(p.kind)},
                {"image_url", "/plate-images/" + p.image_ref},
                {"options", options}};
    }

    nlohmann::json progress_json(const std::string& id) {
        return with_session(id, false, [&](TestSession& s) {
            const PlateDefinition* next = next_plate(s, plates_);
            return nlohmann::json{{"session_id", s.session_id},
                                  {"answered", s.responses.size()},
                                  {"total", s.plate_order.size()},
                                  {"completed", s.completed},
                                  {"next", next ? plate_json(*next) : nlohmann::json(nullptr)}};
        });
    }

    static std::string param(const httplib::Request& req, const std::string& name) {
        if (req.has_file(name)) return req.get_file_value(name).content;
        if (req.has_param(name)) return req.get_param_value(name);
        throw ApiError(ApiErrorCode::BadRequest, "missing parameter '" + name + "'");
    }

    static std::optional<std::string> optional_param(const httplib::Request& req, const std::string& name) {
        if (req.has_file(name)) return req.get_file_value(name).content;
        if (req.has_param(name)) return req.get_param_value(name);
        return std::nullopt;
    }

    Image8 upload_image(const httplib::Request& req) const {
        std::string bytes;
        if (req.is_multipart_form_data()) {
            if (!req.has_file("image")) throw ApiError(ApiErrorCode::BadImage, "missing 'image' upload");
            bytes = req.get_file_value("image").content;
        } else {
            bytes = req.body;
        }
        if (bytes.size() > cfg_.max_upload_bytes) {
            throw ApiError(ApiErrorCode::PayloadTooLarge, "image exceeds the " + std::to_string(cfg_.max_upload_bytes) + "-byte upload limit");
        }
        if (bytes.empty()) throw ApiError(ApiErrorCode::BadImage, "empty image upload");
        try {
            return decode_image(std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
        } catch (const Error& e) {
            throw ApiError(ApiErrorCode::BadImage, e.what());
        }
    }

    FuzzyProfile request_profile(const httplib::Request& req) {
        if (auto sid = optional_param(req, "session_id")) {
            if (auto stored = profiles_.get(*sid)) return stored->profile;
            return result_for(*sid).profile;
        }
        FuzzyProfile p;
        p.beta = parse_degree(param(req, "beta"), "beta");
        p.alpha_p = parse_degree(param(req, "alpha_p"), "alpha_p");
        p.alpha_d = parse_degree(param(req, "alpha_d"), "alpha_d");
        p.alpha_n = parse_degree(param(req, "alpha_n"), "alpha_n");
        return p;
    }

    static CorrectionOptions request_options(const httplib::Request& req) {
        CorrectionOptions o;
        const std::string method = param(req, "method");
        if (method == "a" || method == "A") o.method = Method::A;
        else if (method == "b" || method == "B") o.method = Method::B;
        else throw ApiError(ApiErrorCode::BadRequest, "method must be 'a' or 'b'");
        const std::string domain = optional_param(req, "domain").value_or("rgb");
        if (domain == "rgb") o.domain = ColorSpace::RGB;
        else if (domain == "lms") o.domain = ColorSpace::LMS;
        else throw ApiError(ApiErrorCode::BadRequest, "domain must be 'rgb' or 'lms'");
        const std::string eq = optional_param(req, "equalize").value_or("false");
        if (eq == "true" || eq == "1") o.equalize = true;
        else if (eq == "false" || eq == "0") o.equalize = false;
        else throw ApiError(ApiErrorCode::BadRequest, "equalize must be true/false");
        return o;
    }

    static void send_image(const httplib::Request& req, httplib::Response& res, const Image8& img) {
        const bool bmp = req.has_param("format") && req.get_param_value("format") == "bmp";
        const auto bytes = encode_image(img, bmp ? ImageFormat::BMP : ImageFormat::PNG);
        res.status = 200;
        res.set_content(std::string(bytes.begin(), bytes.end()), bmp ? "image/bmp" : "image/png");
    }

    std::shared_ptr<const SurveySpec> survey() {
        std::lock_guard lock(survey_mu_);
        if (!survey_) {
            const auto path = survey_dir_ / "spec.json";
            if (!std::filesystem::exists(path)) throw ApiError(ApiErrorCode::SurveyUnavailable, "no survey has been generated in " + survey_dir_.string());
            survey_ = std::make_shared<const SurveySpec>(read_survey(path));
        }
        return survey_;
    }

    static nlohmann::json question_json(const Question& q) {
        nlohmann::json options = nlohmann::json::array();
        for (std::size_t k = 0; k < q.option_order.size(); ++k) {
            options.push_back({{"position", std::string(1, static_cast<char>('A' + k))},
                               {"label", to_string(q.option_order[k])},
                               {"image_url", "/survey/" + question_image_name(q.number, k)}});
        }
        return {{"number", q.number},
                {"total", kQuestionCount},
                {"cvd_type", to_string(q.cvd_type)},
                {"degree", q.degree},
                {"presented_url", "/survey/" + question_image_name(q.number, std::nullopt)},
                {"options", options}};
    }

    ServiceConfig cfg_;
    std::filesystem::path plates_file_;
    PlateSet plates_;
    SessionStore sessions_;
    ProfileStore profiles_;
    std::filesystem::path survey_dir_;
    ResponseLog responses_;
    std::mutex survey_mu_;
    std::shared_ptr<const SurveySpec> survey_;
};

}  // namespace cvd
