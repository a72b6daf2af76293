#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage error, 2 processing error.
//
//   simulate --alpha-p F --alpha-d F IN OUT
//   correct  --method {a,b} [--domain {rgb,lms}] [--equalize]
//            (--profile FILE | --alpha-p F --alpha-d F --beta F --alpha-n F) IN OUT
//   equalize IN OUT
//   test score --plates FILE --answers I,I,... [--session ID] [--out FILE]
//   survey gen --corpus DIR --seed N --out DIR
//   survey tally --spec FILE --responses FILE [--json FILE] [--csv FILE]
//   serve --port N --data DIR [--plates FILE] [--ui DIR] [--host H] [--max-upload BYTES]
//
// The data directory may also be given through CVD_DATA_DIR.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cvd/correct.hpp"
#include "cvd/histogram.hpp"
#include "cvd/image_io.hpp"
#include "cvd/ishihara.hpp"
#include "cvd/profile_io.hpp"
#include "cvd/service.hpp"
#include "cvd/simulate.hpp"
#include "cvd/survey.hpp"

namespace cvd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitProcessing = 2;

namespace detail {

inline std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        const unsigned long v = std::stoul(item, &pos);
        if (pos != item.size()) throw std::invalid_argument(item);
        out.push_back(v);
    }
    return out;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Fuzzy color-vision-deficiency toolkit: simulation, correction, Ishihara testing, survey"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Simulate graded protan/deuteran deficiency");
    SimSpec sim_spec;
    std::string sim_in, sim_out;
    sim->add_option("--alpha-p", sim_spec.alpha_p, "protan degree in [0,1]")->required()->check(CLI::Range(0.0, 1.0));
    sim->add_option("--alpha-d", sim_spec.alpha_d, "deuteran degree in [0,1]")->required()->check(CLI::Range(0.0, 1.0));
    sim->add_option("IN", sim_in)->required()->check(CLI::ExistingFile);
    sim->add_option("OUT", sim_out)->required();

    // correct
    auto* cor = app.add_subcommand("correct", "Correct an image for a fuzzy profile");
    std::string method = "b", domain = "rgb", profile_file, cor_in, cor_out;
    bool equalize_flag = false;
    FuzzyProfile cor_profile;
    cor->add_option("--method", method, "a or b")->required()->check(CLI::IsMember({"a", "b"}));
    cor->add_option("--domain", domain, "rgb or lms")->check(CLI::IsMember({"rgb", "lms"}));
    cor->add_flag("--equalize", equalize_flag, "histogram-equalize the corrected channels");
    auto* opt_profile = cor->add_option("--profile", profile_file, "profile document")->check(CLI::ExistingFile);
    auto* opt_ap = cor->add_option("--alpha-p", cor_profile.alpha_p)->check(CLI::Range(0.0, 1.0));
    auto* opt_ad = cor->add_option("--alpha-d", cor_profile.alpha_d)->check(CLI::Range(0.0, 1.0));
    auto* opt_b = cor->add_option("--beta", cor_profile.beta)->check(CLI::Range(0.0, 1.0));
    auto* opt_an = cor->add_option("--alpha-n", cor_profile.alpha_n)->check(CLI::Range(0.0, 1.0));
    for (auto* o : {opt_ap, opt_ad, opt_b, opt_an}) o->excludes(opt_profile);
    cor->add_option("IN", cor_in)->required()->check(CLI::ExistingFile);
    cor->add_option("OUT", cor_out)->required();

    // equalize
    auto* eq = app.add_subcommand("equalize", "Histogram-equalize each channel");
    std::string eq_in, eq_out;
    eq->add_option("IN", eq_in)->required()->check(CLI::ExistingFile);
    eq->add_option("OUT", eq_out)->required();

    // test score
    auto* test = app.add_subcommand("test", "Ishihara test utilities");
    test->require_subcommand(1);
    auto* score = test->add_subcommand("score", "Score a completed answer list into a profile document");
    std::string plates_file, answers_text, session_id = "cli", profile_out;
    score->add_option("--plates", plates_file)->required()->check(CLI::ExistingFile);
    score->add_option("--answers", answers_text, "option index per plate, comma-separated, in plate order")->required();
    score->add_option("--session", session_id);
    score->add_option("--out", profile_out, "write the profile document here instead of stdout");

    // survey
    auto* survey = app.add_subcommand("survey", "Comparative survey generation and tally");
    survey->require_subcommand(1);
    auto* gen = survey->add_subcommand("gen", "Generate the 90-question survey bundle");
    std::string corpus_dir, bundle_out;
    std::uint64_t seed = 0;
    gen->add_option("--corpus", corpus_dir)->required()->check(CLI::ExistingDirectory);
    gen->add_option("--seed", seed)->required();
    gen->add_option("--out", bundle_out)->required();
    auto* tal = survey->add_subcommand("tally", "Tally survey responses");
    std::string spec_file, responses_file, json_out, csv_out;
    tal->add_option("--spec", spec_file)->required()->check(CLI::ExistingFile);
    tal->add_option("--responses", responses_file)->required()->check(CLI::ExistingFile);
    tal->add_option("--json", json_out, "write the JSON report here as well as to stdout");
    tal->add_option("--csv", csv_out, "write the CSV of every percentage group here");

    // serve
    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    int port = 8080;
    std::string data_dir, host = "0.0.0.0", serve_plates, ui_dir;
    std::size_t max_upload = 16u * 1024u * 1024u;
    serve->add_option("--port", port)->check(CLI::Range(1, 65535));
    serve->add_option("--data", data_dir)->required()->envname("CVD_DATA_DIR");
    serve->add_option("--plates", serve_plates)->check(CLI::ExistingFile);
    serve->add_option("--ui", ui_dir)->check(CLI::ExistingDirectory);
    serve->add_option("--host", host);
    serve->add_option("--max-upload", max_upload, "upload limit in bytes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*sim) {
            write_image(sim_out, simulate(read_image(sim_in), sim_spec));
        } else if (*cor) {
            if (!profile_file.empty()) {
                cor_profile = read_profile(profile_file).profile;
            } else if (opt_ap->count() + opt_ad->count() + opt_b->count() + opt_an->count() != 4) {
                err << "error: correct needs --profile FILE or all of --alpha-p --alpha-d --beta --alpha-n\n";
                return kExitUsage;
            }
            const CorrectionOptions opts{method == "a" ? Method::A : Method::B,
                                         domain == "lms" ? ColorSpace::LMS : ColorSpace::RGB, equalize_flag};
            write_image(cor_out, correct(read_image(cor_in), cor_profile, opts));
        } else if (*eq) {
            write_image(eq_out, equalize_channels(read_image(eq_in)));
        } else if (*score) {
            std::vector<std::size_t> answers;
            try {
                answers = detail::parse_index_list(answers_text);
            } catch (const std::exception&) {
                err << "error: --answers must be a comma-separated list of option indices\n";
                return kExitUsage;
            }
            const PlateSet plates = load_plates(plates_file);
            if (answers.size() != plates.size()) {
                err << "error: expected " << plates.size() << " answers, got " << answers.size() << "\n";
                return kExitUsage;
            }
            TestSession session = TestSession::start(session_id, plates);
            for (std::size_t i = 0; i < answers.size(); ++i) record_answer(session, plates, session.plate_order[i], answers[i]);
            const ProfileDocument doc{session_id, utc_timestamp_now(), fuzzify(score_session(session, plates))};
            if (profile_out.empty()) out << serialize_profile(doc);
            else write_profile(profile_out, doc);
        } else if (*gen) {
            const SurveyBundle bundle = generate_survey(load_corpus(corpus_dir), seed);
            write_survey(bundle, bundle_out);
            out << "wrote " << bundle.spec.questions.size() << " questions, " << bundle.spec.questions.size() * kOptionCount
                << " option images to " << bundle_out << "\n";
        } else if (*tal) {
            const SurveySpec spec = read_survey(spec_file);
            const TallyReport report = tally(spec, ResponseLog(responses_file).read_all());
            const std::string json = tally_to_json(report).dump(2) + "\n";
            out << json;
            if (!json_out.empty()) atomic_write_text(json_out, json);
            if (!csv_out.empty()) atomic_write_text(csv_out, tally_to_csv(report));
        } else if (*serve) {
            ServiceConfig cfg;
            cfg.data_dir = data_dir;
            if (!serve_plates.empty()) cfg.plates_file = serve_plates;
            if (!ui_dir.empty()) cfg.ui_dir = ui_dir;
            cfg.max_upload_bytes = max_upload;
            std::filesystem::create_directories(cfg.data_dir);
            Service service(cfg);
            httplib::Server server;
            service.register_routes(server);
            out << "listening on " << host << ":" << port << "\n" << std::flush;
            if (!server.listen(host, port)) {
                err << "error: cannot listen on " << host << ":" << port << "\n";
                return kExitProcessing;
            }
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitProcessing;
    }
    return kExitOk;
}

}  // namespace cvd::cli
