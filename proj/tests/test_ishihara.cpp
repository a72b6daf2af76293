#include <gtest/gtest.h>

#include <random>

#include "cvd/ishihara.hpp"

using namespace cvd;

namespace {

const char* kMixed = R"({
  "format": "cvd-plates/1",
  "plates": [
    { "id": "x", "image": "x.png", "kind": "diagnosis", "weight": 1,
      "answers": [ { "label": "8", "normal": 1, "canonical": true },
                   { "label": "3", "protan": 1, "deuteran": 0.5 },
                   { "label": "?", "distractor": true } ] },
    { "id": "y", "image": "y.png", "kind": "diagnosis", "weight": 2,
      "answers": [ { "label": "29", "normal": 1, "canonical": true },
                   { "label": "70", "protan": 0.5, "deuteran": 1 } ] },
    { "id": "z", "image": "z.png", "kind": "masked", "weight": 0.5,
      "answers": [ { "label": "45", "normal": 1, "canonical": true },
                   { "label": "nothing", "protan": 1, "deuteran": 1 },
                   { "label": "unsure", "protan": 0.25, "deuteran": 0.25 } ] }
  ]
})";

TestSession answered(const PlateSet& plates, const std::vector<std::size_t>& picks) {
    TestSession s = TestSession::start("t1", plates);
    for (std::size_t i = 0; i < picks.size(); ++i) record_answer(s, plates, plates.plates()[i].id, picks[i]);
    return s;
}

PlateDefinition two_option_plate(std::string id) {
    return {std::move(id), "img.png", PlateKind::Diagnosis,
            {{"a", 1, 0, 0, true, false}, {"b", 0, 1, 1, false, false}}, 1.0};
}

std::vector<std::string> problems_of(const std::vector<PlateDefinition>& plates) {
    try {
        PlateSet set(plates);
    } catch (const ValidationError& e) {
        return e.problems();
    }
    return {};
}

}  // namespace

TEST(Plates, BundledSetLoads) {
    const PlateSet set = load_plates(CVD_SOURCE_DATA_DIR "/plates.json");
    ASSERT_EQ(set.size(), 24u);
    EXPECT_EQ(set.plates().front().kind, PlateKind::Demonstration);
    EXPECT_EQ(set.plates()[17].kind, PlateKind::Hidden);
    EXPECT_EQ(set.ids().back(), "24");
    ASSERT_NE(set.find("09"), nullptr);
    EXPECT_EQ(set.find("09")->answers[0].label, "74");
    EXPECT_EQ(set.find("99"), nullptr);
}

TEST(Plates, BundledSetScoring) {
    const PlateSet set = load_plates(CVD_SOURCE_DATA_DIR "/plates.json");
    const FuzzyProfile normal = fuzzify(score_session(answered(set, std::vector<std::size_t>(24, 0)), set));
    EXPECT_EQ(normal, (FuzzyProfile{0.0, 0.0, 0.0, 1.0}));

    std::vector<std::size_t> picks(24, 1);
    picks[0] = 0;
    const RawScores raw = score_session(answered(set, picks), set);
    EXPECT_DOUBLE_EQ(raw.max_normal, 17.5);
    EXPECT_DOUBLE_EQ(raw.max_protan, 17.0);
    EXPECT_DOUBLE_EQ(raw.max_deuteran, 17.0);
    const FuzzyProfile p = fuzzify(raw);
    EXPECT_DOUBLE_EQ(p.alpha_n, 1.0 / 35.0);
    EXPECT_DOUBLE_EQ(p.beta, 34.0 / 35.0);
    EXPECT_DOUBLE_EQ(p.alpha_p, 1.0);
    EXPECT_DOUBLE_EQ(p.alpha_d, 14.0 / 17.0);
}

TEST(Plates, MixedFixtureHandComputed) {
    const PlateSet set = parse_plates(kMixed);
    const RawScores raw = score_session(answered(set, {1, 0, 2}), set);
    EXPECT_DOUBLE_EQ(raw.s_normal, 2.0);
    EXPECT_DOUBLE_EQ(raw.max_normal, 3.5);
    EXPECT_DOUBLE_EQ(raw.s_protan, 1.125);
    EXPECT_DOUBLE_EQ(raw.max_protan, 2.5);
    EXPECT_DOUBLE_EQ(raw.s_deuteran, 0.625);
    EXPECT_DOUBLE_EQ(raw.max_deuteran, 3.0);
    const FuzzyProfile p = fuzzify(raw);
    EXPECT_DOUBLE_EQ(p.alpha_n, 4.0 / 7.0);
    EXPECT_DOUBLE_EQ(p.beta, 3.0 / 7.0);
    EXPECT_DOUBLE_EQ(p.alpha_p, 0.45);
    EXPECT_DOUBLE_EQ(p.alpha_d, 0.625 / 3.0);
}

TEST(Plates, FuzzifyPropertiesOnRandomSessions) {
    const PlateSet set = load_plates(CVD_SOURCE_DATA_DIR "/plates.json");
    std::mt19937_64 rng(5);
    for (int t = 0; t < 300; ++t) {
        std::vector<std::size_t> picks;
        for (const auto& p : set.plates()) picks.push_back(rng() % p.answers.size());
        const FuzzyProfile f = fuzzify(score_session(answered(set, picks), set));
        EXPECT_NO_THROW(f.validate());
        EXPECT_DOUBLE_EQ(f.beta + f.alpha_n, 1.0);
    }
}

TEST(Plates, ZeroMaximaGiveZeroDegree) {
    RawScores r;
    r.s_normal = 1;
    r.max_normal = 2;
    const FuzzyProfile f = fuzzify(r);
    EXPECT_EQ(f.alpha_p, 0.0);
    EXPECT_EQ(f.alpha_d, 0.0);
    EXPECT_EQ(f.alpha_n, 0.5);
}

TEST(Plates, DuplicateIdIsRejected) {
    const auto problems = problems_of({two_option_plate("a"), two_option_plate("a")});
    ASSERT_EQ(problems.size(), 1u);
    EXPECT_NE(problems[0].find("duplicate plate id 'a'"), std::string::npos);
}

TEST(Plates, AllProblemsAreListed) {
    PlateDefinition bad = two_option_plate("b");
    bad.weight = 0;
    bad.answers[1].canonical = true;
    bad.answers.push_back({"c", 0, 0, 0, false, false});
    PlateDefinition lonely = two_option_plate("c");
    lonely.answers.pop_back();
    lonely.image_ref.clear();
    const auto problems = problems_of({bad, lonely});
    EXPECT_EQ(problems.size(), 5u);
    EXPECT_EQ(problems_of({}).size(), 1u);
}

TEST(Plates, SetWithoutDeutanCreditIsRejected) {
    PlateDefinition p = two_option_plate("a");
    p.answers[1].w_deuteran = 0;
    const auto problems = problems_of({p});
    ASSERT_EQ(problems.size(), 1u);
    EXPECT_EQ(problems[0], "no option carries deuteran credit");
}

TEST(Plates, ParseErrors) {
    try {
        parse_plates("");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1u);
    }
    try {
        parse_plates("{\n  \"format\": \"cvd-plates/1\",\n  \"plates\": [ ,\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    try {
        parse_plates(R"({"format":"cvd-plates/1","plates":[{"id":"1","image":"a","kind":"diagnosis",
                        "answers":[{"label":"x","normal":"high"}]}]})");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.field(), "$.plates[0].answers[0].normal");
    }
    EXPECT_THROW(parse_plates(R"({"format":"other","plates":[]})"), ParseError);
    EXPECT_THROW(parse_plates(R"({"format":"cvd-plates/1","plates":[{"id":"1","image":"a","kind":"odd","answers":[]}]})"),
                 ParseError);
    EXPECT_THROW(load_plates("/nonexistent/plates.json"), IoError);
}

TEST(Session, ProgressAndNextPlate) {
    const PlateSet set = parse_plates(kMixed);
    TestSession s = TestSession::start("abc", set);
    ASSERT_NE(next_plate(s, set), nullptr);
    EXPECT_EQ(next_plate(s, set)->id, "x");
    EXPECT_THROW(score_session(s, set), StateError);
    record_answer(s, set, "y", 1);
    EXPECT_EQ(next_plate(s, set)->id, "x");
    record_answer(s, set, "x", 0);
    EXPECT_EQ(next_plate(s, set)->id, "z");
    EXPECT_FALSE(s.completed);
    record_answer(s, set, "z", 0);
    EXPECT_TRUE(s.completed);
    EXPECT_EQ(next_plate(s, set), nullptr);
    EXPECT_THROW(record_answer(s, set, "q", 0), DomainError);
    EXPECT_THROW(record_answer(s, set, "x", 3), DomainError);
}

TEST(Session, JsonRoundTrip) {
    const PlateSet set = parse_plates(kMixed);
    const TestSession s = answered(set, {1, 0});
    const TestSession back = session_from_json(session_to_json(s));
    EXPECT_EQ(back.session_id, s.session_id);
    EXPECT_EQ(back.plate_order, s.plate_order);
    EXPECT_EQ(back.responses, s.responses);
    EXPECT_FALSE(back.completed);
    EXPECT_THROW(session_from_json(nlohmann::json{{"session_id", 3}}), ParseError);
}
