#include <doctest.h>

#include <random>
#include <string>

#include "blueberry/box_file.hpp"
#include "blueberry/errors.hpp"
#include "blueberry/tracking_eval.hpp"

using namespace blueberry;

namespace {

// Random byte soup biased toward parser-relevant characters.
std::string garbage(std::mt19937_64& rng, std::size_t max_len) {
    static const std::string alphabet =
        "0123456789.eE+- \t\n#abcxyz\"{}[]frame gtpred\xff\x01";
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::string out;
    for (std::size_t i = len(rng); i > 0; --i) out += alphabet[pick(rng)];
    return out;
}

}  // namespace

TEST_SUITE("parser_robustness") {

TEST_CASE("box file parser throws ParseError or succeeds on arbitrary input") {
    std::mt19937_64 rng(616);
    for (int i = 0; i < 2000; ++i) {
        const std::string text = garbage(rng, 200);
        try {
            const auto gts = parse_ground_truths(text, 640, 640);
            CHECK(gts.size() <= 200);
        } catch (const ParseError&) {
            // expected for malformed lines
        }
        try {
            (void)parse_detections(text, 640, 640);
        } catch (const ParseError&) {
        }
    }
}

TEST_CASE("frame file parser throws ParseError or succeeds on arbitrary input") {
    std::mt19937_64 rng(617);
    for (int i = 0; i < 2000; ++i) {
        const std::string text = garbage(rng, 200);
        try {
            (void)parse_track_frames(text);
        } catch (const ParseError&) {
        } catch (const Error&) {
            // degenerate boxes inside an otherwise well-formed record
        }
    }
}

TEST_CASE("huge field values do not overflow into accepted boxes") {
    CHECK_THROWS_AS(parse_ground_truths("0 1e308 0.5 0.5 0.5", 100, 100), ParseError);
    CHECK_THROWS_AS(parse_ground_truths("0 0.5 0.5 1e-320 0.5", 100, 100), ParseError);
    CHECK_THROWS_AS(parse_ground_truths("0 nan 0.5 0.5 0.5", 100, 100), ParseError);
    CHECK_THROWS_AS(parse_ground_truths("0 inf 0.5 0.5 0.5", 100, 100), ParseError);
}

}  // TEST_SUITE
