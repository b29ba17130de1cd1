#include "mz/job.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace mz;

namespace {

std::string read_data(const std::string& name) {
    std::ifstream in(std::string(MZ_TEST_DATA) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string with_mode(std::string doc, const std::string& mode) {
    auto at = doc.find("\"stability\"");
    return doc.replace(at, 11, "\"" + mode + "\"");
}

}  // namespace

TEST_CASE("parse and print round trip") {
    auto doc = read_data("quadratic_portrait.json");
    auto job = parse_job(doc);
    CHECK(job.mode == "stability");
    CHECK(job.marking.size() == 4);
    CHECK(is_portrait(job));
    auto once = print_job(job).dump();
    CHECK(print_job(parse_job(once)).dump() == once);
    CHECK(job_hash(job) == job_hash(parse_job(once)));
    CHECK(job_hash(job).size() == 64);

    auto fig = parse_job(read_data("eleven_point_covers.json"));
    CHECK_FALSE(is_portrait(fig));
    auto h = datum_from_job(fig);
    CHECK(h.fully_marked);
    CHECK(h.num_source() == 11);
}

TEST_CASE("parse errors") {
    CHECK_THROWS_WITH_AS(parse_job(""), "empty document: missing mode", JobError);
    CHECK_THROWS_WITH_AS(parse_job("{\"marking\": [\"a\"]}"), "missing mode", JobError);
    CHECK_THROWS_WITH_AS(parse_job("{\"mode\": \"strata\",\n \"marking\": [\"a\",]}"), "line 2: malformed JSON",
                         JobError);
    CHECK_THROWS_WITH_AS(parse_job(R"({"mode": "strata", "marking": ["a"], "colour": 1})"), "unknown key 'colour'",
                         JobError);
    CHECK_THROWS_AS(parse_job(R"({"mode": "reduce", "marking": ["a","b","c","d"], "weights": {"a": "1/0"}})"),
                    JobError);
    CHECK_THROWS_AS(parse_job(R"({"mode": "push", "marking": ["a","b","c","d"]})"), JobError);
    CHECK_THROWS_AS(parse_job(R"({"mode": "fly", "marking": ["a"]})"), JobError);
}

TEST_CASE("exact weights") {
    auto job = parse_job(
        R"({"mode": "reduce", "marking": ["a","b","c","d","e"], "weights": {"a": "1", "b": "1/3", "c": "1/3", "d": "1/3", "e": "1/3"}})");
    REQUIRE(job.weights);
    CHECK((*job.weights)[1].second == Q(1, 3));
    auto r = run(job);
    CHECK(r.exit_code == 0);
}

TEST_CASE("strata job") {
    auto r = run_document(R"({"mode": "strata", "marking": ["a","b","c","d","e"]})");
    CHECK(r.exit_code == 0);
    CHECK(r.report["count"] == 26);
    CHECK(r.report["by_dimension"]["0"] == 15);
    CHECK(r.report["provenance"]["version"] == kToolVersion);
}

TEST_CASE("stability job on the quadratic portrait") {
    auto r = run_document(read_data("quadratic_portrait.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.report["status"] == "pass");
    CHECK(r.report["degrees"].size() == 2);
    CHECK(r.report["degrees"][1]["pushforward"]["matrix"]["entries"][0][0] == "2");
}

TEST_CASE("reports are identical across thread counts") {
    auto doc = read_data("cubic_portrait.json");
    RunOptions one, four;
    four.threads = 4;
    CHECK(run_document(doc, one).report.dump() == run_document(doc, four).report.dump());
    auto push = with_mode(doc, "push");
    CHECK(run_document(push, one).report.dump() == run_document(push, four).report.dump());
}

TEST_CASE("covers job on the eleven-point datum") {
    auto r = run_document(read_data("eleven_point_covers.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.report["degree_pi_B"] == 24);
    CHECK(r.report["strata"].size() == 10);
    for (auto& s : r.report["strata"])
        CHECK(s["flat"] == true);
}

TEST_CASE("input errors map to exit status 2") {
    auto doc = read_data("quadratic_portrait.json");
    auto wrong_degree = doc;
    wrong_degree.replace(wrong_degree.find("\"degree\": 2"), 11, "\"degree\": 3");
    CHECK(run_document(wrong_degree).exit_code == 2);
    CHECK(run_document("{").exit_code == 2);
    RunOptions tight;
    tight.max_tuples = 1;
    CHECK(run_document(with_mode(read_data("cubic_portrait.json"), "orbits"), tight).exit_code == 2);
    auto fig = read_data("eleven_point_covers.json");
    auto stab = fig.replace(fig.find("\"covers\""), 8, "\"stability\"");
    CHECK(run_document(stab).exit_code == 2);
}

TEST_CASE("orbit and degree jobs") {
    auto doc = read_data("quadratic_portrait.json");
    auto o = run_document(with_mode(doc, "orbits"));
    CHECK(o.exit_code == 0);
    CHECK(o.report["orbit_count"] == 1);
    auto d = run_document(with_mode(doc, "degree"));
    CHECK(d.report["degree_pi_B"] == 2);
    CHECK(d.report["synthetic_points"].size() == 2);
}
