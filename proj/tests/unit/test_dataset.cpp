#include <sstream>

#include "doctest.h"
#include "rlvr/dataset.hpp"

using namespace rlvr;

namespace {

std::vector<ProblemInstance> mixed_problems() {
  std::vector<ProblemInstance> all;
  counting::CountingConfig c;
  c.count = 20;
  c.seed = 1;
  graph::GraphConfig g;
  g.count = 40;
  g.seed = 1;
  g.max_nodes = 12;
  spatial::SpatialConfig s;
  s.count = 20;
  s.seed = 1;
  for (auto& p : counting::generate_counting(c)) all.push_back(p);
  for (auto& p : graph::generate_graphs(g)) all.push_back(p);
  for (auto& p : spatial::generate_spatial(s)) all.push_back(p);
  return all;
}

std::string dump(const std::vector<ProblemInstance>& problems) {
  std::ostringstream out;
  write_dataset(problems, out);
  return out.str();
}

std::string read_error(const std::string& text) {
  std::istringstream in(text);
  try {
    read_dataset(in);
  } catch (const DataError& e) {
    return e.what();
  }
  return {};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

}  // namespace

TEST_SUITE("dataset") {
  TEST_CASE("write then read round-trips every family") {
    const auto problems = mixed_problems();
    const auto text = dump(problems);
    std::istringstream in(text);
    const auto back = read_dataset(in);
    CHECK(back == problems);
    CHECK(dump(back) == text);
  }

  TEST_CASE("records carry the schema version and every field") {
    const auto problems = mixed_problems();
    for (const auto& line : lines_of(dump(problems))) {
      const auto j = Json::parse(line);
      CHECK(j["schema_version"] == kSchemaVersion);
      for (const char* key : {"id", "family", "prompt", "spec", "truth", "complexity", "seed"}) CHECK(j.contains(key));
    }
    CHECK_FALSE(to_json(problems[0], false).contains("truth"));
  }

  TEST_CASE("truth values round-trip") {
    const std::vector<GroundTruth> truths = {IntScalar{-3},
                                             RealScalar{2.25, 2},
                                             VertexSet{{1, 4}},
                                             EdgeSet{{{0, 1}, {3, 2}}},
                                             NodeSequence{{3, 1, 2}},
                                             Partition{{0, 1}, {2, 3}},
                                             Coordinate{-5.0, 1.5},
                                             Orientation{"West"},
                                             RelativeOrientation{"left-of"}};
    for (const auto& t : truths) CHECK(truth_from_json(to_json(t)) == t);
  }

  TEST_CASE("errors cite the offending line") {
    auto lines = lines_of(dump(mixed_problems()));
    SUBCASE("malformed JSON") {
      lines[4] = "{not json";
      CHECK(read_error(join(lines)).find("line 5") != std::string::npos);
    }
    SUBCASE("tampered truth") {
      auto j = Json::parse(lines[2]);
      j["truth"]["value"] = j["truth"]["value"].is_number_integer() ? Json(123456789) : Json(123456.78);
      lines[2] = j.dump();
      CHECK(read_error(join(lines)).find("line 3") != std::string::npos);
    }
    SUBCASE("tampered graph truth is caught by re-solving") {
      std::size_t target = 0;
      for (std::size_t i = 20; i < 60 && !target; ++i)
        if (Json::parse(lines[i])["truth"]["kind"] == "int") target = i;
      REQUIRE(target != 0);
      auto j = Json::parse(lines[target]);
      j["truth"]["value"] = j["truth"]["value"].get<int>() + 1;
      lines[target] = j.dump();
      CHECK(read_error(join(lines)).find("line " + std::to_string(target + 1)) != std::string::npos);
    }
    SUBCASE("tampered prompt") {
      auto j = Json::parse(lines[0]);
      j["prompt"] = "What is 2 + 2?";
      lines[0] = j.dump();
      CHECK(read_error(join(lines)).find("line 1") != std::string::npos);
    }
    SUBCASE("duplicate id") {
      lines.push_back(lines[7]);
      CHECK(read_error(join(lines)).find("duplicate") != std::string::npos);
    }
    SUBCASE("unsupported schema version") {
      auto j = Json::parse(lines[1]);
      j["schema_version"] = 99;
      lines[1] = j.dump();
      CHECK(read_error(join(lines)).find("line 2") != std::string::npos);
    }
    SUBCASE("invalid spec") {
      auto j = Json::parse(lines[25]);
      j["spec"]["nodes"] = 3;
      lines[25] = j.dump();
      CHECK(read_error(join(lines)).find("line 26") != std::string::npos);
    }
  }

  TEST_CASE("blank lines are skipped and duplicates are refused on write") {
    const auto problems = mixed_problems();
    std::istringstream in("\n" + dump(problems) + "\n\n");
    CHECK(read_dataset(in).size() == problems.size());
    auto dup = problems;
    dup.push_back(problems[0]);
    std::ostringstream out;
    CHECK_THROWS_AS(write_dataset(dup, out), DataError);
  }

  TEST_CASE("validate_instance catches family and complexity mismatches") {
    auto p = mixed_problems()[0];
    CHECK_NOTHROW(validate_instance(p));
    auto wrong_family = p;
    wrong_family.family = TaskFamily::Graph;
    CHECK_THROWS_AS(validate_instance(wrong_family), DataError);
    auto wrong_complexity = p;
    std::get<CountingComplexity>(wrong_complexity.complexity).total_steps += 1;
    CHECK_THROWS_AS(validate_instance(wrong_complexity), DataError);
  }
}
