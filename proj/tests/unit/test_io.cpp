#include <sstream>

#include "revtp/io.hpp"
#include "support/helpers.hpp"

using namespace revtp;
using namespace testing;

TEST_SUITE("io") {
  TEST_CASE("split_csv_line honours quotes") {
    CHECK(split_csv_line("a,\"1,2\",,c\r") == std::vector<std::string>{"a", "1,2", "", "c"});
    CHECK(split_csv_line("") == std::vector<std::string>{""});
  }

  TEST_CASE("instance JSON round trip") {
    const Json j = Json::parse(R"({"costs":[[10,2,20],[12,7,9]],"supply":[10,25],"demand":[5,15,15]})");
    const TransportInstance inst = instance_from_json(j);
    CHECK(inst.costs() == mat({{10, 2, 20}, {12, 7, 9}}));
    CHECK(instance_from_json(to_json(inst)).costs() == inst.costs());
    CHECK(error_of([] { instance_from_json(Json::parse(R"({"costs":[[1]]})")); }) ==
          ErrorKind::kParse);
    CHECK(error_of([] { matrix_from_json(Json::parse("[[1,2],[3]]")); }) == ErrorKind::kShape);
    CHECK(error_of([] { vector_from_json(Json::parse(R"([1,"x"])")); }) == ErrorKind::kParse);
    CHECK(error_of([] {
            dms_from_json(Json::parse(R"({"supply":[1,2],"demand":[1,1]})"));
          }) == ErrorKind::kBalance);
  }

  TEST_CASE("numbers keep full precision in JSON") {
    const double x = 0.1 + 0.2;
    const Json j = to_json(vec({x}));
    CHECK(Json::parse(j.dump())[0].get<double>() == x);
  }

  TEST_CASE("situation CSV round trip") {
    std::stringstream in("step,a1,a2,b1,b2,b3\n1,10,25,5,15,15\npolygon,5,3,4,2,2\n");
    const auto rows = read_dms_csv(in);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].step == "polygon");
    CHECK(rows[1].dms == dms({5, 3}, {4, 2, 2}));
    std::stringstream out;
    write_dms_csv(out, rows);
    CHECK(out.str() == "step,a1,a2,b1,b2,b3\n1,10,25,5,15,15\npolygon,5,3,4,2,2\n");
  }

  TEST_CASE("malformed situation CSV") {
    std::stringstream missing("step,a1,b1\n1,1,1\n");
    CHECK(error_of([&] { read_dms_csv(missing); }) == ErrorKind::kParse);
    std::stringstream bad("step,a1,a2,b1,b2\n1,1,x,1,1\n");
    CHECK(error_of([&] { read_dms_csv(bad); }) == ErrorKind::kParse);
    std::stringstream empty("");
    CHECK(error_of([&] { read_dms_csv(empty); }) == ErrorKind::kParse);
  }

  TEST_CASE("observation CSV with free cells or full plans") {
    std::stringstream free_cells("step,a1,a2,b1,b2,b3,x22,x23\n1,10,25,5,15,15,5,15\n");
    const auto a = read_observation_csv(free_cells);
    REQUIRE(a.size() == 1);
    CHECK(a[0].free_vars == vec({5, 15}));

    std::stringstream plans(
        "step,a1,a2,b1,b2,b3,x_1_1,x_1_2,x_1_3,x_2_1,x_2_2,x_2_3\n"
        "1,10,25,5,15,15,0,10,0,5,5,15\n");
    const auto b = read_observation_csv(plans);
    REQUIRE(b.size() == 1);
    CHECK(b[0].free_vars == vec({5, 15}));

    std::stringstream wrong(
        "step,a1,a2,b1,b2,b3,x11,x12,x13,x21,x22,x23\n1,10,25,5,15,15,1,10,0,5,5,15\n");
    CHECK(error_of([&] { read_observation_csv(wrong); }) == ErrorKind::kInfeasibleFreeVars);
    std::stringstream partial("step,a1,a2,b1,b2,b3,x22\n1,10,25,5,15,15,5\n");
    CHECK(error_of([&] { read_observation_csv(partial); }) == ErrorKind::kParse);
  }

  TEST_CASE("format_number") {
    CHECK(format_number(250) == "250");
    CHECK(format_number(-3) == "-3");
    CHECK(format_number(0.224859506) == "0.22486");
  }
}
