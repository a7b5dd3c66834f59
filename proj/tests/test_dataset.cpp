#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <functional>

#include "svarsoft/dataset.hpp"
#include "svarsoft/error.hpp"

using namespace svarsoft;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::IoError;
}

const char* kPanel =
    "# comment lines are skipped\n"
    "date,x,p\n"
    "1999-11,1.5,10\n"
    "1999-12,2.5,20\n"
    "2000-01,-0.5,40\n";

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("month arithmetic") {
    CHECK(month_index("2000-01") - month_index("1999-12") == 1);
    CHECK(month_string(month_index("1987-07")) == "1987-07");
    CHECK(code_of([] { month_index("2000-13"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { month_index("2000/01"); }) == ErrorCode::ParseError);
}

TEST_CASE("levels and transforms") {
    const auto raw = parse_dataset(kPanel);
    CHECK(raw.variables == std::vector<std::string>{"x", "p"});
    CHECK(raw.length() == 3);
    CHECK(raw.values(2, 0) == -0.5);

    const auto logged = parse_dataset(kPanel, {{"p", Transform::Log100}});
    CHECK(logged.values(1, 1) == doctest::Approx(100.0 * std::log(20.0)));
    CHECK(logged.values(1, 0) == 2.5);

    const auto growth = parse_dataset(kPanel, {{"p", Transform::Growth}});
    CHECK(growth.length() == 2);
    CHECK(growth.dates.front() == "1999-12");
    CHECK(growth.values(0, 1) == doctest::Approx(100.0 * std::log(2.0)));
    CHECK(growth.values(0, 0) == 2.5);

    CHECK(parse_transform("level") == Transform::None);
    CHECK(parse_transform("log") == Transform::Log);
    CHECK(code_of([] { parse_transform("sqrt"); }) == ErrorCode::ConfigError);
}

TEST_CASE("malformed panels") {
    CHECK(code_of([] { parse_dataset("date,x\n2000-01,1\n2000-03,2\n"); }) == ErrorCode::GapInDates);
    CHECK(code_of([] { parse_dataset("date,x\n2000-01,1\n2000-02,abc\n"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { parse_dataset("date,x\n2000-01,1,2\n"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { parse_dataset("when,x\n2000-01,1\n"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { parse_dataset("date,x\n2000-01,0\n2000-02,1\n", {{"x", Transform::Log}}); }) ==
          ErrorCode::NonPositiveForLog);
    CHECK(code_of([] { parse_dataset("date,x\n2000-01,1\n", {{"y", Transform::Log}}); }) ==
          ErrorCode::UnknownVariable);
    CHECK(code_of([] { load_dataset("/nonexistent/panel.csv"); }) == ErrorCode::IoError);
    try {
        parse_dataset("date,x\n2000-01,1\n2000-02,abc\n");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("save then load is exact") {
    Dataset d = parse_dataset(kPanel);
    d.values(0, 0) = 0.1 + 0.2;
    d.values(1, 1) = 1.0 / 3.0;
    const auto path = std::filesystem::temp_directory_path() / "svarsoft_roundtrip.csv";
    save_dataset(d, path);
    const auto back = load_dataset(path);
    CHECK(back.dates == d.dates);
    CHECK(back.variables == d.variables);
    CHECK((back.values - d.values).cwiseAbs().maxCoeff() == 0.0);
    std::filesystem::remove(path);
}

}  // TEST_SUITE
