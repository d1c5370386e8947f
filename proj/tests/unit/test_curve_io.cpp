#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "surfstates/curve_io.hpp"
#include "surfstates/error.hpp"

using namespace surfstates;

TEST(CurveIo, NumberFormatting) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(0.25), "0.25");
  EXPECT_EQ(std::stod(format_number(0.1 + 0.2)), 0.1 + 0.2);
}

TEST(CurveIo, RoundTrip) {
  EmpiricalCurve c;
  c.energies = {-1.0, -0.5, 0.1 + 0.2};
  c.values = {0.0, 0.125, 1.0 / 3.0};
  c.std_err = {0.0, 0.01, 0.02};
  c.meta = {20.0, 0.1, 12345678901234ull, 100, "x"};
  std::ostringstream out;
  write_curve_csv(out, c);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), kCurveCsvHeader);
  std::istringstream in(out.str());
  const auto back = read_curve_csv(in);
  EXPECT_EQ(back.energies, c.energies);
  EXPECT_EQ(back.values, c.values);
  EXPECT_EQ(back.std_err, c.std_err);
  EXPECT_EQ(back.meta.seed0, c.meta.seed0);
  EXPECT_EQ(back.meta.realizations, 100u);
}

TEST(CurveIo, RejectsBadHeader) {
  std::istringstream in("E,value\n1,2\n");
  try {
    read_curve_csv(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigInvalid);
  }
}

TEST(CurveIo, AtomicWrite) {
  const auto dir = std::filesystem::temp_directory_path() / "surfstates_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "a.csv";
  write_file_atomic(path, "one\n");
  write_file_atomic(path, "two\n");
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "two");
  std::filesystem::remove_all(dir);
}
