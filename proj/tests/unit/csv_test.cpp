#include <gmfc/csv.hpp>
#include <gmfc/errors.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <limits>
#include <random>
#include <sstream>

namespace gmfc {
namespace {

TEST(Csv, SeventeenDigitsRoundTrip) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(-2.5e-300), "-2.5e-300");
    EXPECT_EQ(format_double(1.0 / 3.0), "0.33333333333333331");
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng) * std::pow(10.0, i % 40 - 20);
        EXPECT_EQ(std::strtod(format_double(x).c_str(), nullptr), x);
    }
}

TEST(Csv, QuotingAndFraming) {
    std::ostringstream os;
    CsvWriter w(os);
    w.header({"a", "b,c", "say \"hi\""});
    w.row(std::vector<double>{1.0, 0.5, -3.0});
    EXPECT_EQ(os.str(), "a,\"b,c\",\"say \"\"hi\"\"\"\r\n1,0.5,-3\r\n");
}

TEST(Csv, ParseInvertsWrite) {
    std::ostringstream os;
    CsvWriter w(os);
    const std::vector<std::vector<std::string>> rows = {
        {"t", "label", "note"}, {"0.25", "3", "multi\nline"}, {"", "x\"y", "z"}};
    for (const auto& r : rows) w.row(r);
    EXPECT_EQ(parse_csv(os.str()), rows);
    EXPECT_THROW(parse_csv("a,\"b\r\n"), ParseError);
}

}  // namespace
}  // namespace gmfc
