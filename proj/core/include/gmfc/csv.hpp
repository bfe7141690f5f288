#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gmfc {

/// Shortest decimal text with 17 significant digits ("%.17g"); locale independent.
std::string format_double(double x);

/// RFC 4180 writer: CRLF record separators, fields quoted only when they
/// contain a comma, quote, CR or LF.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(const std::vector<std::string>& names) { row(names); }
    void row(const std::vector<std::string>& fields);
    void row(const std::vector<double>& values);

private:
    std::ostream& out_;
};

std::string quote_field(const std::string& field);

/// Parses an RFC 4180 document into records. Throws ParseError on unbalanced quotes.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace gmfc
