#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace encsched::cli {

// Decimal formatting used in every emitted file: 12 significant digits,
// shortest form ("%.12g"). Part of the output contract.
std::string fmt_number(double v);

// RFC-4180 quoting; rows end with a bare "\n".
std::string csv_field(const std::string& raw);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace encsched::cli
