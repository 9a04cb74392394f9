// SPDX-License-Identifier: Apache-2.0
#include "bifuq_app/csv.hpp"

#include <cmath>
#include <cstdio>

#include "bifuq_app/config.hpp"

namespace bifuq::app {

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
    if (!out_) throw Error("cli", "cannot write " + path.string());
    for (std::size_t k = 0; k < header.size(); ++k) out_ << (k ? "," : "") << header[k];
    out_ << '\n';
}

CsvWriter& CsvWriter::add(double v) {
    line_ += (filled_++ ? "," : "") + format_real(v);
    return *this;
}

CsvWriter& CsvWriter::add(long long v) {
    line_ += (filled_++ ? "," : "") + std::to_string(v);
    return *this;
}

void CsvWriter::end_row() {
    if (filled_ != columns_) throw ContractViolation("cli", "csv row has " + std::to_string(filled_) + " fields, header has " +
                                                   std::to_string(columns_));
    out_ << line_ << '\n';
    line_.clear();
    filled_ = 0;
}

}  // namespace bifuq::app
