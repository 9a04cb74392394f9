// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace bifuq::app {

/// "%.17g", with inf/nan spelled the same on every platform.
std::string format_real(double v);

/// Comma-separated writer with a one-line header. Reals use 17 significant
/// digits so reruns are byte-identical.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    CsvWriter& add(double v);
    CsvWriter& add(long long v);
    CsvWriter& add(int v) { return add(static_cast<long long>(v)); }
    CsvWriter& add(std::size_t v) { return add(static_cast<long long>(v)); }
    void end_row();

private:
    std::ofstream out_;
    std::size_t columns_;
    std::size_t filled_ = 0;
    std::string line_;
};

}  // namespace bifuq::app
