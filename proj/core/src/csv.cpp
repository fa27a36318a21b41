/*
   Copyright 2026 The symsparse Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "symsparse/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <ostream>

#include "symsparse/error.hpp"

namespace symsparse {

std::string format_double(double value)
{
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[32];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value) {
            break;
        }
    }
    return buf;
}

CsvWriter::CsvWriter(std::ostream& out, std::string_view schema, int version, std::vector<std::string> columns)
    : out_(out), columns_(std::move(columns))
{
    out_ << "# schema: " << schema << " v" << version << '\n';
    emit(columns_);
}

void CsvWriter::emit(const std::vector<std::string>& cells)
{
    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (k) {
            out_ << ',';
        }
        out_ << cells[k];
    }
    out_ << '\n';
}

CsvWriter::Row& CsvWriter::Row::operator<<(double value)
{
    cells_.push_back(format_double(value));
    return *this;
}

CsvWriter::Row& CsvWriter::Row::operator<<(std::size_t value)
{
    cells_.push_back(std::to_string(value));
    return *this;
}

CsvWriter::Row& CsvWriter::Row::operator<<(bool value)
{
    cells_.emplace_back(value ? "1" : "0");
    return *this;
}

CsvWriter::Row& CsvWriter::Row::operator<<(std::string_view value)
{
    cells_.emplace_back(value);
    return *this;
}

CsvWriter::Row::~Row() noexcept(false)
{
    if (std::uncaught_exceptions() > 0) {
        return;
    }
    require(cells_.size() == owner_.columns_.size(), "CSV row does not match the column count");
    owner_.emit(cells_);
    ++owner_.rows_;
}

} // namespace symsparse
