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

#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace symsparse {

/// Shortest text that parses back to the same double ("inf"/"-inf"/"nan" for
/// non-finite values).
std::string format_double(double value);

/// Comma-separated writer. The first line is `# schema: <name> v<version>`,
/// the second the column header; every row must match the column count.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::string_view schema, int version, std::vector<std::string> columns);

    class Row {
    public:
        Row& operator<<(double value);
        Row& operator<<(std::size_t value);
        Row& operator<<(bool value);
        Row& operator<<(std::string_view value);
        ~Row() noexcept(false);

    private:
        friend class CsvWriter;
        explicit Row(CsvWriter& owner) : owner_(owner) {}
        CsvWriter& owner_;
        std::vector<std::string> cells_;
    };

    Row row() { return Row(*this); }
    std::size_t rows_written() const noexcept { return rows_; }

private:
    void emit(const std::vector<std::string>& cells);

    std::ostream& out_;
    std::vector<std::string> columns_;
    std::size_t rows_ = 0;
};

} // namespace symsparse
