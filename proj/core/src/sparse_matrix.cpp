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

#include "symsparse/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "symsparse/error.hpp"

namespace symsparse {

namespace {

bool entry_less(const MatrixEntry& l, const MatrixEntry& r)
{
    return l.row != r.row ? l.row < r.row : l.col < r.col;
}

} // namespace

SparseSymmetricMatrix SparseSymmetricMatrix::from_entries(std::size_t n, std::vector<MatrixEntry> entries)
{
    for (const auto& e : entries) {
        require(e.row < n && e.col < n, "matrix entry index out of range");
        require(e.row <= e.col, "matrix entries must lie in the upper triangle (row <= col)");
        require(std::isfinite(e.value), "matrix entry is not finite");
    }
    std::erase_if(entries, [](const MatrixEntry& e) { return e.value == 0.0; });
    std::sort(entries.begin(), entries.end(), entry_less);
    const auto dup = std::adjacent_find(entries.begin(), entries.end(), [](const auto& l, const auto& r) {
        return l.row == r.row && l.col == r.col;
    });
    require(dup == entries.end(), "duplicate matrix entry");

    SparseSymmetricMatrix m(n);
    m.entries_ = std::move(entries);
    return m;
}

SparseSymmetricMatrix SparseSymmetricMatrix::from_dense(const Eigen::MatrixXd& dense)
{
    require(dense.rows() == dense.cols(), "matrix must be square");
    const auto n = static_cast<std::size_t>(dense.rows());
    std::vector<MatrixEntry> entries;
    for (Eigen::Index i = 0; i < dense.rows(); ++i) {
        for (Eigen::Index j = i; j < dense.cols(); ++j) {
            require(dense(i, j) == dense(j, i), "matrix is not exactly symmetric");
            if (dense(i, j) != 0.0) {
                entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), dense(i, j)});
            }
        }
    }
    return from_entries(n, std::move(entries));
}

SparseSymmetricMatrix SparseSymmetricMatrix::identity(std::size_t n, double scale)
{
    std::vector<MatrixEntry> entries;
    for (std::size_t i = 0; i < n; ++i) {
        entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i), scale});
    }
    return from_entries(n, std::move(entries));
}

double SparseSymmetricMatrix::at(std::size_t i, std::size_t j) const
{
    require(i < n_ && j < n_, "matrix index out of range");
    if (i > j) {
        std::swap(i, j);
    }
    const MatrixEntry key{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), 0.0};
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), key, entry_less);
    if (it != entries_.end() && it->row == i && it->col == j) {
        return it->value;
    }
    return 0.0;
}

Eigen::MatrixXd SparseSymmetricMatrix::to_dense() const
{
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (const auto& e : entries_) {
        dense(e.row, e.col) = e.value;
        dense(e.col, e.row) = e.value;
    }
    return dense;
}

Eigen::VectorXd SparseSymmetricMatrix::multiply(const Eigen::VectorXd& x) const
{
    require(static_cast<std::size_t>(x.size()) == n_, "vector dimension does not match matrix");
    Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
    for (const auto& e : entries_) {
        y[e.row] += e.value * x[e.col];
        if (e.row != e.col) {
            y[e.col] += e.value * x[e.row];
        }
    }
    return y;
}

SparseSymmetricMatrix SparseSymmetricMatrix::scaled(double factor) const
{
    return with_values([&](std::size_t k) { return factor * entries_[k].value; });
}

std::vector<std::size_t> SparseSymmetricMatrix::row_counts() const
{
    std::vector<std::size_t> counts(n_, 0);
    for (const auto& e : entries_) {
        ++counts[e.row];
        if (e.row != e.col) {
            ++counts[e.col];
        }
    }
    return counts;
}

std::vector<std::vector<std::pair<std::uint32_t, double>>> SparseSymmetricMatrix::rows() const
{
    std::vector<std::vector<std::pair<std::uint32_t, double>>> out(n_);
    for (const auto& e : entries_) {
        out[e.row].emplace_back(e.col, e.value);
        if (e.row != e.col) {
            out[e.col].emplace_back(e.row, e.value);
        }
    }
    return out;
}

double SparseSymmetricMatrix::max_abs_entry() const noexcept
{
    double best = 0.0;
    for (const auto& e : entries_) {
        best = std::max(best, std::abs(e.value));
    }
    return best;
}

void write_coordinate_text(std::ostream& out, const SparseSymmetricMatrix& a, const MatrixHeader& header)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu %.17g %llu %llu\n", a.n(), header.p,
                  static_cast<unsigned long long>(header.seed), static_cast<unsigned long long>(header.stream));
    out << buf;
    for (const auto& e : a.entries()) {
        std::snprintf(buf, sizeof buf, "%u %u %.17g\n", e.row, e.col, e.value);
        out << buf;
    }
}

std::pair<MatrixHeader, SparseSymmetricMatrix> read_coordinate_text(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& what) {
        throw ParameterError("coordinate text line " + std::to_string(line_no) + ": " + what);
    };

    MatrixHeader header;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        std::istringstream fields(line);
        if (!(fields >> header.n >> header.p >> header.seed >> header.stream) || !(fields >> std::ws).eof()) {
            fail("expected header 'n p seed stream'");
        }
        break;
    }
    if (line_no == 0) {
        fail("missing header");
    }

    std::vector<MatrixEntry> entries;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        std::istringstream fields(line);
        std::uint64_t i = 0;
        std::uint64_t j = 0;
        double v = 0.0;
        if (!(fields >> i >> j >> v) || !(fields >> std::ws).eof()) {
            fail("expected entry 'i j value'");
        }
        if (i > j || j >= header.n) {
            fail("entry index outside the upper triangle of an n x n matrix");
        }
        entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), v});
    }
    return {header, SparseSymmetricMatrix::from_entries(header.n, std::move(entries))};
}

} // namespace symsparse
