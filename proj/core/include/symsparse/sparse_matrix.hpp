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
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace symsparse {

/// Upper-triangle coordinate entry, row <= col.
struct MatrixEntry {
    std::uint32_t row;
    std::uint32_t col;
    double value;

    friend bool operator==(const MatrixEntry&, const MatrixEntry&) = default;
};

/// Symmetric n x n matrix stored as its upper triangle (diagonal included).
///
/// Entries are kept sorted by (row, col) with no duplicates and no stored
/// zeros; the lower triangle is implied by a_ji = a_ij.
class SparseSymmetricMatrix {
public:
    SparseSymmetricMatrix() = default;
    explicit SparseSymmetricMatrix(std::size_t n) : n_(n) {}

    /// Validates and sorts; zero values are dropped. Throws ParameterError on
    /// out-of-range, lower-triangle or duplicate coordinates.
    static SparseSymmetricMatrix from_entries(std::size_t n, std::vector<MatrixEntry> entries);

    /// Requires an exactly symmetric square matrix.
    static SparseSymmetricMatrix from_dense(const Eigen::MatrixXd& dense);

    static SparseSymmetricMatrix identity(std::size_t n, double scale = 1.0);

    std::size_t n() const noexcept { return n_; }
    std::span<const MatrixEntry> entries() const noexcept { return entries_; }
    std::size_t stored_count() const noexcept { return entries_.size(); }

    /// a_ij for any (i, j); zero when absent.
    double at(std::size_t i, std::size_t j) const;

    Eigen::MatrixXd to_dense() const;
    Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
    SparseSymmetricMatrix scaled(double factor) const;

    /// Same sparsity pattern with every stored value replaced by `value(k)`
    /// for the k-th stored entry.
    template <class F>
    SparseSymmetricMatrix with_values(F&& value) const
    {
        SparseSymmetricMatrix out(n_);
        out.entries_.reserve(entries_.size());
        for (std::size_t k = 0; k < entries_.size(); ++k) {
            const double v = value(k);
            if (v != 0.0) {
                out.entries_.push_back({entries_[k].row, entries_[k].col, v});
            }
        }
        return out;
    }

    /// Number of nonzeros in each row of the full symmetric matrix.
    std::vector<std::size_t> row_counts() const;

    /// Nonzero (column, value) pairs for every row of the full matrix.
    std::vector<std::vector<std::pair<std::uint32_t, double>>> rows() const;

    double max_abs_entry() const noexcept;

    friend bool operator==(const SparseSymmetricMatrix&, const SparseSymmetricMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<MatrixEntry> entries_;
};

/// Header line of the coordinate text format: `n p seed stream`.
struct MatrixHeader {
    std::size_t n = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/// Writes the header line then one `i j value` line per stored entry
/// (0-based, i <= j, values printed with 17 significant digits).
void write_coordinate_text(std::ostream& out, const SparseSymmetricMatrix& a, const MatrixHeader& header);

/// Inverse of write_coordinate_text; throws ParameterError with the line
/// number on malformed input.
std::pair<MatrixHeader, SparseSymmetricMatrix> read_coordinate_text(std::istream& in);

} // namespace symsparse
