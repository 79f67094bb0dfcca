#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace bidlab {

using Labels = std::vector<std::string>;

// Row-major dense matrix of doubles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> flat() const noexcept { return data_; }

    DenseMatrix transposed() const;

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Matrix with row and column labels, used for the T matrix, R_g and exports.
struct LabeledMatrix {
    Labels row_labels;
    Labels col_labels;
    DenseMatrix values;
};

// Symmetric n x n matrix with unit diagonal and entries in [0, 1].
//
// Cells are written once per unordered pair, so symmetry holds bitwise.
class SimilarityMatrix {
public:
    SimilarityMatrix() = default;

    // Identity-initialised matrix over the given labels.
    explicit SimilarityMatrix(Labels labels);

    // Validates symmetry, unit diagonal and range; throws bidlab::Error.
    static SimilarityMatrix from_values(Labels labels, DenseMatrix values);

    std::size_t size() const noexcept { return labels_.size(); }
    const Labels& labels() const noexcept { return labels_; }
    const DenseMatrix& values() const noexcept { return values_; }

    double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }

    // Sets both (i, j) and (j, i). Off-diagonal only.
    void set_pair(std::size_t i, std::size_t j, double value);

    LabeledMatrix as_labeled() const { return {labels_, labels_, values_}; }

private:
    Labels labels_;
    DenseMatrix values_;
};

}  // namespace bidlab
