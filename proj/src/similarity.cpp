#include <cmath>
#include <string>

#include "bidlab/error.hpp"
#include "bidlab/matrix.hpp"

namespace bidlab {

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

SimilarityMatrix::SimilarityMatrix(Labels labels)
    : labels_(std::move(labels)), values_(labels_.size(), labels_.size()) {
    for (std::size_t i = 0; i < labels_.size(); ++i) values_(i, i) = 1.0;
}

SimilarityMatrix SimilarityMatrix::from_values(Labels labels, DenseMatrix values) {
    const std::size_t n = labels.size();
    if (values.rows() != n || values.cols() != n)
        throw input_error("shape_mismatch", "similarity matrix must be " + std::to_string(n) +
                                                "x" + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (values(i, i) != 1.0)
            throw input_error("invalid_similarity",
                              "diagonal entry for '" + labels[i] + "' is not 1.0");
        for (std::size_t j = 0; j < n; ++j) {
            const double v = values(i, j);
            if (!(v >= 0.0 && v <= 1.0))
                throw input_error("invalid_similarity", "entry (" + labels[i] + ", " +
                                                            labels[j] + ") outside [0, 1]");
            if (v != values(j, i))
                throw input_error("invalid_similarity", "matrix is not symmetric at (" +
                                                            labels[i] + ", " + labels[j] + ")");
        }
    }
    SimilarityMatrix out;
    out.labels_ = std::move(labels);
    out.values_ = std::move(values);
    return out;
}

void SimilarityMatrix::set_pair(std::size_t i, std::size_t j, double value) {
    values_(i, j) = value;
    values_(j, i) = value;
}

}  // namespace bidlab
