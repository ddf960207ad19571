// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ziprerank {

using RealVector = std::vector<double>;

/// Norms below this are treated as zero by normalization and cosine.
inline constexpr double kZeroNormThreshold = 1e-12;

/// Dense row-major matrix of finite doubles. Holds query hidden states,
/// visual token embeddings, value vectors and attention maps alike.
class Matrix {
public:
    Matrix() = default;

    /// Throws DimensionMismatch if data.size() != rows * cols, NonFinite on
    /// NaN or infinity.
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix zeros(std::size_t rows, std::size_t cols);
    static Matrix from_rows(const std::vector<RealVector>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t dim() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    std::span<const double> row(std::size_t r) const;
    std::span<double> row(std::size_t r);

    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }

    const std::vector<double>& data() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

using EmbeddingMatrix = Matrix;

/// Cosine similarities between every query row and every visual row.
/// Entry (t, j) lies in [-1, 1].
class SimilarityMatrix {
public:
    SimilarityMatrix(std::size_t n_query, std::size_t n_visual, std::vector<double> values);

    std::size_t n_query() const noexcept { return n_query_; }
    std::size_t n_visual() const noexcept { return n_visual_; }

    double operator()(std::size_t t, std::size_t j) const noexcept { return s_[t * n_visual_ + j]; }
    std::span<const double> query_row(std::size_t t) const;
    const std::vector<double>& values() const noexcept { return s_; }

private:
    std::size_t n_query_;
    std::size_t n_visual_;
    std::vector<double> s_;
};

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> v);

/// Throws ZeroNorm when the norm is below kZeroNormThreshold.
RealVector l2_normalize(std::span<const double> v);

/// Cosine of the angle between h and v, clamped to [-1, 1].
double cosine_similarity(std::span<const double> h, std::span<const double> v);

SimilarityMatrix similarity_matrix(const EmbeddingMatrix& queries, const EmbeddingMatrix& visual);

}  // namespace ziprerank
