#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "gradus/scalar.hpp"

namespace gradus {

struct RankCertificate {
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_cols;
    std::size_t rows = 0;
    std::size_t cols = 0;
    FieldSpec field;
    bool full_target_rank = false;  // rank == rows
};

/* Dense exact matrix over a fixed field. Z/p entries sit in a flat uint32
 * grid so elimination runs on machine words; rational entries are GMP
 * rationals. Construction is cheap-zeroed; matrices are treated as immutable
 * once filled (rank/rref work on copies). */
class ExactMatrix {
  public:
    ExactMatrix() : field_(FieldSpec::qq()) {}
    ExactMatrix(std::size_t rows, std::size_t cols, const FieldSpec& field);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const FieldSpec& field() const { return field_; }

    Scalar at(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, const Scalar& v);

    std::uint32_t& fp_at(std::size_t i, std::size_t j) { return fp_[i * cols_ + j]; }
    std::uint32_t fp_at(std::size_t i, std::size_t j) const { return fp_[i * cols_ + j]; }
    mpq_class& qq_at(std::size_t i, std::size_t j) { return qq_[i * cols_ + j]; }
    const mpq_class& qq_at(std::size_t i, std::size_t j) const { return qq_[i * cols_ + j]; }

    ExactMatrix transpose() const;

    // forward elimination only; stops early once rank hits stop_at
    RankCertificate rank_certificate(std::size_t stop_at = SIZE_MAX) const;

    // full reduced row echelon form (pivots 1, zeros above and below)
    std::pair<ExactMatrix, RankCertificate> rref() const;

    std::string dump() const;  // "rows cols field" header, then entries

  private:
    RankCertificate rank_fp(std::size_t stop_at) const;
    RankCertificate rank_qq_bareiss(std::size_t stop_at) const;

    std::size_t rows_ = 0, cols_ = 0;
    FieldSpec field_;
    std::vector<std::uint32_t> fp_;
    std::vector<mpq_class> qq_;
};

// true iff rank == rows (columns are sources, rows are targets)
bool is_surjective(const ExactMatrix& m);

/* Residue of v modulo the row space of an RREF matrix: for each pivot column,
 * subtract the multiple of the corresponding row. Zero iff v is in the span. */
std::vector<Scalar> row_space_reduce(const ExactMatrix& basis_rref,
                                     const RankCertificate& cert,
                                     const std::vector<Scalar>& v);

// same reduction on a raw residue vector; avoids Scalar overhead in bulk runs
void fp_row_space_reduce_inplace(const ExactMatrix& basis_rref,
                                 const RankCertificate& cert,
                                 std::vector<std::uint32_t>& v);

}  // namespace gradus
