#include "gradus/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace gradus {

ExactMatrix::ExactMatrix(std::size_t rows, std::size_t cols, const FieldSpec& field)
    : rows_(rows), cols_(cols), field_(field) {
    if (field_.is_fp())
        fp_.assign(rows * cols, 0u);
    else
        qq_.assign(rows * cols, mpq_class(0));
}

Scalar ExactMatrix::at(std::size_t i, std::size_t j) const {
    if (field_.is_fp()) return Scalar::residue(fp_[i * cols_ + j], field_);
    return Scalar::rational(qq_[i * cols_ + j]);
}

void ExactMatrix::set(std::size_t i, std::size_t j, const Scalar& v) {
    Scalar w = v.to_field(field_);
    if (field_.is_fp())
        fp_[i * cols_ + j] = w.res();
    else
        qq_[i * cols_ + j] = w.rat();
}

ExactMatrix ExactMatrix::transpose() const {
    ExactMatrix t(cols_, rows_, field_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
            if (field_.is_fp())
                t.fp_at(j, i) = fp_at(i, j);
            else
                t.qq_at(j, i) = qq_at(i, j);
        }
    return t;
}

namespace {

/* Reduction of 64-bit accumulators mod p. For p = 2^16+1 a fold using
 * 2^16 == -1 handles any x < 2^48. Otherwise Barrett with
 * magic = floor((2^64-1)/p): the quotient estimate is short by at most a
 * small constant, so a bounded subtraction loop finishes; valid for x < 2^62. */
struct FpRed {
    std::uint32_t p;
    std::uint64_t magic;
    bool fold65537;
    explicit FpRed(std::uint32_t p_)
        : p(p_), magic(~std::uint64_t(0) / p_), fold65537(p_ == 65537u) {}
    std::uint32_t reduce(std::uint64_t x) const {
        if (fold65537) {
            // x = a + b*2^16 + c*2^32 with 2^16 == -1, 2^32 == 1 (mod p)
            std::uint32_t a = x & 0xFFFFu;
            std::uint32_t b = (x >> 16) & 0xFFFFu;
            std::uint32_t c = static_cast<std::uint32_t>(x >> 32);
            std::uint32_t t = a + 65537u + c - b;
            while (t >= 65537u) t -= 65537u;
            return t;
        }
        std::uint64_t q = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * magic) >> 64);
        std::uint64_t r = x - q * p;
        while (r >= p) r -= p;
        return static_cast<std::uint32_t>(r);
    }
};

// acc[j] += mneg * src[j]; the compiler vectorizes the widening mul-add
void axpy_acc(std::uint64_t* acc, const std::uint32_t* src, std::size_t w, std::uint32_t mneg) {
    std::uint64_t m = mneg;
    for (std::size_t j = 0; j < w; ++j) acc[j] += m * src[j];
}

void load_acc(std::uint64_t* acc, const std::uint32_t* src, std::size_t w) {
    for (std::size_t j = 0; j < w; ++j) acc[j] = src[j];
}

void store_acc(std::uint32_t* dst, const std::uint64_t* acc, std::size_t w, const FpRed& red) {
    for (std::size_t j = 0; j < w; ++j) dst[j] = red.reduce(acc[j]);
}

constexpr std::size_t kPanel = 64;

/* Blocked forward elimination to row echelon form (pivots not normalized).
 * Panels of up to 64 pivots: pivot columns are kept exact one at a time
 * (left-looking updates against the panel's earlier pivots), elimination of
 * everything right of the panel is deferred to one accumulated rank-B update
 * per row. Safe while 64 products of (p-1)^2 fit the reducer, i.e. p < 2^17.
 * Returns pivot columns; m is left in echelon form when stop_at >= rows. */
std::vector<std::size_t> fp_forward_blocked(std::vector<std::uint32_t>& m, std::size_t rows,
                                            std::size_t cols, std::uint32_t p,
                                            std::size_t stop_at) {
    const FpRed red(p);
    std::vector<std::size_t> pivcols;
    std::vector<std::uint32_t> mult(rows * kPanel, 0u);
    std::vector<char> has_mult(rows, 0);
    std::vector<std::uint64_t> acc(cols);
    std::size_t rank = 0, c0 = 0;

    while (rank < rows && rank < stop_at && c0 < cols) {
        const std::size_t rank0 = rank;
        const std::size_t bmax = std::min({kPanel, rows - rank0, stop_at - rank0});
        std::fill(mult.begin() + rank0 * kPanel, mult.end(), 0u);
        std::fill(has_mult.begin() + rank0, has_mult.end(), 0);
        std::size_t npiv = 0;
        std::size_t c = c0;
        for (; c < cols && npiv < bmax; ++c) {
            // bring column c up to date against this panel's pivots
            for (std::size_t b = 1; b < npiv; ++b) {
                const std::size_t pr = rank0 + b;
                if (!has_mult[pr]) continue;
                const std::uint32_t* mu = &mult[pr * kPanel];
                std::uint64_t a = m[pr * cols + c];
                for (std::size_t b2 = 0; b2 < b; ++b2)
                    if (mu[b2]) a += static_cast<std::uint64_t>(p - mu[b2]) * m[(rank0 + b2) * cols + c];
                m[pr * cols + c] = red.reduce(a);
            }
            for (std::size_t i = rank0 + npiv; i < rows; ++i) {
                if (!has_mult[i]) continue;
                const std::uint32_t* mu = &mult[i * kPanel];
                std::uint64_t a = m[i * cols + c];
                for (std::size_t b2 = 0; b2 < npiv; ++b2)
                    if (mu[b2]) a += static_cast<std::uint64_t>(p - mu[b2]) * m[(rank0 + b2) * cols + c];
                m[i * cols + c] = red.reduce(a);
            }
            // first nonzero below becomes the pivot
            std::size_t piv = rank0 + npiv;
            while (piv < rows && m[piv * cols + c] == 0) ++piv;
            if (piv == rows) continue;
            const std::size_t dest = rank0 + npiv;
            if (piv != dest) {
                for (std::size_t j = 0; j < cols; ++j) std::swap(m[piv * cols + j], m[dest * cols + j]);
                for (std::size_t b = 0; b < kPanel; ++b)
                    std::swap(mult[piv * kPanel + b], mult[dest * kPanel + b]);
                std::swap(has_mult[piv], has_mult[dest]);
            }
            const std::uint32_t pinv = fp_inv(m[dest * cols + c], p);
            for (std::size_t i = dest + 1; i < rows; ++i) {
                const std::uint32_t v = m[i * cols + c];
                if (!v) continue;
                mult[i * kPanel + npiv] = red.reduce(static_cast<std::uint64_t>(v) * pinv);
                has_mult[i] = 1;
                m[i * cols + c] = 0;
            }
            pivcols.push_back(c);
            ++npiv;
        }
        const std::size_t w = cols - c;
        if (w > 0 && npiv > 0) {
            // finish the panel pivot rows right of the scanned columns, in order
            for (std::size_t b = 1; b < npiv; ++b) {
                const std::size_t pr = rank0 + b;
                if (!has_mult[pr]) continue;
                const std::uint32_t* mu = &mult[pr * kPanel];
                load_acc(acc.data(), &m[pr * cols + c], w);
                for (std::size_t b2 = 0; b2 < b; ++b2)
                    if (mu[b2]) axpy_acc(acc.data(), &m[(rank0 + b2) * cols + c], w, p - mu[b2]);
                store_acc(&m[pr * cols + c], acc.data(), w, red);
            }
            // one accumulated update per remaining row
            for (std::size_t i = rank0 + npiv; i < rows; ++i) {
                if (!has_mult[i]) continue;
                const std::uint32_t* mu = &mult[i * kPanel];
                load_acc(acc.data(), &m[i * cols + c], w);
                for (std::size_t b = 0; b < npiv; ++b)
                    if (mu[b]) axpy_acc(acc.data(), &m[(rank0 + b) * cols + c], w, p - mu[b]);
                store_acc(&m[i * cols + c], acc.data(), w, red);
            }
        }
        rank += npiv;
        c0 = c;
        if (npiv == 0) break;  // scanned to the last column without a pivot
    }
    return pivcols;
}

// plain single-pivot forward elimination; works for any p < 2^31
std::vector<std::size_t> fp_forward_scalar(std::vector<std::uint32_t>& m, std::size_t rows,
                                           std::size_t cols, std::uint32_t p,
                                           std::size_t stop_at) {
    const FpRed red(p);
    std::vector<std::size_t> pivcols;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows && rank < stop_at; ++c) {
        std::size_t piv = rank;
        while (piv < rows && m[piv * cols + c] == 0) ++piv;
        if (piv == rows) continue;
        if (piv != rank)
            for (std::size_t j = c; j < cols; ++j) std::swap(m[piv * cols + j], m[rank * cols + j]);
        const std::uint32_t pinv = fp_inv(m[rank * cols + c], p);
        const std::uint32_t* src = &m[rank * cols];
        for (std::size_t i = rank + 1; i < rows; ++i) {
            const std::uint32_t lead = m[i * cols + c];
            if (lead == 0) continue;
            const std::uint32_t factor = red.reduce(static_cast<std::uint64_t>(lead) * pinv);
            for (std::size_t j = c; j < cols; ++j) {
                const std::uint32_t t = red.reduce(static_cast<std::uint64_t>(factor) * src[j]);
                const std::uint32_t v = m[i * cols + j] + p - t;
                m[i * cols + j] = v >= p ? v - p : v;
            }
        }
        pivcols.push_back(c);
        ++rank;
    }
    return pivcols;
}

std::vector<std::size_t> fp_forward(std::vector<std::uint32_t>& m, std::size_t rows,
                                    std::size_t cols, std::uint32_t p, std::size_t stop_at) {
    if (p < (1u << 17) && rows >= 2 * kPanel)
        return fp_forward_blocked(m, rows, cols, p, stop_at);
    return fp_forward_scalar(m, rows, cols, p, stop_at);
}

/* Back-substitution from echelon form to RREF, same panel trick upward.
 * Pivot rows must already be normalized to leading ones. */
void fp_backsub(std::vector<std::uint32_t>& m, std::size_t cols, std::uint32_t p,
                const std::vector<std::size_t>& pivcols) {
    const FpRed red(p);
    const std::size_t rank = pivcols.size();
    if (rank == 0) return;
    const bool blocked = p < (1u << 17);
    std::vector<std::uint64_t> acc(cols);
    std::vector<std::uint32_t> mu(kPanel);
    std::size_t k1 = rank;
    while (k1 > 0) {
        const std::size_t k0 = (blocked && k1 >= kPanel) ? k1 - kPanel : (blocked ? 0 : k1 - 1);
        const std::size_t nb = k1 - k0;
        // make the panel's own rows reduced against each other, bottom-up
        for (std::size_t b = nb - 1; b-- > 0;) {
            const std::size_t r = k0 + b;
            const std::size_t cstart = pivcols[r] + 1;
            bool any = false;
            for (std::size_t b2 = b + 1; b2 < nb; ++b2) {
                mu[b2] = m[r * cols + pivcols[k0 + b2]];
                any = any || mu[b2];
            }
            if (!any) continue;
            const std::size_t w = cols - cstart;
            load_acc(acc.data(), &m[r * cols + cstart], w);
            for (std::size_t b2 = b + 1; b2 < nb; ++b2)
                if (mu[b2]) axpy_acc(acc.data(), &m[(k0 + b2) * cols + cstart], w, p - mu[b2]);
            store_acc(&m[r * cols + cstart], acc.data(), w, red);
        }
        // clear the panel's pivot columns in every row above
        const std::size_t cstart = pivcols[k0];
        const std::size_t w = cols - cstart;
        for (std::size_t i = 0; i < k0; ++i) {
            bool any = false;
            for (std::size_t b = 0; b < nb; ++b) {
                mu[b] = m[i * cols + pivcols[k0 + b]];
                any = any || mu[b];
            }
            if (!any) continue;
            load_acc(acc.data(), &m[i * cols + cstart], w);
            for (std::size_t b = 0; b < nb; ++b)
                if (mu[b]) axpy_acc(acc.data(), &m[(k0 + b) * cols + cstart], w, p - mu[b]);
            store_acc(&m[i * cols + cstart], acc.data(), w, red);
        }
        k1 = k0;
    }
}

}  // namespace

RankCertificate ExactMatrix::rank_fp(std::size_t stop_at) const {
    std::vector<std::uint32_t> m = fp_;
    RankCertificate cert;
    cert.rows = rows_;
    cert.cols = cols_;
    cert.field = field_;
    cert.pivot_cols = fp_forward(m, rows_, cols_, field_.p, stop_at);
    cert.rank = cert.pivot_cols.size();
    cert.full_target_rank = cert.rank == rows_;
    return cert;
}

RankCertificate ExactMatrix::rank_qq_bareiss(std::size_t stop_at) const {
    RankCertificate cert;
    cert.rows = rows_;
    cert.cols = cols_;
    cert.field = field_;

    // clear denominators row by row; scaling rows never changes rank
    std::vector<std::vector<mpz_class>> m(rows_, std::vector<mpz_class>(cols_));
    for (std::size_t i = 0; i < rows_; ++i) {
        mpz_class lcm = 1;
        for (std::size_t j = 0; j < cols_; ++j) {
            const mpq_class& q = qq_[i * cols_ + j];
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den().get_mpz_t());
        }
        for (std::size_t j = 0; j < cols_; ++j) {
            const mpq_class& q = qq_[i * cols_ + j];
            m[i][j] = q.get_num() * (lcm / q.get_den());
        }
    }

    /* Lazy fraction-free elimination. Row i stores the Bareiss minors of the
     * step it was last updated at (row_step[i]); pivots[s] is the true step-s
     * pivot minor. Rows with a zero in the pivot column are skipped; their
     * stored entries stay exact minors of their own step, and
     *   new = (S_i[j]*S_r[c] - S_i[c]*S_r[j]) * pivots[k-1] / (pivots[l_r]*pivots[l_i])
     * follows from the Sylvester determinant identity applied to both stale
     * rows, with an exact integer division. */
    std::vector<std::size_t> row_step(rows_, 0);
    std::vector<mpz_class> pivots{mpz_class(1)};
    std::size_t rank = 0;
    mpz_class num;
    for (std::size_t c = 0; c < cols_ && rank < rows_ && rank < stop_at; ++c) {
        std::size_t piv = rank;
        while (piv < rows_ && m[piv][c] == 0) ++piv;
        if (piv == rows_) continue;
        if (piv != rank) {
            std::swap(m[piv], m[rank]);
            std::swap(row_step[piv], row_step[rank]);
        }
        const std::size_t k = rank + 1;
        const std::size_t lr = row_step[rank];
        const std::vector<mpz_class>& prow = m[rank];
        mpz_class pk = prow[c] * pivots[k - 1];
        mpz_divexact(pk.get_mpz_t(), pk.get_mpz_t(), pivots[lr].get_mpz_t());
        for (std::size_t i = k; i < rows_; ++i) {
            if (m[i][c] == 0) continue;
            const mpz_class den = pivots[lr] * pivots[row_step[i]];
            const mpz_class lead = m[i][c];
            for (std::size_t j = c; j < cols_; ++j) {
                num = m[i][j] * prow[c] - lead * prow[j];
                if (num != 0) {
                    num *= pivots[k - 1];
                    mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
                }
                m[i][j] = num;
            }
            row_step[i] = k;
        }
        pivots.push_back(pk);
        cert.pivot_cols.push_back(c);
        ++rank;
    }
    cert.rank = rank;
    cert.full_target_rank = rank == rows_;
    return cert;
}

RankCertificate ExactMatrix::rank_certificate(std::size_t stop_at) const {
    return field_.is_fp() ? rank_fp(stop_at) : rank_qq_bareiss(stop_at);
}

std::pair<ExactMatrix, RankCertificate> ExactMatrix::rref() const {
    ExactMatrix out = *this;
    RankCertificate cert;
    cert.rows = rows_;
    cert.cols = cols_;
    cert.field = field_;

    if (field_.is_fp()) {
        const std::uint32_t p = field_.p;
        const FpRed red(p);
        std::vector<std::uint32_t>& m = out.fp_;
        cert.pivot_cols = fp_forward(m, rows_, cols_, p, SIZE_MAX);
        // normalize leading entries to 1
        for (std::size_t k = 0; k < cert.pivot_cols.size(); ++k) {
            const std::size_t c = cert.pivot_cols[k];
            const std::uint32_t pinv = fp_inv(m[k * cols_ + c], p);
            for (std::size_t j = c; j < cols_; ++j)
                m[k * cols_ + j] = red.reduce(static_cast<std::uint64_t>(m[k * cols_ + j]) * pinv);
        }
        fp_backsub(m, cols_, p, cert.pivot_cols);
    } else {
        std::vector<mpq_class>& m = out.qq_;
        std::size_t rank = 0;
        for (std::size_t c = 0; c < cols_ && rank < rows_; ++c) {
            std::size_t piv = rank;
            while (piv < rows_ && m[piv * cols_ + c] == 0) ++piv;
            if (piv == rows_) continue;
            if (piv != rank)
                for (std::size_t j = 0; j < cols_; ++j)
                    std::swap(m[piv * cols_ + j], m[rank * cols_ + j]);
            const mpq_class pivval = m[rank * cols_ + c];
            for (std::size_t j = c; j < cols_; ++j) m[rank * cols_ + j] /= pivval;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == rank) continue;
                const mpq_class lead = m[i * cols_ + c];
                if (lead == 0) continue;
                for (std::size_t j = c; j < cols_; ++j)
                    m[i * cols_ + j] -= lead * m[rank * cols_ + j];
            }
            cert.pivot_cols.push_back(c);
            ++rank;
        }
    }

    cert.rank = cert.pivot_cols.size();
    cert.full_target_rank = cert.rank == rows_;
    return {std::move(out), cert};
}

std::string ExactMatrix::dump() const {
    std::ostringstream os;
    os << rows_ << " " << cols_ << " " << field_.str() << "\n";
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j) os << " ";
            os << at(i, j).str();
        }
        os << "\n";
    }
    return os.str();
}

bool is_surjective(const ExactMatrix& m) {
    return m.rank_certificate(m.rows()).full_target_rank;
}

std::vector<Scalar> row_space_reduce(const ExactMatrix& basis_rref,
                                     const RankCertificate& cert,
                                     const std::vector<Scalar>& v) {
    if (v.size() != basis_rref.cols())
        throw FieldError("row_space_reduce: dimension mismatch");
    std::vector<Scalar> r = v;
    for (std::size_t k = 0; k < cert.rank; ++k) {
        const std::size_t c = cert.pivot_cols[k];
        const Scalar lead = r[c];
        if (lead.is_zero()) continue;
        for (std::size_t j = c; j < basis_rref.cols(); ++j) {
            const Scalar mkj = basis_rref.at(k, j);
            if (!mkj.is_zero()) r[j] = r[j] - lead * mkj;
        }
    }
    return r;
}

void fp_row_space_reduce_inplace(const ExactMatrix& basis_rref,
                                 const RankCertificate& cert,
                                 std::vector<std::uint32_t>& v) {
    if (!basis_rref.field().is_fp())
        throw FieldError("fp_row_space_reduce_inplace: matrix is not over a prime field");
    if (v.size() != basis_rref.cols())
        throw FieldError("fp_row_space_reduce_inplace: dimension mismatch");
    const std::uint32_t p = basis_rref.field().p;
    const FpRed red(p);
    const std::size_t cols = basis_rref.cols();
    for (std::size_t k = 0; k < cert.rank; ++k) {
        const std::size_t c = cert.pivot_cols[k];
        const std::uint32_t lead = v[c];
        if (lead == 0) continue;
        // pivot entry is 1, so subtracting lead * row zeroes v[c]
        for (std::size_t j = c; j < cols; ++j) {
            const std::uint32_t mkj = basis_rref.fp_at(k, j);
            if (mkj == 0) continue;
            const std::uint32_t t = red.reduce(static_cast<std::uint64_t>(lead) * mkj);
            const std::uint32_t w = v[j] + p - t;
            v[j] = w >= p ? w - p : w;
        }
    }
}

}  // namespace gradus
