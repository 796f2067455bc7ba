#include "gradus/graded_ideal.hpp"

#include <algorithm>

namespace gradus {

namespace {

struct PieceIndex {
    std::vector<Monomial> piece;
    std::map<Monomial, std::size_t, MonomialLess> index;
};

PieceIndex index_piece(const RingSpec& spec, const Bidegree& target) {
    PieceIndex out;
    out.piece = basis(spec, target);
    for (std::size_t i = 0; i < out.piece.size(); ++i) out.index.emplace(out.piece[i], i);
    return out;
}

// one column per (generator, source monomial) pair, in that nesting order
struct ColumnSource {
    const Polynomial* gen;
    std::vector<Monomial> sources;
};

std::vector<ColumnSource> column_sources(const MembershipProblem& prob,
                                         std::vector<Polynomial>& converted) {
    converted.clear();
    converted.reserve(prob.generators.size());
    std::vector<ColumnSource> out;
    for (const Polynomial& g : prob.generators) {
        if (g.ring() != prob.spec)
            throw RingError("membership generator lives in a different ring");
        Polynomial gf = g.to_field(prob.field);
        if (gf.is_zero()) continue;  // no columns from the zero generator
        auto deg = gf.bidegree();
        if (!deg) throw RingError("membership generator is not homogeneous");
        converted.push_back(std::move(gf));
    }
    out.reserve(converted.size());
    for (const Polynomial& g : converted) {
        ColumnSource cs;
        cs.gen = &g;
        cs.sources = basis(prob.spec, prob.target - *g.bidegree());
        if (!cs.sources.empty()) out.push_back(std::move(cs));
    }
    return out;
}

}  // namespace

ExactMatrix build_matrix(const MembershipProblem& prob) {
    PieceIndex pi = index_piece(prob.spec, prob.target);
    std::vector<Polynomial> converted;
    std::vector<ColumnSource> cols = column_sources(prob, converted);
    std::size_t ncols = 0;
    for (const ColumnSource& cs : cols) ncols += cs.sources.size();

    ExactMatrix m(pi.piece.size(), ncols, prob.field);
    std::size_t col = 0;
    for (const ColumnSource& cs : cols) {
        for (const Monomial& src : cs.sources) {
            for (const auto& [mono, coef] : cs.gen->terms()) {
                auto it = pi.index.find(mono * src);
                if (it == pi.index.end())
                    throw RingError("generator product escapes the target piece");
                if (prob.field.is_fp())
                    m.fp_at(it->second, col) = coef.res();
                else
                    m.qq_at(it->second, col) = coef.rat();
            }
            ++col;
        }
    }
    return m;
}

RankCertificate contains_full_piece(const MembershipProblem& prob) {
    ExactMatrix m = build_matrix(prob);
    return m.rank_certificate(m.rows());
}

std::size_t quotient_piece_dim(const MembershipProblem& prob) {
    ExactMatrix m = build_matrix(prob);
    RankCertificate cert = m.rank_certificate();
    return m.rows() - cert.rank;
}

IdealPieceBasis::IdealPieceBasis(const MembershipProblem& prob)
    : spec_(prob.spec), field_(prob.field), target_(prob.target) {
    PieceIndex pi = index_piece(spec_, target_);
    piece_ = std::move(pi.piece);
    index_ = std::move(pi.index);

    // span rows are the products; reduce, then keep only the rank rows
    std::vector<Polynomial> converted;
    std::vector<ColumnSource> cols = column_sources(prob, converted);
    std::size_t nrows = 0;
    for (const ColumnSource& cs : cols) nrows += cs.sources.size();

    ExactMatrix span(nrows, piece_.size(), field_);
    std::size_t row = 0;
    for (const ColumnSource& cs : cols) {
        for (const Monomial& src : cs.sources) {
            for (const auto& [mono, coef] : cs.gen->terms()) {
                auto it = index_.find(mono * src);
                if (it == index_.end())
                    throw RingError("generator product escapes the target piece");
                if (field_.is_fp())
                    span.fp_at(row, it->second) = coef.res();
                else
                    span.qq_at(row, it->second) = coef.rat();
            }
            ++row;
        }
    }

    auto [reduced, cert] = span.rref();
    cert_ = std::move(cert);
    rref_ = ExactMatrix(cert_.rank, piece_.size(), field_);
    for (std::size_t i = 0; i < cert_.rank; ++i)
        for (std::size_t j = 0; j < piece_.size(); ++j) {
            if (field_.is_fp())
                rref_.fp_at(i, j) = reduced.fp_at(i, j);
            else
                rref_.qq_at(i, j) = reduced.qq_at(i, j);
        }
    cert_.rows = cert_.rank;  // certificate now describes the trimmed matrix
    cert_.full_target_rank = true;
}

std::size_t IdealPieceBasis::piece_index(const Monomial& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) throw RingError("monomial is not in the stored piece");
    return it->second;
}

std::vector<Scalar> IdealPieceBasis::coordinates(const Polynomial& r) const {
    std::vector<Scalar> v(piece_.size(), Scalar::zero(field_));
    Polynomial rf = r.to_field(field_);
    for (const auto& [mono, coef] : rf.terms()) {
        auto it = index_.find(mono);
        if (it == index_.end())
            throw RingError("polynomial does not lie in the stored piece");
        v[it->second] = coef;
    }
    return v;
}

bool IdealPieceBasis::reduces_to_zero(const Polynomial& r) const {
    std::vector<Scalar> v = coordinates(r);
    std::vector<Scalar> res = row_space_reduce(rref_, cert_, v);
    return std::all_of(res.begin(), res.end(), [](const Scalar& s) { return s.is_zero(); });
}

bool in_J(const Polynomial& r, const IdealPieceBasis& ideal_piece, const Bidegree& ambient) {
    if (!(ambient == ideal_piece.target()))
        throw RingError("in_J ambient degree does not match the stored piece");
    if (r.is_zero()) return true;
    if (r.ring() != ideal_piece.spec())
        throw RingError("in_J argument lives in a different ring");
    auto deg = r.bidegree();
    if (!deg) throw RingError("in_J argument is not homogeneous");

    // a full piece contains every homogeneous element, multiples included
    if (ideal_piece.full()) return true;

    Polynomial rf = r.to_field(ideal_piece.field());
    const std::vector<Monomial> complement = basis(ideal_piece.spec(), ambient - *deg);
    const std::size_t dim = ideal_piece.piece_dim();

    if (ideal_piece.field().is_fp()) {
        std::vector<std::uint32_t> v(dim);
        for (const Monomial& c : complement) {
            std::fill(v.begin(), v.end(), 0u);
            for (const auto& [mono, coef] : rf.terms())
                v[ideal_piece.piece_index(mono * c)] = coef.res();
            fp_row_space_reduce_inplace(ideal_piece.rref_rows(), ideal_piece.cert(), v);
            for (std::uint32_t x : v)
                if (x) return false;
        }
        return true;
    }

    for (const Monomial& c : complement) {
        std::vector<Scalar> v(dim, Scalar::zero(ideal_piece.field()));
        for (const auto& [mono, coef] : rf.terms())
            v[ideal_piece.piece_index(mono * c)] = coef;
        std::vector<Scalar> res = row_space_reduce(ideal_piece.rref_rows(), ideal_piece.cert(), v);
        for (const Scalar& s : res)
            if (!s.is_zero()) return false;
    }
    return true;
}

}  // namespace gradus
