#pragma once

#include <map>
#include <vector>

#include "gradus/linalg.hpp"
#include "gradus/poly.hpp"

namespace gradus {

/* A containment question: does the span of {g_i * (monomials of fitting
 * degree)} cover the whole graded piece at `target`? Generators must be
 * homogeneous polynomials over `field` in the given ring. */
struct MembershipProblem {
    RingSpec spec;
    FieldSpec field = FieldSpec::qq();
    std::vector<Polynomial> generators;
    Bidegree target{0, 0};
};

/* Multiplication matrix for the piece: rows indexed by the monomial basis of
 * the target degree, one column per (generator, source monomial) pair, entry
 * = coefficient of the row monomial in generator * source monomial.
 * Generators with an empty source piece contribute no columns. */
ExactMatrix build_matrix(const MembershipProblem& prob);

// surjectivity certificate; full_target_rank iff the piece is covered
RankCertificate contains_full_piece(const MembershipProblem& prob);

// dim(target piece) - rank(build_matrix)
std::size_t quotient_piece_dim(const MembershipProblem& prob);

/* Row-reduced basis of the ideal's slice at one fixed degree. Immutable once
 * built; membership tests reduce candidate vectors against the stored RREF. */
class IdealPieceBasis {
  public:
    explicit IdealPieceBasis(const MembershipProblem& prob);

    const Bidegree& target() const { return target_; }
    const RingSpec& spec() const { return spec_; }
    const FieldSpec& field() const { return field_; }
    std::size_t piece_dim() const { return piece_.size(); }
    std::size_t rank() const { return cert_.rank; }
    bool full() const { return cert_.rank == piece_.size(); }
    const ExactMatrix& rref_rows() const { return rref_; }
    const RankCertificate& cert() const { return cert_; }
    const std::vector<Monomial>& piece_monomials() const { return piece_; }
    // position of a monomial in the piece basis; throws when absent
    std::size_t piece_index(const Monomial& m) const;

    // coordinates of a polynomial of exactly the target degree
    std::vector<Scalar> coordinates(const Polynomial& r) const;
    // the same reduced against the stored rows; zero vector means membership
    bool reduces_to_zero(const Polynomial& r) const;

  private:
    RingSpec spec_;
    FieldSpec field_;
    Bidegree target_;
    std::vector<Monomial> piece_;
    std::map<Monomial, std::size_t, MonomialLess> index_;
    ExactMatrix rref_;
    RankCertificate cert_;
};

/* Membership in J = { r | r*S lands inside the ideal at the ambient degree }:
 * true iff c*r reduces to zero for every monomial c of the complementary
 * degree. Empty complement makes the test vacuously true. */
bool in_J(const Polynomial& r, const IdealPieceBasis& ideal_piece, const Bidegree& ambient);

}  // namespace gradus
