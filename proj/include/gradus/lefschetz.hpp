#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gradus/graded_ideal.hpp"

namespace gradus {

struct HilbertFunction {
    std::vector<long> h;  // values at degrees 0..s

    int socle_degree() const { return static_cast<int>(h.size()) - 1; }
    bool symmetric() const;
    bool unimodal() const;
    std::string str() const;
    bool operator==(const HilbertFunction&) const = default;
};

// coefficients of prod_j (1 + t + ... + t^(m_j - 1)); every m_j >= 1
HilbertFunction hilbert_ci(const std::vector<int>& degrees);

/* Artinian quotient of P_n by homogeneous generators; socle degree from the
 * complete-intersection formula sum(m_j - 1). Whether the generators really
 * form a complete intersection is decided by hilbert_actual, not assumed. */
struct CIQuotient {
    RingSpec ring;
    FieldSpec field = FieldSpec::qq();
    std::vector<Polynomial> generators;
    std::vector<int> generator_degrees;
    int n = 0;  // ring is P_n
    int socle_degree = 0;
};

CIQuotient make_quotient(const RingSpec& ring, const FieldSpec& field,
                         std::vector<Polynomial> generators);

struct HilbertReport {
    HilbertFunction actual;  // measured values 0..s
    bool is_ci = false;
    std::string not_ci_reason;  // empty when is_ci
};

// measured Hilbert function vs the product formula, plus vanishing past the socle
HilbertReport hilbert_actual(const CIQuotient& q);

/* Graded pieces of the quotient as standard monomials (complement of the
 * ideal piece's RREF pivots), plus multiplication maps between pieces. */
class QuotientPieces {
  public:
    QuotientPieces(const CIQuotient& q, int max_degree);

    std::size_t dim(int m) const;
    const std::vector<Monomial>& standard_monomials(int m) const;

    // matrix of multiplication by h: Q(m) -> Q(m + deg h), in standard bases
    ExactMatrix multiplication_map(const Polynomial& h, int m) const;

  private:
    struct DegreeData {
        IdealPieceBasis piece;
        std::vector<Monomial> std_monos;
        std::vector<std::size_t> std_pos;  // piece index -> standard position (or npos)
    };
    const CIQuotient& q_;
    std::vector<DegreeData> degrees_;
};

struct SLFailure {
    int m = 0, i = 0;
    std::size_t rank = 0, expected = 0;
};

struct SLResult {
    bool ok = false;
    std::vector<SLFailure> failures;
};

/* Strong Lefschetz test: multiplication by ell^i from Q(m) to Q(m+i) must
 * have maximal rank for all 0 <= m <= m+i <= socle degree. */
SLResult is_sl_element(const CIQuotient& q, const Polynomial& ell);

/* Containment of the full piece at degree sum(m_j) - n (one past the socle)
 * plus a one-dimensional socle right below it. Degree-list form runs the
 * monomial witness x_j^(m_j) over Z/65537. */
bool gen3_bound_check(const CIQuotient& q);
bool gen3_bound_check(const std::vector<int>& degrees);

/* Containment of P_n(m) in (generators, ell^k); the caller picks m against
 * the bound m >= (sum(m_j) + k - n - 1)/2. */
bool gen4_bound_check(const CIQuotient& q, const Polynomial& ell, int k, int m);

struct SLSearchResult {
    bool found = false;
    Polynomial ell;
    std::vector<int> coefficients;
    int tried = 0;
};

/* Deterministic candidate search for a strong Lefschetz element: the all-ones
 * form first, then sign-normalized 0/±1 vectors, then small seeded random
 * coefficients, capped at 200 candidates. Certification always runs over
 * Z/65537; a maximal-rank verdict there is sound for characteristic zero. */
SLSearchResult find_sl_element(const CIQuotient& q, std::uint64_t seed = 0);

// CI precondition enforced, then find_sl_element on P_2/(f0, f1, f2)
SLSearchResult harima_watanabe_check(const Polynomial& f0_linear_power,
                                     const Polynomial& f1, const Polynomial& f2);

}  // namespace gradus
