#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gradus/scalar.hpp"

namespace gradus {

struct RingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Bidegree {
    long m = 0;
    long n = 0;

    Bidegree operator+(const Bidegree& o) const { return {m + o.m, n + o.n}; }
    Bidegree operator-(const Bidegree& o) const { return {m - o.m, n - o.n}; }
    bool operator==(const Bidegree&) const = default;
    std::string str() const { return "(" + std::to_string(m) + "," + std::to_string(n) + ")"; }
};

/* A quadric-bundle type (d_0,...,d_3), all of one parity, with the derived
 * twists r_j and shift d satisfying d_j = 2 r_j + d. The tuple is sorted
 * ascending (so r_0 <= ... <= r_3); the order the caller gave is kept for
 * reporting. Normalization d = min d_j pins the twist choice. */
struct TypeTuple {
    std::array<int, 4> input{};   // as given
    std::array<int, 4> dj{};      // sorted ascending
    std::array<int, 4> r{};
    int d = 0;
    int t = 0;

    static TypeTuple from_degrees(const std::array<int, 4>& degrees);
    bool is_trivial() const { return dj == std::array<int, 4>{0, 0, 0, 0}; }
    std::string str() const;
};

/* Bigraded coordinate ring: num_base variables of bidegree (1,0) and one
 * fiber variable of bidegree (-w_j, 1) per weight. P_n has no fiber part. */
struct RingSpec {
    std::string label;
    int num_base = 0;
    std::vector<int> fiber_weights;
    std::vector<std::string> base_names;
    std::vector<std::string> fiber_names;

    static RingSpec S(const TypeTuple& type);
    static RingSpec T(const TypeTuple& type);
    static RingSpec U(const TypeTuple& type);
    static RingSpec P(int n);

    int num_fiber() const { return static_cast<int>(fiber_weights.size()); }
    bool operator==(const RingSpec& o) const {
        return num_base == o.num_base && fiber_weights == o.fiber_weights;
    }
    bool operator!=(const RingSpec& o) const { return !(*this == o); }
};

struct Monomial {
    std::vector<int> base;
    std::vector<int> fiber;

    Bidegree degree_in(const RingSpec& spec) const;
    Monomial operator*(const Monomial& o) const;
    bool divides(const Monomial& o) const;
    bool operator==(const Monomial&) const = default;
    std::string str(const RingSpec& spec) const;
};

/* Canonical monomial order: total fiber degree, then fiber exponents lex
 * descending, then total base degree, then base exponents lex descending.
 * Fixes basis enumeration and matrix column order across runs. */
struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

class Polynomial {
  public:
    using TermMap = std::map<Monomial, Scalar, MonomialLess>;

    Polynomial() = default;
    Polynomial(RingSpec spec, FieldSpec field)
        : spec_(std::move(spec)), field_(field) {}

    static Polynomial zero(const RingSpec& spec, const FieldSpec& field) {
        return Polynomial(spec, field);
    }
    static Polynomial constant(const RingSpec& spec, const Scalar& c);
    static Polynomial monomial(const RingSpec& spec, const Monomial& mono, const Scalar& c);
    // single variable helpers; fiber=false means base variable index k
    static Polynomial variable(const RingSpec& spec, const FieldSpec& field, bool fiber, int idx,
                               int exponent = 1);

    const RingSpec& ring() const { return spec_; }
    const FieldSpec& field() const { return field_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    long term_count() const { return static_cast<long>(terms_.size()); }

    void add_term(const Monomial& mono, const Scalar& c);
    Scalar coeff(const Monomial& mono) const;

    // unique bidegree of a homogeneous polynomial; nullopt for 0 or mixed
    std::optional<Bidegree> bidegree() const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial scaled(const Scalar& c) const;

    // formal partial derivative; fiber=false differentiates base variable k.
    // Guard: over Z/p every exponent met must be < p, else FieldError.
    Polynomial partial(bool fiber, int idx) const;

    Polynomial to_field(const FieldSpec& f) const;

    std::string str() const;

  private:
    void check_compatible(const Polynomial& o) const;

    RingSpec spec_;
    FieldSpec field_ = FieldSpec::qq();
    TermMap terms_;
};

// all monomials of exactly this bidegree, in canonical order
std::vector<Monomial> basis(const RingSpec& spec, const Bidegree& deg);

// |basis| computed by stars and bars, without materializing the list
long piece_dim(const RingSpec& spec, const Bidegree& deg);

mpz_class binomial_mpz(long n, long k);

// (sum_k coeffs[k] * x_k)^exponent, expanded via exact multinomials.
// Guard: over Z/p the exponent must be < p.
Polynomial power_of_linear(const RingSpec& spec, const std::vector<Scalar>& coeffs,
                           int exponent);

// text form, e.g. "3*x0^2*y1 - y3 + 1/2"; '*' optional on input
Polynomial parse_poly(const RingSpec& spec, const FieldSpec& field, const std::string& text);

}  // namespace gradus
