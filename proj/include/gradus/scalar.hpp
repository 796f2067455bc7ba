#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace gradus {

struct FieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* Arithmetic domain: the rationals, or a prime field Z/p for a machine-word
 * prime. Large eliminations default to fp(65537); a full-rank verdict there
 * certifies the same verdict over the rationals. */
struct FieldSpec {
    enum class Kind { rationals, prime };

    Kind kind = Kind::rationals;
    std::uint32_t p = 0;

    static FieldSpec qq() { return FieldSpec{Kind::rationals, 0}; }
    static FieldSpec fp(std::uint32_t p);

    // accepts "qq" or "fp:PRIME"
    static FieldSpec parse(const std::string& text);

    bool is_fp() const { return kind == Kind::prime; }
    std::string str() const;

    bool operator==(const FieldSpec&) const = default;
};

bool is_prime_u32(std::uint32_t n);

std::uint32_t fp_add(std::uint32_t a, std::uint32_t b, std::uint32_t p);
std::uint32_t fp_sub(std::uint32_t a, std::uint32_t b, std::uint32_t p);
std::uint32_t fp_mul(std::uint32_t a, std::uint32_t b, std::uint32_t p);
std::uint32_t fp_pow(std::uint32_t a, std::uint64_t e, std::uint32_t p);
std::uint32_t fp_inv(std::uint32_t a, std::uint32_t p);
std::uint32_t fp_from_mpz(const mpz_class& z, std::uint32_t p);

/* Immutable exact field element tagged with its field. Prime-field residues
 * live in [0,p); rationals are kept canonical (lowest terms, positive
 * denominator) by GMP. */
class Scalar {
  public:
    Scalar() : field_(FieldSpec::qq()), q_(0) {}

    static Scalar zero(const FieldSpec& f) { return from_int(0, f); }
    static Scalar one(const FieldSpec& f) { return from_int(1, f); }
    static Scalar from_int(long v, const FieldSpec& f);
    static Scalar from_mpz(const mpz_class& v, const FieldSpec& f);
    static Scalar rational(const mpq_class& v);
    static Scalar residue(std::uint32_t v, const FieldSpec& f);

    const FieldSpec& field() const { return field_; }
    bool is_zero() const;
    bool is_one() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar operator-() const;
    Scalar inv() const;
    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    // exact value accessors; throw on wrong field
    const mpq_class& rat() const;
    std::uint32_t res() const;

    // carries a rational into a prime field (FieldError if p divides the
    // denominator); identity when fields already agree
    Scalar to_field(const FieldSpec& f) const;

    std::string str() const;

  private:
    Scalar(FieldSpec f, mpq_class q, std::uint32_t r)
        : field_(f), q_(std::move(q)), r_(r) {}

    void check_same_field(const Scalar& o) const;

    FieldSpec field_;
    mpq_class q_;          // rationals only
    std::uint32_t r_ = 0;  // prime field only
};

// coefficient-wise reduction of an integer coefficient list mod p
std::vector<Scalar> reduce_integer_poly_mod_p(const std::vector<mpz_class>& coeffs,
                                              std::uint32_t p);

}  // namespace gradus
