#include "gradus/scalar.hpp"

namespace gradus {

bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t q = 3; q * q <= n; q += 2)
        if (n % q == 0) return false;
    return true;
}

FieldSpec FieldSpec::fp(std::uint32_t p) {
    if (!is_prime_u32(p))
        throw FieldError("modulus " + std::to_string(p) + " is not prime");
    if (p >= (1u << 31))
        throw FieldError("modulus too large (must fit below 2^31)");
    return FieldSpec{Kind::prime, p};
}

FieldSpec FieldSpec::parse(const std::string& text) {
    if (text == "qq") return qq();
    if (text.rfind("fp:", 0) == 0) {
        const std::string num = text.substr(3);
        if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
            throw FieldError("bad field spec '" + text + "'");
        unsigned long v = std::stoul(num);
        if (v >= (1ul << 31)) throw FieldError("modulus too large in '" + text + "'");
        return fp(static_cast<std::uint32_t>(v));
    }
    throw FieldError("bad field spec '" + text + "' (expected qq or fp:PRIME)");
}

std::string FieldSpec::str() const {
    return is_fp() ? "fp:" + std::to_string(p) : "qq";
}

std::uint32_t fp_add(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
    std::uint32_t s = a + b;
    return s >= p ? s - p : s;
}

std::uint32_t fp_sub(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
    return a >= b ? a - b : a + p - b;
}

std::uint32_t fp_mul(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
    return static_cast<std::uint32_t>((std::uint64_t)a * b % p);
}

std::uint32_t fp_pow(std::uint32_t a, std::uint64_t e, std::uint32_t p) {
    std::uint32_t r = 1 % p;
    while (e) {
        if (e & 1) r = fp_mul(r, a, p);
        a = fp_mul(a, a, p);
        e >>= 1;
    }
    return r;
}

std::uint32_t fp_inv(std::uint32_t a, std::uint32_t p) {
    if (a == 0) throw FieldError("division by zero in Z/" + std::to_string(p));
    // extended Euclid on (a, p)
    std::int64_t t = 0, new_t = 1, r = p, new_r = a;
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        std::int64_t tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (t < 0) t += p;
    return static_cast<std::uint32_t>(t);
}

std::uint32_t fp_from_mpz(const mpz_class& z, std::uint32_t p) {
    mpz_class m = z % p;
    if (m < 0) m += p;
    return static_cast<std::uint32_t>(m.get_ui());
}

Scalar Scalar::from_int(long v, const FieldSpec& f) {
    if (f.is_fp()) {
        long m = v % static_cast<long>(f.p);
        if (m < 0) m += f.p;
        return Scalar(f, mpq_class(), static_cast<std::uint32_t>(m));
    }
    return Scalar(f, mpq_class(v), 0);
}

Scalar Scalar::from_mpz(const mpz_class& v, const FieldSpec& f) {
    if (f.is_fp()) return Scalar(f, mpq_class(), fp_from_mpz(v, f.p));
    return Scalar(f, mpq_class(v), 0);
}

Scalar Scalar::rational(const mpq_class& v) {
    mpq_class q = v;
    q.canonicalize();
    return Scalar(FieldSpec::qq(), std::move(q), 0);
}

Scalar Scalar::residue(std::uint32_t v, const FieldSpec& f) {
    if (!f.is_fp()) throw FieldError("residue() requires a prime field");
    return Scalar(f, mpq_class(), v % f.p);
}

bool Scalar::is_zero() const {
    return field_.is_fp() ? r_ == 0 : q_ == 0;
}

bool Scalar::is_one() const {
    return field_.is_fp() ? r_ == 1 % field_.p : q_ == 1;
}

void Scalar::check_same_field(const Scalar& o) const {
    if (!(field_ == o.field_))
        throw FieldError("field mismatch: " + field_.str() + " vs " + o.field_.str());
}

Scalar Scalar::operator+(const Scalar& o) const {
    check_same_field(o);
    if (field_.is_fp()) return Scalar(field_, mpq_class(), fp_add(r_, o.r_, field_.p));
    return Scalar(field_, q_ + o.q_, 0);
}

Scalar Scalar::operator-(const Scalar& o) const {
    check_same_field(o);
    if (field_.is_fp()) return Scalar(field_, mpq_class(), fp_sub(r_, o.r_, field_.p));
    return Scalar(field_, q_ - o.q_, 0);
}

Scalar Scalar::operator*(const Scalar& o) const {
    check_same_field(o);
    if (field_.is_fp()) return Scalar(field_, mpq_class(), fp_mul(r_, o.r_, field_.p));
    return Scalar(field_, q_ * o.q_, 0);
}

Scalar Scalar::operator/(const Scalar& o) const {
    check_same_field(o);
    if (o.is_zero()) throw FieldError("division by zero");
    if (field_.is_fp())
        return Scalar(field_, mpq_class(), fp_mul(r_, fp_inv(o.r_, field_.p), field_.p));
    return Scalar(field_, q_ / o.q_, 0);
}

Scalar Scalar::operator-() const {
    if (field_.is_fp())
        return Scalar(field_, mpq_class(), r_ == 0 ? 0 : field_.p - r_);
    return Scalar(field_, -q_, 0);
}

Scalar Scalar::inv() const {
    return one(field_) / *this;
}

bool Scalar::operator==(const Scalar& o) const {
    if (!(field_ == o.field_)) return false;
    return field_.is_fp() ? r_ == o.r_ : q_ == o.q_;
}

const mpq_class& Scalar::rat() const {
    if (field_.is_fp()) throw FieldError("rat() on a prime-field scalar");
    return q_;
}

std::uint32_t Scalar::res() const {
    if (!field_.is_fp()) throw FieldError("res() on a rational scalar");
    return r_;
}

Scalar Scalar::to_field(const FieldSpec& f) const {
    if (f == field_) return *this;
    if (field_.is_fp())
        throw FieldError("cannot lift a Z/p scalar into " + f.str());
    // rational into Z/p: num * den^{-1}, requires p coprime to den
    std::uint32_t num = fp_from_mpz(q_.get_num(), f.p);
    std::uint32_t den = fp_from_mpz(q_.get_den(), f.p);
    if (den == 0)
        throw FieldError("denominator divisible by " + std::to_string(f.p));
    return Scalar(f, mpq_class(), fp_mul(num, fp_inv(den, f.p), f.p));
}

std::string Scalar::str() const {
    if (field_.is_fp()) return std::to_string(r_);
    return q_.get_str();
}

std::vector<Scalar> reduce_integer_poly_mod_p(const std::vector<mpz_class>& coeffs,
                                              std::uint32_t p) {
    FieldSpec f = FieldSpec::fp(p);
    std::vector<Scalar> out;
    out.reserve(coeffs.size());
    for (const auto& c : coeffs) out.push_back(Scalar::from_mpz(c, f));
    return out;
}

}  // namespace gradus
