#include "gradus/poly.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace gradus {

TypeTuple TypeTuple::from_degrees(const std::array<int, 4>& degrees) {
    TypeTuple tt;
    tt.input = degrees;
    for (int v : degrees) {
        if (v < 0) throw RingError("type degrees must be nonnegative");
        if ((v & 1) != (degrees[0] & 1))
            throw RingError("type degrees must all have the same parity");
    }
    tt.dj = degrees;
    std::sort(tt.dj.begin(), tt.dj.end());
    tt.d = tt.dj[0];
    int rsum = 0;
    for (int j = 0; j < 4; ++j) {
        tt.r[j] = (tt.dj[j] - tt.d) / 2;
        rsum += tt.r[j];
    }
    tt.t = 4 * tt.d - 3 + rsum;
    return tt;
}

std::string TypeTuple::str() const {
    std::string s;
    for (int j = 0; j < 4; ++j) {
        if (j) s += ",";
        s += std::to_string(input[j]);
    }
    return s;
}

static std::vector<std::string> numbered(const std::string& stem, const std::vector<int>& ids) {
    std::vector<std::string> out;
    for (int i : ids) out.push_back(stem + std::to_string(i));
    return out;
}

RingSpec RingSpec::S(const TypeTuple& type) {
    RingSpec s;
    s.label = "S";
    s.num_base = 3;
    s.fiber_weights = {type.r[0], type.r[1], type.r[2], type.r[3]};
    s.base_names = numbered("x", {0, 1, 2});
    s.fiber_names = numbered("y", {0, 1, 2, 3});
    return s;
}

RingSpec RingSpec::T(const TypeTuple& type) {
    RingSpec s;
    s.label = "T";
    s.num_base = 3;
    s.fiber_weights = {type.dj[0], type.dj[1]};
    s.base_names = numbered("x", {0, 1, 2});
    s.fiber_names = numbered("z", {0, 1});
    return s;
}

RingSpec RingSpec::U(const TypeTuple& type) {
    RingSpec s;
    s.label = "U";
    s.num_base = 3;
    s.fiber_weights = {type.dj[1], type.dj[3]};
    s.base_names = numbered("x", {0, 1, 2});
    s.fiber_names = numbered("z", {1, 3});
    return s;
}

RingSpec RingSpec::P(int n) {
    if (n < 0) throw RingError("P_n needs n >= 0");
    RingSpec s;
    s.label = "P" + std::to_string(n);
    s.num_base = n + 1;
    std::vector<int> ids(n + 1);
    for (int i = 0; i <= n; ++i) ids[i] = i;
    s.base_names = numbered("x", ids);
    return s;
}

Bidegree Monomial::degree_in(const RingSpec& spec) const {
    long m = 0, n = 0;
    for (int a : base) m += a;
    for (size_t j = 0; j < fiber.size(); ++j) {
        m -= static_cast<long>(fiber[j]) * spec.fiber_weights[j];
        n += fiber[j];
    }
    return {m, n};
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r = *this;
    for (size_t i = 0; i < r.base.size(); ++i) r.base[i] += o.base[i];
    for (size_t i = 0; i < r.fiber.size(); ++i) r.fiber[i] += o.fiber[i];
    return r;
}

bool Monomial::divides(const Monomial& o) const {
    for (size_t i = 0; i < base.size(); ++i)
        if (base[i] > o.base[i]) return false;
    for (size_t i = 0; i < fiber.size(); ++i)
        if (fiber[i] > o.fiber[i]) return false;
    return true;
}

std::string Monomial::str(const RingSpec& spec) const {
    std::string s;
    auto app = [&s](const std::string& name, int e) {
        if (e == 0) return;
        if (!s.empty()) s += "*";
        s += name;
        if (e != 1) s += "^" + std::to_string(e);
    };
    for (size_t i = 0; i < base.size(); ++i) app(spec.base_names[i], base[i]);
    for (size_t j = 0; j < fiber.size(); ++j) app(spec.fiber_names[j], fiber[j]);
    return s.empty() ? "1" : s;
}

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const {
    long fa = 0, fb = 0;
    for (int e : a.fiber) fa += e;
    for (int e : b.fiber) fb += e;
    if (fa != fb) return fa < fb;
    if (a.fiber != b.fiber) return a.fiber > b.fiber;  // lex descending
    long ba = 0, bb = 0;
    for (int e : a.base) ba += e;
    for (int e : b.base) bb += e;
    if (ba != bb) return ba < bb;
    return a.base > b.base;
}

Polynomial Polynomial::constant(const RingSpec& spec, const Scalar& c) {
    Polynomial p(spec, c.field());
    Monomial one{std::vector<int>(spec.num_base, 0), std::vector<int>(spec.num_fiber(), 0)};
    p.add_term(one, c);
    return p;
}

Polynomial Polynomial::monomial(const RingSpec& spec, const Monomial& mono, const Scalar& c) {
    Polynomial p(spec, c.field());
    p.add_term(mono, c);
    return p;
}

Polynomial Polynomial::variable(const RingSpec& spec, const FieldSpec& field, bool fiber,
                                int idx, int exponent) {
    Monomial m{std::vector<int>(spec.num_base, 0), std::vector<int>(spec.num_fiber(), 0)};
    if (fiber)
        m.fiber.at(idx) = exponent;
    else
        m.base.at(idx) = exponent;
    return monomial(spec, m, Scalar::one(field));
}

void Polynomial::add_term(const Monomial& mono, const Scalar& c) {
    if (static_cast<int>(mono.base.size()) != spec_.num_base ||
        static_cast<int>(mono.fiber.size()) != spec_.num_fiber())
        throw RingError("monomial does not fit the ring");
    if (c.is_zero()) return;
    auto it = terms_.find(mono);
    if (it == terms_.end()) {
        terms_.emplace(mono, c);
    } else {
        Scalar s = it->second + c;
        if (s.is_zero())
            terms_.erase(it);
        else
            it->second = s;
    }
}

Scalar Polynomial::coeff(const Monomial& mono) const {
    auto it = terms_.find(mono);
    return it == terms_.end() ? Scalar::zero(field_) : it->second;
}

std::optional<Bidegree> Polynomial::bidegree() const {
    if (terms_.empty()) return std::nullopt;
    Bidegree deg = terms_.begin()->first.degree_in(spec_);
    for (const auto& [mono, c] : terms_)
        if (!(mono.degree_in(spec_) == deg)) return std::nullopt;
    return deg;
}

void Polynomial::check_compatible(const Polynomial& o) const {
    if (spec_ != o.spec_) throw RingError("ring mismatch");
    if (!(field_ == o.field_)) throw FieldError("field mismatch between polynomials");
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    check_compatible(o);
    Polynomial r = *this;
    for (const auto& [mono, c] : o.terms_) r.add_term(mono, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    check_compatible(o);
    Polynomial r = *this;
    for (const auto& [mono, c] : o.terms_) r.add_term(mono, -c);
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    check_compatible(o);
    Polynomial r(spec_, field_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, ca * cb);
    return r;
}

Polynomial Polynomial::scaled(const Scalar& c) const {
    Polynomial r(spec_, field_);
    if (c.is_zero()) return r;
    for (const auto& [mono, k] : terms_) r.add_term(mono, k * c);
    return r;
}

Polynomial Polynomial::partial(bool fiber, int idx) const {
    Polynomial r(spec_, field_);
    for (const auto& [mono, c] : terms_) {
        int e = fiber ? mono.fiber.at(idx) : mono.base.at(idx);
        if (e == 0) continue;
        if (field_.is_fp() && static_cast<std::uint32_t>(e) >= field_.p)
            throw FieldError("characteristic too small for exponent " + std::to_string(e));
        Monomial m = mono;
        if (fiber)
            m.fiber[idx] -= 1;
        else
            m.base[idx] -= 1;
        r.add_term(m, c * Scalar::from_int(e, field_));
    }
    return r;
}

Polynomial Polynomial::to_field(const FieldSpec& f) const {
    Polynomial r(spec_, f);
    for (const auto& [mono, c] : terms_) r.add_term(mono, c.to_field(f));
    return r;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [mono, c] : terms_) {
        std::string cs = c.str();
        bool neg = !cs.empty() && cs[0] == '-';
        if (neg) cs = cs.substr(1);
        if (s.empty()) {
            if (neg) s += "-";
        } else {
            s += neg ? " - " : " + ";
        }
        std::string ms = mono.str(spec_);
        if (ms == "1")
            s += cs;
        else if (cs == "1")
            s += ms;
        else
            s += cs + "*" + ms;
    }
    return s;
}

namespace {

// emits all nonnegative vectors of given length summing to total, first
// coordinate largest first (lex descending)
void enumerate_compositions(int length, int total,
                            const std::function<void(const std::vector<int>&)>& sink) {
    std::vector<int> cur(length, 0);
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == length - 1) {
            cur[pos] = remaining;
            sink(cur);
            return;
        }
        for (int v = remaining; v >= 0; --v) {
            cur[pos] = v;
            rec(pos + 1, remaining - v);
        }
    };
    if (length == 0) {
        if (total == 0) sink(cur);
        return;
    }
    rec(0, total);
}

}  // namespace

std::vector<Monomial> basis(const RingSpec& spec, const Bidegree& deg) {
    std::vector<Monomial> out;
    if (deg.n < 0) return out;
    enumerate_compositions(spec.num_fiber(), static_cast<int>(deg.n), [&](const std::vector<int>& b) {
        long base_total = deg.m;
        for (size_t j = 0; j < b.size(); ++j)
            base_total += static_cast<long>(b[j]) * spec.fiber_weights[j];
        if (base_total < 0) return;
        enumerate_compositions(spec.num_base, static_cast<int>(base_total),
                               [&](const std::vector<int>& a) {
                                   out.push_back(Monomial{a, b});
                               });
    });
    std::sort(out.begin(), out.end(), MonomialLess{});
    return out;
}

mpz_class binomial_mpz(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

long piece_dim(const RingSpec& spec, const Bidegree& deg) {
    if (deg.n < 0) return 0;
    mpz_class total = 0;
    enumerate_compositions(spec.num_fiber(), static_cast<int>(deg.n), [&](const std::vector<int>& b) {
        long m = deg.m;
        for (size_t j = 0; j < b.size(); ++j)
            m += static_cast<long>(b[j]) * spec.fiber_weights[j];
        if (m < 0) return;
        total += binomial_mpz(m + spec.num_base - 1, spec.num_base - 1);
    });
    return static_cast<long>(total.get_si());
}

Polynomial power_of_linear(const RingSpec& spec, const std::vector<Scalar>& coeffs,
                           int exponent) {
    if (exponent < 0) throw RingError("negative exponent");
    if (static_cast<int>(coeffs.size()) != spec.num_base)
        throw RingError("coefficient count must match base variables");
    FieldSpec field = coeffs.empty() ? FieldSpec::qq() : coeffs[0].field();
    if (field.is_fp() && static_cast<std::uint32_t>(exponent) >= field.p)
        throw FieldError("characteristic too small for exponent " + std::to_string(exponent));
    Polynomial r(spec, field);
    mpz_class kfact;
    mpz_fac_ui(kfact.get_mpz_t(), static_cast<unsigned long>(exponent));
    enumerate_compositions(spec.num_base, exponent, [&](const std::vector<int>& e) {
        mpz_class multi = kfact;
        Scalar c = Scalar::one(field);
        for (size_t i = 0; i < e.size(); ++i) {
            mpz_class f;
            mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(e[i]));
            multi /= f;
            for (int rep = 0; rep < e[i]; ++rep) c = c * coeffs[i];
        }
        if (c.is_zero()) return;
        c = c * Scalar::from_mpz(multi, field);
        r.add_term(Monomial{e, std::vector<int>(spec.num_fiber(), 0)}, c);
    });
    return r;
}

namespace {

struct Parser {
    const RingSpec& spec;
    FieldSpec field;
    const std::string& text;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    long read_uint() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) throw RingError("expected number at position " + std::to_string(start));
        return std::stol(text.substr(start, pos - start));
    }

    // returns (found, is_fiber, index)
    bool read_variable(bool& is_fiber, int& idx) {
        skip_ws();
        auto try_list = [&](const std::vector<std::string>& names, bool fiber) {
            for (size_t i = 0; i < names.size(); ++i) {
                const std::string& n = names[i];
                if (text.compare(pos, n.size(), n) == 0) {
                    // longest-match guard: don't match "x1" inside "x12"
                    size_t after = pos + n.size();
                    if (after < text.size() && std::isdigit(static_cast<unsigned char>(text[after])))
                        continue;
                    pos = after;
                    is_fiber = fiber;
                    idx = static_cast<int>(i);
                    return true;
                }
            }
            return false;
        };
        return try_list(spec.fiber_names, true) || try_list(spec.base_names, false);
    }

    Polynomial parse_term(bool negative) {
        Scalar c = Scalar::one(field);
        bool saw_coeff = false;
        skip_ws();
        if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            long num = read_uint();
            long den = 1;
            if (eat('/')) den = read_uint();
            if (den == 0) throw RingError("zero denominator");
            c = Scalar::from_int(num, field) / Scalar::from_int(den, field);
            saw_coeff = true;
        }
        Monomial mono{std::vector<int>(spec.num_base, 0),
                      std::vector<int>(spec.num_fiber(), 0)};
        bool saw_var = false;
        for (;;) {
            skip_ws();
            if (pos < text.size() && text[pos] == '*') {
                ++pos;
                continue;
            }
            bool is_fiber = false;
            int idx = 0;
            if (!read_variable(is_fiber, idx)) break;
            saw_var = true;
            int e = 1;
            if (eat('^')) e = static_cast<int>(read_uint());
            if (is_fiber)
                mono.fiber[idx] += e;
            else
                mono.base[idx] += e;
        }
        if (!saw_coeff && !saw_var)
            throw RingError("empty term at position " + std::to_string(pos));
        if (negative) c = -c;
        return Polynomial::monomial(spec, mono, c);
    }

    Polynomial parse() {
        Polynomial total(spec, field);
        bool neg = eat('-');
        if (!neg) eat('+');
        total = total + parse_term(neg);
        for (;;) {
            skip_ws();
            if (pos >= text.size()) break;
            if (eat('+'))
                total = total + parse_term(false);
            else if (eat('-'))
                total = total + parse_term(true);
            else
                throw RingError("unexpected character at position " + std::to_string(pos));
        }
        return total;
    }
};

}  // namespace

Polynomial parse_poly(const RingSpec& spec, const FieldSpec& field, const std::string& text) {
    Parser p{spec, field, text};
    return p.parse();
}

}  // namespace gradus
