#include <random>
#include <sstream>

#include "doctest.h"
#include "gradus/poly.hpp"

using namespace gradus;

namespace {

const FieldSpec kQQ = FieldSpec::qq();
const FieldSpec kFp = FieldSpec::fp(65537);

Polynomial random_homogeneous(const RingSpec& spec, const FieldSpec& field, int deg,
                              std::mt19937_64& rng) {
    Polynomial p(spec, field);
    for (const Monomial& m : basis(spec, Bidegree{deg, 0})) {
        long c = static_cast<long>(rng() % 11) - 5;
        if (c) p.add_term(m, Scalar::from_int(c, field));
    }
    return p;
}

std::string joined(const std::vector<Monomial>& monos, const RingSpec& spec) {
    std::string out;
    for (const Monomial& m : monos) {
        if (!out.empty()) out += " ";
        out += m.str(spec);
    }
    return out;
}

}  // namespace

TEST_SUITE("poly") {

TEST_CASE("type tuple derived data") {
    TypeTuple t = TypeTuple::from_degrees({2, 2, 2, 2});
    CHECK(t.d == 2);
    CHECK(t.r == std::array<int, 4>{0, 0, 0, 0});
    CHECK(t.t == 5);
    CHECK(t.str() == "2,2,2,2");

    TypeTuple u = TypeTuple::from_degrees({0, 2, 2, 4});
    CHECK(u.d == 0);
    CHECK(u.r == std::array<int, 4>{0, 1, 1, 2});
    CHECK(u.t == 1);

    CHECK(TypeTuple::from_degrees({1, 1, 1, 3}).t == 2);
    CHECK(TypeTuple::from_degrees({0, 0, 2, 2}).t == -1);  // t may go negative
    CHECK(TypeTuple::from_degrees({1, 1, 3, 3}).t == 3);
    CHECK(TypeTuple::from_degrees({3, 3, 3, 5}).t == 10);

    // input order is kept for reporting, degrees are sorted for the math
    TypeTuple v = TypeTuple::from_degrees({4, 0, 2, 2});
    CHECK(v.input == std::array<int, 4>{4, 0, 2, 2});
    CHECK(v.dj == std::array<int, 4>{0, 2, 2, 4});
    CHECK(v.str() == "4,0,2,2");

    CHECK(TypeTuple::from_degrees({0, 0, 0, 0}).is_trivial());
    CHECK_FALSE(TypeTuple::from_degrees({2, 2, 2, 2}).is_trivial());

    CHECK_THROWS_AS(TypeTuple::from_degrees({1, 2, 2, 2}), RingError);
    CHECK_THROWS_AS(TypeTuple::from_degrees({-2, 2, 2, 2}), RingError);
}

TEST_CASE("ring specs") {
    TypeTuple t = TypeTuple::from_degrees({0, 2, 2, 4});
    RingSpec S = RingSpec::S(t);
    CHECK(S.num_base == 3);
    CHECK(S.fiber_weights == std::vector<int>{0, 1, 1, 2});

    RingSpec T = RingSpec::T(t);
    CHECK(T.fiber_weights == std::vector<int>{0, 2});  // d0, d1

    RingSpec U = RingSpec::U(t);
    CHECK(U.fiber_weights == std::vector<int>{2, 4});  // d1, d3

    RingSpec P3 = RingSpec::P(3);
    CHECK(P3.num_base == 4);
    CHECK(P3.num_fiber() == 0);
    CHECK_THROWS_AS(RingSpec::P(-1), RingError);
}

TEST_CASE("monomial bidegrees") {
    TypeTuple t = TypeTuple::from_degrees({0, 2, 2, 4});
    RingSpec S = RingSpec::S(t);
    Monomial m{{1, 0, 2}, {0, 0, 0, 1}};  // x0 x2^2 y3
    CHECK(m.degree_in(S) == Bidegree{1, 1});
    Monomial y3{{0, 0, 0}, {0, 0, 0, 1}};
    CHECK(y3.degree_in(S) == Bidegree{-2, 1});  // negative first component is fine
    CHECK((m * y3).degree_in(S) == Bidegree{-1, 2});
    CHECK(y3.divides(m));
    CHECK_FALSE(m.divides(y3));
}

TEST_CASE("basis enumeration") {
    TypeTuple t0 = TypeTuple::from_degrees({2, 2, 2, 2});
    RingSpec S0 = RingSpec::S(t0);
    auto b11 = basis(S0, Bidegree{1, 1});
    CHECK(b11.size() == 12);  // 3 base choices x 4 fiber choices

    CHECK(basis(S0, Bidegree{5, 4}).size() == 735);

    TypeTuple t1 = TypeTuple::from_degrees({0, 2, 2, 4});
    RingSpec S1 = RingSpec::S(t1);
    auto only_y3 = basis(S1, Bidegree{-2, 1});
    REQUIRE(only_y3.size() == 1);
    CHECK(only_y3[0].str(S1) == "y3");

    CHECK(basis(S0, Bidegree{0, -1}).empty());
    CHECK(basis(S0, Bidegree{-1, 0}).empty());
}

TEST_CASE("basis order is deterministic") {
    // frozen golden order; matrix columns and certificates replay against it
    TypeTuple t = TypeTuple::from_degrees({2, 2, 2, 2});
    RingSpec S = RingSpec::S(t);
    CHECK(joined(basis(S, Bidegree{1, 1}), S) ==
          "x0*y0 x1*y0 x2*y0 x0*y1 x1*y1 x2*y1 x0*y2 x1*y2 x2*y2 x0*y3 x1*y3 x2*y3");
    CHECK(joined(basis(RingSpec::P(2), Bidegree{2, 0}), RingSpec::P(2)) ==
          "x0^2 x0*x1 x0*x2 x1^2 x1*x2 x2^2");
}

TEST_CASE("piece dimensions") {
    CHECK(piece_dim(RingSpec::P(3), Bidegree{8, 0}) == 165);  // C(11,3)
    TypeTuple t = TypeTuple::from_degrees({2, 2, 2, 2});
    CHECK(piece_dim(RingSpec::S(t), Bidegree{5, 4}) == 735);  // C(7,2)*C(7,3)
    CHECK(piece_dim(RingSpec::S(t), Bidegree{3, -1}) == 0);
    CHECK(piece_dim(RingSpec::P(2), Bidegree{-3, 0}) == 0);

    // dim must agree with the materialized list on every piece we touch
    for (auto deg : {Bidegree{0, 0}, Bidegree{3, 0}, Bidegree{2, 1}, Bidegree{1, 2},
                     Bidegree{5, 4}, Bidegree{-1, 3}}) {
        CHECK(piece_dim(RingSpec::S(t), deg) ==
              static_cast<long>(basis(RingSpec::S(t), deg).size()));
    }
    TypeTuple u = TypeTuple::from_degrees({1, 1, 3, 3});
    for (auto deg : {Bidegree{u.t, 4}, Bidegree{0, 2}, Bidegree{-2, 4}}) {
        CHECK(piece_dim(RingSpec::S(u), deg) ==
              static_cast<long>(basis(RingSpec::S(u), deg).size()));
    }
}

TEST_CASE("binomials") {
    CHECK(binomial_mpz(11, 3) == 165);
    CHECK(binomial_mpz(7, 2) * binomial_mpz(7, 3) == 735);
    CHECK(binomial_mpz(4, 0) == 1);
    CHECK(binomial_mpz(3, 5) == 0);
}

TEST_CASE("arithmetic basics") {
    RingSpec P2 = RingSpec::P(2);
    Polynomial a = parse_poly(P2, kQQ, "x0 + x1");
    Polynomial b = parse_poly(P2, kQQ, "x0 - x1");
    CHECK((a * b).str() == "x0^2 - x1^2");
    CHECK((a * Polynomial::zero(P2, kQQ)).is_zero());
    CHECK((a - a).is_zero());
    CHECK((a + b).str() == "2*x0");

    // cancellation must erase the stored term outright
    Polynomial c = parse_poly(P2, kQQ, "x0^2 + x1") - parse_poly(P2, kQQ, "x1");
    CHECK(c.term_count() == 1);
}

TEST_CASE("bidegree of homogeneous and mixed polynomials") {
    TypeTuple t = TypeTuple::from_degrees({0, 2, 2, 4});
    RingSpec S = RingSpec::S(t);
    Polynomial y0sq = Polynomial::variable(S, kQQ, true, 0, 2);
    CHECK(y0sq.bidegree() == Bidegree{0, 2});
    Polynomial mixed = y0sq + Polynomial::variable(S, kQQ, false, 0, 2);
    CHECK_FALSE(mixed.bidegree().has_value());
    CHECK_FALSE(Polynomial::zero(S, kQQ).bidegree().has_value());

    // products of fiber and base variables move the bidegree additively
    Polynomial f0 = parse_poly(S, kQQ, "x0^2 + x1^2");
    Polynomial y1 = Polynomial::variable(S, kQQ, true, 1);
    CHECK((f0 * y1).bidegree() == Bidegree{1, 1});  // (2,0) + (-1,1)
}

TEST_CASE("bidegree additivity on random pairs") {
    std::mt19937_64 rng(7);
    RingSpec P2 = RingSpec::P(2);
    for (int trial = 0; trial < 40; ++trial) {
        int da = 1 + static_cast<int>(rng() % 4), db = 1 + static_cast<int>(rng() % 4);
        Polynomial p = random_homogeneous(P2, kQQ, da, rng);
        Polynomial q = random_homogeneous(P2, kQQ, db, rng);
        if (p.is_zero() || q.is_zero()) continue;
        CHECK((p * q).bidegree() == Bidegree{da + db, 0});
    }
}

TEST_CASE("partial derivatives") {
    RingSpec P2 = RingSpec::P(2);
    Polynomial x0_5 = Polynomial::variable(P2, kQQ, false, 0, 5);
    CHECK(x0_5.partial(false, 0).str() == "5*x0^4");
    CHECK(Polynomial::variable(P2, kQQ, false, 1, 3).partial(false, 0).is_zero());

    TypeTuple t = TypeTuple::from_degrees({2, 2, 2, 2});
    RingSpec S = RingSpec::S(t);
    Polynomial f0 = parse_poly(S, kQQ, "x0^2 + 3*x1^2");
    Polynomial y0sq = Polynomial::variable(S, kQQ, true, 0, 2);
    Polynomial expected = f0.scaled(Scalar::from_int(2, kQQ)) *
                          Polynomial::variable(S, kQQ, true, 0);
    CHECK(((f0 * y0sq).partial(true, 0) - expected).is_zero());

    // degree bookkeeping: d/dx drops (1,0), d/dy_j adds (r_j,-1)
    TypeTuple u = TypeTuple::from_degrees({0, 2, 2, 4});
    RingSpec Su = RingSpec::S(u);
    Polynomial h = Polynomial::variable(Su, kQQ, true, 3, 2);  // y3^2 at (-4,2)
    CHECK(h.partial(true, 3).bidegree() == Bidegree{-2, 1});
}

TEST_CASE("Leibniz rule on random pairs") {
    std::mt19937_64 rng(11);
    RingSpec P2 = RingSpec::P(2);
    for (int trial = 0; trial < 25; ++trial) {
        Polynomial p = random_homogeneous(P2, kQQ, 2 + static_cast<int>(rng() % 3), rng);
        Polynomial q = random_homogeneous(P2, kQQ, 1 + static_cast<int>(rng() % 3), rng);
        for (int k = 0; k < 3; ++k) {
            Polynomial lhs = (p * q).partial(false, k);
            Polynomial rhs = p.partial(false, k) * q + p * q.partial(false, k);
            CHECK((lhs - rhs).is_zero());
        }
    }
}

TEST_CASE("Euler relation for homogeneous polynomials") {
    std::mt19937_64 rng(13);
    for (int n = 1; n <= 3; ++n) {
        RingSpec P = RingSpec::P(n);
        for (int trial = 0; trial < 10; ++trial) {
            int d = 1 + static_cast<int>(rng() % 5);
            Polynomial f = random_homogeneous(P, kQQ, d, rng);
            Polynomial sum(P, kQQ);
            for (int k = 0; k <= n; ++k)
                sum = sum + Polynomial::variable(P, kQQ, false, k) * f.partial(false, k);
            CHECK((sum - f.scaled(Scalar::from_int(d, kQQ))).is_zero());
        }
    }
}

TEST_CASE("power_of_linear") {
    RingSpec P2 = RingSpec::P(2);
    std::vector<Scalar> ones = {Scalar::one(kQQ), Scalar::one(kQQ), Scalar::one(kQQ)};

    Polynomial sq = power_of_linear(P2, {Scalar::one(kQQ), Scalar::one(kQQ), Scalar::zero(kQQ)}, 2);
    CHECK(sq.str() == "x0^2 + 2*x0*x1 + x1^2");

    CHECK(power_of_linear(P2, ones, 0).str() == "1");

    // cube mod the coordinate squares leaves only the mixed term
    Polynomial cube = power_of_linear(P2, ones, 3);
    CHECK(cube.coeff(Monomial{{1, 1, 1}, {}}) == Scalar::from_int(6, kQQ));
    for (const auto& [mono, c] : cube.terms()) {
        bool square_free = mono.base[0] <= 1 && mono.base[1] <= 1 && mono.base[2] <= 1;
        if (square_free) CHECK(mono == Monomial{{1, 1, 1}, {}});
    }

    CHECK_THROWS_AS(power_of_linear(P2, ones, -1), RingError);
    CHECK_THROWS_AS(power_of_linear(P2, {Scalar::one(kQQ)}, 2), RingError);
}

TEST_CASE("characteristic guard") {
    FieldSpec f5 = FieldSpec::fp(5);
    RingSpec P1 = RingSpec::P(1);
    Polynomial tall = Polynomial::variable(P1, f5, false, 0, 6);
    CHECK_THROWS_AS(tall.partial(false, 0), FieldError);
    CHECK_THROWS_AS(
        power_of_linear(P1, {Scalar::one(f5), Scalar::one(f5)}, 5), FieldError);
    // exponents strictly below p stay legal
    CHECK(Polynomial::variable(P1, f5, false, 0, 4).partial(false, 0).str() == "4*x0^3");
}

TEST_CASE("parser round trips") {
    TypeTuple t = TypeTuple::from_degrees({0, 2, 2, 4});
    RingSpec S = RingSpec::S(t);
    for (const char* text : {"3*x0^2*y1 - y3 + x0*x1*x2", "x2^5", "-x0 + 1/2*x1",
                             "y0^2*y3^2", "7"}) {
        Polynomial p = parse_poly(S, kQQ, text);
        CHECK(parse_poly(S, kQQ, p.str()).str() == p.str());
    }
    // '*' is optional on input
    CHECK(parse_poly(S, kQQ, "2x0y1").str() == parse_poly(S, kQQ, "2*x0*y1").str());
    CHECK(Polynomial::zero(S, kQQ).str() == "0");
    CHECK_THROWS_AS(parse_poly(S, kQQ, ""), RingError);

    CHECK_THROWS_AS(parse_poly(S, kQQ, "x5"), RingError);
    CHECK_THROWS_AS(parse_poly(S, kQQ, "x0^"), RingError);
    CHECK_THROWS_AS(parse_poly(S, kQQ, "1/0"), RingError);
    CHECK_THROWS_AS(parse_poly(RingSpec::P(2), kQQ, "y0"), RingError);
}

TEST_CASE("ring and field mismatches are rejected") {
    RingSpec P2 = RingSpec::P(2);
    RingSpec P3 = RingSpec::P(3);
    Polynomial a = Polynomial::variable(P2, kQQ, false, 0);
    Polynomial b = Polynomial::variable(P3, kQQ, false, 0);
    CHECK_THROWS_AS(a + b, RingError);
    Polynomial c = Polynomial::variable(P2, kFp, false, 0);
    CHECK_THROWS_AS(a + c, FieldError);
}

TEST_CASE("to_field maps a rational polynomial onto a prime field") {
    RingSpec P2 = RingSpec::P(2);
    Polynomial p = parse_poly(P2, kQQ, "1/2*x0 - x1");
    Polynomial q = p.to_field(kFp);
    CHECK(q.field() == kFp);
    CHECK(q.coeff(Monomial{{1, 0, 0}, {}}) == Scalar::from_int(2, kFp).inv());
    CHECK(q.coeff(Monomial{{0, 1, 0}, {}}) == Scalar::from_int(-1, kFp));
}

}  // TEST_SUITE
