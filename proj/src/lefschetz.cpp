#include "gradus/lefschetz.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace gradus {

bool HilbertFunction::symmetric() const {
    const std::size_t n = h.size();
    for (std::size_t i = 0; i < n; ++i)
        if (h[i] != h[n - 1 - i]) return false;
    return true;
}

bool HilbertFunction::unimodal() const {
    bool falling = false;
    for (std::size_t i = 1; i < h.size(); ++i) {
        if (h[i] < h[i - 1]) falling = true;
        else if (h[i] > h[i - 1] && falling) return false;
    }
    return true;
}

std::string HilbertFunction::str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (i) os << ",";
        os << h[i];
    }
    os << "]";
    return os.str();
}

HilbertFunction hilbert_ci(const std::vector<int>& degrees) {
    for (int m : degrees)
        if (m < 1) throw RingError("hilbert_ci needs degrees >= 1");
    std::vector<long> h{1};
    for (int m : degrees) {
        std::vector<long> next(h.size() + m - 1, 0);
        for (std::size_t i = 0; i < h.size(); ++i)
            for (int k = 0; k < m; ++k) next[i + k] += h[i];
        h = std::move(next);
    }
    return HilbertFunction{std::move(h)};
}

CIQuotient make_quotient(const RingSpec& ring, const FieldSpec& field,
                         std::vector<Polynomial> generators) {
    if (!ring.fiber_weights.empty())
        throw RingError("quotient ring must have base variables only");
    CIQuotient q;
    q.ring = ring;
    q.field = field;
    q.n = ring.num_base - 1;
    for (Polynomial& g : generators) {
        Polynomial gf = g.to_field(field);
        auto deg = gf.bidegree();
        if (!deg || deg->n != 0)
            throw RingError("quotient generator must be homogeneous in the base variables");
        q.generator_degrees.push_back(deg->m);
        q.socle_degree += deg->m - 1;
        q.generators.push_back(std::move(gf));
    }
    return q;
}

namespace {

MembershipProblem piece_problem(const CIQuotient& q, int m) {
    MembershipProblem prob;
    prob.spec = q.ring;
    prob.field = q.field;
    prob.generators = q.generators;
    prob.target = Bidegree{m, 0};
    return prob;
}

}  // namespace

HilbertReport hilbert_actual(const CIQuotient& q) {
    HilbertReport rep;
    const int s = q.socle_degree;
    for (int m = 0; m <= s; ++m)
        rep.actual.h.push_back(static_cast<long>(quotient_piece_dim(piece_problem(q, m))));

    if (static_cast<int>(q.generators.size()) != q.n + 1) {
        rep.not_ci_reason = "expected " + std::to_string(q.n + 1) + " generators, got " +
                            std::to_string(q.generators.size());
        return rep;
    }
    const HilbertFunction expect = hilbert_ci(q.generator_degrees);
    for (int m = 0; m <= s; ++m)
        if (rep.actual.h[m] != expect.h[m]) {
            rep.not_ci_reason = "h(" + std::to_string(m) + ") = " +
                                std::to_string(rep.actual.h[m]) + ", product formula gives " +
                                std::to_string(expect.h[m]);
            return rep;
        }
    if (quotient_piece_dim(piece_problem(q, s + 1)) != 0) {
        rep.not_ci_reason = "piece at degree " + std::to_string(s + 1) + " does not vanish";
        return rep;
    }
    rep.is_ci = true;
    return rep;
}

QuotientPieces::QuotientPieces(const CIQuotient& q, int max_degree) : q_(q) {
    degrees_.reserve(max_degree + 1);
    for (int m = 0; m <= max_degree; ++m) {
        DegreeData d{IdealPieceBasis(piece_problem(q, m)), {}, {}};
        const auto& pivots = d.piece.cert().pivot_cols;
        std::size_t next_pivot = 0;
        const auto& monos = d.piece.piece_monomials();
        d.std_pos.assign(monos.size(), static_cast<std::size_t>(-1));
        for (std::size_t j = 0; j < monos.size(); ++j) {
            if (next_pivot < pivots.size() && pivots[next_pivot] == j) {
                ++next_pivot;
                continue;
            }
            d.std_pos[j] = d.std_monos.size();
            d.std_monos.push_back(monos[j]);
        }
        degrees_.push_back(std::move(d));
    }
}

std::size_t QuotientPieces::dim(int m) const {
    if (m < 0 || m >= static_cast<int>(degrees_.size())) return 0;
    return degrees_[m].std_monos.size();
}

const std::vector<Monomial>& QuotientPieces::standard_monomials(int m) const {
    return degrees_.at(m).std_monos;
}

ExactMatrix QuotientPieces::multiplication_map(const Polynomial& h, int m) const {
    auto deg = h.bidegree();
    if (!deg || deg->n != 0) throw RingError("multiplication map needs a homogeneous base polynomial");
    const int mt = m + deg->m;
    const DegreeData& src = degrees_.at(m);
    const DegreeData& dst = degrees_.at(mt);
    const Polynomial hf = h.to_field(q_.field);

    ExactMatrix out(dst.std_monos.size(), src.std_monos.size(), q_.field);
    const bool fp = q_.field.is_fp();
    std::vector<std::uint32_t> vfp;
    for (std::size_t col = 0; col < src.std_monos.size(); ++col) {
        const Monomial& b = src.std_monos[col];
        if (fp) {
            vfp.assign(dst.piece.piece_dim(), 0u);
            for (const auto& [mono, coef] : hf.terms())
                vfp[dst.piece.piece_index(mono * b)] = coef.res();
            fp_row_space_reduce_inplace(dst.piece.rref_rows(), dst.piece.cert(), vfp);
            for (std::size_t j = 0; j < vfp.size(); ++j)
                if (vfp[j]) out.fp_at(dst.std_pos[j], col) = vfp[j];
        } else {
            std::vector<Scalar> v(dst.piece.piece_dim(), Scalar::zero(q_.field));
            for (const auto& [mono, coef] : hf.terms())
                v[dst.piece.piece_index(mono * b)] = coef;
            std::vector<Scalar> res = row_space_reduce(dst.piece.rref_rows(), dst.piece.cert(), v);
            for (std::size_t j = 0; j < res.size(); ++j)
                if (!res[j].is_zero()) out.set(dst.std_pos[j], col, res[j]);
        }
    }
    return out;
}

namespace {

SLResult sl_check(const QuotientPieces& pieces, const CIQuotient& q, const Polynomial& ell) {
    SLResult result;
    result.ok = true;
    const int s = q.socle_degree;
    Polynomial power = Polynomial::constant(q.ring, Scalar::one(q.field));
    const Polynomial ellf = ell.to_field(q.field);
    for (int i = 1; i <= s; ++i) {
        power = power * ellf;
        for (int m = 0; m + i <= s; ++m) {
            const std::size_t expected = std::min(pieces.dim(m), pieces.dim(m + i));
            if (expected == 0) continue;
            ExactMatrix map = pieces.multiplication_map(power, m);
            const RankCertificate cert = map.rank_certificate(expected);
            if (cert.rank != expected) {
                result.ok = false;
                result.failures.push_back(SLFailure{m, i, cert.rank, expected});
            }
        }
    }
    return result;
}

}  // namespace

SLResult is_sl_element(const CIQuotient& q, const Polynomial& ell) {
    auto deg = ell.bidegree();
    if (!deg || !(*deg == Bidegree{1, 0}))
        throw RingError("Lefschetz candidate must be homogeneous linear");
    QuotientPieces pieces(q, q.socle_degree);
    return sl_check(pieces, q, ell);
}

bool gen3_bound_check(const CIQuotient& q) {
    int msum = 0;
    for (int m : q.generator_degrees) msum += m;
    const int bound = msum - q.n;  // one past the socle degree
    return quotient_piece_dim(piece_problem(q, bound)) == 0 &&
           quotient_piece_dim(piece_problem(q, bound - 1)) == 1;
}

bool gen3_bound_check(const std::vector<int>& degrees) {
    const int n = static_cast<int>(degrees.size()) - 1;
    const RingSpec P = RingSpec::P(n);
    const FieldSpec F = FieldSpec::fp(65537);
    std::vector<Polynomial> gens;
    for (int j = 0; j <= n; ++j)
        gens.push_back(Polynomial::variable(P, F, false, j, degrees[j]));
    return gen3_bound_check(make_quotient(P, F, std::move(gens)));
}

bool gen4_bound_check(const CIQuotient& q, const Polynomial& ell, int k, int m) {
    Polynomial power = Polynomial::constant(q.ring, Scalar::one(q.field));
    const Polynomial ellf = ell.to_field(q.field);
    for (int i = 0; i < k; ++i) power = power * ellf;
    MembershipProblem prob = piece_problem(q, m);
    prob.generators.push_back(power);
    return contains_full_piece(prob).full_target_rank;
}

namespace {

std::vector<std::vector<int>> sl_candidates(int nvars, std::uint64_t seed) {
    std::vector<std::vector<int>> out;
    out.emplace_back(nvars, 1);  // the all-ones form first

    // sign-normalized 0/+-1 vectors
    long total = 1;
    for (int i = 0; i < nvars; ++i) total *= 3;
    for (long code = 1; code < total && out.size() < 200; ++code) {
        std::vector<int> v(nvars, 0);
        long c = code;
        for (int i = 0; i < nvars; ++i) {
            const int digit = static_cast<int>(c % 3);
            c /= 3;
            v[i] = digit == 2 ? -1 : digit;
        }
        int first = 0;
        while (first < nvars && v[first] == 0) ++first;
        if (first == nvars || v[first] != 1) continue;
        if (std::all_of(v.begin(), v.end(), [](int x) { return x == 1; })) continue;
        out.push_back(std::move(v));
    }

    std::mt19937_64 rng(seed ^ 0x51efc7e7u);
    std::uniform_int_distribution<int> coef(1, 97);
    while (out.size() < 200) {
        std::vector<int> v(nvars);
        for (int& x : v) x = coef(rng);
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace

SLSearchResult find_sl_element(const CIQuotient& q, std::uint64_t seed) {
    const FieldSpec fp = FieldSpec::fp(65537);
    CIQuotient qp = q;
    if (!(q.field.is_fp() && q.field.p == 65537)) {
        qp.field = fp;
        for (Polynomial& g : qp.generators) g = g.to_field(fp);
    }
    QuotientPieces pieces(qp, qp.socle_degree);

    SLSearchResult result;
    for (const std::vector<int>& coeffs : sl_candidates(q.n + 1, seed)) {
        Polynomial ell = Polynomial::zero(qp.ring, qp.field);
        for (int i = 0; i <= q.n; ++i)
            if (coeffs[i])
                ell = ell + Polynomial::variable(qp.ring, qp.field, false, i)
                                .scaled(Scalar::from_int(coeffs[i], qp.field));
        if (ell.is_zero()) continue;
        ++result.tried;
        if (sl_check(pieces, qp, ell).ok) {
            result.found = true;
            result.coefficients = coeffs;
            Polynomial orig = Polynomial::zero(q.ring, q.field);
            for (int i = 0; i <= q.n; ++i)
                if (coeffs[i])
                    orig = orig + Polynomial::variable(q.ring, q.field, false, i)
                                      .scaled(Scalar::from_int(coeffs[i], q.field));
            result.ell = orig;
            return result;
        }
    }
    return result;
}

SLSearchResult harima_watanabe_check(const Polynomial& f0_linear_power,
                                     const Polynomial& f1, const Polynomial& f2) {
    const RingSpec& P = f0_linear_power.ring();
    if (P.num_base != 3 || !P.fiber_weights.empty())
        throw RingError("harima_watanabe_check works in P_2");
    CIQuotient q = make_quotient(P, f0_linear_power.field(),
                                 {f0_linear_power, f1, f2});
    const HilbertReport rep = hilbert_actual(q);
    if (!rep.is_ci)
        throw RingError("harima_watanabe_check precondition: not a complete intersection (" +
                        rep.not_ci_reason + ")");
    return find_sl_element(q);
}

}  // namespace gradus
