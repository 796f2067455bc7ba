/* End-to-end acceptance gate. Each criterion prints exactly one PASS/FAIL
 * line; the exit code is the number of failed criteria. Everything runs on
 * fixed seeds so reruns are bit-identical. */

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gradus/constructions.hpp"

using namespace gradus;
using Clock = std::chrono::steady_clock;

namespace {

const FieldSpec kFp = FieldSpec::fp(65537);
const FieldSpec kQQ = FieldSpec::qq();

long ms_since(Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0)
        .count();
}

TypeTuple ty(int a, int b, int c, int d) { return TypeTuple::from_degrees({a, b, c, d}); }

const std::vector<TypeTuple>& headline_types() {
    static const std::vector<TypeTuple> types = {
        ty(2, 2, 2, 2), ty(0, 2, 2, 4), ty(1, 1, 1, 3), ty(0, 0, 2, 2),
        ty(1, 1, 1, 1), ty(1, 1, 3, 3), ty(3, 3, 3, 5)};
    return types;
}

Polynomial xpow(const RingSpec& spec, const FieldSpec& field, int k, int e) {
    return Polynomial::variable(spec, field, false, k, e);
}

Polynomial all_ones(const RingSpec& spec, const FieldSpec& field) {
    return power_of_linear(spec, std::vector<Scalar>(spec.num_base, Scalar::one(field)), 1);
}

Polynomial random_form(const RingSpec& spec, const FieldSpec& field, int deg,
                       std::mt19937_64& rng) {
    Polynomial p(spec, field);
    for (const Monomial& m : basis(spec, Bidegree{deg, 0}))
        p.add_term(m, Scalar::residue(static_cast<std::uint32_t>(rng() % field.p), field));
    return p;
}

CIQuotient monomial_ci(int n, const std::vector<int>& degrees) {
    RingSpec P = RingSpec::P(n);
    std::vector<Polynomial> gens;
    for (std::size_t k = 0; k < degrees.size(); ++k)
        gens.push_back(xpow(P, kFp, static_cast<int>(k), degrees[k]));
    return make_quotient(P, kFp, std::move(gens));
}

CIQuotient random_quotient(int n, const std::vector<int>& degrees, std::mt19937_64& rng) {
    RingSpec P = RingSpec::P(n);
    std::vector<Polynomial> gens;
    for (int d : degrees) gens.push_back(random_form(P, kFp, d, rng));
    return make_quotient(P, kFp, std::move(gens));
}

// independent per-monomial membership check, deliberately not a single
// surjectivity rank: monomial in ideal iff its indicator row is dependent
bool oracle_contains_full_piece(const MembershipProblem& prob) {
    ExactMatrix m = build_matrix(prob);
    std::size_t base_rank = m.rank_certificate().rank;
    for (std::size_t row = 0; row < m.rows(); ++row) {
        ExactMatrix ext(m.rows(), m.cols() + 1, prob.field);
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) ext.set(i, j, m.at(i, j));
        ext.set(row, m.cols(), Scalar::one(prob.field));
        if (ext.rank_certificate().rank != base_rank) return false;
    }
    return true;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

Outcome criterion_explicit_witnesses() {
    std::ostringstream os;
    bool ok = true;
    long slowest_fp = 0;
    for (const TypeTuple& t : headline_types()) {
        auto t0 = Clock::now();
        PropResult r = verify_prop_main(t, kFp);
        long elapsed = ms_since(t0);
        slowest_fp = std::max(slowest_fp, elapsed);
        if (r.verdict != PropVerdict::full) {
            ok = false;
            os << " " << t.str() << " mod p rank " << r.cert.rank << "/" << r.cert.rows
               << ";";
        }
    }
    for (const TypeTuple& t : {ty(2, 2, 2, 2), ty(0, 2, 2, 4)}) {
        auto t0 = Clock::now();
        PropResult r = verify_prop_main(t, kQQ);
        long elapsed = ms_since(t0);
        if (r.verdict != PropVerdict::full || elapsed >= 300000) {
            ok = false;
            os << " " << t.str() << " over qq rank " << r.cert.rank << "/" << r.cert.rows
               << " in " << elapsed << " ms;";
        }
    }
    if (ok)
        os << "7 types full mod p (slowest " << slowest_fp
           << " ms), 2,2,2,2 and 0,2,2,4 full over the rationals";
    return {ok, os.str()};
}

Outcome criterion_random_witnesses() {
    std::ostringstream os;
    std::vector<std::string> deficient;
    bool ok = true;
    for (const TypeTuple& t : headline_types()) {
        int full = 0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            PropResult r = verify_prop_main_random(t, kFp, seed);
            if (r.verdict == PropVerdict::full)
                ++full;
            else
                deficient.push_back(t.str() + " seed " + std::to_string(seed));
        }
        if (full < 9) {
            ok = false;
            os << " type " << t.str() << " only " << full << "/10 full;";
        }
    }
    os << (ok ? "70 random draws, 7 types x 10 seeds" : "");
    if (deficient.empty()) {
        os << (ok ? ", all full" : "");
    } else {
        os << " deficient seeds:";
        for (const std::string& f : deficient) os << " " << f;
    }
    return {ok, os.str()};
}

Outcome criterion_classical_containment() {
    std::ostringstream os;
    bool ok = true;
    for (int d = 4; d <= 6; ++d) {
        auto t0 = Clock::now();
        ClassicalNLResult r = verify_classical_nl(d, kFp);
        long elapsed = ms_since(t0);
        bool full = r.cert.full_target_rank && r.crit_cert.full_target_rank;
        if (!full || elapsed >= 10000) {
            ok = false;
            os << " d=" << d << (full ? "" : " not full") << " in " << elapsed << " ms;";
        } else {
            os << (d > 4 ? ", " : "") << "d=" << d << " full at degrees " << 3 * d - 4
               << " and " << 3 * d - 6 << " (" << elapsed << " ms)";
        }
    }
    return {ok, os.str()};
}

Outcome criterion_hilbert_functions() {
    std::mt19937_64 rng(2024);
    std::ostringstream os;
    int bad = 0;
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + trial % 3;
        std::vector<int> degrees(n + 1);
        for (int& d : degrees) d = 1 + static_cast<int>(rng() % 5);
        CIQuotient q = random_quotient(n, degrees, rng);
        HilbertReport rep = hilbert_actual(q);
        HilbertFunction expected = hilbert_ci(degrees);
        bool good = rep.is_ci && rep.actual == expected && rep.actual.symmetric() &&
                    rep.actual.h.front() == 1 && rep.actual.h.back() == 1;
        if (!good) {
            ++bad;
            os << " trial " << trial << " P" << n << " degrees";
            for (int d : degrees) os << " " << d;
            if (!rep.not_ci_reason.empty()) os << " (" << rep.not_ci_reason << ")";
            os << ";";
        }
    }
    if (bad == 0)
        os << "50 randomized quotients match the product formula, symmetric, ends 1, "
              "vanish past the socle";
    return {bad == 0, os.str()};
}

Outcome criterion_coordinate_sum_lefschetz() {
    std::ostringstream os;
    int checked = 0, bad = 0;
    auto run = [&](int n, const std::vector<int>& degrees) {
        CIQuotient q = monomial_ci(n, degrees);
        SLResult r = is_sl_element(q, all_ones(q.ring, kFp));
        ++checked;
        if (!r.ok) {
            ++bad;
            os << " P" << n << " degrees";
            for (int d : degrees) os << " " << d;
            os << ";";
        }
    };
    for (int a = 1; a <= 5; ++a)
        for (int b = 1; b <= 5; ++b) run(1, {a, b});
    for (int a = 1; a <= 5; ++a)
        for (int b = 1; b <= 5; ++b)
            for (int c = 1; c <= 5; ++c) run(2, {a, b, c});
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b)
            for (int c = 1; c <= 3; ++c)
                for (int d = 1; d <= 3; ++d) run(3, {a, b, c, d});
    if (bad == 0)
        os << "x0 + .. + xn has maximal rank at every (m,i) for all " << checked
           << " monomial intersections";
    return {bad == 0, os.str()};
}

Outcome criterion_linear_power_search() {
    std::mt19937_64 rng(77);
    RingSpec P2 = RingSpec::P(2);
    std::ostringstream os;
    int collected = 0, attempts = 0, found = 0;
    std::vector<std::string> missing;
    while (collected < 20 && attempts < 60) {
        ++attempts;
        std::vector<Scalar> coeffs;
        bool all_zero = true;
        for (int k = 0; k < 3; ++k) {
            coeffs.push_back(Scalar::residue(static_cast<std::uint32_t>(rng() % kFp.p), kFp));
            all_zero = all_zero && coeffs.back().is_zero();
        }
        if (all_zero) continue;
        int m0 = 1 + static_cast<int>(rng() % 5);
        int m1 = 1 + static_cast<int>(rng() % 5);
        int m2 = 1 + static_cast<int>(rng() % 5);
        Polynomial f0 = power_of_linear(P2, coeffs, m0);
        Polynomial f1 = random_form(P2, kFp, m1, rng);
        Polynomial f2 = random_form(P2, kFp, m2, rng);
        SLSearchResult r;
        try {
            r = harima_watanabe_check(f0, f1, f2);
        } catch (const RingError&) {
            continue;  // not a complete intersection, draw again
        }
        ++collected;
        if (r.found)
            ++found;
        else
            missing.push_back("degrees " + std::to_string(m0) + "," + std::to_string(m1) +
                              "," + std::to_string(m2));
    }
    bool ok = collected == 20 && found == collected;
    if (ok) {
        os << "20 intersections with a linear-power first generator, all found an SL "
              "element ("
           << attempts << " draws)";
    } else {
        os << "collected " << collected << "/20, found " << found;
        for (const std::string& m : missing) os << "; not found: " << m;
    }
    return {ok, os.str()};
}

Outcome criterion_power_containment_bound() {
    std::mt19937_64 rng(11);
    std::ostringstream os;
    int checked = 0, violations = 0;
    auto run = [&](const CIQuotient& q, const std::vector<int>& degrees) {
        SLSearchResult sl = find_sl_element(q);
        if (!sl.found) {
            ++violations;
            os << " no SL element for P" << q.n << ";";
            return;
        }
        int sum = 0;
        for (int d : degrees) sum += d;
        for (int k = 1; k <= 4; ++k) {
            int m_min = (sum + k - q.n - 1 + 1) / 2;  // ceil of the bound
            for (int m = m_min; m < m_min + 3; ++m) {
                ++checked;
                if (!gen4_bound_check(q, sl.ell, k, m)) {
                    ++violations;
                    os << " P" << q.n << " k=" << k << " m=" << m << " not contained;";
                }
            }
        }
    };
    for (const std::vector<int>& degrees :
         {std::vector<int>{2, 2}, {2, 3}, {4, 5}})
        run(monomial_ci(1, degrees), degrees);
    for (const std::vector<int>& degrees :
         {std::vector<int>{2, 2, 2}, {2, 3, 4}, {3, 3, 3}})
        run(monomial_ci(2, degrees), degrees);
    for (const std::vector<int>& degrees :
         {std::vector<int>{2, 2, 2, 2}, {2, 2, 3, 3}})
        run(monomial_ci(3, degrees), degrees);
    for (int trial = 0; trial < 2; ++trial) {
        std::vector<int> degrees = {2 + static_cast<int>(rng() % 3),
                                    2 + static_cast<int>(rng() % 3),
                                    2 + static_cast<int>(rng() % 3)};
        run(random_quotient(2, degrees, rng), degrees);
    }
    if (violations == 0)
        os << checked << " containments at and just above the half-sum bound, none violated";
    return {violations == 0, os.str()};
}

Outcome criterion_step_decomposition() {
    std::ostringstream os;
    bool ok = true;
    long matched = 0;
    for (const TypeTuple& t : headline_types()) {
        DecompositionReport rep = verify_decomposition(t, kFp);
        matched += rep.monomials_matched;
        if (!rep.pass) {
            ok = false;
            os << " type " << t.str() << ":";
            for (const StepReport& s : rep.steps)
                if (!s.pass) os << " step " << s.step << " failed;";
            for (const ClassCheck& c : rep.classes)
                if (!c.in_ideal) os << " class " << c.label << " not in ideal;";
            if (!rep.covering_complete) os << " covering incomplete;";
        }
    }
    if (ok)
        os << "7 types, all step checks and all 26 fiber classes pass, " << matched
           << " monomials matched to a divisor class";
    return {ok, os.str()};
}

Outcome criterion_negative_controls() {
    std::ostringstream os;
    bool ok = true;
    ControlResult broken = negative_control_remark(ty(0, 0, 0, 6), "g33", kFp);
    if (broken.bound_satisfied || broken.outcome.verdict != PropVerdict::deficient ||
        broken.outcome.cokernel != 1 || broken.outcome.cokernel_reps.size() != 1 ||
        broken.outcome.cokernel_reps[0].str(RingSpec::S(broken.type)) !=
            "x0^4*x1^4*x2^4*y3^4") {
        ok = false;
        os << " 0,0,0,6 without g33: expected cokernel {x0^4*x1^4*x2^4*y3^4}, got "
           << (broken.outcome.full() ? "full" : "deficient") << " cokernel "
           << broken.outcome.cokernel << ";";
    }
    ControlResult fine = negative_control_remark(ty(2, 2, 2, 2), "g33", kFp);
    if (!fine.bound_satisfied || fine.outcome.verdict != PropVerdict::full) {
        ok = false;
        os << " 2,2,2,2 without g33 should stay full;";
    }
    ControlResult other = negative_control_remark(ty(0, 0, 0, 6), "g11", kFp);
    if (!other.bound_satisfied || other.outcome.verdict != PropVerdict::full) {
        ok = false;
        os << " 0,0,0,6 without g11 should stay full;";
    }
    if (ok)
        os << "rank drops by exactly the predicted class without g33 on 0,0,0,6, stays "
              "full when the bound holds";
    return {ok, os.str()};
}

Outcome criterion_oracle_agreement() {
    std::mt19937_64 rng(5);
    RingSpec P2 = RingSpec::P(2);
    std::ostringstream os;
    int checked = 0, disagreements = 0;
    auto compare = [&](const MembershipProblem& prob, const char* label) {
        ++checked;
        bool fast = contains_full_piece(prob).full_target_rank;
        bool slow = oracle_contains_full_piece(prob);
        if (fast != slow) {
            ++disagreements;
            os << " " << label << " target " << prob.target.m << ": rank says "
               << (fast ? "full" : "not full") << ", oracle disagrees;";
        }
    };
    auto problem = [&](std::vector<Polynomial> gens, int target, const FieldSpec& field) {
        MembershipProblem prob;
        prob.spec = P2;
        prob.field = field;
        prob.generators = std::move(gens);
        prob.target = Bidegree{target, 0};
        return prob;
    };

    for (int target = 3; target <= 4; ++target)
        compare(problem({xpow(P2, kQQ, 0, 2), xpow(P2, kQQ, 1, 2), xpow(P2, kQQ, 2, 2)},
                        target, kQQ),
                "squares");
    for (int target = 6; target <= 7; ++target)
        compare(problem({xpow(P2, kQQ, 0, 3), xpow(P2, kQQ, 1, 3), xpow(P2, kQQ, 2, 3)},
                        target, kQQ),
                "cubes");
    compare(problem({xpow(P2, kQQ, 0, 1), xpow(P2, kQQ, 1, 1), xpow(P2, kQQ, 2, 1)}, 1, kQQ),
            "coordinates");
    compare(problem({}, 2, kQQ), "no generators");
    compare(problem({xpow(P2, kQQ, 0, 1)}, 3, kQQ), "single coordinate");
    {
        Polynomial quadric = parse_poly(P2, kQQ, "x0*x1 - x2^2");
        compare(problem({quadric, xpow(P2, kQQ, 0, 3), xpow(P2, kQQ, 1, 3),
                         xpow(P2, kQQ, 2, 3)},
                        6, kQQ),
                "quadric plus cubes");
    }
    for (int trial = 0; trial < 30; ++trial) {
        FieldSpec field = trial % 2 ? kQQ : kFp;
        int num_gens = 1 + static_cast<int>(rng() % 4);
        std::vector<Polynomial> gens;
        for (int i = 0; i < num_gens; ++i) {
            int deg = 1 + static_cast<int>(rng() % 3);
            Polynomial p(P2, field);
            for (const Monomial& m : basis(P2, Bidegree{deg, 0})) {
                long c = static_cast<long>(rng() % 7) - 3;  // sparse, signed
                if (c) p.add_term(m, Scalar::from_int(c, field));
            }
            gens.push_back(p);
        }
        int target = 1 + static_cast<int>(rng() % 6);
        compare(problem(std::move(gens), target, field), "random");
    }
    if (disagreements == 0)
        os << checked << " problems, rank certificate and per-monomial oracle agree on all";
    return {disagreements == 0, os.str()};
}

}  // namespace

int main() {
    struct Criterion {
        const char* what;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"explicit witnesses certify the full target piece", criterion_explicit_witnesses},
        {"random witnesses stay full across seeds", criterion_random_witnesses},
        {"classical Fermat containment at 3d-4 and 3d-6", criterion_classical_containment},
        {"measured Hilbert functions match the product formula", criterion_hilbert_functions},
        {"coordinate sum is a strong Lefschetz element", criterion_coordinate_sum_lefschetz},
        {"SL search succeeds after a linear-power generator", criterion_linear_power_search},
        {"containment above the half-sum degree bound", criterion_power_containment_bound},
        {"step decomposition covers every fiber class", criterion_step_decomposition},
        {"dropping a square g component breaks exactly the predicted types",
         criterion_negative_controls},
        {"rank certificates agree with the brute-force oracle", criterion_oracle_agreement},
    };
    int failures = 0;
    int index = 0;
    for (const Criterion& c : criteria) {
        ++index;
        auto t0 = Clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s criterion %d: %s; %s  [%ld ms]\n", out.pass ? "PASS" : "FAIL",
                    index, c.what, out.detail.c_str(), ms_since(t0));
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures;
}
