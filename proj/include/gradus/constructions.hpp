#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gradus/graded_ideal.hpp"
#include "gradus/lefschetz.hpp"
#include "gradus/linalg.hpp"
#include "gradus/poly.hpp"

namespace gradus {

/* f = f0 y0^2 + f1 y1^2 + f2 y2^2 + f3 y3^2 in S(d,2); component j is
 * homogeneous of degree (d_j, 0). A component of degree 0 is the constant 1
 * (a unit, so y_j is killed immediately by the relation f_j y_j). */
struct QuadricForm {
    TypeTuple type;
    FieldSpec field = FieldSpec::qq();
    std::array<Polynomial, 4> f_components;
    Polynomial f;
};

/* Named component recipes. step1 is the generic witness used for the main
 * containment (Vandermonde nodes 1..4 keep every subset of the components a
 * complete intersection); the others are the special shapes each sub-claim
 * is proved with. step4 and nl_fermat coincide (all-Fermat components). */
enum class FVariant { step1, step2, step3, step4, nl_fermat };

QuadricForm build_explicit_f(const TypeTuple& type, FVariant variant,
                             const FieldSpec& field);

// every coefficient drawn uniformly: residues over Z/p, integers in [-10,10]
// over the rationals; component j draws from its own labeled stream
QuadricForm random_f(const TypeTuple& type, const FieldSpec& field,
                     std::uint64_t seed);

/* g = g11 y1^2 + g33 y3^2 + sum_{i<j} gij yi yj in S(t-d, 2); the square
 * components g00 and g22 have no slot at all. deg gij = t-d+r_i+r_j (and
 * t-d+2r_1, t-d+2r_3 for the squares); a negative degree means the component
 * is identically zero. */
struct GForm {
    TypeTuple type;
    FieldSpec field = FieldSpec::qq();
    Polynomial g11, g33;
    std::array<Polynomial, 6> pairs;  // 01, 02, 03, 12, 13, 23
    Polynomial g;

    Polynomial& pair_component(int i, int j);
    const Polynomial& pair_component(int i, int j) const;

    // recompute g from the components after an edit
    void assemble();
};

/* Explicit components g11 = x2^(t-d+2r1), g12 = nu^(t-d+r1+r2),
 * g23 = mu^(t-d+r2+r3), g33 = mu^(t-d+2r3), all other slots zero.
 * mu and nu must be linear; they are certified as strong Lefschetz elements
 * for the complete intersections (f1, f2, g11) resp.
 * (x0^(d0+d2+d3-1), f2, f3) built from the step3 components, whenever those
 * triples are genuine intersections (no unit member, nonzero g11).
 * Certification failure throws RingError. */
GForm build_explicit_g(const TypeTuple& type, const Polynomial& mu,
                       const Polynomial& nu);

// picks mu and nu by Lefschetz search over the named intersections (the
// all-ones form wins whenever it certifies) and builds over `field`
GForm build_explicit_g(const TypeTuple& type, const FieldSpec& field);

GForm random_g(const TypeTuple& type, const FieldSpec& field,
               std::uint64_t seed);

/* Minor of the Jacobian (df_j/dx_k) with column j removed: 3x3 over
 * k in {0,1,2} when d_0 > 0; 2x2 over k in {0,1} and columns {1,2,3} when
 * d_0 = 0 (then j = 0 has no minor and det is the zero polynomial).
 * deg det = sum(d) - d_j - 3, or sum(d) - d_j - 2 in the 2x2 case. */
struct MinorMatrix {
    int j = 0;
    std::vector<std::vector<Polynomial>> entries;  // row-major
    Polynomial det;
};

MinorMatrix minor_det(const QuadricForm& form, int j);

// (t,4) piece spanned by the seven partials of f alone (no g)
IdealPieceBasis partials_piece(const QuadricForm& form, const FieldSpec& field);

struct DetSign {
    int sign = +1;
    bool plus_works = false;
    bool minus_works = false;
    bool both_sides_zero = false;  // d0 = 0 with i or j = 0: y0 is killed
    long products_checked = 0;
};

/* Finds the sign eps with (det A_j) y_i^2 == eps (det A_i) y_j^2 modulo the
 * span of the partials of f, checked on every multiple landing in (t,4).
 * Throws RingError when neither sign verifies. */
DetSign det_congruence_sign(const QuadricForm& form, int i, int j,
                            const IdealPieceBasis& df_piece);

struct StepCheck {
    std::string label;
    bool pass = false;
    std::string detail;
};

struct StepReport {
    int step = 0;
    TypeTuple type;
    bool pass = false;
    std::vector<StepCheck> checks;

    std::string str() const;
};

/* Verifies the machinery one containment step rests on:
 *   1: (f0,f1,f2) contains the full piece in degree d0+d1+d2-2, plus the
 *      degree bound r3+r_j+d >= 1 per live component.
 *   2: the T-ring containment in degree (d0+d1-3, 1) with the step2
 *      components, the bound t+3r0+r1 >= 2d0+d1-3, and the three derivative
 *      congruences (df0/dx_k y0^2 + df1/dx_k y1^2) y0 y1 == 0, recorded
 *      per k since only their sum over k is forced by symmetry.
 *   3: the U-ring containment in degree (t-d+2r2, 1) from the seven listed
 *      generators, the congruence signs eps_ij, every edge of the
 *      replacement diagram, a directed path from each index pair into
 *      {1,2}, and the bounds r2 >= r1-3, r1 >= r0-1, r_tau2 >= r_tau3-1.
 *   4: per component the derivative triple containment (j < 3, degree
 *      3d_j-5) or the g33-augmented containment (j = 3, degree t+4r3),
 *      plus the degree bounds.
 * Steps 1 and 2 are inherently symmetric in the indices, so they run once;
 * steps 3 and 4 iterate over the documented pairs and components. */
StepReport verify_step(const TypeTuple& type, int step, const FieldSpec& field);

// one fiber class of S(t,4) monomials, e.g. y0*y1*y2 or y1^2*y2^2
struct ClassCheck {
    Monomial rep;
    std::string label;
    int handled_by_step = 0;
    bool in_ideal = false;
    long multiples = 0;
};

struct DecompositionReport {
    TypeTuple type;
    std::array<StepReport, 4> steps;
    std::vector<ClassCheck> classes;  // 4 triples, 12 cubes, 6 pairs, 4 fourths
    bool covering_complete = false;   // every S(t,4) monomial hit a class
    long monomials_matched = 0;
    bool pass = false;
};

// the four step reports, all 26 fiber classes reduced against the explicit
// ideal piece, and the divisibility covering of S(t,4)
DecompositionReport verify_decomposition(const TypeTuple& type,
                                         const FieldSpec& field);

enum class PropVerdict { full, deficient, trivially_rational };

struct PropResult {
    TypeTuple type;
    FieldSpec field = FieldSpec::qq();
    PropVerdict verdict = PropVerdict::deficient;
    RankCertificate cert;
    long cokernel = 0;
    std::vector<Monomial> cokernel_reps;  // filled by the negative control

    bool full() const { return verdict != PropVerdict::deficient; }
};

// target piece (t,4), generators {df/dx0..dx2, df/dy0..dy3, g}
MembershipProblem main_problem(const QuadricForm& form, const GForm& gform);

// headline containment for one type: explicit witness components
PropResult verify_prop_main(const TypeTuple& type, const FieldSpec& field);

// same containment at a random point of the component space
PropResult verify_prop_main_random(const TypeTuple& type, const FieldSpec& field,
                                   std::uint64_t seed);

struct ClassicalNLResult {
    int d = 0;
    Polynomial ell;            // certified Lefschetz element of P3/(x_i^(d-1))
    RankCertificate cert;      // containment at degree 3d-4
    RankCertificate crit_cert; // containment at the bound degree 3d-6
};

/* Fermat hypersurface x0^d + .. + x3^d in P3: the piece of degree 3d-4 lies
 * in (x0^(d-1), .., x3^(d-1), ell^(2d-4)). Requires d >= 4. */
ClassicalNLResult verify_classical_nl(int d, const FieldSpec& field);

struct ControlResult {
    TypeTuple type;
    std::string zeroed;          // "g11" or "g33"
    bool bound_satisfied = false;
    PropResult outcome;
};

/* Reruns the explicit containment with one square component of g forced to
 * zero. Dropping g33 can only succeed when d3 <= d0+d1+d2+4; dropping g11
 * only when d3 <= d2+6. Outside the bound the rank must drop. */
ControlResult negative_control_remark(const TypeTuple& type,
                                      const std::string& zeroed,
                                      const FieldSpec& field);

}  // namespace gradus
