#pragma once

#include <boost/rational.hpp>

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

namespace ellfrob {

using Int = std::int64_t;
using Rational = boost::rational<Int>;

// overflow-checked int64 arithmetic; throws Overflow
Int checked_add(Int a, Int b);
Int checked_sub(Int a, Int b);
Int checked_mul(Int a, Int b);

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(int rows, int cols);
    IntMatrix(std::initializer_list<std::initializer_list<Int>> rows);
    static IntMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Int& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * cols_ + j)]; }
    Int operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * cols_ + j)]; }

    IntMatrix transpose() const;
    IntMatrix operator*(const IntMatrix& o) const;
    IntMatrix operator-() const;
    bool operator==(const IntMatrix& o) const = default;

    Int determinant() const;       // Bareiss, exact
    IntMatrix inverse() const;     // NotInvertible unless det = +-1
    IntMatrix power(int k) const;  // negative k uses the inverse
    // the upper-left / arbitrary block
    IntMatrix block(int r0, int c0, int nr, int nc) const;
    std::vector<Int> apply(const std::vector<Int>& v) const;

    std::vector<std::vector<Int>> to_rows() const;
    std::string to_string() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Int> a_;
};

// S: simples S(1), S(2), S(3); P: projectives P(3), P(2), P(1); R: alpha, delta1, delta2
enum class Basis { S, P, R };
const char* basis_name(Basis b);
Basis parse_basis(const std::string& s);

// columns are the basis vectors of `b` written in P coordinates
const IntMatrix& basis_to_P(Basis b);
IntMatrix change_of_basis(Basis from, Basis to);

struct KClass {
    std::array<Int, 3> coords{};
    Basis basis = Basis::P;

    KClass in(Basis target) const;
    bool operator==(const KClass& o) const; // compares as classes, basis-independent
    KClass operator+(const KClass& o) const;
    KClass operator-(const KClass& o) const;
    KClass operator-() const;
    KClass scaled(Int k) const;
    std::string to_string() const;
};

KClass k_alpha();
KClass k_delta1();
KClass k_delta2();
// alpha_1 = [S(1)], alpha_2 = [S(2)], alpha_3 = [S(3)]
KClass k_simple_root(int i);

IntMatrix euler_matrix(Basis b);
Int euler_form(const KClass& x, const KClass& y);
// symmetrised form I = chi + chi^T
Int symmetric_form(const KClass& x, const KClass& y);
IntMatrix serre_matrix(Basis b);

enum class Form { chi, I, I_tilde };

struct LatticeMap {
    IntMatrix matrix;
    Form preserved_form = Form::chi;
    Basis basis = Basis::R; // for rank-3 maps

    bool preserves_form() const;
};

// x -> x - sum chi(e_i, x) e_i, written in `out`
LatticeMap twist_matrix(const std::vector<KClass>& classes, Basis out = Basis::R);

// ---- braid words ----

struct BraidGenerator {
    int index;  // 1 or 2
    int power;  // nonzero
};
struct ShiftTriple {
    std::array<Int, 3> n;
};
using BraidToken = std::variant<BraidGenerator, ShiftTriple>;
using BraidWord = std::vector<BraidToken>;

// "s1 s2^-1 [1,0,2]"; ParseError on malformed input
BraidWord parse_braid_word(const std::string& text);
std::string to_string(const BraidWord& w);

using ClassTriple = std::array<KClass, 3>;
ClassTriple projective_triple(); // (P3, P2, P1)
bool is_class_exceptional(const ClassTriple& t);
// tokens act from the right, left to right; NotExceptional if the input is not class-exceptional
ClassTriple mutate(const ClassTriple& t, const BraidWord& w);

using Mat2 = std::array<std::array<Int, 2>, 2>;
Mat2 braid_to_sl2(const BraidWord& w);
Mat2 mat2_mul(const Mat2& a, const Mat2& b);

// ---- real roots ----

// +-alpha - (p+1) delta1 - (q+1) delta2
KClass root_from_pq(int sign, Int p, Int q);
bool is_real_root(const KClass& x);
std::vector<KClass> enumerate_roots(int height_bound);

// r_beta(x) = x - I(beta, x) beta on the rank-3 lattice, in the R basis.
// `reflection` requires a real root; `reflection_norm2` only I(v, v) = 2 (needed for r_alpha).
LatticeMap reflection(const KClass& root);
LatticeMap reflection_norm2(const KClass& v);

// ---- rank 5: basis (kappa1, kappa2, alpha, delta2, delta1) ----

using Rank5Class = std::array<Int, 5>;
const IntMatrix& i_tilde();
Rank5Class to_rank5(const KClass& x);
Int i_tilde_form(const Rank5Class& a, const Rank5Class& b);
LatticeMap reflection(const Rank5Class& root);

// generators by role: r1, r2, r3 (simple reflections), c = r1 r2 r3, tau1 = r2 r3, tau2 = r2 r1
IntMatrix rank3_generator(const std::string& name);
IntMatrix rank5_generator(const std::string& name);

const std::vector<std::string>& relation_ids();
bool group_relation_check(const std::string& relation_id);

// ---- chi_a spectrum ----

struct ChiASpectrum {
    double a;
    std::array<double, 4> charpoly;     // t^3 + c[2] t^2 + c[1] t + c[0], stored c[0..3]
    std::array<double, 4> factored;     // (t-1)(t^2 - (a^3-3a^2+2) t + 1) expanded
    std::array<std::complex<double>, 3> eigenvalues;
    std::array<double, 3> phases;       // arg / 2 pi in [-1/2, 1/2]
    double eigen_residual;              // against a general eigen-solver
};
ChiASpectrum chi_a_spectrum(double a);
// exact characteristic polynomial coefficients c[0..3] of chi_a^{-1} chi_a^T
std::array<Rational, 4> chi_a_charpoly_exact(Rational a);
std::array<Rational, 4> chi_a_charpoly_factored(Rational a);

// sum of squared exponents at a = 2 and (1/12) * 3 * 2
std::pair<Rational, Rational> variance_identity();

} // namespace ellfrob
