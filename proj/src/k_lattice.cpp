#include "ellfrob/k_lattice.hpp"

#include "ellfrob/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <regex>
#include <sstream>

namespace ellfrob {

Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw Overflow("int64 addition");
    return r;
}

Int checked_sub(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r)) throw Overflow("int64 subtraction");
    return r;
}

Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow("int64 multiplication");
    return r;
}

// ---------------------------------------------------------------- IntMatrix

IntMatrix::IntMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows * cols), 0) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<Int>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != cols_) throw std::invalid_argument("IntMatrix: ragged rows");
        a_.insert(a_.end(), r.begin(), r.end());
    }
}

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("IntMatrix: shape mismatch");
    IntMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < o.cols_; ++j) {
            Int s = 0;
            for (int k = 0; k < cols_; ++k) s = checked_add(s, checked_mul((*this)(i, k), o(k, j)));
            r(i, j) = s;
        }
    return r;
}

IntMatrix IntMatrix::operator-() const {
    IntMatrix r = *this;
    for (auto& v : r.a_) v = checked_sub(0, v);
    return r;
}

Int IntMatrix::determinant() const {
    if (rows_ != cols_) throw std::invalid_argument("determinant of a non-square matrix");
    const int n = rows_;
    if (n == 0) return 1;
    IntMatrix m = *this;
    Int sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m(k, k) == 0) {
            int piv = k + 1;
            while (piv < n && m(piv, k) == 0) ++piv;
            if (piv == n) return 0;
            for (int j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m(i, j) = checked_sub(checked_mul(m(i, j), m(k, k)), checked_mul(m(i, k), m(k, j))) / prev;
        prev = m(k, k);
    }
    return checked_mul(sign, m(n - 1, n - 1));
}

IntMatrix IntMatrix::block(int r0, int c0, int nr, int nc) const {
    IntMatrix b(nr, nc);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

IntMatrix IntMatrix::inverse() const {
    const Int det = determinant();
    if (det != 1 && det != -1) throw NotInvertible("determinant " + std::to_string(det) + " is not a unit");
    const int n = rows_;
    IntMatrix inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            IntMatrix minor(n - 1, n - 1);
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor(rr, cc++) = (*this)(r, c);
                }
                ++rr;
            }
            const Int cof = ((i + j) % 2 ? -1 : 1) * minor.determinant();
            inv(j, i) = cof * det; // det is its own inverse
        }
    return inv;
}

IntMatrix IntMatrix::power(int k) const {
    IntMatrix base = k < 0 ? inverse() : *this;
    IntMatrix r = identity(rows_);
    for (int i = 0; i < std::abs(k); ++i) r = r * base;
    return r;
}

std::vector<Int> IntMatrix::apply(const std::vector<Int>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("IntMatrix::apply: size mismatch");
    std::vector<Int> r(static_cast<std::size_t>(rows_), 0);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) r[static_cast<std::size_t>(i)] = checked_add(r[static_cast<std::size_t>(i)], checked_mul((*this)(i, k), v[static_cast<std::size_t>(k)]));
    return r;
}

std::vector<std::vector<Int>> IntMatrix::to_rows() const {
    std::vector<std::vector<Int>> out(static_cast<std::size_t>(rows_));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out[static_cast<std::size_t>(i)].push_back((*this)(i, j));
    return out;
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < rows_; ++i) {
        os << (i ? ", [" : "[");
        for (int j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j);
        os << ']';
    }
    os << ']';
    return os.str();
}

// ---------------------------------------------------------------- bases

const char* basis_name(Basis b) {
    switch (b) {
    case Basis::S: return "S";
    case Basis::P: return "P";
    case Basis::R: return "R";
    }
    return "?";
}

Basis parse_basis(const std::string& s) {
    if (s == "S") return Basis::S;
    if (s == "P") return Basis::P;
    if (s == "R") return Basis::R;
    throw ParseError("unknown basis '" + s + "' (expected S, P or R)");
}

const IntMatrix& basis_to_P(Basis b) {
    // S(1) = 2P3 - 2P2 + P1, S(2) = -2P3 + P2, S(3) = P3
    static const IntMatrix S{{2, -2, 1}, {-2, 1, 0}, {1, 0, 0}};
    static const IntMatrix P = IntMatrix::identity(3);
    // alpha = P3 - P2 + P1, delta1 = P2 - P3, delta2 = P1 - P2
    static const IntMatrix R{{1, -1, 0}, {-1, 1, -1}, {1, 0, 1}};
    switch (b) {
    case Basis::S: return S;
    case Basis::P: return P;
    case Basis::R: return R;
    }
    return P;
}

IntMatrix change_of_basis(Basis from, Basis to) { return basis_to_P(to).inverse() * basis_to_P(from); }

namespace {

std::vector<Int> as_vec(const std::array<Int, 3>& a) { return {a[0], a[1], a[2]}; }
std::array<Int, 3> as_arr(const std::vector<Int>& v) { return {v[0], v[1], v[2]}; }

} // namespace

KClass KClass::in(Basis target) const {
    if (target == basis) return *this;
    return {as_arr(change_of_basis(basis, target).apply(as_vec(coords))), target};
}

bool KClass::operator==(const KClass& o) const { return in(Basis::P).coords == o.in(Basis::P).coords; }

KClass KClass::operator+(const KClass& o) const {
    const KClass b = o.in(basis);
    return {{checked_add(coords[0], b.coords[0]), checked_add(coords[1], b.coords[1]), checked_add(coords[2], b.coords[2])},
            basis};
}

KClass KClass::operator-(const KClass& o) const { return *this + (-o); }
KClass KClass::operator-() const { return scaled(-1); }

KClass KClass::scaled(Int k) const {
    return {{checked_mul(k, coords[0]), checked_mul(k, coords[1]), checked_mul(k, coords[2])}, basis};
}

std::string KClass::to_string() const {
    std::ostringstream os;
    os << basis_name(basis) << '(' << coords[0] << ',' << coords[1] << ',' << coords[2] << ')';
    return os.str();
}

KClass k_alpha() { return {{1, 0, 0}, Basis::R}; }
KClass k_delta1() { return {{0, 1, 0}, Basis::R}; }
KClass k_delta2() { return {{0, 0, 1}, Basis::R}; }

KClass k_simple_root(int i) {
    switch (i) {
    case 1: return k_alpha() - k_delta1();
    case 2: return -k_alpha() + k_delta1() + k_delta2();
    case 3: return k_alpha() - k_delta2();
    }
    throw std::out_of_range("simple root index must be 1, 2 or 3");
}

IntMatrix euler_matrix(Basis b) {
    static const IntMatrix chiP{{1, 2, 2}, {0, 1, 2}, {0, 0, 1}};
    const IntMatrix& M = basis_to_P(b);
    return M.transpose() * chiP * M;
}

Int euler_form(const KClass& x, const KClass& y) {
    const auto u = x.in(Basis::P).coords, v = y.in(Basis::P).coords;
    const IntMatrix chi = euler_matrix(Basis::P);
    Int s = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s = checked_add(s, checked_mul(checked_mul(u[i], chi(i, j)), v[j]));
    return s;
}

Int symmetric_form(const KClass& x, const KClass& y) { return checked_add(euler_form(x, y), euler_form(y, x)); }

IntMatrix serre_matrix(Basis b) {
    const IntMatrix chi = euler_matrix(b);
    return chi.inverse() * chi.transpose();
}

bool LatticeMap::preserves_form() const {
    IntMatrix F;
    switch (preserved_form) {
    case Form::chi: F = euler_matrix(basis); break;
    case Form::I: {
        const IntMatrix chi = euler_matrix(basis), chiT = chi.transpose();
        F = IntMatrix(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) F(i, j) = checked_add(chi(i, j), chiT(i, j));
        break;
    }
    case Form::I_tilde: F = i_tilde(); break;
    }
    return matrix.transpose() * F * matrix == F;
}

LatticeMap twist_matrix(const std::vector<KClass>& classes, Basis out) {
    if (classes.empty()) throw std::invalid_argument("twist_matrix: empty class list");
    IntMatrix M(3, 3);
    for (int j = 0; j < 3; ++j) {
        KClass x{{0, 0, 0}, out};
        x.coords[static_cast<std::size_t>(j)] = 1;
        KClass img = x;
        for (const KClass& e : classes) img = img - e.scaled(euler_form(e, x));
        const auto c = img.in(out).coords;
        for (int i = 0; i < 3; ++i) M(i, j) = c[static_cast<std::size_t>(i)];
    }
    const Int det = M.determinant();
    if (det != 1 && det != -1)
        throw NotInvertible("twist matrix has determinant " + std::to_string(det) +
                            "; the classes do not shadow an exceptional cycle");
    return {M, Form::chi, out};
}

// ---------------------------------------------------------------- braid words

BraidWord parse_braid_word(const std::string& text) {
    static const std::regex gen(R"(^(?:s|sigma)([12])(?:\^(-?\d+))?$)");
    BraidWord w;
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        if (text[i] == '[') {
            const auto close = text.find(']', i);
            if (close == std::string::npos) throw ParseError("unterminated shift triple in '" + text + "'");
            std::string body = text.substr(i + 1, close - i - 1);
            std::replace(body.begin(), body.end(), ',', ' ');
            std::istringstream is(body);
            ShiftTriple s{};
            if (!(is >> s.n[0] >> s.n[1] >> s.n[2])) throw ParseError("shift triple needs three integers: '[" + body + "]'");
            std::string rest;
            if (is >> rest) throw ParseError("shift triple has extra entries: '[" + body + "]'");
            w.emplace_back(s);
            i = close + 1;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '[') ++j;
        const std::string tok = text.substr(i, j - i);
        std::smatch m;
        if (!std::regex_match(tok, m, gen)) throw ParseError("bad braid token '" + tok + "'");
        const int power = m[2].matched ? std::stoi(m[2].str()) : 1;
        if (power == 0) throw ParseError("zero exponent in '" + tok + "'");
        w.emplace_back(BraidGenerator{std::stoi(m[1].str()), power});
        i = j;
    }
    return w;
}

std::string to_string(const BraidWord& w) {
    std::ostringstream os;
    bool first = true;
    for (const auto& t : w) {
        if (!first) os << ' ';
        first = false;
        if (const auto* g = std::get_if<BraidGenerator>(&t)) {
            os << 's' << g->index;
            if (g->power != 1) os << '^' << g->power;
        } else {
            const auto& s = std::get<ShiftTriple>(t);
            os << '[' << s.n[0] << ',' << s.n[1] << ',' << s.n[2] << ']';
        }
    }
    return os.str();
}

ClassTriple projective_triple() {
    return {KClass{{1, 0, 0}, Basis::P}, KClass{{0, 1, 0}, Basis::P}, KClass{{0, 0, 1}, Basis::P}};
}

bool is_class_exceptional(const ClassTriple& t) {
    for (int i = 0; i < 3; ++i) {
        if (euler_form(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(i)]) != 1) return false;
        for (int j = i + 1; j < 3; ++j)
            if (euler_form(t[static_cast<std::size_t>(j)], t[static_cast<std::size_t>(i)]) != 0) return false;
    }
    return true;
}

namespace {

ClassTriple step(const ClassTriple& t, int index, bool inverse) {
    const auto& [e1, e2, e3] = t;
    if (index == 1) {
        const Int x = euler_form(e1, e2);
        return inverse ? ClassTriple{e2, e2.scaled(x) - e1, e3} : ClassTriple{e1.scaled(x) - e2, e1, e3};
    }
    const Int x = euler_form(e2, e3);
    return inverse ? ClassTriple{e1, e3, e3.scaled(x) - e2} : ClassTriple{e1, e2.scaled(x) - e3, e2};
}

} // namespace

ClassTriple mutate(const ClassTriple& t, const BraidWord& w) {
    if (!is_class_exceptional(t)) throw NotExceptional("input triple is not class-exceptional");
    ClassTriple cur = t;
    for (auto& c : cur) c = c.in(Basis::P);
    for (const auto& tok : w) {
        if (const auto* g = std::get_if<BraidGenerator>(&tok)) {
            for (int k = 0; k < std::abs(g->power); ++k) cur = step(cur, g->index, g->power < 0);
        } else {
            const auto& s = std::get<ShiftTriple>(tok);
            for (int i = 0; i < 3; ++i)
                if (s.n[static_cast<std::size_t>(i)] % 2 != 0) cur[static_cast<std::size_t>(i)] = -cur[static_cast<std::size_t>(i)];
        }
    }
    if (!is_class_exceptional(cur)) throw NotExceptional("mutation left the class-exceptional locus");
    return cur;
}

Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
    Mat2 r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r[i][j] = checked_add(checked_mul(a[i][0], b[0][j]), checked_mul(a[i][1], b[1][j]));
    return r;
}

namespace {

// delta-block of [T_{S_i}^{-1}] and of its inverse
const std::array<Mat2, 2>& sl2_generator(int index) {
    static const auto build = [](const KClass& s) {
        const IntMatrix inv = twist_matrix({s}).matrix.inverse();
        const IntMatrix fwd = inv.inverse();
        auto to2 = [](const IntMatrix& m) {
            return Mat2{{{m(1, 1), m(1, 2)}, {m(2, 1), m(2, 2)}}};
        };
        return std::array<Mat2, 2>{to2(inv), to2(fwd)};
    };
    static const std::array<Mat2, 2> g1 = build(k_delta1()), g2 = build(k_delta2());
    return index == 1 ? g1 : g2;
}

} // namespace

Mat2 braid_to_sl2(const BraidWord& w) {
    Mat2 r{{{1, 0}, {0, 1}}};
    for (const auto& tok : w) {
        const auto* g = std::get_if<BraidGenerator>(&tok);
        if (!g) continue; // shifts act trivially on the delta lattice up to sign pairs
        const Mat2& m = sl2_generator(g->index)[g->power < 0 ? 1 : 0];
        for (int k = 0; k < std::abs(g->power); ++k) r = mat2_mul(r, m);
    }
    return r;
}

// ---------------------------------------------------------------- roots

KClass root_from_pq(int sign, Int p, Int q) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("root sign must be +1 or -1");
    return {{sign, checked_sub(-p, 1), checked_sub(-q, 1)}, Basis::R};
}

bool is_real_root(const KClass& x) {
    const auto r = x.in(Basis::R).coords;
    if (r[0] != 1 && r[0] != -1) return false;
    const Int p = -r[1] - 1, q = -r[2] - 1;
    return checked_mul(p, q) % 2 == 0;
}

std::vector<KClass> enumerate_roots(int height_bound) {
    if (height_bound < 0) throw std::invalid_argument("height bound must be nonnegative");
    std::vector<KClass> out;
    for (int sign : {1, -1})
        for (Int p = -height_bound; p <= height_bound; ++p)
            for (Int q = -height_bound; q <= height_bound; ++q)
                if ((p * q) % 2 == 0) out.push_back(root_from_pq(sign, p, q));
    return out;
}

LatticeMap reflection_norm2(const KClass& v) {
    if (symmetric_form(v, v) != 2) throw NotARoot(v.to_string() + " does not have I(v,v) = 2");
    IntMatrix M(3, 3);
    for (int j = 0; j < 3; ++j) {
        KClass x{{0, 0, 0}, Basis::R};
        x.coords[static_cast<std::size_t>(j)] = 1;
        const auto c = (x - v.scaled(symmetric_form(v, x))).in(Basis::R).coords;
        for (int i = 0; i < 3; ++i) M(i, j) = c[static_cast<std::size_t>(i)];
    }
    return {M, Form::I, Basis::R};
}

LatticeMap reflection(const KClass& root) {
    if (!is_real_root(root)) throw NotARoot(root.in(Basis::R).to_string() + " is not a real root");
    return reflection_norm2(root);
}

// ---------------------------------------------------------------- rank 5

const IntMatrix& i_tilde() {
    static const IntMatrix I{{0, 0, 0, 0, 1}, {0, 0, 0, -1, 0}, {0, 0, 2, 0, 0}, {0, -1, 0, 0, 0}, {1, 0, 0, 0, 0}};
    return I;
}

Rank5Class to_rank5(const KClass& x) {
    const auto r = x.in(Basis::R).coords;
    return {0, 0, r[0], r[2], r[1]};
}

Int i_tilde_form(const Rank5Class& a, const Rank5Class& b) {
    const IntMatrix& I = i_tilde();
    Int s = 0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) s = checked_add(s, checked_mul(checked_mul(a[static_cast<std::size_t>(i)], I(i, j)), b[static_cast<std::size_t>(j)]));
    return s;
}

LatticeMap reflection(const Rank5Class& root) {
    if (root[0] != 0 || root[1] != 0) throw NotARoot("rank-5 reflection expects the image of a rank-3 root");
    const KClass r3{{root[2], root[4], root[3]}, Basis::R};
    if (!is_real_root(r3)) throw NotARoot(r3.to_string() + " is not a real root");
    IntMatrix M = IntMatrix::identity(5);
    for (int j = 0; j < 5; ++j) {
        Rank5Class e{};
        e[static_cast<std::size_t>(j)] = 1;
        const Int k = i_tilde_form(root, e);
        for (int i = 0; i < 5; ++i) M(i, j) = checked_sub(M(i, j), checked_mul(k, root[static_cast<std::size_t>(i)]));
    }
    return {M, Form::I_tilde, Basis::R};
}

namespace {

IntMatrix from_words(const std::string& name, const std::map<std::string, IntMatrix>& simple, const std::string& what) {
    if (auto it = simple.find(name); it != simple.end()) return it->second;
    const IntMatrix &r1 = simple.at("r1"), &r2 = simple.at("r2"), &r3 = simple.at("r3");
    if (name == "c") return r1 * r2 * r3;
    if (name == "tau1") return r2 * r3;
    if (name == "tau2") return r2 * r1;
    throw std::invalid_argument("unknown " + what + " generator '" + name + "'");
}

} // namespace

IntMatrix rank3_generator(const std::string& name) {
    static const std::map<std::string, IntMatrix> simple{
        {"r1", reflection(k_simple_root(1)).matrix},
        {"r2", reflection(k_simple_root(2)).matrix},
        {"r3", reflection(k_simple_root(3)).matrix},
        {"r_alpha", reflection_norm2(k_alpha()).matrix},
    };
    return from_words(name, simple, "rank-3");
}

IntMatrix rank5_generator(const std::string& name) {
    static const std::map<std::string, IntMatrix> simple{
        {"r1", reflection(to_rank5(k_simple_root(1))).matrix},
        {"r2", reflection(to_rank5(k_simple_root(2))).matrix},
        {"r3", reflection(to_rank5(k_simple_root(3))).matrix},
    };
    return from_words(name, simple, "rank-5");
}

namespace {

// matrix whose columns are the images of (alpha, delta1, delta2, kappa1, kappa2), each image given
// by its coefficients on the same ordered list
IntMatrix rank5_from_images(const std::array<std::array<Int, 5>, 5>& images) {
    // position of (alpha, delta1, delta2, kappa1, kappa2) in (kappa1, kappa2, alpha, delta2, delta1)
    static constexpr int pos[5] = {2, 4, 3, 0, 1};
    IntMatrix M(5, 5);
    for (int src = 0; src < 5; ++src)
        for (int k = 0; k < 5; ++k) M(pos[k], pos[src]) = images[static_cast<std::size_t>(src)][static_cast<std::size_t>(k)];
    return M;
}

IntMatrix rank3_from_images(const std::array<std::array<Int, 3>, 3>& images) {
    IntMatrix M(3, 3);
    for (int src = 0; src < 3; ++src)
        for (int k = 0; k < 3; ++k) M(k, src) = images[static_cast<std::size_t>(src)][static_cast<std::size_t>(k)];
    return M;
}

using Check = bool (*)();

const std::vector<std::pair<std::string, Check>>& relation_table() {
    static const std::vector<std::pair<std::string, Check>> table{
        {"r_i^2=1", [] {
             for (const char* r : {"r1", "r2", "r3"})
                 if (!(rank3_generator(r) * rank3_generator(r) == IntMatrix::identity(3))) return false;
             return true;
         }},
        {"(r1r2r3)^2=1", [] { return rank3_generator("c").power(2) == IntMatrix::identity(3); }},
        {"c=r_alpha", [] { return rank3_generator("c") == rank3_generator("r_alpha"); }},
        {"c=serre[-1]", [] { return rank3_generator("c") == -serre_matrix(Basis::R); }},
        {"tau_i display", [] {
             return rank3_generator("tau1") == rank3_from_images({{{1, -2, 0}, {0, 1, 0}, {0, 0, 1}}}) &&
                    rank3_generator("tau2") == rank3_from_images({{{1, 0, -2}, {0, 1, 0}, {0, 0, 1}}});
         }},
        {"r1 tau_i r1 = tau_i^-1", [] {
             const IntMatrix r1 = rank3_generator("r1");
             for (const char* t : {"tau1", "tau2"})
                 if (!(r1 * rank3_generator(t) * r1 == rank3_generator(t).inverse())) return false;
             return true;
         }},
        {"H abelian", [] {
             return rank3_generator("tau1") * rank3_generator("tau2") == rank3_generator("tau2") * rank3_generator("tau1");
         }},
        {"W preserves I", [] {
             for (const char* r : {"r1", "r2", "r3"})
                 if (!LatticeMap{rank3_generator(r), Form::I, Basis::R}.preserves_form()) return false;
             return true;
         }},
        {"tilde r_i^2=1", [] {
             for (const char* r : {"r1", "r2", "r3"})
                 if (!(rank5_generator(r) * rank5_generator(r) == IntMatrix::identity(5))) return false;
             return true;
         }},
        {"tilde r_i display", [] {
             return rank5_generator("r1") == rank5_from_images({{{-1, 2, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0},
                                                                 {1, -1, 0, 1, 0}, {0, 0, 0, 0, 1}}}) &&
                    rank5_generator("r2") == rank5_from_images({{{-1, 2, 2, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0},
                                                                 {1, -1, -1, 1, 0}, {-1, 1, 1, 0, 1}}}) &&
                    rank5_generator("r3") == rank5_from_images({{{-1, 0, 2, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0},
                                                                 {0, 0, 0, 1, 0}, {-1, 0, 1, 0, 1}}});
         }},
        {"tilde c display", [] {
             return rank5_generator("c") == rank5_from_images({{{-1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0},
                                                                {0, 0, -1, 1, 0}, {0, -1, 0, 0, 1}}});
         }},
        {"tilde tau_i display", [] {
             return rank5_generator("tau1") == rank5_from_images({{{1, -2, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0},
                                                                   {1, -1, -1, 1, 0}, {0, -1, 0, 0, 1}}}) &&
                    rank5_generator("tau2") == rank5_from_images({{{1, 0, -2, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0},
                                                                   {0, 0, 1, 1, 0}, {-1, 1, 1, 0, 1}}});
         }},
        {"elliptic Artin", [] {
             const IntMatrix c2 = rank5_generator("c").power(2);
             for (const char* r : {"r1", "r2", "r3"})
                 if (!(rank5_generator(r) * c2 == c2 * rank5_generator(r))) return false;
             return true;
         }},
        {"tilde commutator = c^-2", [] {
             const IntMatrix t1 = rank5_generator("tau1"), t2 = rank5_generator("tau2");
             return t1 * t2 * t1.inverse() * t2.inverse() == rank5_generator("c").power(-2);
         }},
        {"tilde c^2 central", [] {
             const IntMatrix c2 = rank5_generator("c").power(2);
             for (const char* g : {"r1", "r2", "r3", "tau1", "tau2", "c"})
                 if (!(rank5_generator(g) * c2 == c2 * rank5_generator(g))) return false;
             return true;
         }},
        {"tilde W preserves I~", [] {
             for (const char* r : {"r1", "r2", "r3"})
                 if (!LatticeMap{rank5_generator(r), Form::I_tilde, Basis::R}.preserves_form()) return false;
             return true;
         }},
        {"tilde W restricts to W", [] {
             // the rank-3 block (alpha, delta2, delta1) of each generator equals the rank-3 generator
             static constexpr int idx[3] = {2, 4, 3};
             for (const char* g : {"r1", "r2", "r3", "c", "tau1", "tau2"}) {
                 const IntMatrix m5 = rank5_generator(g), m3 = rank3_generator(g);
                 for (int i = 0; i < 3; ++i)
                     for (int j = 0; j < 3; ++j)
                         if (m5(idx[i], idx[j]) != m3(i, j)) return false;
             }
             return true;
         }},
        {"serre^2=1", [] {
             for (Basis b : {Basis::S, Basis::P, Basis::R})
                 if (!(serre_matrix(b).power(2) == IntMatrix::identity(3))) return false;
             return true;
         }},
        {"twist braid relation", [] {
             const IntMatrix a = twist_matrix({k_delta1()}).matrix, b = twist_matrix({k_delta2()}).matrix;
             return a * b * a == b * a * b;
         }},
        {"(T1 T2)^-3 = serre", [] {
             const IntMatrix a = twist_matrix({k_delta1()}).matrix, b = twist_matrix({k_delta2()}).matrix;
             return (a * b).power(-3) == serre_matrix(Basis::R);
         }},
        {"T(E+,E-) = -serre^-1", [] {
             return twist_matrix({k_alpha(), k_alpha()}).matrix == -serre_matrix(Basis::R).inverse();
         }},
        {"(s1 s2)^6 -> 1 in SL2", [] {
             const Mat2 m = braid_to_sl2(parse_braid_word("s1 s2 s1 s2 s1 s2 s1 s2 s1 s2 s1 s2"));
             return m == Mat2{{{1, 0}, {0, 1}}};
         }},
    };
    return table;
}

} // namespace

const std::vector<std::string>& relation_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& [id, f] : relation_table()) v.push_back(id);
        return v;
    }();
    return ids;
}

bool group_relation_check(const std::string& relation_id) {
    for (const auto& [id, f] : relation_table())
        if (id == relation_id) return f();
    throw UnknownRelation("no relation named '" + relation_id + "'");
}

// ---------------------------------------------------------------- chi_a

namespace {

template <class T>
std::array<std::array<T, 3>, 3> chi_a_serre(T a) {
    // chi_a^{-1} for the unipotent upper-triangular chi_a = [[1,a,a],[0,1,a],[0,0,1]]
    const std::array<std::array<T, 3>, 3> inv{{{T(1), -a, a * a - a}, {T(0), T(1), -a}, {T(0), T(0), T(1)}}};
    const std::array<std::array<T, 3>, 3> chiT{{{T(1), T(0), T(0)}, {a, T(1), T(0)}, {a, a, T(1)}}};
    std::array<std::array<T, 3>, 3> m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            T s(0);
            for (int k = 0; k < 3; ++k) s += inv[i][k] * chiT[k][j];
            m[i][j] = s;
        }
    return m;
}

template <class T>
std::array<T, 4> charpoly3(const std::array<std::array<T, 3>, 3>& m) {
    const T tr = m[0][0] + m[1][1] + m[2][2];
    const T minors = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) + (m[0][0] * m[2][2] - m[0][2] * m[2][0]) +
                     (m[1][1] * m[2][2] - m[1][2] * m[2][1]);
    const T det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                  m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    return {-det, minors, -tr, T(1)};
}

template <class T>
std::array<T, 4> factored(T a) {
    const T b1 = a * a * a - T(3) * a * a + T(3); // (a^3 - 3a^2 + 2) + 1
    return {T(-1), b1, -b1, T(1)};
}

} // namespace

std::array<Rational, 4> chi_a_charpoly_exact(Rational a) { return charpoly3(chi_a_serre(a)); }
std::array<Rational, 4> chi_a_charpoly_factored(Rational a) { return factored(a); }

ChiASpectrum chi_a_spectrum(double a) {
    if (!(a >= 0.0 && a <= 2.0)) throw std::domain_error("chi_a_spectrum: a must lie in [0, 2]");
    ChiASpectrum out{};
    out.a = a;
    const auto m = chi_a_serre(a);
    out.charpoly = charpoly3(m);
    out.factored = factored(a);
    // t = 1 and the unimodular pair exp(+-2 pi i theta) with 2 cos(2 pi theta) = a^3 - 3a^2 + 2
    const double B = a * a * a - 3.0 * a * a + 2.0;
    const double theta = std::acos(std::clamp(B / 2.0, -1.0, 1.0)) / (2.0 * std::numbers::pi);
    out.phases = {0.0, theta, -theta};
    for (int i = 0; i < 3; ++i) out.eigenvalues[static_cast<std::size_t>(i)] = std::polar(1.0, 2.0 * std::numbers::pi * out.phases[static_cast<std::size_t>(i)]);

    Eigen::Matrix3d M;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) M(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    const Eigen::Vector3cd ev = Eigen::EigenSolver<Eigen::Matrix3d>(M, false).eigenvalues();
    // greedy matching of the closed-form eigenvalues to the solver's
    std::array<bool, 3> used{};
    double worst = 0.0;
    for (const auto& lam : out.eigenvalues) {
        double best = std::numeric_limits<double>::infinity();
        int bi = 0;
        for (int k = 0; k < 3; ++k)
            if (!used[static_cast<std::size_t>(k)] && std::abs(ev(k) - lam) < best) best = std::abs(ev(k) - lam), bi = k;
        used[static_cast<std::size_t>(bi)] = true;
        worst = std::max(worst, best);
    }
    out.eigen_residual = worst;
    return out;
}

std::pair<Rational, Rational> variance_identity() {
    // at a = 2 the quadratic factor is (t + 1)^2, so the phases are exactly 0 and +-1/2
    const auto c = chi_a_charpoly_exact(Rational(2));
    if (!(c == std::array<Rational, 4>{Rational(-1), Rational(-1), Rational(1), Rational(1)}))
        throw std::logic_error("chi_2 characteristic polynomial is not (t-1)(t+1)^2");
    const std::array<Rational, 3> exps{Rational(-1, 2), Rational(0), Rational(1, 2)};
    Rational lhs(0);
    for (const auto& e : exps) lhs += e * e;
    return {lhs, Rational(1, 12) * 3 * 2};
}

} // namespace ellfrob
