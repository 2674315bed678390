#pragma once

// The Neron-Severi lattice NS = Zh + Z xi of the Hilbert square, Gram matrix
// diag(2e, -2); its isometries theta, alpha, beta; their action on the
// discriminant group; and the slopes of the nef and movable cones.
//
// Matrices act on coordinate columns in the basis (h, xi): the first column
// is the image of h, the second the image of xi. With this reading
// theta = [[U, V], [eV, U]] sends h to U h + eV xi.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "k3hilb/arith.hpp"
#include "k3hilb/disc.hpp"
#include "k3hilb/pell.hpp"

namespace k3hilb {

/// 2x2 integer matrix [[a, b], [c, d]].
struct Mat2 {
    BigInt a{1}, b{0}, c{0}, d{1};

    static Mat2 identity() { return {1, 0, 0, 1}; }

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator-() const { return {-a, -b, -c, -d}; }
    Mat2 transposed() const { return {a, c, b, d}; }
    BigInt det() const { return a * d - b * c; }

    friend bool operator==(const Mat2&, const Mat2&) = default;
    friend bool operator<(const Mat2& x, const Mat2& y) {
        return std::tie(x.a, x.b, x.c, x.d) < std::tie(y.a, y.b, y.c, y.d);
    }

    std::string str() const { return "[[" + a.str() + "," + b.str() + "],[" + c.str() + "," + d.str() + "]]"; }
};

/// Gram matrix diag(2e, -2) of Zh + Z xi.
inline Mat2 gram(PolarizationDegree e) { return {BigInt(2 * e.value()), 0, 0, -2}; }

/// m^T G m == G.
inline bool is_isometry(PolarizationDegree e, const Mat2& m) {
    const Mat2 g = gram(e);
    return m.transposed() * g * m == g;
}

class NSIsometry {
public:
    NSIsometry(PolarizationDegree e, Mat2 m) : e_(e.value()), m_(std::move(m)) {
        if (!is_isometry(e, m_)) {
            throw std::invalid_argument("not an isometry of diag(2e,-2) for e = " + std::to_string(e_) + ": " +
                                        m_.str());
        }
    }

    std::uint64_t e() const { return e_; }
    const Mat2& matrix() const { return m_; }

    NSIsometry operator*(const NSIsometry& o) const {
        if (e_ != o.e_) throw std::invalid_argument("NSIsometry: mismatched e");
        return {PolarizationDegree(e_), m_ * o.m_};
    }
    NSIsometry operator-() const { return {PolarizationDegree(e_), -m_}; }

    friend bool operator==(const NSIsometry&, const NSIsometry&) = default;
    friend bool operator<(const NSIsometry& x, const NSIsometry& y) {
        return std::tie(x.e_, x.m_) < std::tie(y.e_, y.m_);
    }

private:
    std::uint64_t e_;
    Mat2 m_;
};

inline NSIsometry ns_identity(PolarizationDegree e) { return {e, Mat2::identity()}; }

/// Reflection in h: xi -> -xi.
inline NSIsometry alpha(PolarizationDegree e) { return {e, Mat2{1, 0, 0, -1}}; }

inline void require_nonsquare_degree(PolarizationDegree e, const char* what) {
    if (is_perfect_square(e.value())) {
        throw std::domain_error(std::string(what) + " undefined: e = " + std::to_string(e.value()) +
                                " is a perfect square");
    }
}

/// [[U, V], [eV, U]] from the fundamental solution of x^2 - e y^2 = 1.
inline NSIsometry theta(PolarizationDegree e) {
    require_nonsquare_degree(e, "theta");
    const FundamentalUnit unit = fundamental_solution(e.value());
    return {e, Mat2{unit.U, unit.V, BigInt(e.value()) * unit.V, unit.U}};
}

/// theta^{-1} = [[U, -V], [-eV, U]].
inline NSIsometry theta_inverse(PolarizationDegree e) {
    const Mat2 t = theta(e).matrix();
    return {e, Mat2{t.d, -t.b, -t.c, t.a}};
}

/// beta = alpha * theta = [[U, V], [-eV, -U]], an involution.
inline NSIsometry beta(PolarizationDegree e) {
    require_nonsquare_degree(e, "beta");
    return alpha(e) * theta(e);
}

/// Action on A_NS in generators (h/2e, xi/2):
///   h/2e  -> (a h + c xi)/2e = a (h/2e) + (c/e) (xi/2)
///   xi/2  -> (b h + d xi)/2  = eb (h/2e) + d (xi/2)
inline InducedAction induced_action(const NSIsometry& iso) {
    const std::uint64_t e = iso.e();
    const Mat2& m = iso.matrix();
    const BigInt be = e;
    if (m.c % be != 0) {
        throw std::logic_error("induced_action: h/2e leaves the dual lattice, c = " + m.c.str());
    }
    const BigInt mod2e = 2 * be;
    auto reduce = [](const BigInt& v, const BigInt& mod) {
        BigInt r = v % mod;
        if (r < 0) r += mod;
        return r;
    };
    InducedAction out;
    out.e = e;
    out.p = static_cast<std::uint64_t>(reduce(m.a, mod2e));
    out.q = static_cast<std::uint64_t>(reduce(be * m.b, mod2e));
    out.r = static_cast<unsigned>(reduce(m.c / be, 2));
    out.s = static_cast<unsigned>(reduce(m.d, 2));
    return out;
}

/// A ray of NS (x) R spanned by the integer vector x h + y xi, stored
/// primitive so that equal rays compare equal.
struct Ray {
    BigInt h;
    BigInt xi;

    static Ray spanned_by(BigInt x, BigInt y) {
        if (x == 0 && y == 0) throw std::invalid_argument("Ray: zero vector");
        const BigInt g = abs(boost::multiprecision::gcd(x, y));
        return {x / g, y / g};
    }

    /// The ray of h - slope*xi.
    static Ray of_wall(const Rational& slope) {
        const BigInt num = boost::multiprecision::numerator(slope);
        const BigInt den = boost::multiprecision::denominator(slope);
        return spanned_by(den, -num);
    }

    /// slope c when this is the ray of h - c xi.
    std::optional<Rational> wall_slope() const {
        if (h <= 0) return std::nullopt;
        return Rational(-xi, h);
    }

    friend bool operator==(const Ray&, const Ray&) = default;

    std::string str() const;
};

inline std::string Ray::str() const {
    if (auto s = wall_slope()) {
        if (*s == 0) return "h";
        return "h - (" + s->str() + ")xi";
    }
    return "(" + h.str() + ")h + (" + xi.str() + ")xi";
}

inline Ray apply(const NSIsometry& iso, const Ray& ray) {
    const Mat2& m = iso.matrix();
    return Ray::spanned_by(m.a * ray.h + m.b * ray.xi, m.c * ray.h + m.d * ray.xi);
}

/// Boundary slopes: the nef cone is spanned by h and h - nu xi, the movable
/// cone by h and h - mu xi.
struct Slopes {
    Rational nu;
    Rational mu;

    friend bool operator==(const Slopes&, const Slopes&) = default;
};

/// Minimal solution of x^2 - 4e y^2 = 5; for square e the factor-pair
/// routine is used since the continued fraction does not apply.
inline std::optional<PellSolution> pell_4e_5(PolarizationDegree e) {
    const std::uint64_t d = 4 * e.value();
    if (auto root = exact_sqrt(d)) return minimal_solution_square(*root, 5);
    return minimal_solution(PellProblem(d, 5));
}

inline Slopes slopes(PolarizationDegree e) {
    const auto sqrt_e = exact_sqrt(e.value());
    const auto p45 = pell_4e_5(e);
    const BigInt be = e.value();

    Rational mu;
    if (sqrt_e) {
        mu = Rational(BigInt(*sqrt_e));
    } else {
        const FundamentalUnit unit = fundamental_solution(e.value());
        mu = Rational(be * unit.V, unit.U);
    }
    if (!p45) return {mu, mu};

    Rational nu(2 * be * p45->y, p45->x);
    if (!(nu < mu)) {
        throw std::logic_error("slopes: nu = " + nu.str() + " is not below mu = " + mu.str() + " for e = " +
                               std::to_string(e.value()));
    }
    return {nu, mu};
}

namespace detail {

inline bool preserves_walls(const NSIsometry& iso, const Ray& w1, const Ray& w2) {
    const Ray i1 = apply(iso, w1);
    const Ray i2 = apply(iso, w2);
    return (i1 == w1 && i2 == w2) || (i1 == w2 && i2 == w1);
}

}  // namespace detail

/// Whether iso maps the movable cone {h, h - mu xi} onto itself.
inline bool preserves_movable(const NSIsometry& iso, const Slopes& s) {
    return detail::preserves_walls(iso, Ray::of_wall(0), Ray::of_wall(s.mu));
}

/// Whether iso maps the ample cone {h, h - nu xi} onto itself.
inline bool preserves_ample(const NSIsometry& iso, const Slopes& s) {
    return detail::preserves_walls(iso, Ray::of_wall(0), Ray::of_wall(s.nu));
}

inline bool preserves_movable(const NSIsometry& iso) { return preserves_movable(iso, slopes(PolarizationDegree(iso.e()))); }
inline bool preserves_ample(const NSIsometry& iso) { return preserves_ample(iso, slopes(PolarizationDegree(iso.e()))); }

/// {+-theta^k, +-alpha theta^k : |k| <= k_max} (just {+-id, +-alpha} for square e).
inline std::vector<NSIsometry> isometry_family(PolarizationDegree e, unsigned k_max) {
    std::set<NSIsometry> out;
    const NSIsometry id = ns_identity(e);
    const NSIsometry a = alpha(e);
    std::vector<NSIsometry> powers{id};
    if (!is_perfect_square(e.value())) {
        const NSIsometry t = theta(e);
        const NSIsometry ti = theta_inverse(e);
        NSIsometry up = id;
        NSIsometry down = id;
        for (unsigned k = 1; k <= k_max; ++k) {
            up = up * t;
            down = down * ti;
            powers.push_back(up);
            powers.push_back(down);
        }
    }
    for (const auto& p : powers) {
        out.insert(p);
        out.insert(-p);
        out.insert(a * p);
        out.insert(-(a * p));
    }
    return {out.begin(), out.end()};
}

/// All products of at most max_len generators from {theta, alpha, -id}
/// (alpha and -id only for square e), deduplicated.
inline std::vector<NSIsometry> isometry_words(PolarizationDegree e, unsigned max_len) {
    std::vector<NSIsometry> gens{alpha(e), -ns_identity(e)};
    if (!is_perfect_square(e.value())) gens.push_back(theta(e));
    std::set<NSIsometry> seen{ns_identity(e)};
    std::vector<NSIsometry> frontier{ns_identity(e)};
    for (unsigned len = 1; len <= max_len; ++len) {
        std::vector<NSIsometry> next;
        for (const auto& w : frontier) {
            for (const auto& g : gens) {
                NSIsometry p = w * g;
                if (seen.insert(p).second) next.push_back(std::move(p));
            }
        }
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

}  // namespace k3hilb
