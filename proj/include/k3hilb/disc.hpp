#pragma once

// Cyclic discriminant groups with Q/2Z-valued quadratic forms, and the
// isotropic subgroups of A_T x A_Zh x A_<-2> that describe how T and
// NS = Zh + Z xi glue to the lattice of the Hilbert square.
//
// Coordinates: an element (s*t/2e, x*h/2e, y*xi/2) is written (s, x, y) with
// s, x mod 2e and y mod 2. The quadratic form is
//     q(s, x, y) = -s^2/2e + x^2/2e - y^2/2   (mod 2Z).

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "k3hilb/arith.hpp"

namespace k3hilb {

/// A value in Q/2Z, kept reduced into [0, 2).
class QValue {
public:
    QValue() = default;
    explicit QValue(const Rational& r) : value_(normalize(r)) {}
    QValue(std::int64_t num, std::int64_t den) : QValue(Rational(num, den)) {}

    const Rational& value() const { return value_; }
    BigInt numerator() const { return boost::multiprecision::numerator(value_); }
    BigInt denominator() const { return boost::multiprecision::denominator(value_); }
    bool is_zero() const { return value_ == 0; }

    QValue operator+(const QValue& other) const { return QValue(value_ + other.value_); }
    QValue operator-(const QValue& other) const { return QValue(value_ - other.value_); }
    QValue scaled(const BigInt& k) const { return QValue(value_ * Rational(k)); }

    friend bool operator==(const QValue&, const QValue&) = default;

    std::string str() const { return value_.str(); }

private:
    static Rational normalize(const Rational& r) {
        const BigInt num = boost::multiprecision::numerator(r);
        const BigInt den = boost::multiprecision::denominator(r);
        const BigInt period = 2 * den;
        BigInt rem = num % period;
        if (rem < 0) rem += period;
        return Rational(rem, den);
    }

    Rational value_{0};
};

/// Cyclic group <g> of order n with q(g) given.
struct DiscGroupSpec {
    std::uint64_t order = 1;
    QValue generator_q;

    DiscGroupSpec(std::uint64_t n, QValue q) : order(n), generator_q(std::move(q)) {
        if (n == 0) throw std::invalid_argument("discriminant group order must be >= 1");
        // q(n*g) must vanish since n*g = 0.
        if (!generator_q.scaled(BigInt(n) * n).is_zero()) {
            throw std::invalid_argument("discriminant form inconsistent: q(n g) != 0");
        }
    }
};

/// q(k*g) = k^2 q(g) mod 2Z.
inline QValue q_of(const BigInt& k, const DiscGroupSpec& group) { return group.generator_q.scaled(k * k); }

/// A_T = <t/2e> with q = -1/2e.
inline DiscGroupSpec transcendental_group(PolarizationDegree e) {
    return {2 * e.value(), QValue(Rational(-1, BigInt(2 * e.value())))};
}

/// A_Zh = <h/2e> with q = 1/2e.
inline DiscGroupSpec polarization_group(PolarizationDegree e) {
    return {2 * e.value(), QValue(Rational(1, BigInt(2 * e.value())))};
}

/// A_<-2> = <xi/2> with q = -1/2.
inline DiscGroupSpec exceptional_group() { return {2, QValue(-1, 2)}; }

/// Value of the discriminant form of A_T x A_Zh x A_<-2> on (s, x, y).
inline QValue discriminant_q(PolarizationDegree e, std::int64_t s, std::int64_t x, std::int64_t y) {
    return q_of(s, transcendental_group(e)) + q_of(x, polarization_group(e)) + q_of(y, exceptional_group());
}

/// J_{a,z} = <(t/2e, a h/2e, z xi/2)>: the generator is normalized so its
/// transcendental coordinate is +1, which makes subgroup equality a tuple
/// comparison.
struct IsotropicGenerator {
    std::uint64_t e = 1;
    std::uint64_t a = 1;  // mod 2e
    unsigned z = 0;       // mod 2

    auto operator<=>(const IsotropicGenerator&) const = default;
};

inline std::string to_string(const IsotropicGenerator& j) {
    if (j.z == 0) return "J_" + std::to_string(j.a);
    return "J_{" + std::to_string(j.a) + "," + std::to_string(j.z) + "}";
}

/// a^2 - e z^2 = 1 (mod 4e), i.e. q(1, a, z) = 0 in Q/2Z.
inline bool check_isotropic(std::uint64_t e, std::uint64_t a, unsigned z) {
    if (e == 0) throw std::invalid_argument("check_isotropic: e must be >= 1");
    if (a >= 2 * e || z > 1) throw std::invalid_argument("check_isotropic: residues out of range");
    const unsigned __int128 mod = 4 * static_cast<unsigned __int128>(e);
    const unsigned __int128 lhs = static_cast<unsigned __int128>(a) * a % mod;
    const unsigned __int128 rhs = (1 + static_cast<unsigned __int128>(e) * z * z) % mod;
    return lhs == rhs;
}

/// The z = 0 subgroups J_{a,0} (equivalently I_a), sorted by a.
inline std::vector<IsotropicGenerator> enumerate_I(PolarizationDegree degree) {
    std::vector<IsotropicGenerator> out;
    for (std::uint64_t a : square_roots_of_unity(degree)) out.push_back({degree.value(), a, 0});
    return out;
}

/// All J_{a,z}, sorted by (z, a).
inline std::vector<IsotropicGenerator> enumerate_J(PolarizationDegree degree) {
    const auto classes = classify_unit_squares(degree);
    std::vector<IsotropicGenerator> out;
    for (std::uint64_t a : classes.square_one) out.push_back({degree.value(), a, 0});
    for (std::uint64_t a : classes.square_one_plus_e) out.push_back({degree.value(), a, 1});
    return out;
}

/// dis(E1 + E2) / |subgroup|^2: the discriminant of the overlattice glued
/// along an isotropic subgroup of the given order.
inline BigInt overlattice_check(const BigInt& dis_e1, const BigInt& dis_e2, std::uint64_t subgroup_order) {
    if (dis_e1 == 0 || dis_e2 == 0) throw std::invalid_argument("overlattice_check: degenerate summand");
    if (subgroup_order == 0) throw std::invalid_argument("overlattice_check: subgroup order must be >= 1");
    const BigInt total = dis_e1 * dis_e2;
    const BigInt index_sq = BigInt(subgroup_order) * subgroup_order;
    if (total % index_sq != 0) {
        throw std::invalid_argument("overlattice_check: order^2 = " + index_sq.str() + " does not divide " +
                                    total.str());
    }
    return total / index_sq;
}

/// Action of an isometry of NS = Zh + Z xi on A_NS = Z/2e x Z/2, in the
/// generators (h/2e, xi/2):
///     (x, y) -> (p x + q y mod 2e, r x + s y mod 2).
/// q is always a multiple of e, so q*y only depends on y mod 2.
struct InducedAction {
    std::uint64_t e = 1;
    std::uint64_t p = 1, q = 0;  // mod 2e
    unsigned r = 0, s = 1;       // mod 2

    static InducedAction identity(std::uint64_t e) { return {e, 1 % (2 * e), 0, 0, 1}; }

    std::pair<std::uint64_t, unsigned> apply(std::uint64_t x, unsigned y) const {
        const unsigned __int128 mod = 2 * static_cast<unsigned __int128>(e);
        const auto nx = static_cast<std::uint64_t>((static_cast<unsigned __int128>(p) * x + static_cast<unsigned __int128>(q) * y) % mod);
        const unsigned ny = static_cast<unsigned>((r * (x % 2) + s * y) % 2);
        return {nx, ny};
    }

    /// (*this) o other.
    InducedAction after(const InducedAction& other) const {
        if (e != other.e) throw std::invalid_argument("InducedAction: mismatched e");
        const unsigned __int128 mod = 2 * static_cast<unsigned __int128>(e);
        using u128 = unsigned __int128;
        InducedAction out{e, 0, 0, 0, 0};
        out.p = static_cast<std::uint64_t>((u128(p) * other.p + u128(q) * other.r) % mod);
        out.q = static_cast<std::uint64_t>((u128(p) * other.q + u128(q) * other.s) % mod);
        out.r = static_cast<unsigned>((r * (other.p % 2) + s * other.r) % 2);
        out.s = static_cast<unsigned>((r * (other.q % 2) + s * other.s) % 2);
        return out;
    }

    auto operator<=>(const InducedAction&) const = default;
};

/// An element of O(A_T) x O(A_NS): the sign on A_T is stored as a residue
/// mod 2e (so for e = 1 the two signs coincide).
struct GluedAction {
    std::uint64_t sign = 1;  // 1 or 2e-1
    InducedAction ns;

    static GluedAction make(int sign, const InducedAction& ns) {
        if (sign != 1 && sign != -1) throw std::invalid_argument("GluedAction: sign must be +1 or -1");
        const std::uint64_t mod = 2 * ns.e;
        return {sign == 1 ? 1 % mod : mod - 1, ns};
    }

    bool is_identity() const { return sign == 1 % (2 * ns.e) && ns == InducedAction::identity(ns.e); }

    GluedAction after(const GluedAction& other) const {
        const unsigned __int128 mod = 2 * static_cast<unsigned __int128>(ns.e);
        return {static_cast<std::uint64_t>(static_cast<unsigned __int128>(sign) * other.sign % mod), ns.after(other.ns)};
    }

    auto operator<=>(const GluedAction&) const = default;
};

/// Image of J under (sign * id_T, action), renormalized so the A_T
/// coordinate is +1 again.
inline IsotropicGenerator glued_action(const GluedAction& g, const IsotropicGenerator& j) {
    if (g.ns.e != j.e) throw std::invalid_argument("glued_action: isometry and subgroup have different e");
    const std::uint64_t mod = 2 * j.e;
    auto [x, y] = g.ns.apply(j.a, j.z);
    // The image generator is (sign, x, y); multiplying by sign^{-1} = sign
    // restores a transcendental coordinate of 1.
    const auto nx = static_cast<std::uint64_t>(static_cast<unsigned __int128>(g.sign) * x % mod);
    IsotropicGenerator out{j.e, nx, y};
    if (!check_isotropic(out.e, out.a, out.z)) {
        throw std::logic_error("glued_action: image " + to_string(out) + " is not isotropic");
    }
    return out;
}

inline IsotropicGenerator glued_action(int sign, const InducedAction& action, const IsotropicGenerator& j) {
    return glued_action(GluedAction::make(sign, action), j);
}

/// Fourier-Mukai partners as orbits of {I_a} under a -> -a.
struct FmPartners {
    std::uint64_t count = 0;
    std::vector<std::vector<std::uint64_t>> orbits;  // each sorted; ordered by least element
};

inline FmPartners fm_partner_count(PolarizationDegree degree) {
    const std::uint64_t mod = 2 * degree.value();
    const auto roots = square_roots_of_unity(degree);
    FmPartners out;
    std::vector<bool> seen(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (seen[i]) continue;
        const std::uint64_t a = roots[i];
        const std::uint64_t neg = (mod - a) % mod;
        std::vector<std::uint64_t> orbit{a};
        seen[i] = true;
        auto it = std::lower_bound(roots.begin(), roots.end(), neg);
        if (it != roots.end() && *it == neg && neg != a) {
            seen[static_cast<std::size_t>(it - roots.begin())] = true;
            orbit.push_back(neg);
        }
        std::sort(orbit.begin(), orbit.end());
        out.orbits.push_back(std::move(orbit));
    }
    out.count = out.orbits.size();
    const std::uint64_t expected = std::uint64_t{1} << (p_of_e(degree) - 1);
    if (out.count != expected) {
        throw std::logic_error("fm_partner_count: orbit count " + std::to_string(out.count) +
                               " != 2^(p(e)-1) = " + std::to_string(expected) + " for e = " +
                               std::to_string(degree.value()));
    }
    return out;
}

}  // namespace k3hilb
