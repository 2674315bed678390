#pragma once

// Strong ambiguity of S^[2] and Aut(S^[2]) for a K3 surface S with
// NS(S) = Zh, h^2 = 2e. Each verdict is computed twice: from the Pell
// criteria, and from orbits of the glued isometry group on the isotropic
// subgroups J_{a,z}. analyze() insists that both agree.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "k3hilb/arith.hpp"
#include "k3hilb/disc.hpp"
#include "k3hilb/nslat.hpp"
#include "k3hilb/pell.hpp"

namespace k3hilb {

/// Raised when two independent computations disagree; always a bug.
class internal_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The Pell facts every verdict is built from.
struct PellData {
    std::uint64_t e = 1;
    bool square = false;
    std::optional<FundamentalUnit> unit;       // x^2 - e y^2 = 1 (non-square e)
    std::optional<PellSolution> negative;      // x^2 - e y^2 = -1
    std::optional<PellSolution> four_e_five;   // x^2 - 4e y^2 = 5
    Slopes slopes;

    bool v_even() const { return unit && unit->V % 2 == 0; }
    bool u_is_plus_one() const { return unit && unit->U % (2 * e) == 1 % (2 * e); }
    bool u_is_minus_one() const { return unit && (unit->U + 1) % (2 * e) == 0; }
    /// U mod 2e.
    std::uint64_t u_residue() const { return unit ? static_cast<std::uint64_t>(unit->U % (2 * e)) : 1 % (2 * e); }
};

inline PellData pell_data(PolarizationDegree degree) {
    PellData data;
    data.e = degree.value();
    data.square = is_perfect_square(data.e);
    if (!data.square) {
        data.unit = fundamental_solution(data.e);
        data.negative = negative_pell(data.e);
    }
    data.four_e_five = pell_4e_5(degree);
    data.slopes = slopes(degree);
    return data;
}

/// V even and U != -1 (mod 2e) for the fundamental solution; false for square e.
inline bool hodge_isometry_exists(const PellData& data) {
    return !data.square && data.v_even() && !data.u_is_minus_one();
}

inline bool hodge_isometry_exists(PolarizationDegree e) { return hodge_isometry_exists(pell_data(e)); }

struct AmbiguityEvidence {
    bool strongly_ambiguous = false;
    bool hodge_isometry = false;
    bool four_e_five_solvable = false;
    /// (a, aU mod 2e): J_a and J_{aU} give isomorphic Hilbert squares.
    std::optional<std::pair<std::uint64_t, std::uint64_t>> witness;
};

inline AmbiguityEvidence strong_ambiguity(const PellData& data) {
    AmbiguityEvidence ev;
    ev.hodge_isometry = hodge_isometry_exists(data);
    ev.four_e_five_solvable = data.four_e_five.has_value();
    ev.strongly_ambiguous = ev.hodge_isometry && !ev.four_e_five_solvable;
    if (ev.strongly_ambiguous) ev.witness = std::make_pair(std::uint64_t{1}, data.u_residue());
    return ev;
}

inline AmbiguityEvidence strong_ambiguity(PolarizationDegree e) { return strong_ambiguity(pell_data(e)); }

/// 2 iff e is not a square, x^2 - e y^2 = -1 is solvable, and
/// x^2 - 4e y^2 = 5 is not; otherwise 1.
inline unsigned aut_order(const PellData& data) {
    return (!data.square && data.negative && !data.four_e_five) ? 2 : 1;
}

inline unsigned aut_order(PolarizationDegree e) { return aut_order(pell_data(e)); }

// ---------------------------------------------------------------------------
// Orbit computation

/// Generator of the glued group, labelled for display.
struct LabelledAction {
    std::string label;
    GluedAction action;
    bool effective = false;
};

struct Arrow {
    std::string label;
    IsotropicGenerator from;
    IsotropicGenerator to;
    bool effective = false;
};

/// One orbit of the Hodge-level glued group, restricted to the z = 0
/// subgroups, with its finer split into effective orbits.
struct OrbitEntry {
    std::vector<IsotropicGenerator> members;   // z = 0
    std::vector<IsotropicGenerator> escaped;   // z = 1 members of the same orbit
    std::vector<std::vector<std::uint64_t>> effective_classes;
};

struct OrbitAnalysis {
    std::uint64_t e = 1;
    std::vector<IsotropicGenerator> subgroups;  // every J_{a,z}
    std::vector<LabelledAction> generators;
    std::vector<Arrow> arrows;                  // generator images of z = 0 subgroups
    std::vector<OrbitEntry> orbit_table;
    std::vector<std::string> effective_isometries;
    std::size_t fm_count = 0;
    std::size_t hodge_level_classes = 0;  // z = 0 orbits under all Hodge isometries
    std::size_t hodge_classes = 0;       // z = 0 orbits under effective ones
    std::size_t effective_group_order = 0;
    /// Non-identity effective elements fixing J_1.
    std::vector<GluedAction> stabilizer_of_j1;
};

namespace detail {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t x, std::size_t y) {
        x = find(x);
        y = find(y);
        if (x != y) parent_[std::max(x, y)] = std::min(x, y);
    }

private:
    std::vector<std::size_t> parent_;
};

inline std::size_t index_of(const std::vector<IsotropicGenerator>& sorted, const IsotropicGenerator& j) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), j);
    if (it == sorted.end() || *it != j) throw internal_error("orbit analysis: image " + to_string(j) + " not enumerated");
    return static_cast<std::size_t>(it - sorted.begin());
}

inline DisjointSets orbits_under(const std::vector<IsotropicGenerator>& js, const std::vector<GluedAction>& gens) {
    DisjointSets sets(js.size());
    for (std::size_t i = 0; i < js.size(); ++i) {
        for (const auto& g : gens) sets.unite(i, index_of(js, glued_action(g, js[i])));
    }
    return sets;
}

inline std::set<GluedAction> closure(const std::vector<GluedAction>& gens, std::uint64_t e) {
    const GluedAction id{1 % (2 * e), InducedAction::identity(e)};
    std::set<GluedAction> group{id};
    std::vector<GluedAction> frontier{id};
    while (!frontier.empty()) {
        std::vector<GluedAction> next;
        for (const auto& x : frontier) {
            for (const auto& g : gens) {
                GluedAction y = g.after(x);
                if (group.insert(y).second) next.push_back(y);
            }
        }
        frontier = std::move(next);
    }
    return group;
}

inline std::size_t count_classes(DisjointSets& sets, const std::vector<IsotropicGenerator>& js) {
    std::set<std::size_t> roots;
    for (std::size_t i = 0; i < js.size(); ++i) {
        if (js[i].z == 0) roots.insert(sets.find(i));
    }
    return roots.size();
}

}  // namespace detail

/// Orbits of {J_{a,0}} under the glued group. The Hodge-level group is
/// generated by (-1, id) and (1, g) for g in {theta, alpha, -id}; the
/// effective group uses (+-1, g) for the isometries g that preserve the ample
/// cone.
inline OrbitAnalysis orbit_analysis(const PellData& data) {
    const PolarizationDegree degree(data.e);
    const std::uint64_t e = data.e;
    OrbitAnalysis out;
    out.e = e;
    out.subgroups = enumerate_J(degree);
    std::sort(out.subgroups.begin(), out.subgroups.end());
    const auto& js = out.subgroups;

    const InducedAction id_bar = InducedAction::identity(e);
    std::vector<std::pair<std::string, NSIsometry>> named{{"alpha", alpha(degree)}, {"-id", -ns_identity(degree)}};
    if (!data.square) {
        named.emplace_back("theta", theta(degree));
        named.emplace_back("beta", beta(degree));
    }

    out.generators.push_back({"-id_T", GluedAction::make(-1, id_bar), true});
    for (const auto& [label, iso] : named) {
        out.generators.push_back(
            {label, GluedAction::make(1, induced_action(iso)), preserves_ample(iso, data.slopes)});
    }

    std::vector<GluedAction> hodge_gens;
    for (const auto& g : out.generators) {
        if (g.label != "beta") hodge_gens.push_back(g.action);  // beta = alpha theta is redundant
    }

    std::vector<GluedAction> effective_gens{GluedAction::make(-1, id_bar)};
    for (const auto& iso : isometry_family(degree, 1)) {
        if (!preserves_ample(iso, data.slopes)) continue;
        out.effective_isometries.push_back(iso.matrix().str());
        const InducedAction bar = induced_action(iso);
        effective_gens.push_back(GluedAction::make(1, bar));
        effective_gens.push_back(GluedAction::make(-1, bar));
    }

    for (const auto& j : js) {
        if (j.z != 0) continue;
        for (const auto& g : out.generators) {
            out.arrows.push_back({g.label, j, glued_action(g.action, j), g.effective});
        }
    }

    auto hodge = detail::orbits_under(js, hodge_gens);
    auto effective = detail::orbits_under(js, effective_gens);

    std::map<std::size_t, OrbitEntry> by_root;
    for (std::size_t i = 0; i < js.size(); ++i) {
        OrbitEntry& entry = by_root[hodge.find(i)];
        (js[i].z == 0 ? entry.members : entry.escaped).push_back(js[i]);
    }
    for (auto& [root, entry] : by_root) {
        if (entry.members.empty()) continue;
        std::map<std::size_t, std::vector<std::uint64_t>> split;
        for (const auto& j : entry.members) split[effective.find(detail::index_of(js, j))].push_back(j.a);
        for (auto& [r, cls] : split) entry.effective_classes.push_back(std::move(cls));
        out.orbit_table.push_back(std::move(entry));
    }

    out.fm_count = fm_partner_count(degree).count;
    out.hodge_level_classes = detail::count_classes(hodge, js);
    out.hodge_classes = detail::count_classes(effective, js);

    const auto group = detail::closure(effective_gens, e);
    out.effective_group_order = group.size();
    const IsotropicGenerator j1{e, 1 % (2 * e), 0};
    for (const auto& g : group) {
        if (!g.is_identity() && glued_action(g, j1) == j1) out.stabilizer_of_j1.push_back(g);
    }
    return out;
}

inline OrbitAnalysis orbit_analysis(PolarizationDegree e) { return orbit_analysis(pell_data(e)); }

// ---------------------------------------------------------------------------
// Aggregate verdict

struct Verdict {
    std::uint64_t e = 1;
    unsigned p_e = 1;
    std::uint64_t fm_count = 1;
    std::optional<FundamentalUnit> pell1;
    std::optional<PellSolution> pell_neg;
    std::optional<PellSolution> pell4e5;
    Slopes slopes;
    bool strongly_ambiguous = false;
    unsigned aut_order = 1;
    std::uint64_t hodge_classes = 1;
    std::uint64_t hodge_level_classes = 1;
    OrbitAnalysis orbits;
    std::vector<std::string> evidence;
};

inline Verdict analyze(PolarizationDegree degree) {
    const PellData data = pell_data(degree);
    const std::uint64_t e = data.e;
    Verdict v;
    v.e = e;
    v.p_e = p_of_e(degree);
    v.pell1 = data.unit;
    v.pell_neg = data.negative;
    v.pell4e5 = data.four_e_five;
    v.slopes = data.slopes;

    const AmbiguityEvidence amb = strong_ambiguity(data);
    v.strongly_ambiguous = amb.strongly_ambiguous;
    v.aut_order = aut_order(data);
    v.orbits = orbit_analysis(data);
    v.fm_count = v.orbits.fm_count;
    v.hodge_classes = v.orbits.hodge_classes;
    v.hodge_level_classes = v.orbits.hodge_level_classes;

    const std::string mod = " (mod " + std::to_string(2 * e) + ")";
    auto& ev = v.evidence;
    if (data.square) {
        ev.push_back("e is a perfect square: O(NS) = {+-id, +-alpha}, no theta");
    } else {
        ev.push_back("x^2 - " + std::to_string(e) + "y^2 = 1 minimal (U,V) = (" + data.unit->U.str() + "," +
                     data.unit->V.str() + "), V " + (data.v_even() ? "even" : "odd") + ", U = " +
                     std::to_string(data.u_residue()) + mod);
        ev.push_back(data.negative ? "x^2 - " + std::to_string(e) + "y^2 = -1 solvable: " + to_string(*data.negative)
                                   : "x^2 - " + std::to_string(e) + "y^2 = -1 not solvable");
    }
    ev.push_back(data.four_e_five ? "x^2 - " + std::to_string(4 * e) + "y^2 = 5 solvable: " + to_string(*data.four_e_five)
                                  : "x^2 - " + std::to_string(4 * e) + "y^2 = 5 not solvable");
    ev.push_back(std::string("Hodge isometry between distinct FM partners' Hilbert squares: ") +
                 (amb.hodge_isometry ? "yes" : "no"));
    ev.push_back(std::string("strong ambiguity: ") + (amb.strongly_ambiguous ? "yes" : "no") +
                 (amb.hodge_isometry && amb.four_e_five_solvable ? " (glued beta not effective: nef cone smaller than movable cone)" : ""));
    if (amb.witness) {
        ev.push_back("witness: J_" + std::to_string(amb.witness->first) + " -> J_" + std::to_string(amb.witness->second) +
                     " under (id, beta)");
    }
    ev.push_back("Aut(S^[2]) order " + std::to_string(v.aut_order) +
                 (v.aut_order == 2 ? " (glueing of -id_T with beta)" : ""));

    const bool orbit_ambiguous = v.hodge_classes < v.fm_count;
    if (orbit_ambiguous != v.strongly_ambiguous) {
        throw internal_error("e = " + std::to_string(e) + ": Pell criterion says strongly_ambiguous = " +
                             (v.strongly_ambiguous ? "true" : "false") + " but orbits give " +
                             std::to_string(v.hodge_classes) + " classes of " + std::to_string(v.fm_count));
    }
    const bool orbit_hodge = v.hodge_level_classes < v.fm_count;
    if (orbit_hodge != amb.hodge_isometry) {
        throw internal_error("e = " + std::to_string(e) + ": Hodge isometry criterion disagrees with Hodge orbits");
    }
    const unsigned orbit_aut = v.orbits.stabilizer_of_j1.empty() ? 1 : 2;
    if (orbit_aut != v.aut_order) {
        throw internal_error("e = " + std::to_string(e) + ": Pell criterion gives |Aut| = " + std::to_string(v.aut_order) +
                             " but the effective stabilizer of J_1 gives " + std::to_string(orbit_aut));
    }
    if (v.strongly_ambiguous && v.fm_count < 2) throw internal_error("strongly ambiguous with a single FM partner");
    return v;
}

// ---------------------------------------------------------------------------
// Supporting lemmas

struct Check {
    std::string name;
    bool applicable = true;
    bool holds = true;
    std::string detail;
};

/// Evaluates:
///  (i)   V even => U != 1 (mod 2e)
///  (ii)  (V even and U = -1 (mod 2e)) <=> x^2 - e y^2 = -1 solvable
///  (iii) e a prime power => V odd or x^2 - e y^2 = -1 solvable
///  (iv)  e a square or a prime power => not strongly ambiguous
inline std::vector<Check> consistency_check(PolarizationDegree degree) {
    const std::uint64_t e = degree.value();
    if (e < 2) throw std::invalid_argument("consistency_check: e must be >= 2");
    const PellData data = pell_data(degree);
    const bool prime_power = factorize(e).distinct_primes() == 1;
    std::vector<Check> out;

    if (data.square) {
        out.push_back({"i", false, true, "e is a square"});
        out.push_back({"ii", false, true, "e is a square"});
        out.push_back({"iii", false, true, "e is a square"});
    } else {
        const std::string uv = "(U,V) = (" + data.unit->U.str() + "," + data.unit->V.str() + ")";
        out.push_back({"i", true, !data.v_even() || !data.u_is_plus_one(), uv});

        const bool lhs = data.v_even() && data.u_is_minus_one();
        bool rhs = data.negative.has_value();
        std::string detail = uv + (rhs ? ", negative solution " + to_string(*data.negative) : ", no negative solution");
        if (data.negative) {
            // (s + t sqrt e)^2 = U + V sqrt e
            const BigInt& s = data.negative->x;
            const BigInt& t = data.negative->y;
            if (s * s + BigInt(e) * t * t != data.unit->U || 2 * s * t != data.unit->V) {
                rhs = !lhs;  // force a failure
                detail += ", but its square is not (U,V)";
            }
        }
        out.push_back({"ii", true, lhs == rhs, detail});

        out.push_back({"iii", prime_power, !prime_power || !data.v_even() || data.negative.has_value(),
                       prime_power ? uv : "e is not a prime power"});
    }

    const bool excluded = data.square || prime_power;
    const bool ambiguous = strong_ambiguity(data).strongly_ambiguous;
    out.push_back({"iv", excluded, !excluded || !ambiguous,
                   excluded ? std::string("strongly ambiguous = ") + (ambiguous ? "true" : "false")
                            : "e is neither a square nor a prime power"});
    return out;
}

}  // namespace k3hilb
