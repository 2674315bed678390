// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each criterion also enforces its runtime budget.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "k3hilb/cli.hpp"
#include "oracles.hpp"

using namespace k3hilb;

namespace {

PolarizationDegree E(std::uint64_t e) { return PolarizationDegree(e); }

/// Collects failure messages, keeping the first few for the report.
class Failures {
public:
    void add(const std::string& msg) {
        if (count_++ < 5) first_.push_back(msg);
    }
    template <class T>
    void expect_eq(const T& got, const T& want, const std::string& what) {
        if (!(got == want)) add(what);
    }
    void expect(bool ok, const std::string& what) {
        if (!ok) add(what);
    }
    std::size_t count() const { return count_; }
    std::string summary() const {
        std::string s;
        for (const auto& m : first_) s += "\n      " + m;
        if (count_ > first_.size()) s += "\n      ... " + std::to_string(count_ - first_.size()) + " more";
        return s;
    }

private:
    std::size_t count_ = 0;
    std::vector<std::string> first_;
};

struct CliResult {
    int code;
    std::string out;
};

CliResult cli_run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str()};
}

bool has(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

// 2^(p(e)-1) with p(1) = 1.
std::uint64_t expected_fm(std::uint64_t e) {
    const std::size_t p = std::max<std::size_t>(1, oracle::naive_factor(e).size());
    return std::uint64_t{1} << (p - 1);
}

// ---------------------------------------------------------------------------

void worked_examples(Failures& f) {
    const auto a6 = cli_run({"analyze", "6", "--json"});
    const auto a10 = cli_run({"analyze", "10", "--json"});
    const auto a15 = cli_run({"analyze", "15", "--json"});
    f.expect(a6.code == 0 && nlohmann::json::parse(a6.out)["strongly_ambiguous"] == true, "analyze 6");
    f.expect(a10.code == 0 && nlohmann::json::parse(a10.out)["strongly_ambiguous"] == false, "analyze 10");
    f.expect(a15.code == 0 && nlohmann::json::parse(a15.out)["strongly_ambiguous"] == false, "analyze 15");

    const auto o6 = cli_run({"orbits", "6"}).out;
    for (const char* arrow : {"J_1 -> J_5", "J_5 -> J_1", "J_7 -> J_11", "J_11 -> J_7"}) {
        f.expect(has(o6, arrow), std::string("orbits 6 lacks ") + arrow);
    }
    const auto o10 = cli_run({"orbits", "10"}).out;
    for (const char* arrow : {"J_1 -> J_19", "J_9 -> J_11"}) {
        f.expect(has(o10, arrow), std::string("orbits 10 lacks ") + arrow);
    }
    f.expect(has(cli_run({"orbits", "15"}).out, "[z=1]"), "orbits 15 shows no escape to z=1");
}

void pell_values(Failures& f) {
    auto check = [&](std::uint64_t d, std::int64_t u, std::int64_t v) {
        f.expect_eq(fundamental_solution(d), FundamentalUnit{BigInt(u), BigInt(v)}, "P_" + std::to_string(d) + "(1)");
    };
    check(6, 5, 2);
    check(10, 19, 6);
    check(15, 4, 1);
    check(2, 3, 2);
    check(8, 3, 1);
    f.expect_eq(negative_pell(10), std::optional<PellSolution>(PellSolution{3, 1}), "P_10(-1)");
}

void fm_counts(Failures& f) {
    for (std::uint64_t e = 1; e <= 2000; ++e) {
        try {
            const auto fm = fm_partner_count(E(e));
            f.expect_eq(fm.count, expected_fm(e), "e = " + std::to_string(e));
            std::size_t members = 0;
            for (const auto& o : fm.orbits) members += o.size();
            f.expect_eq(members, oracle::brute_isotropic(e, 0).size(), "orbit sizes, e = " + std::to_string(e));
        } catch (const std::exception& ex) {
            f.add("e = " + std::to_string(e) + ": " + ex.what());
        }
    }
    f.expect_eq(fm_partner_count(E(6)).count, std::uint64_t{2}, "e = 6");
    f.expect_eq(fm_partner_count(E(10)).count, std::uint64_t{2}, "e = 10");
}

void theorem_equivalence(Failures& f) {
    for (std::uint64_t e = 1; e <= 500; ++e) {
        const std::string tag = "e = " + std::to_string(e);
        try {
            const PellData data = pell_data(E(e));
            const OrbitAnalysis o = orbit_analysis(data);
            f.expect_eq(strong_ambiguity(data).strongly_ambiguous, o.hodge_classes < o.fm_count, tag + " ambiguity");
            f.expect_eq(hodge_isometry_exists(data), o.hodge_level_classes < o.fm_count, tag + " Hodge isometry");
            f.expect_eq(aut_order(data), o.stabilizer_of_j1.empty() ? 1U : 2U, tag + " |Aut|");
        } catch (const std::exception& ex) {
            f.add(tag + ": " + ex.what());
        }
    }
}

void lemma_suites(Failures& f) {
    for (std::uint64_t e = 2; e <= 2000; ++e) {
        const std::string tag = "e = " + std::to_string(e);
        const auto factors = oracle::naive_factor(e);
        const bool square = oracle::naive_is_square(e);
        const bool prime_power = factors.size() == 1;
        for (const auto& c : consistency_check(E(e))) {
            const bool should_apply = c.name == "iii" ? prime_power && !square
                                      : c.name == "iv" ? square || prime_power
                                                       : !square;
            f.expect_eq(c.applicable, should_apply, tag + " item " + c.name + " applicability");
            f.expect(c.holds, tag + " item " + c.name + ": " + c.detail);
        }
        if (strong_ambiguity(E(e)).strongly_ambiguous) {
            f.expect(!square && !prime_power, tag + " strongly ambiguous but square or prime power");
        }
    }
}

void pell_oracle(Failures& f) {
    constexpr std::uint64_t kBound = 1'000'000;
    for (std::uint64_t d = 2; d <= 500; ++d) {
        if (oracle::naive_is_square(d)) continue;
        for (std::int64_t m : {1, -1, 5}) {
            const PellProblem p(d, m);
            const std::string tag = "d = " + std::to_string(d) + ", m = " + std::to_string(m);
            const auto fast = minimal_solution(p);
            const auto brute = brute_force_minimal(p, kBound);
            if (fast && fast->y <= kBound) {
                f.expect_eq(fast, brute, tag);
            } else {
                f.expect(!brute.has_value(), tag + ": brute force found " + (brute ? to_string(*brute) : ""));
            }
        }
    }
}

void slope_properties(Failures& f) {
    for (std::uint64_t e = 1; e <= 1000; ++e) {
        const std::string tag = "e = " + std::to_string(e);
        const Slopes s = slopes(E(e));
        const bool solvable = pell_4e_5(E(e)).has_value();
        f.expect(s.nu <= s.mu, tag + " nu > mu");
        f.expect_eq(s.nu == s.mu, !solvable, tag + " equality vs P_4e(5)");
        if (e % 2 == 0) f.expect(!solvable, tag + " even e with P_4e(5) solvable");
    }
}

void isometry_suite(Failures& f) {
    for (std::uint64_t e = 2; e <= 300; ++e) {
        if (oracle::naive_is_square(e)) continue;
        const std::string tag = "e = " + std::to_string(e);
        const auto id = ns_identity(E(e));
        const auto b = beta(E(e));
        for (const auto& m : {theta(E(e)).matrix(), alpha(E(e)).matrix(), b.matrix()}) {
            f.expect(is_isometry(E(e), m), tag + " Gram identity " + m.str());
        }
        f.expect(b * b == id, tag + " beta^2");
        const auto tb = induced_action(theta(E(e)));
        f.expect(tb.after(tb) == InducedAction::identity(e), tag + " theta bar^2");

        const Slopes s = slopes(E(e));
        std::vector<NSIsometry> movable;
        for (const auto& g : isometry_family(E(e), 6)) {
            f.expect(is_isometry(E(e), g.matrix()), tag + " family member not an isometry");
            if (preserves_movable(g, s)) movable.push_back(g);
        }
        std::vector<NSIsometry> want{id, b};
        std::sort(want.begin(), want.end());
        f.expect(movable == want, tag + " movable-preserving elements are not {id, beta}");
    }
}

void big_integer(Failures& f) {
    const FundamentalUnit u = fundamental_solution(61);
    f.expect_eq(u, FundamentalUnit{BigInt("1766319049"), BigInt("226153980")}, "P_61(1)");
    const BigInt lhs = u.U * u.U - BigInt(61) * u.V * u.V;
    f.expect_eq(lhs, BigInt(1), "U^2 - 61 V^2");
    f.expect_eq(u.U * u.U, BigInt("3119882982860264401"), "U^2");
    f.expect_eq(BigInt(61) * u.V * u.V, BigInt("3119882982860264400"), "61 V^2");
}

void cli_contract(Failures& f) {
    for (std::uint64_t e = 1; e <= 200; ++e) {
        const auto res = cli_run({"analyze", std::to_string(e), "--json"});
        if (res.code != 0) {
            f.add("analyze " + std::to_string(e) + " exited " + std::to_string(res.code));
            continue;
        }
        const auto parsed = record_from_json(nlohmann::json::parse(res.out));
        f.expect_eq(parsed, to_record(analyze(E(e))), "JSON round trip e = " + std::to_string(e));
        f.expect_eq(to_json(parsed).dump(), to_json(to_record(analyze(E(e)))).dump(), "re-serialization e = " + std::to_string(e));
    }
    const auto serial = cli_run({"scan", "1", "200", "--json", "--jobs", "1"});
    for (const char* jobs : {"2", "4", "8"}) {
        f.expect_eq(cli_run({"scan", "1", "200", "--json", "--jobs", jobs}).out, serial.out,
                    std::string("scan differs with --jobs ") + jobs);
    }
    f.expect_eq(cli_run({"analyze", "6"}).code, cli::kExitOk, "analyze 6 exit code");
    f.expect_eq(cli_run({"--help"}).code, cli::kExitOk, "--help exit code");
    f.expect_eq(cli_run({"analyze", "0"}).code, cli::kExitInvalidInput, "analyze 0 exit code");
    f.expect_eq(cli_run({"pell", "9", "1"}).code, cli::kExitInvalidInput, "pell 9 1 exit code");
    f.expect_eq(cli_run({"scan", "1"}).code, cli::kExitInvalidInput, "scan without upper bound exit code");
    f.expect_eq(cli_run({"bogus"}).code, cli::kExitInvalidInput, "unknown command exit code");
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<void(Failures&)> body;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "worked examples: analyze and orbits for e = 6, 10, 15", 1, worked_examples},
        {2, "minimal Pell solutions", 1, pell_values},
        {3, "FM partner counts for e <= 2000", 10, fm_counts},
        {4, "closed-form verdicts equal orbit computations for e <= 500", 60, theorem_equivalence},
        {5, "parity, prime-power and exclusion lemmas for e <= 2000", 60, lemma_suites},
        {6, "Pell solver equals brute force (d <= 500, m in {1,-1,5}, y <= 10^6)", 120, pell_oracle},
        {7, "slope properties for e <= 1000", 60, slope_properties},
        {8, "isometry suite for non-square e <= 300", 60, isometry_suite},
        {9, "big-integer check of x^2 - 61y^2 = 1", 1, big_integer},
        {10, "CLI contract: JSON round trip, scan determinism, exit codes", 120, cli_contract},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Failures f;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.body(f);
        } catch (const std::exception& ex) {
            f.add(std::string("uncaught exception: ") + ex.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_seconds) {
            f.add("took " + std::to_string(secs) + " s, budget " + std::to_string(c.budget_seconds) + " s");
        }
        const bool ok = f.count() == 0;
        if (!ok) ++failed;
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.2f s", secs);
        std::cout << (ok ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << "  (" << timing << ")"
                  << (ok ? "" : f.summary()) << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
