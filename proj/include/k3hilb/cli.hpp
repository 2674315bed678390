#pragma once

// Command-line front end.
//
//   k3hilb analyze <e>            [--format table|csv|json]
//   k3hilb scan <from> <to>       [--format ...] [--only-ambiguous] [--only-aut] [--jobs N]
//   k3hilb pell <d> <m>           [--format ...] [--count K]
//   k3hilb orbits <e>
//
// Exit codes: 0 success, 2 invalid input, 3 internal cross-check failure,
// 1 anything else.

#include <atomic>
#include <cstdint>
#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "k3hilb/report.hpp"
#include "k3hilb/verdicts.hpp"

namespace k3hilb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitInternal = 3;

inline constexpr std::uint64_t kMaxDegree = 1'000'000'000ULL;

enum class Format { table, csv, json };

/// Thrown for user errors; mapped to exit code 2.
class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::uint64_t parse_degree(const std::string& text, const char* what) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        if (text.empty() || text[0] == '-' || text[0] == '+') throw std::invalid_argument(text);
        v = std::stoull(text, &used);
    } catch (const std::exception&) {
        throw usage_error(std::string(what) + " must be a positive integer, got '" + text + "'");
    }
    if (used != text.size()) throw usage_error(std::string(what) + " must be a positive integer, got '" + text + "'");
    if (v < 1 || v > kMaxDegree) {
        throw usage_error(std::string(what) + " must lie in [1, 10^9], got " + text);
    }
    return v;
}

inline std::int64_t parse_signed(const std::string& text, const char* what) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        throw usage_error(std::string(what) + " must be an integer, got '" + text + "'");
    }
    if (used != text.size()) throw usage_error(std::string(what) + " must be an integer, got '" + text + "'");
    return v;
}

inline std::string pair_text(const BigInt& x, const BigInt& y) { return "(" + x.str() + "," + y.str() + ")"; }

inline std::string rational_text(const Rational& r) { return r.str(); }

}  // namespace detail

/// Evaluates analyze() for every e in [from, to] on `jobs` threads; the
/// result is ordered by e regardless of scheduling.
inline std::vector<Verdict> analyze_range(std::uint64_t from, std::uint64_t to, unsigned jobs) {
    const std::size_t n = to - from + 1;
    std::vector<std::optional<Verdict>> results(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                results[i] = analyze(PolarizationDegree(from + i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::min<std::size_t>(n, 256))));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<Verdict> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.push_back(std::move(*results[i]));
    }
    return out;
}

inline void print_analyze(const Verdict& v, Format format, std::ostream& out) {
    const OutputRecord r = to_record(v);
    switch (format) {
        case Format::json: {
            auto j = to_json(r);
            j["evidence"] = v.evidence;
            out << j.dump(2) << '\n';
            return;
        }
        case Format::csv:
            out << csv_header() << '\n' << to_csv_row(r) << '\n';
            return;
        case Format::table:
            break;
    }
    out << "e = " << v.e << "  (h^2 = " << 2 * v.e << ")\n";
    out << "p(e)                   " << v.p_e << '\n';
    out << "FM partners            " << v.fm_count << '\n';
    out << "P_e(1) minimal         " << (v.pell1 ? detail::pair_text(v.pell1->U, v.pell1->V) : "- (e square)") << '\n';
    out << "P_e(-1) minimal        " << (v.pell_neg ? to_string(*v.pell_neg) : "unsolvable") << '\n';
    out << "P_4e(5) minimal        " << (v.pell4e5 ? to_string(*v.pell4e5) : "unsolvable") << '\n';
    out << "nef slope nu           " << detail::rational_text(v.slopes.nu) << '\n';
    out << "movable slope mu       " << detail::rational_text(v.slopes.mu) << '\n';
    out << "strongly_ambiguous     " << (v.strongly_ambiguous ? "true" : "false") << '\n';
    out << "aut_order              " << v.aut_order << '\n';
    out << "Hilbert square classes " << v.hodge_classes << " (up to Hodge isometry: " << v.hodge_level_classes
        << ")\n";
    out << "evidence:\n";
    for (const auto& line : v.evidence) out << "  - " << line << '\n';
}

inline void print_orbits(const OrbitAnalysis& o, std::ostream& out) {
    out << "e = " << o.e << ": isotropic subgroups J_{a,z} of A_T x A_NS\n";
    out << " ";
    for (const auto& j : o.subgroups) out << ' ' << to_string(j);
    out << '\n';
    out << "generator actions on z = 0 subgroups:\n";
    for (const auto& g : o.generators) {
        out << "  " << g.label << (g.effective ? " (effective)" : "") << ":";
        for (const auto& arrow : o.arrows) {
            if (arrow.label != g.label) continue;
            out << "  " << to_string(arrow.from) << " -> " << to_string(arrow.to);
            if (arrow.to.z != 0) out << " [z=1]";
        }
        out << '\n';
    }
    out << "effective isometries of NS:";
    for (const auto& m : o.effective_isometries) out << ' ' << m;
    out << '\n';
    out << "Hodge-level orbits of z = 0 subgroups:\n";
    for (const auto& entry : o.orbit_table) {
        out << "  {";
        for (std::size_t i = 0; i < entry.members.size(); ++i) out << (i ? ", " : "") << to_string(entry.members[i]);
        out << "}";
        if (!entry.escaped.empty()) {
            out << "  leaves z = 0 via";
            for (const auto& j : entry.escaped) out << ' ' << to_string(j);
        }
        out << "  effective classes:";
        for (const auto& cls : entry.effective_classes) {
            out << " {";
            for (std::size_t i = 0; i < cls.size(); ++i) out << (i ? "," : "") << cls[i];
            out << "}";
        }
        out << '\n';
    }
    out << "FM partners: " << o.fm_count << ", Hilbert square classes: " << o.hodge_classes
        << ", up to Hodge isometry: " << o.hodge_level_classes << '\n';
    out << "effective stabilizer of J_1: " << (o.stabilizer_of_j1.empty() ? "trivial" : "order 2") << '\n';
}

inline void print_pell(std::uint64_t d, std::int64_t m, std::size_t count, Format format, std::ostream& out) {
    if (d < 2 || is_perfect_square(d)) throw usage_error("d must be a non-square integer >= 2");
    if (m == 0) throw usage_error("m must be nonzero");
    if (std::llabs(m) > kPellRhsCap) throw usage_error("|m| must not exceed 10^6");
    if (count == 0) throw usage_error("--count must be >= 1");
    const PellProblem problem(d, m);
    std::optional<PellSolution> minimal;
    try {
        minimal = minimal_solution(problem);
    } catch (const std::range_error& ex) {
        throw usage_error(ex.what());
    }
    std::vector<PellSolution> sols;
    if (minimal) sols = generate_solutions(problem, *minimal, count);

    switch (format) {
        case Format::json: {
            nlohmann::ordered_json j;
            j["d"] = d;
            j["m"] = m;
            j["solvable"] = minimal.has_value();
            j["solutions"] = nlohmann::ordered_json::array();
            for (const auto& s : sols) j["solutions"].push_back({{"x", s.x.str()}, {"y", s.y.str()}});
            out << j.dump(2) << '\n';
            return;
        }
        case Format::csv:
            out << "k,x,y\n";
            for (std::size_t k = 0; k < sols.size(); ++k) out << k << ',' << sols[k].x << ',' << sols[k].y << '\n';
            return;
        case Format::table:
            break;
    }
    out << "x^2 - " << d << "y^2 = " << m << ": ";
    if (!minimal) {
        out << "unsolvable\n";
        return;
    }
    for (std::size_t k = 0; k < sols.size(); ++k) out << (k ? "," : "") << to_string(sols[k]);
    out << '\n';
}

/// Entry point shared by the executable and the tests.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Strong ambiguity and automorphisms of Hilbert squares of Picard rank one K3 surfaces"};
    app.name("k3hilb");
    app.require_subcommand(1);

    std::string format_name = "table";
    const std::map<std::string, Format> formats{{"table", Format::table}, {"csv", Format::csv}, {"json", Format::json}};
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format_name, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));
        sub->add_flag_callback("--json", [&] { format_name = "json"; }, "Shorthand for --format json");
        sub->add_flag_callback("--csv", [&] { format_name = "csv"; }, "Shorthand for --format csv");
    };

    std::string e_text, from_text, to_text, d_text, m_text;
    bool only_ambiguous = false, only_aut = false;
    unsigned jobs = 1;
    std::size_t count = 1;

    auto* analyze_cmd = app.add_subcommand("analyze", "Full verdict for one e");
    analyze_cmd->add_option("e", e_text, "Half the degree, h^2 = 2e")->required();
    add_format(analyze_cmd);

    auto* scan_cmd = app.add_subcommand("scan", "One record per e in [from, to]");
    scan_cmd->add_option("from", from_text)->required();
    scan_cmd->add_option("to", to_text)->required();
    scan_cmd->add_flag("--only-ambiguous", only_ambiguous, "Keep strongly ambiguous e only");
    scan_cmd->add_flag("--only-aut", only_aut, "Keep e with nontrivial Aut only");
    scan_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    add_format(scan_cmd);

    auto* pell_cmd = app.add_subcommand("pell", "Solve x^2 - d y^2 = m");
    pell_cmd->add_option("d", d_text)->required();
    pell_cmd->add_option("m", m_text)->required();
    pell_cmd->add_option("--count", count, "Number of solutions to list")->check(CLI::PositiveNumber);
    add_format(pell_cmd);

    auto* orbits_cmd = app.add_subcommand("orbits", "Glued isometry orbits on isotropic subgroups");
    orbits_cmd->add_option("e", e_text)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& ex) {
        err << "error: " << ex.what() << '\n' << app.help();
        return kExitInvalidInput;
    }

    const Format format = formats.at(format_name);
    try {
        if (analyze_cmd->parsed()) {
            print_analyze(analyze(PolarizationDegree(detail::parse_degree(e_text, "e"))), format, out);
        } else if (scan_cmd->parsed()) {
            const std::uint64_t from = detail::parse_degree(from_text, "from");
            const std::uint64_t to = detail::parse_degree(to_text, "to");
            if (from > to) throw usage_error("scan: need from <= to");
            std::vector<OutputRecord> records;
            for (const auto& v : analyze_range(from, to, jobs)) {
                if (only_ambiguous && !v.strongly_ambiguous) continue;
                if (only_aut && v.aut_order != 2) continue;
                records.push_back(to_record(v));
            }
            if (format == Format::json) {
                nlohmann::ordered_json arr = nlohmann::ordered_json::array();
                for (const auto& r : records) arr.push_back(to_json(r));
                out << arr.dump(2) << '\n';
            } else if (format == Format::csv) {
                out << csv_header() << '\n';
                for (const auto& r : records) out << to_csv_row(r) << '\n';
            } else {
                out << render_table(records);
            }
        } else if (pell_cmd->parsed()) {
            const std::int64_t d = detail::parse_signed(d_text, "d");
            const std::int64_t m = detail::parse_signed(m_text, "m");
            if (d < 2) throw usage_error("d must be a non-square integer >= 2");
            print_pell(static_cast<std::uint64_t>(d), m, count, format, out);
        } else if (orbits_cmd->parsed()) {
            print_orbits(orbit_analysis(PolarizationDegree(detail::parse_degree(e_text, "e"))), out);
        }
    } catch (const usage_error& ex) {
        err << "error: " << ex.what() << '\n';
        for (auto* sub : app.get_subcommands()) err << sub->help();
        return kExitInvalidInput;
    } catch (const internal_error& ex) {
        err << "internal error: " << ex.what() << '\n';
        return kExitInternal;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace k3hilb::cli
