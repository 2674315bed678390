#pragma once

// Flat records for machine-readable output.
//
// CSV columns (fixed order, header always present):
//   e,p_e,fm_count,U,V,neg_x,neg_y,p45_x,p45_y,nu_num,nu_den,mu_num,mu_den,
//   strongly_ambiguous,aut_order,hodge_classes
// Unsolvable Pell fields (and U,V for square e) are empty cells.
//
// JSON uses the field names of OutputRecord. Big integers (U, V, Pell
// solutions, slope numerators/denominators) are decimal strings because they
// routinely exceed 64 bits; absent values are null.

#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "k3hilb/verdicts.hpp"

namespace k3hilb {

struct OutputRecord {
    std::uint64_t e = 1;
    unsigned p_e = 1;
    std::uint64_t fm_count = 1;
    std::optional<BigInt> U, V;
    std::optional<BigInt> pell_neg_x, pell_neg_y;
    std::optional<BigInt> pell45_x, pell45_y;
    BigInt nu_num{1}, nu_den{1}, mu_num{1}, mu_den{1};
    bool strongly_ambiguous = false;
    unsigned aut_order = 1;
    std::uint64_t hodge_classes = 1;

    friend bool operator==(const OutputRecord&, const OutputRecord&) = default;
};

inline OutputRecord to_record(const Verdict& v) {
    OutputRecord r;
    r.e = v.e;
    r.p_e = v.p_e;
    r.fm_count = v.fm_count;
    if (v.pell1) {
        r.U = v.pell1->U;
        r.V = v.pell1->V;
    }
    if (v.pell_neg) {
        r.pell_neg_x = v.pell_neg->x;
        r.pell_neg_y = v.pell_neg->y;
    }
    if (v.pell4e5) {
        r.pell45_x = v.pell4e5->x;
        r.pell45_y = v.pell4e5->y;
    }
    r.nu_num = boost::multiprecision::numerator(v.slopes.nu);
    r.nu_den = boost::multiprecision::denominator(v.slopes.nu);
    r.mu_num = boost::multiprecision::numerator(v.slopes.mu);
    r.mu_den = boost::multiprecision::denominator(v.slopes.mu);
    r.strongly_ambiguous = v.strongly_ambiguous;
    r.aut_order = v.aut_order;
    r.hodge_classes = v.hodge_classes;
    return r;
}

namespace detail {

inline nlohmann::ordered_json big_or_null(const std::optional<BigInt>& v) {
    if (!v) return nullptr;
    return v->str();
}

inline std::optional<BigInt> parse_big_or_null(const nlohmann::json& j) {
    if (j.is_null()) return std::nullopt;
    return BigInt(j.get<std::string>());
}

inline std::string cell(const std::optional<BigInt>& v) { return v ? v->str() : std::string(); }

inline std::string rational_text(const BigInt& num, const BigInt& den) {
    return den == 1 ? num.str() : num.str() + "/" + den.str();
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const OutputRecord& r) {
    nlohmann::ordered_json j;
    j["e"] = r.e;
    j["p_e"] = r.p_e;
    j["fm_count"] = r.fm_count;
    j["U"] = detail::big_or_null(r.U);
    j["V"] = detail::big_or_null(r.V);
    j["pell_neg_x"] = detail::big_or_null(r.pell_neg_x);
    j["pell_neg_y"] = detail::big_or_null(r.pell_neg_y);
    j["pell45_x"] = detail::big_or_null(r.pell45_x);
    j["pell45_y"] = detail::big_or_null(r.pell45_y);
    j["nu_num"] = r.nu_num.str();
    j["nu_den"] = r.nu_den.str();
    j["mu_num"] = r.mu_num.str();
    j["mu_den"] = r.mu_den.str();
    j["strongly_ambiguous"] = r.strongly_ambiguous;
    j["aut_order"] = r.aut_order;
    j["hodge_classes"] = r.hodge_classes;
    return j;
}

inline OutputRecord record_from_json(const nlohmann::json& j) {
    OutputRecord r;
    r.e = j.at("e").get<std::uint64_t>();
    r.p_e = j.at("p_e").get<unsigned>();
    r.fm_count = j.at("fm_count").get<std::uint64_t>();
    r.U = detail::parse_big_or_null(j.at("U"));
    r.V = detail::parse_big_or_null(j.at("V"));
    r.pell_neg_x = detail::parse_big_or_null(j.at("pell_neg_x"));
    r.pell_neg_y = detail::parse_big_or_null(j.at("pell_neg_y"));
    r.pell45_x = detail::parse_big_or_null(j.at("pell45_x"));
    r.pell45_y = detail::parse_big_or_null(j.at("pell45_y"));
    r.nu_num = BigInt(j.at("nu_num").get<std::string>());
    r.nu_den = BigInt(j.at("nu_den").get<std::string>());
    r.mu_num = BigInt(j.at("mu_num").get<std::string>());
    r.mu_den = BigInt(j.at("mu_den").get<std::string>());
    r.strongly_ambiguous = j.at("strongly_ambiguous").get<bool>();
    r.aut_order = j.at("aut_order").get<unsigned>();
    r.hodge_classes = j.at("hodge_classes").get<std::uint64_t>();
    return r;
}

inline const std::string& csv_header() {
    static const std::string header =
        "e,p_e,fm_count,U,V,neg_x,neg_y,p45_x,p45_y,nu_num,nu_den,mu_num,mu_den,strongly_ambiguous,aut_order,"
        "hodge_classes";
    return header;
}

inline std::string to_csv_row(const OutputRecord& r) {
    std::ostringstream os;
    os << r.e << ',' << r.p_e << ',' << r.fm_count << ',' << detail::cell(r.U) << ',' << detail::cell(r.V) << ','
       << detail::cell(r.pell_neg_x) << ',' << detail::cell(r.pell_neg_y) << ',' << detail::cell(r.pell45_x) << ','
       << detail::cell(r.pell45_y) << ',' << r.nu_num << ',' << r.nu_den << ',' << r.mu_num << ',' << r.mu_den << ','
       << (r.strongly_ambiguous ? "true" : "false") << ',' << r.aut_order << ',' << r.hodge_classes;
    return os.str();
}

/// Human-readable table; rationals render as "12/5".
inline std::string render_table(const std::vector<OutputRecord>& records) {
    const std::vector<std::string> header{"e", "p(e)", "FM", "(U,V)", "P_e(-1)", "P_4e(5)", "nu", "mu", "ambiguous",
                                          "|Aut|", "classes"};
    std::vector<std::vector<std::string>> rows{header};
    auto pair_text = [](const std::optional<BigInt>& x, const std::optional<BigInt>& y) {
        return x ? "(" + x->str() + "," + y->str() + ")" : std::string("-");
    };
    for (const auto& r : records) {
        rows.push_back({std::to_string(r.e), std::to_string(r.p_e), std::to_string(r.fm_count), pair_text(r.U, r.V),
                        pair_text(r.pell_neg_x, r.pell_neg_y), pair_text(r.pell45_x, r.pell45_y),
                        detail::rational_text(r.nu_num, r.nu_den), detail::rational_text(r.mu_num, r.mu_den),
                        r.strongly_ambiguous ? "yes" : "no", std::to_string(r.aut_order),
                        std::to_string(r.hodge_classes)});
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream os;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) os << "  ";
            if (c + 1 == row.size()) {
                os << row[c];
            } else {
                os << std::left << std::setw(static_cast<int>(width[c])) << row[c];
            }
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace k3hilb
