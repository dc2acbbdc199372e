#pragma once

// Emitters and parsers for the documented file formats (see docs/formats.md).
// Every emitter is deterministic: identical inputs give identical bytes.
// Decimal columns are presentation only and never feed back into analysis.

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cardshuffle/deck.hpp"
#include "cardshuffle/enumeration.hpp"
#include "cardshuffle/error.hpp"
#include "cardshuffle/formulas.hpp"
#include "cardshuffle/montecarlo.hpp"
#include "cardshuffle/rational.hpp"
#include "cardshuffle/solver.hpp"

namespace cardshuffle::report {

inline std::string class_name(DeckClass c) {
    switch (c) {
        case DeckClass::Absorbing: return "absorbing";
        case DeckClass::RDeck: return "r";
        case DeckClass::DDeck: return "d";
    }
    return "?";
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(field);
            field.clear();
        } else {
            field += ch;
        }
    }
    out.push_back(field);
    return out;
}

inline std::vector<std::vector<std::string>> parse_csv(const std::string& text,
                                                       const std::string& expected_header,
                                                       size_t fields) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != expected_header)
        raise(Errc::invalid_character, "csv: expected header '" + expected_header + "'");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto row = split_csv_line(line);
        if (row.size() != fields)
            raise(Errc::invalid_character, "csv: expected " + std::to_string(fields) +
                                               " fields, got " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string format_fixed(double v, int places = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", places, v);
    return buf;
}

// ---------------------------------------------------------------------------
// census: n,k,total,r_count,d_count,longest_chain_len

inline constexpr const char* kCensusHeader = "n,k,total,r_count,d_count,longest_chain_len";

struct CensusRow {
    int n = 0, k = 0;
    std::uint64_t total = 0, r_count = 0, d_count = 0;
    int longest_chain_len = 0;
};

inline std::vector<CensusRow> census_rows(const TierCensus& c) {
    std::vector<CensusRow> rows;
    for (const auto& t : c.tiers)
        rows.push_back({c.n, t.k, t.total, t.r_count, t.d_count, t.longest_chain_len()});
    return rows;
}

inline std::string census_csv(const std::vector<CensusRow>& rows) {
    std::string out = std::string(kCensusHeader) + "\n";
    for (const auto& r : rows)
        out += std::to_string(r.n) + "," + std::to_string(r.k) + "," + std::to_string(r.total) +
               "," + std::to_string(r.r_count) + "," + std::to_string(r.d_count) + "," +
               std::to_string(r.longest_chain_len) + "\n";
    return out;
}

inline std::vector<CensusRow> parse_census_csv(const std::string& text) {
    std::vector<CensusRow> rows;
    for (const auto& f : parse_csv(text, kCensusHeader, 6))
        rows.push_back({std::stoi(f[0]), std::stoi(f[1]), std::stoull(f[2]), std::stoull(f[3]),
                        std::stoull(f[4]), std::stoi(f[5])});
    return rows;
}

// ---------------------------------------------------------------------------
// solve: deck,tier,class,lambda_num,lambda_den plus optional decimal column

inline constexpr const char* kSolveHeader = "deck,tier,class,lambda_num,lambda_den";
inline constexpr const char* kSolveHeaderDec = "deck,tier,class,lambda_num,lambda_den,lambda_decimal";

struct SolveRow {
    std::string deck;
    int tier = 0;
    std::string cls;
    BigInt lambda_num, lambda_den;
    std::optional<std::string> decimal;
};

inline std::vector<SolveRow> solve_rows(const AbsorptionTable& table, bool decimals) {
    std::vector<SolveRow> rows;
    for (size_t i = 0; i < table.size(); ++i) {
        const Deck& d = table.decks[i];
        SolveRow row{render(d), tier_of(d), class_name(classify(d)), num(table.lambda[i]),
                     den(table.lambda[i]), std::nullopt};
        if (decimals) row.decimal = rational_to_decimal(table.lambda[i]);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string solve_csv(const std::vector<SolveRow>& rows) {
    bool decimals = !rows.empty() && rows.front().decimal.has_value();
    std::string out = std::string(decimals ? kSolveHeaderDec : kSolveHeader) + "\n";
    for (const auto& r : rows) {
        out += r.deck + "," + std::to_string(r.tier) + "," + r.cls + "," + r.lambda_num.str() +
               "," + r.lambda_den.str();
        if (decimals) out += "," + *r.decimal;
        out += "\n";
    }
    return out;
}

inline std::vector<SolveRow> parse_solve_csv(const std::string& text) {
    bool decimals = text.rfind(kSolveHeaderDec, 0) == 0;
    std::vector<SolveRow> rows;
    for (const auto& f :
         parse_csv(text, decimals ? kSolveHeaderDec : kSolveHeader, decimals ? 6 : 5)) {
        SolveRow row{f[0], std::stoi(f[1]), f[2], BigInt(f[3]), BigInt(f[4]), std::nullopt};
        if (decimals) row.decimal = f[5];
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string solve_json(const AbsorptionTable& table, bool decimals) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : solve_rows(table, decimals)) {
        nlohmann::json row{{"deck", r.deck},
                           {"tier", r.tier},
                           {"class", r.cls},
                           {"lambda_num", r.lambda_num.str()},
                           {"lambda_den", r.lambda_den.str()}};
        if (r.decimal) row["lambda_decimal"] = *r.decimal;
        rows.push_back(std::move(row));
    }
    nlohmann::json doc{{"n", table.n}, {"max_tier", table.max_tier}, {"rows", rows}};
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// stats: n,k,m_num,m_den,M_num,M_den,Mr_num,Mr_den,mean_num,mean_den,lcd,
//        argmin,argmax,argmax_r

inline constexpr const char* kStatsHeader =
    "n,k,m_num,m_den,M_num,M_den,Mr_num,Mr_den,mean_num,mean_den,lcd,argmin,argmax,argmax_r";

struct StatsRow {
    int n = 0, k = 0;
    BigInt m_num, m_den, big_m_num, big_m_den, mr_num, mr_den, mean_num, mean_den, lcd;
    std::string argmin, argmax, argmax_r;
};

inline StatsRow stats_row(const TierStats& s) {
    return StatsRow{s.n,
                    s.k,
                    num(s.m_k),
                    den(s.m_k),
                    num(s.big_m_k),
                    den(s.big_m_k),
                    num(s.big_m_k_r),
                    den(s.big_m_k_r),
                    num(s.tier_mean),
                    den(s.tier_mean),
                    s.common_denominator,
                    render(s.argmin_deck),
                    render(s.argmax_deck),
                    render(s.argmax_r_deck)};
}

inline std::string stats_csv(const std::vector<StatsRow>& rows) {
    std::string out = std::string(kStatsHeader) + "\n";
    for (const auto& r : rows)
        out += std::to_string(r.n) + "," + std::to_string(r.k) + "," + r.m_num.str() + "," +
               r.m_den.str() + "," + r.big_m_num.str() + "," + r.big_m_den.str() + "," +
               r.mr_num.str() + "," + r.mr_den.str() + "," + r.mean_num.str() + "," +
               r.mean_den.str() + "," + r.lcd.str() + "," + r.argmin + "," + r.argmax + "," +
               r.argmax_r + "\n";
    return out;
}

inline std::vector<StatsRow> parse_stats_csv(const std::string& text) {
    std::vector<StatsRow> rows;
    for (const auto& f : parse_csv(text, kStatsHeader, 14))
        rows.push_back({std::stoi(f[0]), std::stoi(f[1]), BigInt(f[2]), BigInt(f[3]), BigInt(f[4]),
                        BigInt(f[5]), BigInt(f[6]), BigInt(f[7]), BigInt(f[8]), BigInt(f[9]),
                        BigInt(f[10]), f[11], f[12], f[13]});
    return rows;
}

inline std::string stats_markdown(const std::vector<StatsRow>& rows) {
    std::string out = "| n | k | m_k | M_k^r | M_k | tier mean | lcd | argmin | argmax_r | argmax |\n";
    out += "|---|---|-----|-------|-----|-----------|-----|--------|----------|--------|\n";
    for (const auto& r : rows) {
        auto rat = [](const BigInt& p, const BigInt& q) {
            return q == 1 ? p.str() : p.str() + "/" + q.str();
        };
        out += "| " + std::to_string(r.n) + " | " + std::to_string(r.k) + " | " +
               rat(r.m_num, r.m_den) + " | " + rat(r.mr_num, r.mr_den) + " | " +
               rat(r.big_m_num, r.big_m_den) + " | " + rat(r.mean_num, r.mean_den) + " | " +
               r.lcd.str() + " | " + r.argmin + " | " + r.argmax_r + " | " + r.argmax + " |\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// bounds: n,k plus the four bounds as p/q and as fixed decimals

inline constexpr const char* kBoundsHeader =
    "n,k,lower_m,upper_M_v1,upper_Mr,upper_M_v2,lower_m_dec,upper_M_v1_dec,upper_Mr_dec,"
    "upper_M_v2_dec";

inline std::string bounds_csv(const std::vector<BoundsRecord>& rows) {
    std::string out = std::string(kBoundsHeader) + "\n";
    for (const auto& b : rows)
        out += std::to_string(b.n) + "," + std::to_string(b.k) + "," + format_rational(b.lower_m) +
               "," + format_rational(b.upper_m_v1) + "," + format_rational(b.upper_mr) + "," +
               format_rational(b.upper_m_v2) + "," + rational_to_decimal(b.lower_m) + "," +
               rational_to_decimal(b.upper_m_v1) + "," + rational_to_decimal(b.upper_mr) + "," +
               rational_to_decimal(b.upper_m_v2) + "\n";
    return out;
}

inline std::vector<BoundsRecord> parse_bounds_csv(const std::string& text) {
    std::vector<BoundsRecord> rows;
    for (const auto& f : parse_csv(text, kBoundsHeader, 10)) {
        BoundsRecord b;
        b.n = std::stoi(f[0]);
        b.k = std::stoi(f[1]);
        b.lower_m = parse_rational(f[2]);
        b.upper_m_v1 = parse_rational(f[3]);
        b.upper_mr = parse_rational(f[4]);
        b.upper_m_v2 = parse_rational(f[5]);
        rows.push_back(std::move(b));
    }
    return rows;
}

inline std::string bounds_markdown(const std::vector<BoundsRecord>& rows) {
    std::string out = "| n | k | lower m_k | upper M_k (v1) | upper M_k^r | upper M_k (v2) |\n";
    out += "|---|---|-----------|----------------|-------------|----------------|\n";
    for (const auto& b : rows)
        out += "| " + std::to_string(b.n) + " | " + std::to_string(b.k) + " | " +
               rational_to_decimal(b.lower_m) + " | " + rational_to_decimal(b.upper_m_v1) + " | " +
               rational_to_decimal(b.upper_mr) + " | " + rational_to_decimal(b.upper_m_v2) +
               " |\n";
    return out;
}

// ---------------------------------------------------------------------------
// simulate: deck,n,tier,trials,seed,mean,stddev,min,max,mean_random_moves
// sweep:    label,deck,n,tier,trials,seed,mean,stddev,min,max,mean_random_moves

inline constexpr const char* kSimulateHeader =
    "deck,n,tier,trials,seed,mean,stddev,min,max,mean_random_moves";
inline constexpr const char* kSweepHeader =
    "label,deck,n,tier,trials,seed,mean,stddev,min,max,mean_random_moves";

inline std::string simulate_fields(const SimResult& r) {
    const Deck& d = r.config.start;
    return render(d) + "," + std::to_string(r.config.n) + "," + std::to_string(tier_of(d)) + "," +
           std::to_string(r.trials) + "," + std::to_string(r.config.master_seed) + "," +
           rational_to_decimal(r.mean_moves()) + "," + format_fixed(r.stddev_moves()) + "," +
           std::to_string(r.min_moves) + "," + std::to_string(r.max_moves) + "," +
           rational_to_decimal(r.mean_random_moves());
}

inline std::string simulate_csv(const std::vector<SimResult>& results) {
    std::string out = std::string(kSimulateHeader) + "\n";
    for (const auto& r : results) out += simulate_fields(r) + "\n";
    return out;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = std::string(kSweepHeader) + "\n";
    for (const auto& r : rows) out += r.label + "," + simulate_fields(r.result) + "\n";
    return out;
}

struct SimCsvRow {
    std::string deck;
    int n = 0, tier = 0;
    std::uint64_t trials = 0, seed = 0;
    std::string mean, stddev;
    std::uint64_t min = 0, max = 0;
    std::string mean_random;
};

inline std::vector<SimCsvRow> parse_simulate_csv(const std::string& text) {
    std::vector<SimCsvRow> rows;
    for (const auto& f : parse_csv(text, kSimulateHeader, 10))
        rows.push_back({f[0], std::stoi(f[1]), std::stoi(f[2]), std::stoull(f[3]), std::stoull(f[4]),
                        f[5], f[6], std::stoull(f[7]), std::stoull(f[8]), f[9]});
    return rows;
}

// ---------------------------------------------------------------------------
// Figure: per-tier bound curves and exact points for one n.

struct FigureSeries {
    int n = 0;
    std::vector<int> ks;            // 1 .. n-1
    std::vector<Rational> lower;    // lower bound curve
    std::vector<Rational> upper;    // improved upper bound curve
    std::vector<Rational> exact_max;
    std::vector<Rational> exact_min;
    std::vector<Rational> tier_mean;
};

inline FigureSeries figure_series(int n, const AbsorptionTable& table) {
    FigureSeries s;
    s.n = n;
    for (int k = 1; k <= n - 1; ++k) {
        auto st = tier_stats(table, k);
        auto b = bounds(n, k);
        s.ks.push_back(k);
        s.lower.push_back(b.lower_m);
        s.upper.push_back(b.upper_m_v2);
        s.exact_max.push_back(st.big_m_k);
        s.exact_min.push_back(st.m_k);
        s.tier_mean.push_back(st.tier_mean);
    }
    return s;
}

// Fixed 960x640 viewport, deterministic output for identical inputs.
inline std::string figure_svg(const FigureSeries& s) {
    const double width = 960, height = 640;
    const double left = 80, right = 30, top = 30, bottom = 70;
    const double plot_w = width - left - right, plot_h = height - top - bottom;

    double ymax = 1;
    for (const auto& v : s.upper) ymax = std::max(ymax, rational_to_double(v));
    for (const auto& v : s.exact_max) ymax = std::max(ymax, rational_to_double(v));
    ymax *= 1.05;
    const int kmin = 1, kmax = std::max(2, s.n - 1);

    auto xpos = [&](double k) { return left + (k - kmin) / (kmax - kmin) * plot_w; };
    auto ypos = [&](double v) { return top + (1 - v / ymax) * plot_h; };
    auto fmt = [](double v) { return format_fixed(v, 2); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"640\" "
           "viewBox=\"0 0 960 640\">\n";
    svg += "<rect width=\"960\" height=\"640\" fill=\"white\"/>\n";

    // axes
    svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(top + plot_h) + "\" x2=\"" +
           fmt(left + plot_w) + "\" y2=\"" + fmt(top + plot_h) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(left) +
           "\" y2=\"" + fmt(top + plot_h) + "\" stroke=\"black\"/>\n";
    for (int k = kmin; k <= s.n - 1; ++k) {
        svg += "<line x1=\"" + fmt(xpos(k)) + "\" y1=\"" + fmt(top + plot_h) + "\" x2=\"" +
               fmt(xpos(k)) + "\" y2=\"" + fmt(top + plot_h + 6) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(xpos(k)) + "\" y=\"" + fmt(top + plot_h + 24) +
               "\" text-anchor=\"middle\" font-size=\"14\">" + std::to_string(k) + "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        double v = ymax * i / 5;
        svg += "<line x1=\"" + fmt(left - 6) + "\" y1=\"" + fmt(ypos(v)) + "\" x2=\"" + fmt(left) +
               "\" y2=\"" + fmt(ypos(v)) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(left - 10) + "\" y=\"" + fmt(ypos(v) + 5) +
               "\" text-anchor=\"end\" font-size=\"14\">" + format_fixed(v, 1) + "</text>\n";
    }
    svg += "<text x=\"" + fmt(left + plot_w / 2) + "\" y=\"" + fmt(height - 20) +
           "\" text-anchor=\"middle\" font-size=\"16\">tier</text>\n";
    svg += "<text x=\"22\" y=\"" + fmt(top + plot_h / 2) +
           "\" text-anchor=\"middle\" font-size=\"16\" transform=\"rotate(-90 22 " +
           fmt(top + plot_h / 2) + ")\">expected moves</text>\n";

    auto polyline = [&](const std::vector<Rational>& vals, const std::string& color,
                        const std::string& cls) {
        std::string pts;
        for (size_t i = 0; i < vals.size(); ++i) {
            pts += fmt(xpos(s.ks[i])) + "," + fmt(ypos(rational_to_double(vals[i])));
            if (i + 1 < vals.size()) pts += " ";
        }
        return "<polyline class=\"" + cls + "\" fill=\"none\" stroke=\"" + color +
               "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
    };
    auto dots = [&](const std::vector<Rational>& vals, const std::string& color,
                    const std::string& cls) {
        std::string out;
        for (size_t i = 0; i < vals.size(); ++i)
            out += "<circle class=\"" + cls + "\" cx=\"" + fmt(xpos(s.ks[i])) + "\" cy=\"" +
                   fmt(ypos(rational_to_double(vals[i]))) + "\" r=\"5\" fill=\"" + color +
                   "\"/>\n";
        return out;
    };

    svg += polyline(s.upper, "#d62728", "upper-bound");
    svg += polyline(s.lower, "#1f77b4", "lower-bound");
    svg += dots(s.exact_max, "#ff7f0e", "exact-max");
    svg += dots(s.exact_min, "#17becf", "exact-min");
    svg += dots(s.tier_mean, "#7f7f7f", "tier-mean");

    // legend
    struct Item {
        const char* label;
        const char* color;
        bool line;
    };
    const Item items[] = {{"upper bound", "#d62728", true},
                          {"lower bound", "#1f77b4", true},
                          {"exact max", "#ff7f0e", false},
                          {"exact min", "#17becf", false},
                          {"tier mean", "#7f7f7f", false}};
    double lx = left + 16, ly = top + 10;
    for (const auto& item : items) {
        if (item.line)
            svg += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly + 5) + "\" x2=\"" + fmt(lx + 24) +
                   "\" y2=\"" + fmt(ly + 5) + "\" stroke=\"" + item.color +
                   "\" stroke-width=\"2\"/>\n";
        else
            svg += "<circle cx=\"" + fmt(lx + 12) + "\" cy=\"" + fmt(ly + 5) +
                   "\" r=\"5\" fill=\"" + std::string(item.color) + "\"/>\n";
        svg += "<text x=\"" + fmt(lx + 32) + "\" y=\"" + fmt(ly + 10) + "\" font-size=\"14\">" +
               item.label + "</text>\n";
        ly += 22;
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace cardshuffle::report
