#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rcsub/analysis.hpp"
#include "rcsub/io.hpp"

namespace rcsub {

enum class ColumnFormat { integer, error, order };

struct TableColumn {
    std::string name;
    ColumnFormat format = ColumnFormat::error;
};

// NaN cells are written empty.
struct TableReport {
    int id = 0;
    std::string title;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<TableColumn> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> failures;   // "<row>: <message>"
};

inline std::string to_csv(const TableReport& t)
{
    std::ostringstream out;
    out << "# table=" << t.id;
    for (const auto& [k, v] : t.meta)
        out << ", " << k << '=' << v;
    out << '\n';
    for (const auto& f : t.failures)
        out << "# failed " << f << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        out << (c ? "," : "") << t.columns[c].name;
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c)
                out << ',';
            if (std::isnan(row[c]))
                continue;
            if (t.columns[c].format == ColumnFormat::integer)
                out << static_cast<long long>(row[c]);
            else
                out << format_number(row[c]);
        }
        out << '\n';
    }
    return out.str();
}

inline std::string to_text(const TableReport& t)
{
    std::ostringstream out;
    out << t.title << '\n';
    for (const auto& [k, v] : t.meta)
        out << "  " << k << ": " << v << '\n';
    constexpr int width = 14;
    char buf[64];
    for (const auto& c : t.columns) {
        std::snprintf(buf, sizeof buf, "%*s", width, c.name.c_str());
        out << buf;
    }
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (std::isnan(row[c]))
                std::snprintf(buf, sizeof buf, "%*s", width, "-");
            else if (t.columns[c].format == ColumnFormat::integer)
                std::snprintf(buf, sizeof buf, "%*lld", width, static_cast<long long>(row[c]));
            else if (t.columns[c].format == ColumnFormat::error)
                std::snprintf(buf, sizeof buf, "%*.4e", width, row[c]);
            else
                std::snprintf(buf, sizeof buf, "%*.4f", width, row[c]);
            out << buf;
        }
        out << '\n';
    }
    for (const auto& f : t.failures)
        out << "  failed " << f << '\n';
    return out.str();
}

inline constexpr int study_levels = 10;

namespace detail {

inline std::vector<int> dyadic(int from, int to)
{
    std::vector<int> out;
    for (int n = from; n <= to; n *= 2)
        out.push_back(n);
    return out;
}

inline TableReport convergence_table(int id, std::string title, const PiecewiseFunction& fn, Framework fw, Norm norm,
                                     const std::vector<int>& resolutions, const DetectionParams& params)
{
    const RefinementReport rc = refinement_study(fn, fw, Scheme::rc, resolutions, study_levels, norm, params);
    const RefinementReport lin = refinement_study(fn, fw, Scheme::linear, resolutions, study_levels, norm, params);

    TableReport t;
    t.id = id;
    t.title = std::move(title);
    t.meta = {{"function", fn.name()},
              {"framework", to_string(fw)},
              {"norm", to_string(norm)},
              {"levels", std::to_string(study_levels)},
              {"rc_exclusion", rc.exclusion},
              {"linear_exclusion", lin.exclusion},
              {"threshold", format_number(params.score_threshold)}};
    const char* n_name = fw == Framework::point ? "N" : "cells";
    t.columns = {{n_name, ColumnFormat::integer},   {"level", ColumnFormat::integer},
                 {"rc_error", ColumnFormat::error},  {"rc_order", ColumnFormat::order},
                 {"linear_error", ColumnFormat::error}, {"linear_order", ColumnFormat::order}};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < resolutions.size(); ++i) {
        t.rows.push_back({static_cast<double>(resolutions[i]), static_cast<double>(rc.levels[i]), rc.errors[i],
                          i ? rc.orders[i - 1] : nan, lin.errors[i], i ? lin.orders[i - 1] : nan});
        if (!rc.failures[i].empty())
            t.failures.push_back(std::to_string(resolutions[i]) + " rc: " + rc.failures[i]);
        if (!lin.failures[i].empty())
            t.failures.push_back(std::to_string(resolutions[i]) + " linear: " + lin.failures[i]);
    }
    return t;
}

inline TableReport regularity_table(const DetectionParams& params)
{
    const PiecewiseFunction fn = make_exp1(0.0);
    const int n = 100;
    const std::vector<int> levels{5, 6, 7, 8, 9, 10};
    const RegularityReport lin = numerical_regularity(fn, Framework::point, Scheme::linear, n, levels, params);
    const RegularityReport rc = numerical_regularity(fn, Framework::point, Scheme::rc, n, levels, params);

    TableReport t;
    t.id = 1;
    t.title = "Numerical regularity, exp1 point values, 100 cells";
    t.meta = {{"function", fn.name()},
              {"framework", "point"},
              {"n", std::to_string(n)},
              {"window_end", format_number(rc.window_end)},
              {"threshold", format_number(params.score_threshold)}};
    t.columns = {{"L", ColumnFormat::integer},
                 {"linear_beta1", ColumnFormat::order},
                 {"linear_beta2", ColumnFormat::order},
                 {"rc_beta1", ColumnFormat::order},
                 {"rc_beta2", ColumnFormat::order}};
    for (std::size_t i = 0; i < rc.levels.size(); ++i)
        t.rows.push_back({static_cast<double>(rc.levels[i]), lin.beta1[i], lin.beta2[i], rc.beta1[i], rc.beta2[i]});
    return t;
}

} // namespace detail

inline TableReport make_table(int id, const DetectionParams& params = {})
{
    params.validate();
    switch (id) {
    case 1:
        return detail::regularity_table(params);
    case 2:
        return detail::convergence_table(2, "Max error off the corner, exp1 (a=0), point values", make_exp1(0.0),
                                         Framework::point, Norm::inf, detail::dyadic(16, 2048), params);
    case 3:
        return detail::convergence_table(3, "Max error, jump placed mid-cell, exp1 (a=10), point values",
                                         make_exp1(10.0), Framework::point, Norm::inf, detail::dyadic(16, 2048),
                                         params);
    case 4:
        return detail::convergence_table(4, "Max error off [s*, x*], exp3, cell averages", make_exp3(),
                                         Framework::cell, Norm::inf, detail::dyadic(32, 2048), params);
    case 5:
        return detail::convergence_table(5, "L1 error, exp3, cell averages", make_exp3(), Framework::cell, Norm::l1,
                                         detail::dyadic(32, 2048), params);
    default:
        throw Error(ErrorCode::invalid_argument, "unknown table " + std::to_string(id) + " (expected 1..5)");
    }
}

} // namespace rcsub
