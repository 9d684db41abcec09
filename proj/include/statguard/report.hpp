#pragma once

// JSON and text renderings of library results.

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "statguard/constraint.hpp"
#include "statguard/drilldown.hpp"
#include "statguard/errorsim.hpp"
#include "statguard/evalharness.hpp"
#include "statguard/hypotest.hpp"
#include "statguard/inference.hpp"

namespace statguard {

using json = nlohmann::json;

namespace detail {

// JSON has no NaN/Inf; emit null instead.
inline json number(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

inline json cell_json(Cell const& c)
{
    if (std::holds_alternative<double>(c)) {
        return number(std::get<double>(c));
    }
    if (std::holds_alternative<std::string>(c)) {
        return std::get<std::string>(c);
    }
    return nullptr;
}

} // namespace detail

inline json to_json(Derivation const& d)
{
    json j;
    j["conclusion"] = format(d.conclusion);
    j["rule"] = std::string(to_string(d.rule));
    if (d.input_index) {
        j["input_index"] = *d.input_index;
    }
    json premises = json::array();
    for (auto const& p : d.premises) {
        premises.push_back(to_json(*p));
    }
    j["premises"] = std::move(premises);
    return j;
}

inline json to_json(ConsistencyVerdict const& v)
{
    json j;
    j["verdict"] = v.kind == VerdictKind::Inconsistent ? "inconsistent" : "consistent";
    j["fast_path"] = v.kind == VerdictKind::FastPathConsistent;
    j["definitive"] = v.definitive();
    j["truncated"] = v.truncated;
    j["closure_size"] = v.closure_size;
    json conflicts = json::array();
    for (auto const& c : v.conflicts) {
        conflicts.push_back({{"dependence", format(c.dependence)}, {"derivation", to_json(*c.derivation)}});
    }
    j["conflicts"] = std::move(conflicts);
    return j;
}

// Indented proof tree; axiom leaves show their input label when given.
inline void print_derivation(std::ostream& out, Derivation const& d, std::vector<std::string> const& axiom_labels = {},
                             std::string const& indent = "")
{
    out << indent << format(d.conclusion) << "  [" << to_string(d.rule);
    if (d.rule == Rule::Axiom && d.input_index) {
        if (*d.input_index < axiom_labels.size()) {
            out << " " << axiom_labels[*d.input_index];
        } else {
            out << " #" << *d.input_index;
        }
    }
    out << "]\n";
    for (auto const& p : d.premises) {
        print_derivation(out, *p, axiom_labels, indent + "  ");
    }
}

inline json to_json(TauCounts const& t)
{
    return {{"n", t.n},
            {"concordant", t.concordant},
            {"discordant", t.discordant},
            {"x_ties", t.x_ties},
            {"y_ties", t.y_ties},
            {"xy_ties", t.xy_ties},
            {"tau_b", detail::number(t.tau_b())},
            {"tau_simple", detail::number(t.tau_simple())}};
}

inline json to_json(TestReport const& r)
{
    json j;
    j["constraint"] = format(r.constraint);
    j["method"] = std::string(to_string(r.method));
    j["statistic"] = detail::number(r.statistic);
    j["effect"] = detail::number(r.effect);
    j["dof_or_n"] = r.dof_or_n;
    j["p_value"] = detail::number(r.p_value);
    j["verdict"] = std::string(to_string(r.verdict));
    json strata = json::array();
    for (auto const& s : r.strata) {
        json sj{{"z_assignment", s.z_assignment}, {"n", s.n}};
        if (s.skipped) {
            sj["skipped"] = true;
            sj["note"] = s.note;
        } else {
            sj["statistic"] = detail::number(s.statistic);
            sj["p"] = detail::number(s.p_value);
        }
        strata.push_back(std::move(sj));
    }
    j["strata"] = std::move(strata);
    j["notes"] = r.notes;
    if (r.tau) {
        j["tau"] = to_json(*r.tau);
    }
    if (!r.parts.empty()) {
        json parts = json::array();
        for (auto const& p : r.parts) {
            parts.push_back(to_json(p));
        }
        j["parts"] = std::move(parts);
    }
    return j;
}

inline json to_json(DrillDownResult const& r)
{
    json j;
    j["constraint"] = format(r.constraint);
    j["method"] = std::string(to_string(r.method));
    j["strategy"] = std::string(to_string(r.strategy));
    j["direction"] = std::string(to_string(r.direction));
    j["k"] = r.k;
    j["suspects"] = r.suspects;
    json traj = json::array();
    for (auto v : r.objective_trajectory) {
        traj.push_back(detail::number(v));
    }
    j["trajectory"] = std::move(traj);
    if (!r.strata.empty()) {
        json strata = json::array();
        for (auto const& [label, part] : r.strata) {
            auto pj = to_json(part);
            pj["z_assignment"] = label;
            strata.push_back(std::move(pj));
        }
        j["strata"] = std::move(strata);
    }
    if (!r.notes.empty()) {
        j["notes"] = r.notes;
    }
    return j;
}

inline json to_json(ErrorMask const& m)
{
    json j;
    j["column"] = m.column;
    j["type"] = std::string(to_string(m.type));
    json rows = json::array();
    for (auto const& e : m.rows) {
        json rj{{"id", e.id}, {"original", detail::cell_json(e.original)}, {"changed", e.changed}};
        if (m.type == ErrorType::Combination) {
            rj["type"] = std::string(to_string(e.type));
        }
        rows.push_back(std::move(rj));
    }
    j["rows"] = std::move(rows);
    return j;
}

inline json to_json(SweepRow const& r)
{
    return {{"error_type", r.error_type}, {"mode", r.mode},
            {"rate", r.rate},             {"seed", r.seed},
            {"k", r.k},                   {"stat_before", detail::number(r.stat_before)},
            {"stat_after", detail::number(r.stat_after)},
            {"precision", r.precision},   {"recall", r.recall},
            {"fscore", r.fscore},         {"ms_inject", r.ms_inject},
            {"ms_init", r.ms_init},       {"ms_greedy", r.ms_greedy},
            {"ms_score", r.ms_score}};
}

inline json to_json(SweepResult const& s)
{
    json j;
    j["rows"] = json::array();
    for (auto const& r : s.rows) {
        j["rows"].push_back(to_json(r));
    }
    j["aggregates"] = json::array();
    for (auto const& r : s.aggregates) {
        j["aggregates"].push_back(to_json(r));
    }
    j["failures"] = json::array();
    for (auto const& f : s.failures) {
        j["failures"].push_back({{"rate", f.rate}, {"seed", f.seed}, {"k", f.k}, {"message", f.message}});
    }
    return j;
}

// Sweep spec from JSON:
// {"error_type": "sorting", "mode": "random" | {"ordered_by": "B"}, "column": "A",
//  "rates": [...], "ks": [...], "seeds": [...], "constraint": "indep(A; B)",
//  "strategy": "k"|"kc", "direction": "minimize"|"maximize", "random_baseline": false,
//  "alpha": 0.05, "bins": 6}
inline SweepSpec sweep_spec_from_json(json const& j)
{
    SweepSpec s;
    auto type = j.at("error_type").get<std::string>();
    if (type == "sorting") {
        s.error_type = ErrorType::Sorting;
    } else if (type == "imputation") {
        s.error_type = ErrorType::Imputation;
    } else if (type == "combination") {
        s.error_type = ErrorType::Combination;
    } else {
        throw std::invalid_argument("unknown error_type '" + type + "'");
    }
    if (j.contains("mode")) {
        auto const& m = j.at("mode");
        if (m.is_string() && m.get<std::string>() == "random") {
            s.mode = SelectionMode::random();
        } else if (m.is_object() && m.contains("ordered_by")) {
            s.mode = SelectionMode::ordered_by(m.at("ordered_by").get<std::string>());
        } else {
            throw std::invalid_argument("mode must be \"random\" or {\"ordered_by\": column}");
        }
    }
    s.column = j.value("column", std::string{});
    s.rates = j.at("rates").get<std::vector<double>>();
    s.ks = j.at("ks").get<std::vector<std::size_t>>();
    s.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    s.constraint = parse_constraint(j.at("constraint").get<std::string>());
    if (j.contains("strategy")) {
        auto v = j.at("strategy").get<std::string>();
        if (v != "k" && v != "kc") {
            throw std::invalid_argument("strategy must be k or kc");
        }
        s.strategy = v == "k" ? Strategy::K : Strategy::KComplement;
    }
    if (j.contains("direction")) {
        auto v = j.at("direction").get<std::string>();
        if (v != "minimize" && v != "maximize") {
            throw std::invalid_argument("direction must be minimize or maximize");
        }
        s.direction = v == "minimize" ? Direction::Minimize : Direction::Maximize;
    }
    s.random_baseline = j.value("random_baseline", false);
    s.test.alpha = j.value("alpha", s.test.alpha);
    s.test.bins = j.value("bins", s.test.bins);
    if (j.contains("method")) {
        auto v = j.at("method").get<std::string>();
        if (v == "chi-square") {
            s.test.method = Method::ChiSquare;
        } else if (v == "kendall-tau") {
            s.test.method = Method::KendallTau;
        } else {
            throw std::invalid_argument("method must be chi-square or kendall-tau");
        }
    }
    return s;
}

} // namespace statguard
