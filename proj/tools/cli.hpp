#pragma once

// Command-line front end. Kept in a header so tests can drive it with string streams.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "statguard/statguard.hpp"

namespace statguard::cli {

enum ExitCode : int { Ok = 0, Flagged = 1, Usage = 2, Runtime = 3 };

struct Streams {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
};

struct GlobalOptions {
    std::uint64_t seed = 0;
    bool quiet = false;
    bool json = false;
    std::string config;
};

// `key = value` lines mirroring TestConfig; `#` comments.
inline void apply_config_file(std::string const& path, TestConfig& cfg)
{
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file: " + path);
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto s = std::string(detail::trim(line));
        if (s.empty() || s.front() == '#') {
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        }
        auto key = std::string(detail::trim(std::string_view(s).substr(0, eq)));
        auto value = std::string(detail::trim(std::string_view(s).substr(eq + 1)));
        if (key == "alpha") {
            cfg.alpha = std::stod(value);
        } else if (key == "bins") {
            cfg.bins = std::stoul(value);
        } else if (key == "bin_strategy") {
            if (value != "equal_frequency" && value != "equal_width") {
                throw std::invalid_argument("config: bin_strategy must be equal_frequency or equal_width");
            }
            cfg.bin_strategy = value == "equal_width" ? BinStrategy::EqualWidth : BinStrategy::EqualFrequency;
        } else if (key == "min_stratum") {
            cfg.min_stratum = std::stoul(value);
        } else if (key == "combiner") {
            if (value != "stouffer" && value != "fisher") {
                throw std::invalid_argument("config: combiner must be stouffer or fisher");
            }
            cfg.combiner = value == "fisher" ? Combiner::Fisher : Combiner::Stouffer;
        } else if (key == "min_effect") {
            cfg.min_effect = std::stod(value);
        } else if (key == "method") {
            if (value == "chi-square") {
                cfg.method = Method::ChiSquare;
            } else if (value == "g-test") {
                cfg.method = Method::GTest;
            } else if (value == "kendall-tau") {
                cfg.method = Method::KendallTau;
            } else {
                throw std::invalid_argument("config: unknown method '" + value + "'");
            }
        } else {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
}

struct TestFlags {
    std::optional<double> alpha;
    std::optional<std::size_t> bins;
    std::optional<std::size_t> min_stratum;
    std::string method;
    std::string bin_strategy;
    std::string combiner;
    std::optional<double> min_effect;
    std::string schema;

    void add_to(CLI::App* app)
    {
        app->add_option("--alpha", alpha, "significance level");
        app->add_option("--bins", bins, "discretization bin count");
        app->add_option("--min-stratum", min_stratum, "minimum rows per stratum");
        app->add_option("--method", method, "chi-square | g-test | kendall-tau")
            ->check(CLI::IsMember({"chi-square", "g-test", "kendall-tau"}));
        app->add_option("--bin-strategy", bin_strategy, "equal_frequency | equal_width")
            ->check(CLI::IsMember({"equal_frequency", "equal_width"}));
        app->add_option("--combiner", combiner, "stouffer | fisher")->check(CLI::IsMember({"stouffer", "fisher"}));
        app->add_option("--min-effect", min_effect, "minimum |effect| for a dependence to hold");
        app->add_option("--schema", schema, "schema sidecar file");
    }

    [[nodiscard]] TestConfig resolve(GlobalOptions const& g) const
    {
        TestConfig cfg;
        if (!g.config.empty()) {
            apply_config_file(g.config, cfg);
        }
        if (alpha) {
            cfg.alpha = *alpha;
        }
        if (bins) {
            cfg.bins = *bins;
        }
        if (min_stratum) {
            cfg.min_stratum = *min_stratum;
        }
        if (!method.empty()) {
            cfg.method = method == "g-test" ? Method::GTest
                : method == "kendall-tau"   ? Method::KendallTau
                                            : Method::ChiSquare;
        }
        if (!bin_strategy.empty()) {
            cfg.bin_strategy = bin_strategy == "equal_width" ? BinStrategy::EqualWidth : BinStrategy::EqualFrequency;
        }
        if (!combiner.empty()) {
            cfg.combiner = combiner == "fisher" ? Combiner::Fisher : Combiner::Stouffer;
        }
        if (min_effect) {
            cfg.min_effect = *min_effect;
        }
        cfg.validate();
        return cfg;
    }

    [[nodiscard]] Schema load_schema_or_default() const { return schema.empty() ? Schema{} : load_schema(schema); }
};

// ---------------------------------------------------------------- check

struct CheckArgs {
    std::string constraints;
    bool no_interact = false;
    bool all_conflicts = false;
    std::string write_repaired;
};

inline std::string label_of(std::vector<StatConstraint> const& ordered, StatConstraint const& c)
{
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        if (ordered[i] == c) {
            return "SC" + std::to_string(i + 1);
        }
    }
    return "?";
}

inline int cmd_check(CheckArgs const& args, GlobalOptions const& g, Streams io)
{
    ParsedConstraints parsed;
    try {
        parsed = parse_file(args.constraints);
    } catch (ParseError const& e) {
        io.err << "error: " << args.constraints << ": " << e.what() << '\n';
        return Usage;
    } catch (std::exception const& e) {
        io.err << "error: " << e.what() << '\n';
        return Usage;
    }
    for (auto const& w : parsed.warnings) {
        if (!g.quiet) {
            io.err << "warning: " << w << '\n';
        }
    }

    auto ordered = parsed.ordered;
    json edits = json::array();
    ConsistencyVerdict verdict;
    while (true) {
        ConstraintSet sigma;
        for (auto const& c : ordered) {
            sigma.add(c);
        }
        std::optional<ConsistencyVerdict> fast;
        if (!sigma.empty()) {
            fast = saturated_fast_path(sigma, sigma.variables());
        }
        if (fast && !args.all_conflicts) {
            verdict = *fast;
        } else if (fast && fast->kind == VerdictKind::FastPathConsistent) {
            verdict = *fast;
        } else {
            verdict = check_consistency(sigma, CheckOptions{default_member_cap, args.all_conflicts});
        }
        if (verdict.consistent()) {
            break;
        }

        // Labels for derivation leaves: input index within the independence partition -> SCi.
        std::vector<std::string> labels;
        for (auto const& c : sigma.independencies()) {
            labels.push_back(label_of(ordered, c));
        }
        std::ostream& human = g.json ? io.err : io.out;
        for (auto const& conflict : verdict.conflicts) {
            human << "inconsistent: " << label_of(ordered, conflict.dependence) << " " << format(conflict.dependence)
                  << " contradicts the derived independence\n";
            print_derivation(human, *conflict.derivation, labels, "  ");
        }
        if (args.no_interact) {
            break;
        }

        auto const& first = verdict.conflicts.front();
        auto leaves = axiom_leaves(*first.derivation);
        io.err << "resolve: [d] drop " << label_of(ordered, first.dependence) << " " << format(first.dependence) << '\n';
        for (std::size_t i = 0; i < leaves.size(); ++i) {
            auto const& c = sigma.independencies()[leaves[i]];
            io.err << "         [" << (i + 1) << "] drop " << label_of(ordered, c) << " " << format(c) << '\n';
        }
        io.err << "         [q] quit\n> " << std::flush;

        std::optional<StatConstraint> drop;
        std::string answer;
        while (!drop) {
            if (!std::getline(io.in, answer)) {
                answer = "q";
            }
            answer = std::string(detail::trim(answer));
            if (answer == "q") {
                break;
            }
            if (answer == "d") {
                drop = first.dependence;
            } else {
                try {
                    auto idx = std::stoul(answer);
                    if (idx >= 1 && idx <= leaves.size()) {
                        drop = sigma.independencies()[leaves[idx - 1]];
                    }
                } catch (std::exception const&) {
                }
            }
            if (!drop) {
                io.err << "please answer d, 1.." << leaves.size() << ", or q\n> " << std::flush;
            }
        }
        if (!drop) {
            break;
        }
        edits.push_back({{"dropped", format(*drop)}, {"label", label_of(parsed.ordered, *drop)}});
        std::erase(ordered, *drop);
        if (!g.quiet) {
            io.err << "dropped " << format(*drop) << "; re-checking\n";
        }
    }

    if (!args.write_repaired.empty()) {
        std::ofstream out(args.write_repaired);
        if (!out) {
            io.err << "error: cannot write " << args.write_repaired << '\n';
            return Runtime;
        }
        write_constraints(out, ordered);
    }

    if (g.json) {
        auto j = to_json(verdict);
        j["edits"] = edits;
        json remaining = json::array();
        for (auto const& c : ordered) {
            remaining.push_back(format(c));
        }
        j["constraints"] = remaining;
        io.out << j.dump(2) << '\n';
    } else if (verdict.consistent()) {
        io.out << to_string(verdict.kind);
        if (!verdict.definitive()) {
            io.out << " (closure truncated; not definitive)";
        }
        io.out << '\n';
    }
    return verdict.consistent() ? Ok : Flagged;
}

// ---------------------------------------------------------------- test

struct TestArgs {
    std::string data;
    std::string constraints;
    bool force = false;
    TestFlags flags;
};

inline int cmd_test(TestArgs const& args, GlobalOptions const& g, Streams io)
{
    ParsedConstraints parsed;
    TestConfig cfg;
    try {
        parsed = parse_file(args.constraints);
        cfg = args.flags.resolve(g);
    } catch (std::exception const& e) {
        io.err << "error: " << e.what() << '\n';
        return Usage;
    }
    if (!parsed.set.empty()) {
        auto v = check_consistency(parsed.set);
        if (!v.consistent()) {
            io.err << (args.force ? "warning" : "error") << ": constraint set is inconsistent ("
                   << format(v.conflicts.front().dependence) << ")\n";
            if (!args.force) {
                return Flagged;
            }
        }
    }
    Dataset ds;
    try {
        ds = load_csv(args.data, args.flags.load_schema_or_default());
    } catch (std::exception const& e) {
        io.err << "error: " << e.what() << '\n';
        return Runtime;
    }

    json results = json::array();
    bool any_violated = false;
    bool any_error = false;
    std::ostream& human = g.json ? io.err : io.out;
    for (auto const& sc : parsed.ordered) {
        try {
            auto rep = evaluate_sc(ds, sc, cfg);
            any_violated = any_violated || rep.verdict == Verdict::Violated;
            results.push_back(to_json(rep));
            if (!g.quiet || g.json) {
                human << format(sc) << "  " << to_string(rep.method) << "  stat=" << rep.statistic
                      << "  p=" << rep.p_value << "  " << to_string(rep.verdict) << '\n';
            }
        } catch (std::exception const& e) {
            any_error = true;
            results.push_back({{"constraint", format(sc)}, {"error", e.what()}});
            human << format(sc) << "  error: " << e.what() << '\n';
        }
    }
    if (g.json) {
        io.out << json{{"alpha", cfg.alpha}, {"results", results}}.dump(2) << '\n';
    }
    if (any_error) {
        return Runtime;
    }
    return any_violated ? Flagged : Ok;
}

// ---------------------------------------------------------------- drilldown

struct DrillArgs {
    std::string data;
    std::string sc;
    std::size_t k = 0;
    std::string strategy;
    std::string direction;
    bool rebuild = false;
    TestFlags flags;
};

inline int cmd_drilldown(DrillArgs const& args, GlobalOptions const& g, Streams io)
{
    StatConstraint sc;
    DrillConfig cfg;
    try {
        sc = parse_constraint(args.sc);
        cfg.test = args.flags.resolve(g);
    } catch (std::exception const& e) {
        io.err << "error: " << e.what() << '\n';
        return Usage;
    }
    if (!args.strategy.empty()) {
        cfg.strategy = args.strategy == "k" ? Strategy::K : Strategy::KComplement;
    }
    if (!args.direction.empty()) {
        cfg.direction = args.direction == "minimize" ? Direction::Minimize : Direction::Maximize;
    }
    cfg.greedy.rebuild = args.rebuild;

    Dataset ds;
    View view;
    try {
        ds = load_csv(args.data, args.flags.load_schema_or_default());
        auto vars = sc.variables().names();
        view = project_complete(ds, vars);
    } catch (std::exception const& e) {
        io.err << "error: " << e.what() << '\n';
        return Runtime;
    }
    if (!sc.is_elementary()) {
        io.err << "error: drill-down needs an elementary constraint\n";
        return Usage;
    }
    if (args.k < 1 || args.k >= view.size()) {
        io.err << "error: k must satisfy 1 <= k < n (n=" << view.size() << ")\n";
        return Usage;
    }
    DrillDownResult res;
    try {
        res = drilldown(ds, sc, args.k, cfg);
    } catch (std::exception const& e) {
        io.err << "error: " << e.what() << '\n';
        return Runtime;
    }

    if (g.json) {
        auto j = to_json(res);
        json rows = json::array();
        for (auto id : res.suspects) {
            json row;
            row["id"] = id;
            for (auto const& c : ds.columns()) {
                row["values"][c.name()] = c.text(id);
            }
            rows.push_back(std::move(row));
        }
        j["rows"] = std::move(rows);
        io.out << j.dump(2) << '\n';
        return Ok;
    }
    io.out << format(sc) << "  strategy=" << to_string(res.strategy) << "  direction=" << to_string(res.direction)
           << "  k=" << res.k << '\n';
    io.out << "rank,row_id";
    for (auto const& c : ds.columns()) {
        io.out << ',' << detail::quote_csv(c.name());
    }
    io.out << '\n';
    for (std::size_t i = 0; i < res.suspects.size(); ++i) {
        auto id = res.suspects[i];
        io.out << (i + 1) << ',' << id;
        for (auto const& c : ds.columns()) {
            io.out << ',' << detail::quote_csv(c.text(id));
        }
        io.out << '\n';
    }
    if (!res.objective_trajectory.empty()) {
        io.out << "trajectory:";
        for (auto v : res.objective_trajectory) {
            io.out << ' ' << v;
        }
        io.out << '\n';
    }
    return Ok;
}

// ---------------------------------------------------------------- suggest

struct SuggestArgs {
    std::string data;
    TestFlags flags;
};

inline int cmd_suggest(SuggestArgs const& args, GlobalOptions const& g, Streams io)
{
    TestConfig cfg;
    try {
        cfg = args.flags.resolve(g);
    } catch (std::exception const& e) {
        io.err << "error: " << e.what() << '\n';
        return Usage;
    }
    try {
        auto ds = load_csv(args.data, args.flags.load_schema_or_default());
        auto s = suggest_constraints(ds, cfg);
        if (g.json) {
            json reports = json::array();
            for (auto const& r : s.reports) {
                reports.push_back(to_json(r));
            }
            io.out << json{{"reports", reports}, {"notes", s.notes}}.dump(2) << '\n';
        } else {
            for (auto const& r : s.reports) {
                auto suggestion = r.verdict == Verdict::Violated ? "dep" : "indep";
                io.out << format(r.constraint) << "  " << to_string(r.method) << "  effect=" << r.effect
                       << "  p=" << r.p_value << "  suggests " << suggestion << '\n';
            }
            for (auto const& n : s.notes) {
                io.err << "note: " << n << '\n';
            }
        }
    } catch (std::exception const& e) {
        io.err << "error: " << e.what() << '\n';
        return Runtime;
    }
    return Ok;
}

// ---------------------------------------------------------------- inject

struct InjectArgs {
    std::string data;
    std::string column;
    std::string type = "sorting";
    std::optional<double> rate;
    std::string level;
    std::string mode = "random";
    std::string out;
    std::string mask_out;
    std::string schema;
};

inline SelectionMode parse_mode(std::string const& text)
{
    if (text == "random") {
        return SelectionMode::random();
    }
    auto const prefix = std::string("ordered_by:");
    if (text.rfind(prefix, 0) == 0 && text.size() > prefix.size()) {
        return SelectionMode::ordered_by(text.substr(prefix.size()));
    }
    throw std::invalid_argument("mode must be 'random' or 'ordered_by:<column>'");
}

inline int cmd_inject(InjectArgs const& args, GlobalOptions const& g, Streams io)
{
    ErrorType type{};
    SelectionMode mode;
    double rate = 0.0;
    try {
        if (args.type == "sorting") {
            type = ErrorType::Sorting;
        } else if (args.type == "imputation") {
            type = ErrorType::Imputation;
        } else if (args.type == "combination") {
            type = ErrorType::Combination;
        } else {
            throw std::invalid_argument("unknown error type '" + args.type + "'");
        }
        mode = parse_mode(args.mode);
        if (args.rate) {
            rate = *args.rate;
        } else if (!args.level.empty()) {
            bool found = false;
            for (auto const& l : error_levels) {
                if (l.name == args.level) {
                    rate = 0.5 * (l.low + l.high);
                    found = true;
                }
            }
            if (!found) {
                throw std::invalid_argument("unknown error level '" + args.level + "'");
            }
        } else {
            throw std::invalid_argument("either --rate or --level is required");
        }
    } catch (std::exception const& e) {
        io.err << "error: " << e.what() << '\n';
        return Usage;
    }
    try {
        auto schema = args.schema.empty() ? Schema{} : load_schema(args.schema);
        auto ds = load_csv(args.data, schema);
        auto corrupted = inject(type, ds, args.column, rate, mode, g.seed);
        if (!args.out.empty()) {
            save_csv(args.out, corrupted.data, schema);
        }
        auto mask = to_json(corrupted.mask);
        if (!args.mask_out.empty()) {
            std::ofstream m(args.mask_out);
            if (!m) {
                throw std::runtime_error("cannot write " + args.mask_out);
            }
            m << mask.dump(2) << '\n';
        }
        if (g.json) {
            io.out << json{{"rate", rate}, {"seed", g.seed}, {"selected", corrupted.mask.rows.size()},
                           {"changed", corrupted.mask.changed_ids().size()}, {"mask", mask}}
                          .dump(2)
                   << '\n';
        } else {
            if (args.out.empty()) {
                write_csv(io.out, corrupted.data, schema);
            }
            if (!g.quiet) {
                io.err << "injected " << to_string(type) << " error into " << corrupted.mask.rows.size() << " rows ("
                       << corrupted.mask.changed_ids().size() << " changed), rate " << rate << '\n';
            }
        }
    } catch (std::exception const& e) {
        io.err << "error: " << e.what() << '\n';
        return Runtime;
    }
    return Ok;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
    std::string spec;
    std::string data;
    std::string out;
    std::string agg_out;
};

inline int cmd_bench(BenchArgs const& args, GlobalOptions const& g, Streams io)
{
    SweepSpec spec;
    std::string data_path = args.data;
    try {
        std::ifstream in(args.spec);
        if (!in) {
            throw std::invalid_argument("cannot open sweep spec: " + args.spec);
        }
        auto j = json::parse(in);
        spec = sweep_spec_from_json(j);
        if (data_path.empty()) {
            data_path = j.value("data", std::string{});
        }
        if (data_path.empty()) {
            throw std::invalid_argument("no dataset: pass --data or set \"data\" in the spec");
        }
    } catch (std::exception const& e) {
        io.err << "error: " << e.what() << '\n';
        return Usage;
    }
    try {
        auto ds = load_csv(data_path);
        auto result = run_sweep(ds, spec);
        if (!args.out.empty()) {
            std::ofstream out(args.out);
            if (!out) {
                throw std::runtime_error("cannot write " + args.out);
            }
            write_sweep_csv(out, result.rows);
        } else if (!g.json) {
            write_sweep_csv(io.out, result.rows);
        }
        if (!args.agg_out.empty()) {
            std::ofstream out(args.agg_out);
            if (!out) {
                throw std::runtime_error("cannot write " + args.agg_out);
            }
            write_sweep_csv(out, result.aggregates);
        }
        if (g.json) {
            io.out << to_json(result).dump(2) << '\n';
        }
        for (auto const& f : result.failures) {
            io.err << "cell failed (rate " << f.rate << ", seed " << f.seed << ", k " << f.k << "): " << f.message << '\n';
        }
    } catch (std::exception const& e) {
        io.err << "error: " << e.what() << '\n';
        return Runtime;
    }
    return Ok;
}

// ---------------------------------------------------------------- entry point

inline int run(int argc, char const* const* argv, Streams io)
{
    CLI::App app{"statguard: detect data errors by checking statistical (in)dependence constraints"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--seed", g.seed, "random seed")->capture_default_str();
    app.add_flag("--quiet", g.quiet, "suppress informational output");
    app.add_flag("--json", g.json, "emit one JSON document on standard output");
    app.add_option("--config", g.config, "config file with key = value lines");

    CheckArgs check;
    auto* c = app.add_subcommand("check", "check the constraint set for consistency");
    c->add_option("constraints", check.constraints, "constraint file")->required();
    c->add_flag("--no-interact", check.no_interact, "report conflicts without prompting");
    c->add_flag("--all-conflicts", check.all_conflicts, "report every conflicting dependence");
    c->add_option("--write-repaired", check.write_repaired, "write the edited constraint set to this path");

    TestArgs test;
    auto* t = app.add_subcommand("test", "test each constraint against a dataset");
    t->add_option("data", test.data, "CSV file")->required();
    t->add_option("constraints", test.constraints, "constraint file")->required();
    t->add_flag("--force", test.force, "continue even if the constraint set is inconsistent");
    test.flags.add_to(t);

    DrillArgs drill;
    auto* d = app.add_subcommand("drilldown", "find the top-k records behind a violation");
    d->add_option("data", drill.data, "CSV file")->required();
    d->add_option("--sc", drill.sc, "elementary constraint, e.g. 'dep(X; Y)'")->required();
    d->add_option("--k", drill.k, "number of records")->required();
    d->add_option("--strategy", drill.strategy, "k | kc")->check(CLI::IsMember({"k", "kc"}));
    d->add_option("--direction", drill.direction, "minimize | maximize")->check(CLI::IsMember({"minimize", "maximize"}));
    d->add_flag("--rebuild", drill.rebuild, "recompute benefits from scratch after each removal");
    drill.flags.add_to(d);

    SuggestArgs suggest;
    auto* s = app.add_subcommand("suggest", "pairwise tests to help write constraints");
    s->add_option("data", suggest.data, "CSV file")->required();
    suggest.flags.add_to(s);

    InjectArgs inj;
    auto* i = app.add_subcommand("inject", "inject synthetic errors into a column");
    i->add_option("data", inj.data, "CSV file")->required();
    i->add_option("--column", inj.column, "target column")->required();
    i->add_option("--type", inj.type, "sorting | imputation | combination")
        ->check(CLI::IsMember({"sorting", "imputation", "combination"}));
    i->add_option("--rate", inj.rate, "error rate in (0, 1]");
    i->add_option("--level", inj.level, "minor | moderate | major (range midpoint)")
        ->check(CLI::IsMember({"minor", "moderate", "major"}));
    i->add_option("--mode", inj.mode, "random | ordered_by:<column>");
    i->add_option("--out", inj.out, "corrupted CSV output");
    i->add_option("--mask-out", inj.mask_out, "ground-truth mask JSON output");
    i->add_option("--schema", inj.schema, "schema sidecar file");

    BenchArgs bench;
    auto* b = app.add_subcommand("bench", "run an error-injection sweep");
    b->add_option("spec", bench.spec, "sweep spec JSON")->required();
    b->add_option("--data", bench.data, "clean CSV (overrides the spec's \"data\")");
    b->add_option("--out", bench.out, "raw rows CSV");
    b->add_option("--agg-out", bench.agg_out, "per-(rate, k) means CSV");

    try {
        app.parse(argc, argv);
    } catch (CLI::CallForHelp const& e) {
        io.out << app.help();
        return Ok;
    } catch (CLI::ParseError const& e) {
        io.err << "error: " << e.what() << '\n' << app.help();
        return Usage;
    }

    if (c->parsed()) {
        return cmd_check(check, g, io);
    }
    if (t->parsed()) {
        return cmd_test(test, g, io);
    }
    if (d->parsed()) {
        return cmd_drilldown(drill, g, io);
    }
    if (s->parsed()) {
        return cmd_suggest(suggest, g, io);
    }
    if (i->parsed()) {
        return cmd_inject(inj, g, io);
    }
    return cmd_bench(bench, g, io);
}

} // namespace statguard::cli
