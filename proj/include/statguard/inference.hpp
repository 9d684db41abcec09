#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "statguard/constraint.hpp"

namespace statguard {

enum class Rule { Axiom, Symmetry, Decomposition, WeakUnion, Contraction, CWD };

inline std::string_view to_string(Rule r)
{
    switch (r) {
    case Rule::Axiom: return "axiom";
    case Rule::Symmetry: return "symmetry";
    case Rule::Decomposition: return "decomposition";
    case Rule::WeakUnion: return "weak-union";
    case Rule::Contraction: return "contraction";
    case Rule::CWD: return "contraction-weak-union-decomposition";
    }
    return "?";
}

// Proof tree. Leaves are Axiom nodes pointing at an input constraint.
struct Derivation {
    StatConstraint conclusion;
    Rule rule = Rule::Axiom;
    std::optional<std::size_t> input_index;
    std::vector<std::shared_ptr<Derivation const>> premises;
};

using DerivationPtr = std::shared_ptr<Derivation const>;

struct ClosureStats {
    std::size_t iterations = 0; // worklist items processed
    std::map<Rule, std::size_t> rule_applications; // successful firings that produced a new member
};

inline constexpr std::size_t default_member_cap = 1'000'000;

template <typename Engine>
class ClosureBuilder;

class Closure {
public:
    struct Entry {
        StatConstraint constraint;
        Rule rule = Rule::Axiom;
        std::optional<std::size_t> input_index;
        std::vector<std::size_t> premises; // entry indices
    };

    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    [[nodiscard]] bool truncated() const { return truncated_; }
    [[nodiscard]] ClosureStats const& stats() const { return stats_; }
    [[nodiscard]] std::vector<Entry> const& entries() const { return entries_; }

    [[nodiscard]] std::vector<StatConstraint> members() const
    {
        std::vector<StatConstraint> out;
        out.reserve(entries_.size());
        for (auto const& e : entries_) {
            out.push_back(e.constraint);
        }
        return out;
    }

    // Members in canonical sorted order; handy for set comparisons.
    [[nodiscard]] std::vector<StatConstraint> sorted_members() const
    {
        auto out = members();
        std::sort(out.begin(), out.end());
        return out;
    }

    [[nodiscard]] std::optional<std::size_t> find(StatConstraint const& c) const
    {
        auto key = c.polarity() == Polarity::Independence ? c : c.negated();
        auto it = lookup_.find(format(key));
        if (it == lookup_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    [[nodiscard]] bool contains(StatConstraint const& c) const { return find(c).has_value(); }

    [[nodiscard]] DerivationPtr derivation(std::size_t entry) const
    {
        std::unordered_map<std::size_t, DerivationPtr> memo;
        return build(entry, memo);
    }

    [[nodiscard]] DerivationPtr derivation(StatConstraint const& c) const
    {
        auto id = find(c);
        return id ? derivation(*id) : nullptr;
    }

private:
    template <typename Engine>
    friend class ClosureBuilder;

    DerivationPtr build(std::size_t id, std::unordered_map<std::size_t, DerivationPtr>& memo) const
    {
        if (auto it = memo.find(id); it != memo.end()) {
            return it->second;
        }
        auto node = std::make_shared<Derivation>();
        auto const& e = entries_[id];
        node->conclusion = e.constraint;
        node->rule = e.rule;
        node->input_index = e.input_index;
        for (auto p : e.premises) {
            node->premises.push_back(build(p, memo));
        }
        memo.emplace(id, node);
        return node;
    }

    std::vector<Entry> entries_;
    std::unordered_map<std::string, std::size_t> lookup_;
    ClosureStats stats_;
    bool truncated_ = false;
};

namespace detail {

using Ids = std::vector<std::uint32_t>;

inline Ids set_union(Ids const& a, Ids const& b)
{
    Ids out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline Ids set_difference(Ids const& a, Ids const& b)
{
    Ids out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Subset of `v` selected by the bits of `mask`.
inline Ids subset(Ids const& v, std::uint64_t mask)
{
    Ids out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (mask & (std::uint64_t{1} << i)) {
            out.push_back(v[i]);
        }
    }
    return out;
}

struct Stmt {
    Ids x, y, z; // x <= y

    static Stmt make(Ids a, Ids b, Ids z)
    {
        if (b < a) {
            std::swap(a, b);
        }
        return {std::move(a), std::move(b), std::move(z)};
    }
    bool operator==(Stmt const&) const = default;
};

struct IdsHash {
    std::size_t operator()(Ids const& v) const noexcept
    {
        std::uint64_t h = 0x9E3779B97F4A7C15ULL ^ v.size();
        for (auto id : v) {
            h ^= id + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

struct StmtHash {
    std::size_t operator()(Stmt const& s) const noexcept
    {
        IdsHash h;
        auto a = h(s.x);
        auto b = h(s.y);
        auto c = h(s.z);
        return a ^ (b * 0x100000001B3ULL) ^ (c * 0xC2B2AE3D27D4EB4FULL);
    }
};

struct SideKey {
    Ids side, cond;
    bool operator==(SideKey const&) const = default;
};

struct SideKeyHash {
    std::size_t operator()(SideKey const& k) const noexcept
    {
        IdsHash h;
        return h(k.side) * 31 ^ h(k.cond);
    }
};

class Interner {
public:
    explicit Interner(std::vector<StatConstraint> const& inputs)
    {
        VarSet all;
        for (auto const& c : inputs) {
            all = all.unite(c.variables());
        }
        names_ = all.names();
        for (std::uint32_t i = 0; i < names_.size(); ++i) {
            ids_.emplace(names_[i], i);
        }
    }

    [[nodiscard]] Ids encode(VarSet const& s) const
    {
        Ids out;
        out.reserve(s.size());
        for (auto const& n : s) {
            out.push_back(ids_.at(n));
        }
        return out; // names sorted => ids sorted
    }

    [[nodiscard]] VarSet decode(Ids const& ids) const
    {
        std::vector<std::string> out;
        out.reserve(ids.size());
        for (auto i : ids) {
            out.push_back(names_[i]);
        }
        return VarSet(std::move(out));
    }

    [[nodiscard]] Stmt encode(StatConstraint const& c) const { return Stmt::make(encode(c.x()), encode(c.y()), encode(c.z())); }
    [[nodiscard]] StatConstraint decode(Stmt const& s) const
    {
        return StatConstraint(decode(s.x), decode(s.y), decode(s.z), Polarity::Independence);
    }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::uint32_t> ids_;
};

} // namespace detail

// Shared worklist driver: the Engine decides which rules fire for each new member.
template <typename Engine>
class ClosureBuilder {
public:
    ClosureBuilder(std::vector<StatConstraint> const& inputs, std::size_t cap)
        : interner_(inputs)
        , cap_(cap)
    {
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            if (!inputs[i].is_independence()) {
                throw ConstraintError("closure inputs must be independence constraints: " + format(inputs[i]));
            }
            add(interner_.encode(inputs[i]), Rule::Axiom, {}, i);
        }
    }

    Closure run()
    {
        Engine engine;
        while (next_ < stmts_.size() && !closure_.truncated_) {
            auto id = next_++;
            ++closure_.stats_.iterations;
            engine.expand(*this, id);
        }
        return std::move(closure_);
    }

    // Adds a member if new. Returns false when present or the cap is reached.
    bool add(detail::Stmt s, Rule rule, std::vector<std::size_t> premises, std::optional<std::size_t> input = std::nullopt)
    {
        if (ids_.count(s)) {
            return false;
        }
        if (stmts_.size() >= cap_) {
            closure_.truncated_ = true;
            return false;
        }
        auto id = stmts_.size();
        auto decoded = interner_.decode(s);
        closure_.lookup_.emplace(format(decoded), id);
        closure_.entries_.push_back({std::move(decoded), rule, input, std::move(premises)});
        if (rule != Rule::Axiom) {
            ++closure_.stats_.rule_applications[rule];
        }
        ids_.emplace(s, id);
        index(s.x, s.y, s.z, id);
        index(s.y, s.x, s.z, id);
        stmts_.push_back(std::move(s));
        return true;
    }

    [[nodiscard]] detail::Stmt const& stmt(std::size_t id) const { return stmts_[id]; }

    [[nodiscard]] std::optional<std::size_t> find(detail::Stmt const& s) const
    {
        auto it = ids_.find(s);
        if (it == ids_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    // Members of the form side _||_ other | cond, as (other, id) pairs.
    [[nodiscard]] std::vector<std::pair<detail::Ids, std::size_t>> partners(detail::Ids const& side, detail::Ids const& cond) const
    {
        auto it = by_side_.find({side, cond});
        if (it == by_side_.end()) {
            return {};
        }
        return it->second;
    }

private:
    void index(detail::Ids const& side, detail::Ids const& other, detail::Ids const& cond, std::size_t id)
    {
        by_side_[{side, cond}].emplace_back(other, id);
    }

    detail::Interner interner_;
    std::size_t cap_;
    std::size_t next_ = 0;
    std::vector<detail::Stmt> stmts_;
    std::unordered_map<detail::Stmt, std::size_t, detail::StmtHash> ids_;
    std::unordered_map<detail::SideKey, std::vector<std::pair<detail::Ids, std::size_t>>, detail::SideKeyHash> by_side_;
    Closure closure_;
};

namespace detail {

// Decomposition, weak union and contraction over arbitrary set splits.
struct GraphoidEngine {
    template <typename Builder>
    void expand(Builder& b, std::size_t id)
    {
        auto const s = b.stmt(id); // copy: add() may reallocate
        orient(b, id, s.x, s.y, s.z);
        if (s.x != s.y) {
            orient(b, id, s.y, s.x, s.z);
        }
    }

    template <typename Builder>
    void orient(Builder& b, std::size_t id, Ids const& lhs, Ids const& rhs, Ids const& cond)
    {
        if (rhs.size() >= 2) {
            if (rhs.size() > 62) {
                throw ConstraintError("constraint side too large for split enumeration");
            }
            std::uint64_t const full = (std::uint64_t{1} << rhs.size()) - 1;
            for (std::uint64_t mask = 1; mask < full; ++mask) {
                auto part = subset(rhs, mask);
                auto rest = subset(rhs, full & ~mask);
                b.add(Stmt::make(lhs, part, cond), Rule::Decomposition, {id});
                b.add(Stmt::make(lhs, part, set_union(cond, rest)), Rule::WeakUnion, {id});
            }
        }

        // This member as the first premise: lhs _||_ rhs | cond, partner lhs _||_ w | rhs u cond.
        for (auto const& [w, pid] : b.partners(lhs, set_union(rhs, cond))) {
            b.add(Stmt::make(lhs, set_union(rhs, w), cond), Rule::Contraction, {id, pid});
        }

        // This member as the second premise: lhs _||_ rhs | cond with cond = y u z,
        // partner lhs _||_ y | z for non-empty y within cond.
        if (!cond.empty()) {
            if (cond.size() > 62) {
                throw ConstraintError("conditioning set too large for split enumeration");
            }
            std::uint64_t const full = (std::uint64_t{1} << cond.size()) - 1;
            for (std::uint64_t mask = 1; mask <= full; ++mask) {
                auto y = subset(cond, mask);
                auto z = subset(cond, full & ~mask);
                if (auto pid = b.find(Stmt::make(lhs, y, z))) {
                    b.add(Stmt::make(lhs, set_union(y, rhs), z), Rule::Contraction, {*pid, id});
                }
            }
        }
    }
};

// The single 3-variable rule: (A _||_ B) & (A _||_ C | B) => A _||_ C and A _||_ B | C.
struct ThreeVarEngine {
    template <typename Builder>
    void expand(Builder& b, std::size_t id)
    {
        auto const s = b.stmt(id);
        if (s.z.empty()) {
            // Marginal A _||_ B: find conditionals A _||_ C | B (and with roles swapped).
            fire_from_marginal(b, id, s.x, s.y);
            fire_from_marginal(b, id, s.y, s.x);
        } else {
            // Conditional p _||_ q | r: look for marginals p _||_ r, q _||_ r.
            fire_from_conditional(b, id, s.x, s.y, s.z);
            fire_from_conditional(b, id, s.y, s.x, s.z);
        }
    }

    template <typename Builder>
    void fire_from_marginal(Builder& b, std::size_t id, Ids const& a, Ids const& bvar)
    {
        for (auto const& [c, pid] : b.partners(a, bvar)) {
            b.add(Stmt::make(a, c, {}), Rule::CWD, {id, pid});
            b.add(Stmt::make(a, bvar, c), Rule::CWD, {id, pid});
        }
    }

    template <typename Builder>
    void fire_from_conditional(Builder& b, std::size_t id, Ids const& a, Ids const& c, Ids const& bvar)
    {
        if (auto mid = b.find(Stmt::make(a, bvar, {}))) {
            b.add(Stmt::make(a, c, {}), Rule::CWD, {*mid, id});
            b.add(Stmt::make(a, bvar, c), Rule::CWD, {*mid, id});
        }
    }
};

} // namespace detail

// Fixed point of the graphoid axioms. Symmetry is implicit in the canonical form.
inline Closure closure(std::vector<StatConstraint> const& inputs, std::size_t cap = default_member_cap)
{
    return ClosureBuilder<detail::GraphoidEngine>(inputs, cap).run();
}

inline bool is_three_variable_elementary(StatConstraint const& c)
{
    return c.is_elementary() && c.z().size() <= 1;
}

// Fixed point of the 3-variable system. Inputs must be elementary with at most 3 variables.
inline Closure closure_3var(std::vector<StatConstraint> const& inputs, std::size_t cap = default_member_cap)
{
    for (auto const& c : inputs) {
        if (!is_three_variable_elementary(c)) {
            throw ConstraintError("3-variable closure requires elementary constraints over at most 3 variables: " + format(c));
        }
    }
    return ClosureBuilder<detail::ThreeVarEngine>(inputs, cap).run();
}

// Upper bound on the closure size: sum over inputs of sum_{m=2..l} C(l,m) 3^m, l = variable count.
inline double closure_size_bound(std::vector<StatConstraint> const& inputs)
{
    double total = 0.0;
    for (auto const& c : inputs) {
        auto l = c.variables().size();
        double binom = 1.0; // C(l, 0)
        double pow3 = 1.0;
        for (std::size_t m = 1; m <= l; ++m) {
            binom = binom * static_cast<double>(l - m + 1) / static_cast<double>(m);
            pow3 *= 3.0;
            if (m >= 2) {
                total += binom * pow3;
            }
        }
    }
    return total;
}

struct Implication {
    bool implied = false;
    DerivationPtr derivation;
    bool truncated = false;
};

inline Implication implies(std::vector<StatConstraint> const& inputs, StatConstraint const& gamma,
                           std::size_t cap = default_member_cap)
{
    if (!gamma.is_independence()) {
        throw ConstraintError("implication query must be an independence constraint");
    }
    auto cl = closure(inputs, cap);
    Implication out;
    out.truncated = cl.truncated();
    if (auto id = cl.find(gamma)) {
        out.implied = true;
        out.derivation = cl.derivation(*id);
    }
    return out;
}

namespace detail {

inline bool split_matches(VarSet const& whole, VarSet const& part, VarSet const& rest)
{
    return !part.empty() && !rest.empty() && part.disjoint(rest) && part.unite(rest) == whole;
}

// Orientations (lhs, rhs) of a canonical constraint.
inline std::vector<std::pair<VarSet, VarSet>> orientations(StatConstraint const& c)
{
    return {{c.x(), c.y()}, {c.y(), c.x()}};
}

} // namespace detail

// Checks one inference step independently of the closure engines.
inline bool validate_step(StatConstraint const& conclusion, Rule rule, std::vector<StatConstraint> const& premises)
{
    using detail::orientations;
    switch (rule) {
    case Rule::Axiom:
        return premises.empty();
    case Rule::Symmetry:
        return premises.size() == 1 && premises[0].triple() == conclusion.triple();
    case Rule::Decomposition:
    case Rule::WeakUnion: {
        if (premises.size() != 1) {
            return false;
        }
        for (auto const& [pl, pr] : orientations(premises[0])) {
            for (auto const& [cl, cr] : orientations(conclusion)) {
                if (pl != cl || !cr.subset_of(pr) || cr == pr) {
                    continue;
                }
                std::vector<std::string> rest_names;
                std::set_difference(pr.begin(), pr.end(), cr.begin(), cr.end(), std::back_inserter(rest_names));
                VarSet rest(rest_names);
                if (rule == Rule::Decomposition && conclusion.z() == premises[0].z()) {
                    return true;
                }
                if (rule == Rule::WeakUnion && premises[0].z().disjoint(rest)
                    && conclusion.z() == premises[0].z().unite(rest)) {
                    return true;
                }
            }
        }
        return false;
    }
    case Rule::Contraction: {
        if (premises.size() != 2) {
            return false;
        }
        auto const& first = premises[0];
        auto const& second = premises[1];
        for (auto const& [l1, y] : orientations(first)) {
            for (auto const& [l2, w] : orientations(second)) {
                if (l1 != l2 || second.z() != y.unite(first.z()) || !y.disjoint(first.z())) {
                    continue;
                }
                for (auto const& [cl, cr] : orientations(conclusion)) {
                    if (cl == l1 && conclusion.z() == first.z() && detail::split_matches(cr, y, w)) {
                        return true;
                    }
                }
            }
        }
        return false;
    }
    case Rule::CWD: {
        if (premises.size() != 2) {
            return false;
        }
        auto const& marginal = premises[0];
        auto const& conditional = premises[1];
        if (!marginal.is_marginal() || conditional.z().size() != 1 || !marginal.is_elementary()
            || !conditional.is_elementary()) {
            return false;
        }
        for (auto const& [a, b] : orientations(marginal)) {
            for (auto const& [ca, c] : orientations(conditional)) {
                if (ca != a || conditional.z() != b) {
                    continue;
                }
                StatConstraint ac(a, c, {}, Polarity::Independence);
                StatConstraint ab_c(a, b, c, Polarity::Independence);
                if (conclusion.triple() == ac.triple() || conclusion.triple() == ab_c.triple()) {
                    return true;
                }
            }
        }
        return false;
    }
    }
    return false;
}

// Re-applies every node's rule to its premises. Axiom leaves must match the referenced input.
inline bool validate(Derivation const& d, std::vector<StatConstraint> const& inputs)
{
    if (d.rule == Rule::Axiom) {
        return d.input_index && *d.input_index < inputs.size() && inputs[*d.input_index].triple() == d.conclusion.triple();
    }
    std::vector<StatConstraint> premises;
    for (auto const& p : d.premises) {
        if (!p || !validate(*p, inputs)) {
            return false;
        }
        premises.push_back(p->conclusion);
    }
    return validate_step(d.conclusion, d.rule, premises);
}

// Input indices used as leaves, ascending and unique.
inline std::vector<std::size_t> axiom_leaves(Derivation const& d)
{
    std::vector<std::size_t> out;
    std::vector<Derivation const*> stack{&d};
    while (!stack.empty()) {
        auto const* n = stack.back();
        stack.pop_back();
        if (n->rule == Rule::Axiom && n->input_index) {
            out.push_back(*n->input_index);
        }
        for (auto const& p : n->premises) {
            stack.push_back(p.get());
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

enum class VerdictKind { Consistent, Inconsistent, FastPathConsistent };

inline std::string_view to_string(VerdictKind v)
{
    switch (v) {
    case VerdictKind::Consistent: return "consistent";
    case VerdictKind::Inconsistent: return "inconsistent";
    case VerdictKind::FastPathConsistent: return "consistent (saturated fast path)";
    }
    return "?";
}

struct Conflict {
    StatConstraint dependence;
    std::size_t dependence_index = 0; // position within sigma.dependencies()
    DerivationPtr derivation;         // proof of the negated dependence from sigma.independencies()
};

struct ConsistencyVerdict {
    VerdictKind kind = VerdictKind::Consistent;
    std::vector<Conflict> conflicts; // first entry is the reported conflict
    bool truncated = false;
    std::size_t closure_size = 0;

    [[nodiscard]] bool consistent() const { return kind != VerdictKind::Inconsistent; }
    // Inconsistent verdicts are always definitive; Consistent ones only when the closure completed.
    [[nodiscard]] bool definitive() const { return kind == VerdictKind::Inconsistent || !truncated; }
};

struct CheckOptions {
    std::size_t member_cap = default_member_cap;
    bool all_conflicts = false;
};

inline ConsistencyVerdict check_consistency(ConstraintSet const& sigma, CheckOptions const& opts = {})
{
    auto cl = closure(sigma.independencies(), opts.member_cap);
    ConsistencyVerdict v;
    v.truncated = cl.truncated();
    v.closure_size = cl.size();
    auto const& deps = sigma.dependencies();
    for (std::size_t i = 0; i < deps.size(); ++i) {
        if (auto id = cl.find(deps[i].negated())) {
            v.kind = VerdictKind::Inconsistent;
            v.conflicts.push_back({deps[i], i, cl.derivation(*id)});
            if (!opts.all_conflicts) {
                break;
            }
        }
    }
    return v;
}

// Decides saturated elementary sets by symmetry alone; nullopt when not applicable.
inline std::optional<ConsistencyVerdict> saturated_fast_path(ConstraintSet const& sigma, VarSet const& universe)
{
    auto all = sigma.all();
    for (auto const& c : all) {
        if (!c.is_elementary() || c.variables() != universe) {
            return std::nullopt;
        }
    }
    ConsistencyVerdict v;
    v.kind = VerdictKind::FastPathConsistent;
    auto const& inds = sigma.independencies();
    auto const& deps = sigma.dependencies();
    for (std::size_t i = 0; i < deps.size(); ++i) {
        for (std::size_t j = 0; j < inds.size(); ++j) {
            if (inds[j].triple() == deps[i].triple()) {
                auto leaf = std::make_shared<Derivation>();
                leaf->conclusion = inds[j];
                leaf->rule = Rule::Axiom;
                leaf->input_index = j;
                v.kind = VerdictKind::Inconsistent;
                v.conflicts.push_back({deps[i], i, leaf});
                return v;
            }
        }
    }
    return v;
}

} // namespace statguard
