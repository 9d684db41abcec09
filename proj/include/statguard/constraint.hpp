#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace statguard {

class ParseError : public std::runtime_error {
public:
    ParseError(std::string const& what, std::size_t line, std::size_t column)
        : std::runtime_error(what)
        , line_(line)
        , column_(column)
    {
    }
    [[nodiscard]] std::size_t line() const { return line_; }
    [[nodiscard]] std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class ConstraintError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Sorted, duplicate-free set of variable names.
class VarSet {
public:
    VarSet() = default;
    VarSet(std::initializer_list<std::string> names)
        : VarSet(std::vector<std::string>(names))
    {
    }
    explicit VarSet(std::vector<std::string> names)
        : names_(std::move(names))
    {
        std::sort(names_.begin(), names_.end());
        names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
    }

    [[nodiscard]] std::vector<std::string> const& names() const { return names_; }
    [[nodiscard]] std::size_t size() const { return names_.size(); }
    [[nodiscard]] bool empty() const { return names_.empty(); }
    [[nodiscard]] auto begin() const { return names_.begin(); }
    [[nodiscard]] auto end() const { return names_.end(); }
    [[nodiscard]] std::string const& operator[](std::size_t i) const { return names_[i]; }

    [[nodiscard]] bool contains(std::string const& v) const
    {
        return std::binary_search(names_.begin(), names_.end(), v);
    }
    [[nodiscard]] bool disjoint(VarSet const& o) const
    {
        std::vector<std::string> tmp;
        std::set_intersection(begin(), end(), o.begin(), o.end(), std::back_inserter(tmp));
        return tmp.empty();
    }
    [[nodiscard]] bool subset_of(VarSet const& o) const
    {
        return std::includes(o.begin(), o.end(), begin(), end());
    }
    [[nodiscard]] VarSet unite(VarSet const& o) const
    {
        std::vector<std::string> out;
        std::set_union(begin(), end(), o.begin(), o.end(), std::back_inserter(out));
        return VarSet(std::move(out));
    }

    auto operator<=>(VarSet const&) const = default;
    bool operator==(VarSet const&) const = default;

private:
    std::vector<std::string> names_;
};

enum class Polarity { Independence, Dependence };

// X _||_ Y | Z (Independence) or its negation (Dependence), held in canonical form x <= y.
class StatConstraint {
public:
    StatConstraint() = default;
    StatConstraint(VarSet x, VarSet y, VarSet z = {}, Polarity polarity = Polarity::Independence)
        : x_(std::move(x))
        , y_(std::move(y))
        , z_(std::move(z))
        , polarity_(polarity)
    {
        if (x_.empty() || y_.empty()) {
            throw ConstraintError("both sides of a constraint must be non-empty");
        }
        if (!x_.disjoint(y_) || !x_.disjoint(z_) || !y_.disjoint(z_)) {
            throw ConstraintError("variable sets of a constraint must be pairwise disjoint");
        }
        if (y_ < x_) {
            std::swap(x_, y_);
        }
    }

    [[nodiscard]] VarSet const& x() const { return x_; }
    [[nodiscard]] VarSet const& y() const { return y_; }
    [[nodiscard]] VarSet const& z() const { return z_; }
    [[nodiscard]] Polarity polarity() const { return polarity_; }
    [[nodiscard]] bool is_independence() const { return polarity_ == Polarity::Independence; }
    [[nodiscard]] bool is_marginal() const { return z_.empty(); }
    [[nodiscard]] bool is_elementary() const { return x_.size() == 1 && y_.size() == 1; }

    [[nodiscard]] VarSet variables() const { return x_.unite(y_).unite(z_); }

    // Same triple with the opposite polarity.
    [[nodiscard]] StatConstraint negated() const
    {
        auto c = *this;
        c.polarity_ = polarity_ == Polarity::Independence ? Polarity::Dependence : Polarity::Independence;
        return c;
    }

    [[nodiscard]] auto triple() const { return std::tie(x_, y_, z_); }

    friend bool operator==(StatConstraint const& a, StatConstraint const& b)
    {
        return a.polarity_ == b.polarity_ && a.triple() == b.triple();
    }
    friend bool operator<(StatConstraint const& a, StatConstraint const& b)
    {
        return std::tie(a.polarity_, a.x_, a.y_, a.z_) < std::tie(b.polarity_, b.x_, b.y_, b.z_);
    }

private:
    VarSet x_;
    VarSet y_;
    VarSet z_;
    Polarity polarity_ = Polarity::Independence;
};

inline std::string format(VarSet const& s)
{
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) {
            out += ",";
        }
        out += s[i];
    }
    return out;
}

// Canonical rendering, e.g. `indep(A,B; C | D)`.
inline std::string format(StatConstraint const& c)
{
    std::string out = c.is_independence() ? "indep(" : "dep(";
    out += format(c.x()) + "; " + format(c.y());
    if (!c.z().empty()) {
        out += " | " + format(c.z());
    }
    out += ")";
    return out;
}

namespace detail {

class ConstraintLexer {
public:
    ConstraintLexer(std::string_view text, std::size_t line)
        : text_(text)
        , line_(line)
    {
    }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    [[nodiscard]] bool at_end()
    {
        skip_ws();
        return pos_ >= text_.size();
    }

    [[nodiscard]] char peek()
    {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    void expect(char c)
    {
        if (peek() != c) {
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    std::string identifier()
    {
        skip_ws();
        auto start = pos_;
        if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
        }
        if (start == pos_) {
            fail("expected identifier");
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    std::vector<std::string> varlist()
    {
        std::vector<std::string> out{identifier()};
        while (peek() == ',') {
            ++pos_;
            out.push_back(identifier());
        }
        return out;
    }

    [[noreturn]] void fail(std::string const& what) const
    {
        throw ParseError("line " + std::to_string(line_) + ", column " + std::to_string(pos_ + 1) + ": " + what, line_,
                         pos_ + 1);
    }

    [[nodiscard]] std::size_t pos() const { return pos_; }

private:
    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

} // namespace detail

// Grammar: ("indep"|"dep") "(" varlist ";" varlist [ "|" varlist ] ")"
inline StatConstraint parse_constraint(std::string_view line, std::size_t lineno = 1)
{
    detail::ConstraintLexer lex(line, lineno);
    auto keyword = lex.identifier();
    Polarity polarity{};
    if (keyword == "indep") {
        polarity = Polarity::Independence;
    } else if (keyword == "dep") {
        polarity = Polarity::Dependence;
    } else {
        lex.fail("expected 'indep' or 'dep', got '" + keyword + "'");
    }
    lex.expect('(');
    auto xs = lex.varlist();
    lex.expect(';');
    auto ys = lex.varlist();
    std::vector<std::string> zs;
    if (lex.peek() == '|') {
        lex.expect('|');
        zs = lex.varlist();
    }
    lex.expect(')');
    if (!lex.at_end()) {
        lex.fail("trailing characters");
    }
    auto dup_free = [&](std::vector<std::string> const& v) {
        if (VarSet(v).size() != v.size()) {
            lex.fail("duplicate variable within a set");
        }
    };
    dup_free(xs);
    dup_free(ys);
    dup_free(zs);
    try {
        return StatConstraint(VarSet(xs), VarSet(ys), VarSet(zs), polarity);
    } catch (ConstraintError const& e) {
        throw ParseError("line " + std::to_string(lineno) + ": " + e.what(), lineno, 1);
    }
}

// Sigma = I u D. Members keep first-seen order; duplicates after canonicalization collapse.
class ConstraintSet {
public:
    // Returns false if the constraint was already present.
    bool add(StatConstraint const& c)
    {
        auto& part = c.is_independence() ? independencies_ : dependencies_;
        if (std::find(part.begin(), part.end(), c) != part.end()) {
            return false;
        }
        part.push_back(c);
        return true;
    }

    bool remove(StatConstraint const& c)
    {
        auto& part = c.is_independence() ? independencies_ : dependencies_;
        auto it = std::find(part.begin(), part.end(), c);
        if (it == part.end()) {
            return false;
        }
        part.erase(it);
        return true;
    }

    [[nodiscard]] std::vector<StatConstraint> const& independencies() const { return independencies_; }
    [[nodiscard]] std::vector<StatConstraint> const& dependencies() const { return dependencies_; }
    [[nodiscard]] std::size_t size() const { return independencies_.size() + dependencies_.size(); }
    [[nodiscard]] bool empty() const { return size() == 0; }

    // All members, independencies first.
    [[nodiscard]] std::vector<StatConstraint> all() const
    {
        auto out = independencies_;
        out.insert(out.end(), dependencies_.begin(), dependencies_.end());
        return out;
    }

    [[nodiscard]] VarSet variables() const
    {
        VarSet out;
        for (auto const& c : all()) {
            out = out.unite(c.variables());
        }
        return out;
    }

    // Order-insensitive comparison.
    friend bool operator==(ConstraintSet const& a, ConstraintSet const& b)
    {
        auto as = a.all();
        auto bs = b.all();
        std::sort(as.begin(), as.end());
        std::sort(bs.begin(), bs.end());
        return as == bs;
    }

private:
    std::vector<StatConstraint> independencies_;
    std::vector<StatConstraint> dependencies_;
};

struct ParsedConstraints {
    ConstraintSet set;
    std::vector<StatConstraint> ordered; // file order, duplicates removed
    std::vector<std::string> warnings;
};

inline ParsedConstraints parse_constraints(std::istream& in)
{
    ParsedConstraints out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        auto c = parse_constraint(line, lineno);
        if (out.set.add(c)) {
            out.ordered.push_back(c);
        } else {
            out.warnings.push_back("line " + std::to_string(lineno) + ": duplicate constraint " + format(c) + " collapsed");
        }
    }
    return out;
}

inline ParsedConstraints parse_file(std::string const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open constraint file: " + path);
    }
    return parse_constraints(in);
}

inline void write_constraints(std::ostream& out, std::vector<StatConstraint> const& cs)
{
    for (auto const& c : cs) {
        out << format(c) << '\n';
    }
}

enum class ConstraintClass { Marginal, Elementary, Saturated, General };

inline std::string_view to_string(ConstraintClass c)
{
    switch (c) {
    case ConstraintClass::Marginal: return "marginal";
    case ConstraintClass::Elementary: return "elementary";
    case ConstraintClass::Saturated: return "saturated";
    case ConstraintClass::General: return "general";
    }
    return "general";
}

// Most specific class. All three named classes have single-variable sides; anything else is General.
inline ConstraintClass classify(StatConstraint const& sc, VarSet const& universe)
{
    auto vars = sc.variables();
    if (!vars.subset_of(universe)) {
        throw ConstraintError("constraint " + format(sc) + " mentions variables outside the universe");
    }
    if (!sc.is_elementary()) {
        return ConstraintClass::General;
    }
    if (vars == universe) {
        return ConstraintClass::Saturated;
    }
    return sc.is_marginal() ? ConstraintClass::Marginal : ConstraintClass::Elementary;
}

} // namespace statguard
