#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support.hpp"

using namespace statguard;

TEST(ParseConstraint, Marginal)
{
    auto c = parse_constraint("indep(Model; Color)");
    EXPECT_EQ(c.x(), VarSet({"Color"}));
    EXPECT_EQ(c.y(), VarSet({"Model"}));
    EXPECT_TRUE(c.z().empty());
    EXPECT_TRUE(c.is_independence());
}

TEST(ParseConstraint, ConditionalDependenceCanonicalized)
{
    auto c = parse_constraint("dep(Price; Fuel | Model)");
    EXPECT_EQ(c.x(), VarSet({"Fuel"}));
    EXPECT_EQ(c.y(), VarSet({"Price"}));
    EXPECT_EQ(c.z(), VarSet({"Model"}));
    EXPECT_EQ(c.polarity(), Polarity::Dependence);
    EXPECT_EQ(format(c), "dep(Fuel; Price | Model)");
}

TEST(ParseConstraint, OverlappingSidesRejected)
{
    EXPECT_THROW(parse_constraint("indep(A; A)"), ParseError);
    EXPECT_THROW(parse_constraint("indep(A; B | A)"), ParseError);
}

TEST(ParseConstraint, SyntaxErrors)
{
    EXPECT_THROW(parse_constraint("indep(A B)"), ParseError);
    EXPECT_THROW(parse_constraint("ind(A; B)"), ParseError);
    EXPECT_THROW(parse_constraint("indep(A; B"), ParseError);
    EXPECT_THROW(parse_constraint("indep(A; B) x"), ParseError);
    EXPECT_THROW(parse_constraint("indep(; B)"), ParseError);
    EXPECT_THROW(parse_constraint("indep(A,A; B)"), ParseError);
}

TEST(ParseConstraint, WhitespaceAndMultiVariableSides)
{
    auto c = parse_constraint("  indep ( B , A ;C|  D ,E )  ");
    EXPECT_EQ(format(c), "indep(A,B; C | D,E)");
}

TEST(ParseConstraint, ErrorCarriesLineNumber)
{
    std::istringstream in("indep(A; B)\n# comment\nindep(A B)\n");
    try {
        parse_constraints(in);
        FAIL() << "expected ParseError";
    } catch (ParseError const& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(ParseConstraints, SymmetricDuplicateCollapses)
{
    std::istringstream in("indep(A;B)\nindep(B;A)\n");
    auto parsed = parse_constraints(in);
    EXPECT_EQ(parsed.set.size(), 1u);
    EXPECT_EQ(parsed.ordered.size(), 1u);
    EXPECT_EQ(parsed.warnings.size(), 1u);
}

TEST(ParseConstraints, OppositePolaritiesKeptInSeparatePartitions)
{
    std::istringstream in("indep(A;B)\ndep(A;B)\n");
    auto parsed = parse_constraints(in);
    EXPECT_EQ(parsed.set.independencies().size(), 1u);
    EXPECT_EQ(parsed.set.dependencies().size(), 1u);
}

TEST(ParseConstraints, EmptyInput)
{
    std::istringstream in("");
    EXPECT_TRUE(parse_constraints(in).set.empty());
    std::istringstream comments("# nothing\n\n   \n");
    EXPECT_TRUE(parse_constraints(comments).set.empty());
}

TEST(ParseConstraints, WriteThenParseRoundTrip)
{
    std::mt19937_64 rng(1);
    std::vector<StatConstraint> cs;
    for (int i = 0; i < 100; ++i) {
        cs.push_back(gen::three_var(rng, 6, i % 2 ? Polarity::Dependence : Polarity::Independence));
    }
    ConstraintSet set;
    std::vector<StatConstraint> unique;
    for (auto const& c : cs) {
        if (set.add(c)) {
            unique.push_back(c);
        }
    }
    std::ostringstream out;
    write_constraints(out, unique);
    std::istringstream in(out.str());
    auto parsed = parse_constraints(in);
    EXPECT_EQ(parsed.ordered, unique);
    EXPECT_EQ(parsed.set, set);
}

TEST(StatConstraint, SymmetryIsCanonical)
{
    std::mt19937_64 rng(2);
    for (int i = 0; i < 200; ++i) {
        auto c = gen::three_var(rng, 8, Polarity::Independence);
        StatConstraint swapped(c.y(), c.x(), c.z(), c.polarity());
        EXPECT_EQ(c, swapped);
        EXPECT_LE(c.x(), c.y());
        EXPECT_EQ(parse_constraint(format(c)), c);
    }
}

TEST(StatConstraint, NegationFlipsOnlyPolarity)
{
    auto c = parse_constraint("indep(A; B | C)");
    auto n = c.negated();
    EXPECT_EQ(n.polarity(), Polarity::Dependence);
    EXPECT_EQ(n.triple(), c.triple());
    EXPECT_EQ(n.negated(), c);
}

TEST(ConstraintSet, AddRemove)
{
    ConstraintSet s;
    auto c = parse_constraint("indep(A; B)");
    EXPECT_TRUE(s.add(c));
    EXPECT_FALSE(s.add(c));
    EXPECT_EQ(s.variables(), VarSet({"A", "B"}));
    EXPECT_TRUE(s.remove(c));
    EXPECT_FALSE(s.remove(c));
    EXPECT_TRUE(s.empty());
}

TEST(ConstraintSet, EqualityIgnoresOrder)
{
    ConstraintSet a, b;
    a.add(parse_constraint("indep(A; B)"));
    a.add(parse_constraint("dep(C; D)"));
    b.add(parse_constraint("dep(D; C)"));
    b.add(parse_constraint("indep(B; A)"));
    EXPECT_EQ(a, b);
}

TEST(Classify, TableOneExamples)
{
    VarSet universe{"Price", "Fuel", "Model", "Color"};
    EXPECT_EQ(classify(parse_constraint("indep(Price; Fuel)"), universe), ConstraintClass::Marginal);
    EXPECT_TRUE(parse_constraint("indep(Price; Fuel)").is_elementary());
    EXPECT_EQ(classify(parse_constraint("indep(Price; Fuel | Model, Color)"), universe), ConstraintClass::Saturated);
}

TEST(Classify, GeneralAndElementary)
{
    VarSet universe{"A", "B", "C", "D"};
    EXPECT_EQ(classify(parse_constraint("indep(A,B; C)"), universe), ConstraintClass::General);
    EXPECT_EQ(classify(parse_constraint("indep(A; B | C)"), universe), ConstraintClass::Elementary);
    EXPECT_THROW(classify(parse_constraint("indep(A; Q)"), universe), ConstraintError);
}

TEST(VarSet, SortedUniqueAndSetOps)
{
    VarSet a{"C", "A", "B", "A"};
    EXPECT_EQ(a.names(), (std::vector<std::string>{"A", "B", "C"}));
    VarSet b{"C", "D"};
    EXPECT_FALSE(a.disjoint(b));
    EXPECT_EQ(a.unite(b), VarSet({"A", "B", "C", "D"}));
    EXPECT_TRUE(VarSet({"A"}).subset_of(a));
    EXPECT_TRUE(a.contains("B"));
}

TEST(Classify, SetValuedSidesAreGeneralEvenWhenCoveringUniverse)
{
    VarSet universe{"A", "B", "C", "D"};
    EXPECT_EQ(classify(parse_constraint("indep(A,B; C | D)"), universe), ConstraintClass::General);
}
