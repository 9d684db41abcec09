#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support.hpp"

using namespace statguard;

namespace {

Dataset parse(std::string const& text, Schema const& schema = {})
{
    std::istringstream in(text);
    return read_csv(in, schema);
}

} // namespace

TEST(ReadCsv, InfersKindsByParseability)
{
    auto ds = parse("a,b\n1,x\n2,y\n");
    ASSERT_EQ(ds.n_cols(), 2u);
    EXPECT_EQ(ds.n_rows(), 2u);
    EXPECT_EQ(ds.column("a").kind(), ColumnKind::Numerical);
    EXPECT_EQ(ds.column("b").kind(), ColumnKind::Categorical);
    EXPECT_EQ(ds.column("a").real(1), 2.0);
    EXPECT_EQ(ds.column("b").text(0), "x");
}

TEST(ReadCsv, EmptyCellMatchesDefaultMissingToken)
{
    auto ds = parse("a\n1\n\n3\n");
    auto const& a = ds.column("a");
    ASSERT_EQ(a.size(), 3u);
    EXPECT_EQ(a.cell(0), Cell(1.0));
    EXPECT_TRUE(a.is_missing(1));
    EXPECT_EQ(a.cell(2), Cell(3.0));
}

TEST(ReadCsv, DuplicateHeaderRejected) { EXPECT_THROW(parse("a,a\n1,2\n"), DataError); }

TEST(ReadCsv, RaggedRowNamesLine)
{
    try {
        parse("a,b\n1,2\n3\n");
        FAIL() << "expected DataError";
    } catch (DataError const& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(ReadCsv, QuotedFieldsWithCommasAndQuotes)
{
    auto ds = parse("name,v\n\"Smith, J\",1\n\"say \"\"hi\"\"\",2\n");
    EXPECT_EQ(ds.column("name").text(0), "Smith, J");
    EXPECT_EQ(ds.column("name").text(1), "say \"hi\"");
}

TEST(ReadCsv, CrLfLineEndings)
{
    auto ds = parse("a,b\r\n1,x\r\n2,y\r\n");
    EXPECT_EQ(ds.column("b").text(1), "y");
    EXPECT_EQ(ds.column("a").kind(), ColumnKind::Numerical);
}

TEST(ReadCsv, NonFiniteTextMakesColumnCategorical)
{
    auto ds = parse("a\n1\nnan\n");
    EXPECT_EQ(ds.column("a").kind(), ColumnKind::Categorical);
}

TEST(ReadCsv, SchemaForcesKindAndMissingToken)
{
    std::istringstream schema_text("# sidecar\nzip:categorical\nv:numerical:NA\n");
    auto schema = parse_schema(schema_text);
    auto ds = parse("zip,v\n02139,1.5\n10001,NA\n", schema);
    EXPECT_EQ(ds.column("zip").kind(), ColumnKind::Categorical);
    EXPECT_EQ(ds.column("zip").text(0), "02139");
    EXPECT_TRUE(ds.column("v").is_missing(1));
}

TEST(ReadCsv, SchemaNumericalRejectsText)
{
    std::istringstream schema_text("v:numerical\n");
    auto schema = parse_schema(schema_text);
    EXPECT_THROW(parse("v\nabc\n", schema), DataError);
}

TEST(Schema, BadKindRejected)
{
    std::istringstream in("v:float\n");
    EXPECT_THROW(parse_schema(in), DataError);
}

TEST(Column, CategoricalTokensTrimmedAndInterned)
{
    auto c = Column::categorical("c", {std::string(" red "), std::string("blue"), std::string("red"), std::nullopt});
    EXPECT_EQ(c.dictionary().size(), 2u);
    EXPECT_EQ(c.code(0), c.code(2));
    EXPECT_EQ(c.text(0), "red");
    EXPECT_TRUE(c.is_missing(3));
}

TEST(Column, EmptyTokenRejected)
{
    EXPECT_THROW(Column::categorical("c", {std::string("  ")}), DataError);
}

TEST(Column, NonFiniteRealRejected)
{
    EXPECT_THROW(Column::numerical("c", {std::numeric_limits<double>::infinity()}), DataError);
}

TEST(Dataset, LengthMismatchRejected)
{
    EXPECT_THROW(Dataset({gen::numeric("a", {1, 2}), gen::numeric("b", {1})}), DataError);
}

TEST(Dataset, UnknownColumnThrows)
{
    Dataset ds({gen::numeric("a", {1, 2})});
    EXPECT_THROW((void)ds.column("zzz"), DataError);
    EXPECT_FALSE(ds.has("zzz"));
}

TEST(Dataset, WithColumnReplacesOnlyTarget)
{
    Dataset ds({gen::numeric("a", {1, 2}), gen::numeric("b", {3, 4})});
    auto next = ds.with_column(gen::numeric("a", {9, 9}));
    EXPECT_EQ(next.column("a").real(0), 9.0);
    EXPECT_EQ(next.column("b"), ds.column("b"));
    EXPECT_EQ(ds.column("a").real(0), 1.0);
}

TEST(ProjectComplete, DropsRowsWithMissingCells)
{
    auto a = Column::numerical("a", {1.0, std::nullopt, 3.0});
    auto b = Column::categorical("b", {std::string("x"), std::string("y"), std::string("z")});
    Dataset ds({a, b});
    auto view = project_complete(ds, {"a", "b"});
    ASSERT_EQ(view.size(), 2u);
    EXPECT_EQ(view.row_ids, (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(view[0].real(1), 3.0);
    EXPECT_EQ(view[1].text(1), "z");
}

TEST(ProjectComplete, EmptyVariableListRejected)
{
    Dataset ds({gen::numeric("a", {1, 2})});
    EXPECT_THROW(project_complete(ds, {}), DataError);
}

TEST(ProjectComplete, CompleteDataKeepsIdentity)
{
    Dataset ds({gen::numeric("a", {1, 2, 3}), gen::numeric("b", {4, 5, 6})});
    auto view = project_complete(ds, {"b"});
    EXPECT_EQ(view.row_ids, (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_EQ(view.columns.size(), 1u);
}

TEST(ProjectComplete, UnknownVariableThrows)
{
    Dataset ds({gen::numeric("a", {1, 2})});
    EXPECT_THROW(project_complete(ds, {"q"}), DataError);
}

TEST(ProjectComplete, RowIdsStrictlyIncreasingProperty)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + rng() % 50;
        std::vector<std::optional<double>> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rng() % 4) {
                a[i] = static_cast<double>(rng() % 10);
            }
            if (rng() % 4) {
                b[i] = static_cast<double>(rng() % 10);
            }
        }
        Dataset ds({Column::numerical("a", a), Column::numerical("b", b)});
        auto view = project_complete(ds, {"a", "b"});
        for (std::size_t i = 0; i < view.size(); ++i) {
            auto r = view.row_ids[i];
            ASSERT_TRUE(a[r] && b[r]);
            EXPECT_EQ(view[0].real(i), *a[r]);
            if (i > 0) {
                EXPECT_LT(view.row_ids[i - 1], r);
            }
        }
        std::size_t complete = 0;
        for (std::size_t i = 0; i < n; ++i) {
            complete += a[i] && b[i];
        }
        EXPECT_EQ(view.size(), complete);
    }
}

TEST(WriteCsv, RoundTripIsLossless)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 1 + rng() % 40;
        std::vector<std::optional<double>> a(n);
        std::vector<std::optional<std::string>> b(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rng() % 5) {
                a[i] = u(rng) / static_cast<double>(1 + rng() % 1000);
            }
            if (rng() % 5) {
                static char const* tokens[] = {"red", "a,b", "quote\"d", "x y", "Z"};
                b[i] = tokens[rng() % 5];
            }
        }
        // At least one present categorical token keeps the kind inferable on reload.
        b[0] = "anchor";
        Dataset ds({Column::numerical("a", a), Column::categorical("b", b)});
        std::ostringstream out;
        write_csv(out, ds);
        auto back = parse(out.str());
        ASSERT_EQ(back.n_rows(), n);
        EXPECT_EQ(back.column("b"), ds.column("b"));
        // An all-missing numeric column reloads as numeric too.
        EXPECT_EQ(back.column("a"), ds.column("a"));
    }
}

TEST(WriteCsv, MissingWrittenAsSchemaToken)
{
    std::istringstream schema_text("v:numerical:NA\n");
    auto schema = parse_schema(schema_text);
    Dataset ds({Column::numerical("v", {1.0, std::nullopt})});
    std::ostringstream out;
    write_csv(out, ds, schema);
    EXPECT_EQ(out.str(), "v\n1\nNA\n");
}
