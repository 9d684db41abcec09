#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace statguard {

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ColumnKind { Categorical, Numerical };

inline std::string_view to_string(ColumnKind k)
{
    return k == ColumnKind::Categorical ? "categorical" : "numerical";
}

struct Missing {
    friend bool operator==(Missing, Missing) { return true; }
};

// A single value as seen from outside a column.
using Cell = std::variant<Missing, std::string, double>;

namespace detail {

inline std::string_view trim(std::string_view s)
{
    auto const* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_real(std::string_view s)
{
    s = trim(s);
    if (s.empty()) {
        return std::nullopt;
    }
    if (s.front() == '+') {
        s.remove_prefix(1);
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

inline std::string format_real(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace detail

// Column storage. Categorical tokens are interned: codes index into `dictionary`.
// Missing cells carry code -1 (categorical) or NaN (numerical) plus a cleared bit in `present`.
class Column {
public:
    Column() = default;

    static Column numerical(std::string name, std::vector<std::optional<double>> const& cells)
    {
        Column c;
        c.name_ = std::move(name);
        c.kind_ = ColumnKind::Numerical;
        c.reals_.reserve(cells.size());
        c.present_.reserve(cells.size());
        for (auto const& v : cells) {
            if (v && !std::isfinite(*v)) {
                throw DataError("column '" + c.name_ + "': non-finite numerical value");
            }
            c.reals_.push_back(v.value_or(std::nan("")));
            c.present_.push_back(v.has_value());
        }
        return c;
    }

    static Column categorical(std::string name, std::vector<std::optional<std::string>> const& cells)
    {
        Column c;
        c.name_ = std::move(name);
        c.kind_ = ColumnKind::Categorical;
        c.codes_.reserve(cells.size());
        c.present_.reserve(cells.size());
        std::unordered_map<std::string, std::int32_t> index;
        for (auto const& v : cells) {
            if (!v) {
                c.codes_.push_back(-1);
                c.present_.push_back(false);
                continue;
            }
            auto token = std::string(detail::trim(*v));
            if (token.empty()) {
                throw DataError("column '" + c.name_ + "': empty category token");
            }
            auto [it, inserted] = index.try_emplace(token, static_cast<std::int32_t>(c.dictionary_.size()));
            if (inserted) {
                c.dictionary_.push_back(token);
            }
            c.codes_.push_back(it->second);
            c.present_.push_back(true);
        }
        return c;
    }

    [[nodiscard]] std::string const& name() const { return name_; }
    [[nodiscard]] ColumnKind kind() const { return kind_; }
    [[nodiscard]] std::size_t size() const { return present_.size(); }
    [[nodiscard]] bool is_missing(std::size_t row) const { return !present_[row]; }

    // Numerical access; undefined for missing rows.
    [[nodiscard]] double real(std::size_t row) const { return reals_[row]; }
    [[nodiscard]] std::vector<double> const& reals() const { return reals_; }

    // Categorical access.
    [[nodiscard]] std::int32_t code(std::size_t row) const { return codes_[row]; }
    [[nodiscard]] std::vector<std::int32_t> const& codes() const { return codes_; }
    [[nodiscard]] std::vector<std::string> const& dictionary() const { return dictionary_; }

    [[nodiscard]] Cell cell(std::size_t row) const
    {
        if (!present_[row]) {
            return Missing{};
        }
        if (kind_ == ColumnKind::Numerical) {
            return reals_[row];
        }
        return dictionary_[static_cast<std::size_t>(codes_[row])];
    }

    [[nodiscard]] std::string text(std::size_t row) const
    {
        if (!present_[row]) {
            return {};
        }
        if (kind_ == ColumnKind::Numerical) {
            return detail::format_real(reals_[row]);
        }
        return dictionary_[static_cast<std::size_t>(codes_[row])];
    }

    // Copy restricted to `rows` (in the given order). Dictionary order is preserved.
    [[nodiscard]] Column select(std::vector<std::size_t> const& rows) const
    {
        Column c;
        c.name_ = name_;
        c.kind_ = kind_;
        c.dictionary_ = dictionary_;
        c.present_.reserve(rows.size());
        for (auto r : rows) {
            c.present_.push_back(present_[r]);
            if (kind_ == ColumnKind::Numerical) {
                c.reals_.push_back(reals_[r]);
            } else {
                c.codes_.push_back(codes_[r]);
            }
        }
        return c;
    }

    // Overwrite a numerical cell. Used by error injection on a private copy.
    void set_real(std::size_t row, double v)
    {
        if (kind_ != ColumnKind::Numerical || !std::isfinite(v)) {
            throw DataError("set_real on non-numerical column or non-finite value");
        }
        reals_[row] = v;
        present_[row] = true;
    }

    void set_code(std::size_t row, std::int32_t code)
    {
        if (kind_ != ColumnKind::Categorical || code < 0 || static_cast<std::size_t>(code) >= dictionary_.size()) {
            throw DataError("set_code on non-categorical column or invalid code");
        }
        codes_[row] = code;
        present_[row] = true;
    }

    friend bool operator==(Column const& a, Column const& b)
    {
        if (a.name_ != b.name_ || a.kind_ != b.kind_ || a.size() != b.size()) {
            return false;
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a.cell(i) != b.cell(i)) {
                return false;
            }
        }
        return true;
    }

private:
    std::string name_;
    ColumnKind kind_ = ColumnKind::Numerical;
    std::vector<double> reals_;
    std::vector<std::int32_t> codes_;
    std::vector<std::string> dictionary_;
    std::vector<bool> present_;
};

struct Schema {
    struct Entry {
        ColumnKind kind;
        std::optional<std::string> missing_token;
    };
    std::map<std::string, Entry> columns;
    std::string missing_token;

    [[nodiscard]] std::string const& missing_for(std::string const& column) const
    {
        auto it = columns.find(column);
        if (it != columns.end() && it->second.missing_token) {
            return *it->second.missing_token;
        }
        return missing_token;
    }
};

// Sidecar format: one `name:kind[:missing_token]` per line, `#` starts a comment.
inline Schema parse_schema(std::istream& in)
{
    Schema schema;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto s = detail::trim(line);
        if (s.empty() || s.front() == '#') {
            continue;
        }
        auto c1 = s.find(':');
        if (c1 == std::string_view::npos) {
            throw DataError("schema line " + std::to_string(lineno) + ": expected name:kind");
        }
        auto name = std::string(detail::trim(s.substr(0, c1)));
        auto rest = s.substr(c1 + 1);
        auto c2 = rest.find(':');
        auto kind_text = detail::trim(rest.substr(0, c2));
        Schema::Entry entry{};
        if (kind_text == "categorical") {
            entry.kind = ColumnKind::Categorical;
        } else if (kind_text == "numerical") {
            entry.kind = ColumnKind::Numerical;
        } else {
            throw DataError("schema line " + std::to_string(lineno) + ": unknown kind '" + std::string(kind_text) + "'");
        }
        if (c2 != std::string_view::npos) {
            entry.missing_token = std::string(rest.substr(c2 + 1));
        }
        if (!schema.columns.emplace(name, entry).second) {
            throw DataError("schema line " + std::to_string(lineno) + ": duplicate column '" + name + "'");
        }
    }
    return schema;
}

inline Schema load_schema(std::string const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open schema file: " + path);
    }
    return parse_schema(in);
}

namespace detail {

// RFC-4180 record splitter. Returns false at end of input.
inline bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& lineno)
{
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
    char ch = 0;
    while (in.get(ch)) {
        any = true;
        if (in_quotes) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get(ch);
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (ch == '\n') {
                    ++lineno;
                }
                field.push_back(ch);
            }
            continue;
        }
        if (ch == '"') {
            in_quotes = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch == '\n') {
            ++lineno;
            if (!field.empty() && field.back() == '\r') {
                field.pop_back();
            }
            fields.push_back(std::move(field));
            return true;
        } else {
            field.push_back(ch);
        }
    }
    if (in_quotes) {
        throw DataError("unterminated quoted field near line " + std::to_string(lineno + 1));
    }
    if (!any) {
        return false;
    }
    if (!field.empty() && field.back() == '\r') {
        field.pop_back();
    }
    fields.push_back(std::move(field));
    ++lineno;
    return true;
}

inline std::string quote_csv(std::string const& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

} // namespace detail

class Dataset {
public:
    Dataset() = default;

    explicit Dataset(std::vector<Column> columns)
        : columns_(std::move(columns))
    {
        n_rows_ = columns_.empty() ? 0 : columns_.front().size();
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (columns_[i].size() != n_rows_) {
                throw DataError("column '" + columns_[i].name() + "' has length " + std::to_string(columns_[i].size())
                                + ", expected " + std::to_string(n_rows_));
            }
            if (!index_.emplace(columns_[i].name(), i).second) {
                throw DataError("duplicate column name '" + columns_[i].name() + "'");
            }
        }
    }

    [[nodiscard]] std::size_t n_rows() const { return n_rows_; }
    [[nodiscard]] std::size_t n_cols() const { return columns_.size(); }
    [[nodiscard]] std::vector<Column> const& columns() const { return columns_; }
    [[nodiscard]] bool has(std::string const& name) const { return index_.count(name) != 0; }

    [[nodiscard]] Column const& column(std::string const& name) const
    {
        auto it = index_.find(name);
        if (it == index_.end()) {
            throw DataError("unknown variable '" + name + "'");
        }
        return columns_[it->second];
    }

    // Returns a copy where the named column is replaced.
    [[nodiscard]] Dataset with_column(Column replacement) const
    {
        auto cols = columns_;
        auto it = index_.find(replacement.name());
        if (it == index_.end()) {
            throw DataError("unknown variable '" + replacement.name() + "'");
        }
        cols[it->second] = std::move(replacement);
        return Dataset(std::move(cols));
    }

    friend bool operator==(Dataset const& a, Dataset const& b) { return a.columns_ == b.columns_; }

private:
    std::vector<Column> columns_;
    std::unordered_map<std::string, std::size_t> index_;
    std::size_t n_rows_ = 0;
};

inline Dataset read_csv(std::istream& in, Schema const& schema = {})
{
    std::vector<std::string> header;
    std::size_t lineno = 0;
    if (!detail::read_record(in, header, lineno)) {
        throw DataError("empty CSV: missing header");
    }
    for (auto& h : header) {
        h = std::string(detail::trim(h));
    }
    {
        auto sorted = header;
        std::sort(sorted.begin(), sorted.end());
        auto dup = std::adjacent_find(sorted.begin(), sorted.end());
        if (dup != sorted.end()) {
            throw DataError("duplicate header name '" + *dup + "'");
        }
    }

    std::vector<std::vector<std::optional<std::string>>> raw(header.size());
    std::vector<std::string> fields;
    while (detail::read_record(in, fields, lineno)) {
        if (fields.size() == 1 && fields.front().empty() && header.size() != 1) {
            continue; // blank line
        }
        if (fields.size() != header.size()) {
            throw DataError("line " + std::to_string(lineno) + ": expected " + std::to_string(header.size())
                            + " fields, got " + std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (fields[c] == schema.missing_for(header[c])) {
                raw[c].emplace_back(std::nullopt);
            } else {
                raw[c].emplace_back(std::move(fields[c]));
            }
        }
    }

    std::vector<Column> columns;
    columns.reserve(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        std::optional<ColumnKind> kind;
        if (auto it = schema.columns.find(header[c]); it != schema.columns.end()) {
            kind = it->second.kind;
        }
        std::vector<std::optional<double>> reals;
        reals.reserve(raw[c].size());
        bool all_real = true;
        for (auto const& cell : raw[c]) {
            if (!cell) {
                reals.emplace_back(std::nullopt);
                continue;
            }
            auto v = detail::parse_real(*cell);
            if (!v) {
                all_real = false;
                if (kind == ColumnKind::Numerical) {
                    throw DataError("column '" + header[c] + "': value '" + *cell + "' is not a finite number");
                }
                break;
            }
            reals.emplace_back(v);
        }
        if (!kind) {
            kind = all_real ? ColumnKind::Numerical : ColumnKind::Categorical;
        }
        if (*kind == ColumnKind::Numerical) {
            columns.push_back(Column::numerical(header[c], reals));
        } else {
            columns.push_back(Column::categorical(header[c], raw[c]));
        }
    }
    return Dataset(std::move(columns));
}

inline Dataset load_csv(std::string const& path, Schema const& schema = {})
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open CSV file: " + path);
    }
    return read_csv(in, schema);
}

// Missing cells are written as the schema's missing token for that column.
inline void write_csv(std::ostream& out, Dataset const& ds, Schema const& schema = {})
{
    auto const& cols = ds.columns();
    for (std::size_t c = 0; c < cols.size(); ++c) {
        out << (c ? "," : "") << detail::quote_csv(cols[c].name());
    }
    out << '\n';
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            out << (c ? "," : "");
            if (cols[c].is_missing(r)) {
                out << detail::quote_csv(schema.missing_for(cols[c].name()));
            } else {
                out << detail::quote_csv(cols[c].text(r));
            }
        }
        out << '\n';
    }
}

inline void save_csv(std::string const& path, Dataset const& ds, Schema const& schema = {})
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write CSV file: " + path);
    }
    write_csv(out, ds, schema);
}

// Complete-case projection onto a few variables. Column i corresponds to vars[i].
struct View {
    std::vector<Column> columns;
    std::vector<std::size_t> row_ids; // view row -> original row id, strictly increasing

    [[nodiscard]] std::size_t size() const { return row_ids.size(); }
    [[nodiscard]] Column const& operator[](std::size_t i) const { return columns[i]; }
};

inline View project_complete(Dataset const& ds, std::vector<std::string> const& vars)
{
    if (vars.empty()) {
        throw DataError("projection needs at least one variable");
    }
    std::vector<Column const*> src;
    src.reserve(vars.size());
    for (auto const& v : vars) {
        src.push_back(&ds.column(v));
    }
    View view;
    view.row_ids.reserve(ds.n_rows());
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        bool complete = std::none_of(src.begin(), src.end(), [r](Column const* c) { return c->is_missing(r); });
        if (complete) {
            view.row_ids.push_back(r);
        }
    }
    for (auto const* c : src) {
        view.columns.push_back(c->select(view.row_ids));
    }
    return view;
}

} // namespace statguard
