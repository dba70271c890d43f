#include "system_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kaczmarz/error.hpp"

namespace kaczmarz::cli {

namespace {

struct Line {
    std::size_t number;
    std::string text;
};

std::vector<Line> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(0, "cannot open " + path.string());
    }
    std::vector<Line> lines;
    std::string text;
    std::size_t number = 0;
    while (std::getline(in, text)) {
        ++number;
        if (!text.empty() && text.back() == '\r') {
            text.pop_back();
        }
        lines.push_back({number, std::move(text)});
    }
    return lines;
}

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Splits on whitespace and commas.
std::vector<std::string_view> tokens(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t k = 0;
    auto is_sep = [](char c) { return c == ',' || std::isspace(static_cast<unsigned char>(c)); };
    while (k < s.size()) {
        while (k < s.size() && is_sep(s[k])) {
            ++k;
        }
        const std::size_t start = k;
        while (k < s.size() && !is_sep(s[k])) {
            ++k;
        }
        if (k > start) {
            out.push_back(s.substr(start, k - start));
        }
    }
    return out;
}

double parse_real(std::string_view tok, std::size_t line) {
    if (!tok.empty() && tok.front() == '+') {
        tok.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(line, "not a number: '" + std::string(tok) + "'");
    }
    return value;
}

std::size_t parse_count(std::string_view tok, std::size_t line) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(line, "not a non-negative integer: '" + std::string(tok) + "'");
    }
    return value;
}

struct MatrixMarket {
    DenseMatrix matrix;
    bool rhs_column = false;
};

MatrixMarket parse_matrix_market(const std::vector<Line>& lines) {
    const auto& header = lines.front();
    const auto fields = tokens(header.text);
    if (fields.size() != 5 || lower(std::string(fields[1])) != "matrix") {
        throw ParseError(header.number, "malformed MatrixMarket banner");
    }
    const std::string layout = lower(std::string(fields[2]));
    const std::string field = lower(std::string(fields[3]));
    const std::string symmetry = lower(std::string(fields[4]));
    if (layout != "array" && layout != "coordinate") {
        throw ParseError(header.number, "unsupported MatrixMarket layout '" + layout + "'");
    }
    if (field != "real" && field != "integer" && field != "double") {
        throw ParseError(header.number, "unsupported MatrixMarket field '" + field + "'");
    }
    if (symmetry != "general") {
        throw ParseError(header.number, "unsupported MatrixMarket symmetry '" + symmetry + "'");
    }

    MatrixMarket out;
    std::size_t k = 1;
    for (; k < lines.size(); ++k) {
        const std::string& t = lines[k].text;
        if (!t.empty() && t.front() == '%') {
            if (t.find("rhs-column") != std::string::npos) {
                out.rhs_column = true;
            }
            continue;
        }
        if (!is_blank(t)) {
            break;
        }
    }
    if (k == lines.size()) {
        throw ParseError(lines.back().number, "missing size line");
    }

    const auto size = tokens(lines[k].text);
    const std::size_t size_line = lines[k].number;
    const bool coordinate = layout == "coordinate";
    if (size.size() != (coordinate ? 3u : 2u)) {
        throw ParseError(size_line, "malformed size line");
    }
    const std::size_t rows = parse_count(size[0], size_line);
    const std::size_t cols = parse_count(size[1], size_line);
    const std::size_t expected = coordinate ? parse_count(size[2], size_line) : rows * cols;

    std::vector<double> entries(rows * cols, 0.0);
    std::size_t seen = 0;
    for (++k; k < lines.size(); ++k) {
        const std::string& t = lines[k].text;
        if (is_blank(t) || t.front() == '%') {
            continue;
        }
        const std::size_t ln = lines[k].number;
        const auto tok = tokens(t);
        if (seen == expected) {
            throw ParseError(ln, "more entries than declared");
        }
        if (coordinate) {
            if (tok.size() != 3) {
                throw ParseError(ln, "coordinate entry needs 'row col value'");
            }
            const std::size_t i = parse_count(tok[0], ln);
            const std::size_t j = parse_count(tok[1], ln);
            if (i < 1 || i > rows || j < 1 || j > cols) {
                throw ParseError(ln, "entry position out of range");
            }
            entries[(i - 1) * cols + (j - 1)] += parse_real(tok[2], ln);
        } else {
            if (tok.size() != 1) {
                throw ParseError(ln, "array entry needs exactly one value");
            }
            // Column-major order.
            const std::size_t i = seen % rows;
            const std::size_t j = seen / rows;
            entries[i * cols + j] = parse_real(tok[0], ln);
        }
        ++seen;
    }
    if (seen != expected) {
        throw ParseError(lines.back().number, "expected " + std::to_string(expected) +
                                                  " entries, found " + std::to_string(seen));
    }
    out.matrix = DenseMatrix(rows, cols, std::move(entries));
    return out;
}

LinearSystem parse_csv(const std::vector<Line>& lines) {
    std::vector<const Line*> content;
    for (const auto& l : lines) {
        if (!is_blank(l.text) && l.text.front() != '#') {
            content.push_back(&l);
        }
    }
    if (content.empty()) {
        throw ParseError(0, "empty input");
    }
    const auto header = tokens(content[0]->text);
    if (header.size() != 2) {
        throw ParseError(content[0]->number, "CSV header must be 'm,n'");
    }
    const std::size_t m = parse_count(header[0], content[0]->number);
    const std::size_t n = parse_count(header[1], content[0]->number);
    if (content.size() != m + 2) {
        throw DimensionMismatch("CSV declares " + std::to_string(m) + " rows plus a rhs row, found " +
                                std::to_string(content.size() - 1) + " data lines");
    }

    std::vector<double> entries;
    entries.reserve(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        const Line& l = *content[i + 1];
        const auto tok = tokens(l.text);
        if (tok.size() != n) {
            throw DimensionMismatch("line " + std::to_string(l.number) + ": row has " +
                                    std::to_string(tok.size()) + " values, expected " +
                                    std::to_string(n));
        }
        for (auto t : tok) {
            entries.push_back(parse_real(t, l.number));
        }
    }
    const Line& b_line = *content[m + 1];
    Vector b;
    for (auto t : tokens(b_line.text)) {
        b.push_back(parse_real(t, b_line.number));
    }
    if (b.size() != m) {
        throw DimensionMismatch("right-hand side has " + std::to_string(b.size()) +
                                " values, expected " + std::to_string(m));
    }
    return LinearSystem(DenseMatrix(m, n, std::move(entries)), std::move(b));
}

bool is_matrix_market(const std::vector<Line>& lines) {
    return !lines.empty() && lines.front().text.rfind("%%MatrixMarket", 0) == 0;
}

}  // namespace

Vector load_vector(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (is_matrix_market(lines)) {
        const DenseMatrix column = parse_matrix_market(lines).matrix;
        if (column.cols() != 1) {
            throw DimensionMismatch(path.string() + ": vector file must have one column");
        }
        return Vector(column.entries().begin(), column.entries().end());
    }
    Vector v;
    for (const auto& l : lines) {
        if (!l.text.empty() && l.text.front() == '#') {
            continue;
        }
        for (auto t : tokens(l.text)) {
            v.push_back(parse_real(t, l.number));
        }
    }
    return v;
}

LinearSystem load_system(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (!is_matrix_market(lines)) {
        return parse_csv(lines);
    }

    MatrixMarket mm = parse_matrix_market(lines);
    if (mm.rhs_column) {
        const DenseMatrix& full = mm.matrix;
        if (full.cols() < 2) {
            throw DimensionMismatch("rhs-column flag needs at least two columns");
        }
        const std::size_t n = full.cols() - 1;
        std::vector<double> entries;
        entries.reserve(full.rows() * n);
        Vector b(full.rows());
        for (std::size_t i = 0; i < full.rows(); ++i) {
            const auto r = full.row(i);
            entries.insert(entries.end(), r.begin(), r.begin() + static_cast<std::ptrdiff_t>(n));
            b[i] = r[n];
        }
        return LinearSystem(DenseMatrix(full.rows(), n, std::move(entries)), std::move(b));
    }

    auto rhs_path = path;
    rhs_path.replace_extension(".rhs");
    if (!std::filesystem::exists(rhs_path)) {
        throw ParseError(1, "no right-hand side: add a '% rhs-column' comment or provide " +
                                rhs_path.string());
    }
    return LinearSystem(std::move(mm.matrix), load_vector(rhs_path));
}

}  // namespace kaczmarz::cli
