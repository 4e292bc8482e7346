#include "slfrechet/function_io.hpp"

#include "slfrechet/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <vector>

namespace slf {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

bool parse_plain(std::string_view s, double& out)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return parts;
}

std::string format_real(double v)
{
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

std::vector<double> params_of(std::string_view name, std::string_view args, std::size_t min_count,
                              std::size_t max_count)
{
    std::vector<double> out;
    if (!args.empty())
        for (auto part : split(args, ','))
            out.push_back(parse_real(part));
    if (out.size() < min_count || out.size() > max_count)
        throw InputError("builtin '" + std::string(name) + "' got " + std::to_string(out.size()) +
                         " parameters");
    return out;
}

} // namespace

double parse_real(std::string_view text)
{
    const std::string_view s = trim(text);
    double v = 0.0;
    if (parse_plain(s, v))
        return v;
    if (s == "pi" || s == "+pi")
        return std::numbers::pi;
    if (s == "-pi")
        return -std::numbers::pi;
    if (s.size() > 3 && s.ends_with("*pi") && parse_plain(s.substr(0, s.size() - 3), v))
        return v * std::numbers::pi;
    if (s.size() > 3 && s.starts_with("pi/") && parse_plain(s.substr(3), v) && v != 0.0)
        return std::numbers::pi / v;
    throw InputError("cannot parse number '" + std::string(s) + "'");
}

SampledFn parse_builtin(std::string_view expr, const Grid& grid)
{
    expr = trim(expr);
    const auto colon = expr.find(':');
    const std::string_view name = trim(expr.substr(0, colon));
    const std::string_view args =
        colon == std::string_view::npos ? std::string_view{} : trim(expr.substr(colon + 1));
    if (colon != std::string_view::npos && args.empty())
        throw InputError("builtin '" + std::string(name) + "' has an empty parameter list");

    if (name == "zero") {
        params_of(name, args, 0, 0);
        return SampledFn::constant(grid, 0.0);
    }
    if (name == "const") {
        const auto p = params_of(name, args, 1, 1);
        return SampledFn::constant(grid, p[0]);
    }
    if (name == "sin" || name == "cos") {
        const auto p = params_of(name, args, 1, 2);
        const double k = p[0];
        const double a = p.size() > 1 ? p[1] : 1.0;
        if (name == "sin")
            return SampledFn::sample(grid, [=](double x) { return a * std::sin(k * x); });
        return SampledFn::sample(grid, [=](double x) { return a * std::cos(k * x); });
    }
    if (name == "poly") {
        const auto c = params_of(name, args, 1, 32);
        return SampledFn::sample(grid, [&](double x) {
            double v = 0.0;
            for (auto it = c.rbegin(); it != c.rend(); ++it)
                v = v * x + *it;
            return v;
        });
    }
    if (name == "step") {
        const auto p = params_of(name, args, 2, 2);
        const double a = p[0], v = p[1];
        return SampledFn::sample(grid, [=](double x) { return x >= a ? v : 0.0; });
    }
    if (name == "csv") {
        if (args.empty())
            throw InputError("builtin 'csv' needs a file path");
        return read_csv(std::string(args), grid);
    }
    throw InputError("unknown builtin function '" + std::string(name) + "'");
}

void write_csv(std::ostream& out, const SampledFn& f)
{
    out << "x,value\n";
    for (std::size_t i = 0; i < f.size(); ++i)
        out << format_real(f.grid().node(i)) << ',' << format_real(f[i]) << '\n';
}

void write_csv(const std::string& path, const SampledFn& f)
{
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot open '" + path + "' for writing");
    write_csv(out, f);
}

SampledFn read_csv(std::istream& in, const Grid& grid)
{
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        if (row.empty())
            continue;
        if (values.empty() && line_no == 1 && row == "x,value")
            continue;
        const auto cols = split(row, ',');
        double x = 0.0, v = 0.0;
        if (cols.size() != 2 || !parse_plain(cols[0], x) || !parse_plain(cols[1], v))
            throw InputError("malformed CSV row " + std::to_string(line_no) + ": '" + line + "'");
        const std::size_t i = values.size();
        if (i >= grid.size())
            throw InputError("CSV has more rows than grid nodes (" + std::to_string(grid.size()) + ")");
        const double expect = grid.node(i);
        if (std::abs(x - expect) > 1e-9 * std::max(1.0, grid.ell()))
            throw InputError("CSV node " + std::to_string(i) + " at x=" + format_real(x) +
                             " does not match grid node " + format_real(expect));
        values.push_back(v);
    }
    if (values.size() != grid.size())
        throw InputError("CSV has " + std::to_string(values.size()) + " rows, grid has " +
                         std::to_string(grid.size()) + " nodes");
    return SampledFn(grid, std::move(values));
}

SampledFn read_csv(const std::string& path, const Grid& grid)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open CSV file '" + path + "'");
    return read_csv(in, grid);
}

void write_kernel_csv(std::ostream& out, const KernelMatrix& K)
{
    out << "x,y,value\n";
    const Grid& g = K.grid();
    for (std::size_t i = 0; i < K.dim(); ++i) {
        const std::string x = format_real(g.node(i));
        for (std::size_t j = 0; j < K.dim(); ++j)
            out << x << ',' << format_real(g.node(j)) << ',' << format_real(K(i, j)) << '\n';
    }
}

} // namespace slf
