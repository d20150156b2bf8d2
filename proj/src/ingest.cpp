#include "trunctail/ingest.hpp"

#include "trunctail/errors.hpp"

#include <zlib.h>

#include <charconv>
#include <cmath>
#include <memory>
#include <sstream>

namespace trunctail {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string unquote(std::string s)
{
    s = trim(s);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
            cur += c;
        } else if (c == ',' && !quoted) {
            out.push_back(unquote(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(unquote(cur));
    return out;
}

double parse_value(const std::string& field, const std::string& origin, std::size_t line)
{
    std::string s = field;
    if (!s.empty() && s.front() == '+') {
        s.erase(0, 1);
    }
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw DataError(origin + ":" + std::to_string(line) + ": cannot parse '" + field + "' as a number");
    }
    if (!std::isfinite(v)) {
        throw DataError(origin + ":" + std::to_string(line) + ": non-finite value '" + field + "'");
    }
    return v;
}

}  // namespace

std::vector<double> parse_series(const std::string& text, const IngestOptions& options, const std::string& origin)
{
    std::istringstream is(text);
    std::string raw;
    std::size_t lineno = 0;
    std::vector<double> out;
    std::optional<std::size_t> col;
    std::size_t n_fields = 0;

    while (std::getline(is, raw)) {
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (!options.column) {
            out.push_back(parse_value(line, origin, lineno));
            continue;
        }
        const auto fields = split_csv(line);
        if (!col) {
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (fields[i] == *options.column) {
                    col = i;
                }
            }
            if (!col) {
                throw DataError(origin + ":" + std::to_string(lineno) + ": no column named '" + *options.column +
                                "' in header");
            }
            n_fields = fields.size();
            continue;
        }
        if (fields.size() != n_fields) {
            throw DataError(origin + ":" + std::to_string(lineno) + ": expected " + std::to_string(n_fields) +
                            " fields, found " + std::to_string(fields.size()));
        }
        out.push_back(parse_value(fields[*col], origin, lineno));
    }
    if (out.empty()) {
        throw DataError(origin + ": no observations");
    }
    return out;
}

std::vector<double> ingest(const std::string& path, const IngestOptions& options)
{
    std::unique_ptr<gzFile_s, int (*)(gzFile)> file(gzopen(path.c_str(), "rb"), gzclose);
    if (!file) {
        throw DataError("cannot open '" + path + "'");
    }
    std::string text;
    char buf[1 << 16];
    for (;;) {
        const int got = gzread(file.get(), buf, sizeof buf);
        if (got < 0) {
            int code = 0;
            throw DataError("read error in '" + path + "': " + gzerror(file.get(), &code));
        }
        if (got == 0) {
            break;
        }
        text.append(buf, static_cast<std::size_t>(got));
    }
    return parse_series(text, options, path);
}

}  // namespace trunctail
