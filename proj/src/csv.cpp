#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "mircorpus/csv.hpp"
#include "mircorpus/error.hpp"

namespace mircorpus::csv {

Row split_line(const std::string& line)
{
    Row out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(std::move(field));
    return out;
}

std::string quote(const std::string& field)
{
    if (field.find_first_of(",\"") == std::string::npos)
        return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

std::string join(const Row& fields)
{
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            line += ',';
        line += quote(fields[i]);
    }
    return line;
}

std::vector<Row> read(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::io, path.string() + ": cannot open file");
    std::vector<Row> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        rows.push_back(split_line(line));
    }
    return rows;
}

void write(const std::filesystem::path& path, const std::vector<Row>& rows)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::io, path.string() + ": cannot open for writing");
    for (const auto& r : rows)
        out << join(r) << '\n';
    if (!out)
        throw Error(ErrorCode::io, path.string() + ": write failed");
}

namespace {

std::string format(const char* spec, int digits, double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, digits, value);
    return buf;
}

}  // namespace

std::string sig(double value, int digits) { return format("%.*g", digits, value); }
std::string fixed(double value, int decimals) { return format("%.*f", decimals, value); }
std::string sci(double value, int digits) { return format("%.*e", digits, value); }

double to_double(const std::string& text, const std::string& context)
{
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (text.empty() || end == begin || *end != '\0' || errno == ERANGE)
        throw Error(ErrorCode::parse, context + ": not a number: '" + text + "'");
    return v;
}

long to_long(const std::string& text, const std::string& context)
{
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(begin, &end, 10);
    if (text.empty() || end == begin || *end != '\0' || errno == ERANGE)
        throw Error(ErrorCode::parse, context + ": not an integer: '" + text + "'");
    return v;
}

}  // namespace mircorpus::csv
