#pragma once

#include <filesystem>
#include <string>
#include <vector>

// Minimal CSV helpers shared by every file format in the toolkit. Fields may
// be double-quoted ("" escapes a quote); no multi-line fields.
namespace mircorpus::csv {

using Row = std::vector<std::string>;

Row split_line(const std::string& line);
std::string join(const Row& fields);
std::string quote(const std::string& field);

/// Reads all non-empty lines. Throws Error{io} when the file cannot be opened.
std::vector<Row> read(const std::filesystem::path& path);
void write(const std::filesystem::path& path, const std::vector<Row>& rows);

/// printf-style "%.*g" / "%.*f" / "%.*e" formatting.
std::string sig(double value, int digits = 9);
std::string fixed(double value, int decimals);
std::string sci(double value, int digits = 6);

/// Strict double parse; throws Error{parse} naming `context` on failure.
double to_double(const std::string& text, const std::string& context);
long to_long(const std::string& text, const std::string& context);

}  // namespace mircorpus::csv
