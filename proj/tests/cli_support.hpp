#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mircorpus/cli/commands.hpp"

namespace fixtures {

struct CliResult {
    int code = -1;
    std::string out;
    std::string diag;
};

inline CliResult run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "mircorpus");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, diag;
    CliResult r;
    r.code = mircorpus::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, diag);
    r.out = out.str();
    r.diag = diag.str();
    return r;
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::filesystem::create_directories(path.parent_path());
    std::ofstream(path, std::ios::binary) << text;
}

/// Relative path -> bytes for every regular file below `root`, optionally
/// restricted to the given extensions.
inline std::map<std::string, std::string> tree_bytes(const std::filesystem::path& root,
                                                     const std::vector<std::string>& extensions = {})
{
    std::map<std::string, std::string> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
        if (!e.is_regular_file()) continue;
        const auto ext = e.path().extension().string();
        bool keep = extensions.empty();
        for (const auto& x : extensions) keep = keep || ext == x;
        if (keep) files[std::filesystem::relative(e.path(), root).string()] = read_file(e.path());
    }
    return files;
}

inline std::size_t count_of(const std::string& text, const std::string& needle)
{
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + needle.size())) ++n;
    return n;
}

/// Minimal well-formedness check: one root, balanced tags, quoted attributes.
inline bool xml_well_formed(const std::string& text)
{
    std::vector<std::string> stack;
    std::size_t pos = 0, roots = 0;
    while ((pos = text.find('<', pos)) != std::string::npos) {
        const auto end = text.find('>', pos);
        if (end == std::string::npos) return false;
        std::string tag = text.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        if (tag.empty()) return false;
        if (tag[0] == '?' || tag[0] == '!') continue;
        if (count_of(tag, "\"") % 2) return false;
        if (tag[0] == '/') {
            const auto name = tag.substr(1);
            if (stack.empty() || stack.back() != name) return false;
            stack.pop_back();
            continue;
        }
        const bool self_closing = tag.back() == '/';
        const auto name = tag.substr(0, tag.find_first_of(" \t\n/"));
        if (stack.empty()) ++roots;
        if (!self_closing) stack.push_back(name);
    }
    return stack.empty() && roots == 1;
}

}  // namespace fixtures
