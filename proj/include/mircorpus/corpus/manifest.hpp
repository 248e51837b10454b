#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace mircorpus::corpus {

struct TrackMeta {
    std::string song_id;
    std::filesystem::path path;  // as written, resolved against the manifest directory on load
    std::string title;
    std::string album;
    int year = 0;
};

/// Reads `song_id,path,title,album,year` (column order free, extra columns
/// ignored). Relative audio paths are resolved against the manifest's folder.
std::vector<TrackMeta> load_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, std::span<const TrackMeta> tracks);

/// Song count per year from the earliest to the latest year, gaps as zero.
std::map<int, long> releases_by_year(std::span<const TrackMeta> tracks);

/// Album codes in order of first appearance.
std::vector<std::string> album_order(std::span<const TrackMeta> tracks);

}  // namespace mircorpus::corpus
