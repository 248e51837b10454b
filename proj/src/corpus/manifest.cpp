#include "mircorpus/corpus/manifest.hpp"

#include <algorithm>
#include <set>

#include "mircorpus/csv.hpp"
#include "mircorpus/error.hpp"

namespace mircorpus::corpus {

namespace {

constexpr std::array<const char*, 5> kColumns{"song_id", "path", "title", "album", "year"};

}  // namespace

std::vector<TrackMeta> load_manifest(const std::filesystem::path& path)
{
    const auto rows = csv::read(path);
    if (rows.empty()) throw Error(ErrorCode::malformed_header, path.string() + ": empty manifest");

    std::array<std::size_t, kColumns.size()> col{};
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
        const auto it = std::find(rows[0].begin(), rows[0].end(), kColumns[c]);
        if (it == rows[0].end())
            throw Error(ErrorCode::malformed_header,
                        path.string() + ": missing column '" + kColumns[c] + "'");
        col[c] = static_cast<std::size_t>(it - rows[0].begin());
    }
    const std::size_t width = *std::max_element(col.begin(), col.end()) + 1;
    const auto base = path.parent_path();

    std::vector<TrackMeta> tracks;
    std::set<std::string> seen;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const std::string where = path.string() + " row " + std::to_string(i + 1);
        if (r.size() < width) throw Error(ErrorCode::parse, where + ": too few fields");
        TrackMeta t;
        t.song_id = r[col[0]];
        if (t.song_id.empty()) throw Error(ErrorCode::parse, where + ": empty song_id");
        t.path = r[col[1]];
        if (t.path.is_relative()) t.path = base / t.path;
        t.title = r[col[2]];
        t.album = r[col[3]];
        const long year = csv::to_long(r[col[4]], where + ", column year");
        if (year < 1900 || year > 2100)
            throw Error(ErrorCode::parse, where + ": year " + std::to_string(year) + " outside 1900-2100");
        t.year = static_cast<int>(year);
        if (!seen.insert(t.song_id).second)
            throw Error(ErrorCode::duplicate_id, where + ": duplicate song_id '" + t.song_id + "'");
        tracks.push_back(std::move(t));
    }
    return tracks;
}

void write_manifest(const std::filesystem::path& path, std::span<const TrackMeta> tracks)
{
    std::vector<csv::Row> rows{{kColumns.begin(), kColumns.end()}};
    for (const auto& t : tracks)
        rows.push_back({t.song_id, t.path.string(), t.title, t.album, std::to_string(t.year)});
    csv::write(path, rows);
}

std::map<int, long> releases_by_year(std::span<const TrackMeta> tracks)
{
    std::map<int, long> counts;
    if (tracks.empty()) return counts;
    const auto [lo, hi] = std::minmax_element(tracks.begin(), tracks.end(),
                                              [](const TrackMeta& a, const TrackMeta& b) { return a.year < b.year; });
    for (int y = lo->year; y <= hi->year; ++y) counts[y] = 0;
    for (const auto& t : tracks) ++counts[t.year];
    return counts;
}

std::vector<std::string> album_order(std::span<const TrackMeta> tracks)
{
    std::vector<std::string> order;
    for (const auto& t : tracks)
        if (std::find(order.begin(), order.end(), t.album) == order.end()) order.push_back(t.album);
    return order;
}

}  // namespace mircorpus::corpus
