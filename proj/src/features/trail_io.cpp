#include "mircorpus/csv.hpp"
#include "mircorpus/error.hpp"
#include "mircorpus/features/features.hpp"

namespace mircorpus::features {

namespace {

csv::Row header(const std::string& first)
{
    csv::Row h{first};
    for (std::size_t k = 0; k < kFeatureCount; ++k)
        h.push_back("f" + std::to_string(k));
    return h;
}

void check_header(const std::vector<csv::Row>& rows, const std::string& first,
                  const std::filesystem::path& path)
{
    if (rows.empty() || rows.front() != header(first))
        throw Error(ErrorCode::parse, path.string() + ": expected header " + first + ",f0..f40");
}

FeatureVector parse_values(const csv::Row& row, const std::filesystem::path& path, std::size_t line)
{
    if (row.size() != kFeatureCount + 1)
        throw Error(ErrorCode::parse, path.string() + ": row " + std::to_string(line) +
                                          " has " + std::to_string(row.size()) + " fields");
    FeatureVector v{};
    const std::string ctx = path.string() + " row " + std::to_string(line);
    for (std::size_t k = 0; k < kFeatureCount; ++k)
        v[k] = csv::to_double(row[k + 1], ctx);
    return v;
}

}  // namespace

void write_trail_csv(const std::filesystem::path& path, const FeatureTrail& trail)
{
    std::vector<csv::Row> rows{header("t")};
    rows.reserve(trail.frames.size() + 1);
    for (const auto& f : trail.frames) {
        csv::Row r{csv::sig(f.t)};
        for (double v : f.values)
            r.push_back(csv::sig(v));
        rows.push_back(std::move(r));
    }
    csv::write(path, rows);
}

FeatureTrail read_trail_csv(const std::filesystem::path& path, std::string song_id)
{
    const auto rows = csv::read(path);
    check_header(rows, "t", path);
    FeatureTrail trail;
    trail.song_id = song_id.empty() ? path.stem().string() : std::move(song_id);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        FeatureFrame f;
        f.t = csv::to_double(rows[i].front(), path.string() + " row " + std::to_string(i));
        f.values = parse_values(rows[i], path, i);
        trail.frames.push_back(f);
    }
    return trail;
}

void write_summaries_csv(const std::filesystem::path& path, const std::vector<SongSummary>& summaries)
{
    std::vector<csv::Row> rows{header("song_id")};
    for (const auto& s : summaries) {
        csv::Row r{s.song_id};
        for (double v : s.means)
            r.push_back(csv::sig(v));
        rows.push_back(std::move(r));
    }
    csv::write(path, rows);
}

std::vector<SongSummary> read_summaries_csv(const std::filesystem::path& path)
{
    const auto rows = csv::read(path);
    check_header(rows, "song_id", path);
    std::vector<SongSummary> out;
    for (std::size_t i = 1; i < rows.size(); ++i)
        out.push_back({rows[i].front(), parse_values(rows[i], path, i)});
    return out;
}

}  // namespace mircorpus::features
