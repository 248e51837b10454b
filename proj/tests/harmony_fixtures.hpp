#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mircorpus/csv.hpp"
#include "mircorpus/harmony/transitions.hpp"

#ifndef MIRCORPUS_TEST_DATA
#error "MIRCORPUS_TEST_DATA must point at tests/data"
#endif

namespace fixtures {

struct Table3Row {
    int rank = 0;
    long count = 0;
    std::string proportion;
    mircorpus::harmony::RelativeChord from;
    mircorpus::harmony::RelativeChord to;
    std::string roman;
    std::string example;
};

inline mircorpus::harmony::ChordType type_from_long_name(const std::string& name)
{
    using namespace mircorpus::harmony;
    for (ChordType t : kAllChordTypes)
        if (name == long_name(t)) return t;
    throw std::runtime_error("unknown chord type " + name);
}

inline std::vector<Table3Row> table3_rows()
{
    const auto table = mircorpus::csv::read(std::filesystem::path(MIRCORPUS_TEST_DATA) / "table3.csv");
    std::vector<Table3Row> rows;
    for (std::size_t i = 1; i < table.size(); ++i) {
        const auto& r = table[i];
        rows.push_back({std::stoi(r[0]), std::stol(r[1]), r[2],
                        {std::stoi(r[3]), type_from_long_name(r[5])},
                        {std::stoi(r[4]), type_from_long_name(r[6])},
                        r[7], r[8]});
    }
    return rows;
}

inline constexpr long kTable3Total = 10440;

// The 20 published cells plus the unpublished remainder spread over other
// cells in counts below the 20th entry, so the published ranking is intact.
inline mircorpus::harmony::TransitionHistogram table3_histogram()
{
    using namespace mircorpus::harmony;
    TransitionHistogram hist;
    const auto rows = table3_rows();
    std::vector<bool> used(kTransitionCells, false);
    for (const auto& r : rows) {
        hist.add(r.from, r.to, r.count);
        used[static_cast<std::size_t>(TransitionHistogram::cell(r.from, r.to))] = true;
    }
    long remainder = kTable3Total - hist.total();
    for (int cell = 0; remainder > 0; cell = (cell + 7919) % kTransitionCells) {
        if (used[static_cast<std::size_t>(cell)]) continue;
        used[static_cast<std::size_t>(cell)] = true;
        const long c = std::min(remainder, 37L);
        const int from = cell / kChordClasses, to = cell % kChordClasses;
        hist.add({from / kChordTypeCount, static_cast<ChordType>(from % kChordTypeCount)},
                 {to / kChordTypeCount, static_cast<ChordType>(to % kChordTypeCount)}, c);
        remainder -= c;
    }
    return hist;
}

}  // namespace fixtures
