#include "bdp/csv.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>

namespace bdp {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
        fields.back().pop_back();
    return fields;
}

double parse_double(const std::string& s, const char* what) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end)
        throw domain_error(std::string("cannot parse ") + what + ": '" + s + "'");
    return v;
}

std::int64_t parse_int(const std::string& s, const char* what) {
    std::int64_t v = 0;
    const char* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end)
        throw domain_error(std::string("cannot parse ") + what + ": '" + s + "'");
    return v;
}

bool next_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) return true;
    }
    return false;
}

void expect_header(std::istream& in, const std::string& expected) {
    std::string line;
    if (!next_line(in, line) || line != expected)
        throw domain_error("expected header '" + expected + "'");
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

ObservationSet read_series_csv(std::istream& in) {
    expect_header(in, "series_id,time,count");
    // Insertion-ordered groups.
    std::vector<std::string> order;
    std::map<std::string, std::pair<std::vector<double>, std::vector<std::int64_t>>>
        groups;
    std::string line;
    while (next_line(in, line)) {
        const std::vector<std::string> f = split_line(line);
        if (f.size() != 3)
            throw domain_error("series row must have 3 fields: '" + line + "'");
        auto it = groups.find(f[0]);
        if (it == groups.end()) {
            order.push_back(f[0]);
            it = groups.emplace(f[0], std::make_pair(std::vector<double>{},
                                                     std::vector<std::int64_t>{}))
                     .first;
        }
        it->second.first.push_back(parse_double(f[1], "time"));
        it->second.second.push_back(parse_int(f[2], "count"));
    }
    ObservationSet set;
    for (const std::string& id : order) {
        auto& g = groups[id];
        set.series.emplace_back(std::move(g.first), std::move(g.second));
    }
    validate(set);
    return set;
}

void write_series_csv(std::ostream& out, const ObservationSet& data) {
    out << "series_id,time,count\n";
    for (std::size_t s = 0; s < data.series.size(); ++s) {
        const ObservedSeries& series = data.series[s];
        for (std::size_t p = 0; p < series.size(); ++p)
            out << s << ',' << format_double(series.times()[p]) << ','
                << series.counts()[p] << '\n';
    }
}

std::vector<DoseRecord> read_dose_csv(std::istream& in) {
    expect_header(in, "id,dose,time,n0,nt");
    std::vector<DoseRecord> records;
    std::string line;
    while (next_line(in, line)) {
        const std::vector<std::string> f = split_line(line);
        if (f.size() != 5)
            throw domain_error("dose row must have 5 fields: '" + line + "'");
        records.push_back({parse_double(f[1], "dose"), parse_double(f[2], "time"),
                           parse_int(f[3], "n0"), parse_int(f[4], "nt")});
    }
    if (records.empty()) throw domain_error("dose file has no rows");
    return records;
}

void write_dose_csv(std::ostream& out, const std::vector<DoseRecord>& records) {
    out << "id,dose,time,n0,nt\n";
    for (std::size_t r = 0; r < records.size(); ++r)
        out << r << ',' << format_double(records[r].dose) << ','
            << format_double(records[r].t) << ',' << records[r].n0 << ','
            << records[r].nt << '\n';
}

std::vector<Event> read_event_csv(std::istream& in) {
    expect_header(in, "time,kind");
    std::vector<Event> events;
    std::string line;
    while (next_line(in, line)) {
        const std::vector<std::string> f = split_line(line);
        if (f.size() != 2)
            throw domain_error("event row must have 2 fields: '" + line + "'");
        EventKind kind;
        if (f[1] == "birth")
            kind = EventKind::birth;
        else if (f[1] == "death")
            kind = EventKind::death;
        else
            throw domain_error("event kind must be 'birth' or 'death', got '" +
                               f[1] + "'");
        events.push_back({parse_double(f[0], "time"), kind});
    }
    return events;
}

void write_event_csv(std::ostream& out, const EventHistory& h) {
    out << "time,kind\n";
    for (const Event& e : h.events)
        out << format_double(e.time) << ','
            << (e.kind == EventKind::birth ? "birth" : "death") << '\n';
}

} // namespace bdp
