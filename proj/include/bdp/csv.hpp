#ifndef BDP_CSV_HPP
#define BDP_CSV_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "bdp/glm.hpp"
#include "bdp/series.hpp"
#include "bdp/simulate.hpp"

namespace bdp {

// 17 significant digits: round-trippable at double precision,
// locale-independent.
std::string format_double(double v);

// Series file: header "series_id,time,count", rows grouped by series_id
// with strictly increasing times inside a group.
ObservationSet read_series_csv(std::istream& in);
void write_series_csv(std::ostream& out, const ObservationSet& data);

// Dose file: header "id,dose,time,n0,nt"; one independent single-transition
// observation per row.
std::vector<DoseRecord> read_dose_csv(std::istream& in);
void write_dose_csv(std::ostream& out, const std::vector<DoseRecord>& records);

// Event file: header "time,kind" with kind in {birth, death}.  The initial
// size and horizon travel outside the file.
std::vector<Event> read_event_csv(std::istream& in);
void write_event_csv(std::ostream& out, const EventHistory& h);

} // namespace bdp

#endif
