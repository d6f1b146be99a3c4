#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "gcrs/band.hpp"
#include "gcrs/constellation.hpp"
#include "gcrs/metrics.hpp"
#include "gcrs/scenario.hpp"
#include "gcrs/sim.hpp"
#include "gcrs/time.hpp"
#include "gcrs/trace.hpp"
#include "gcrs/wire.hpp"

namespace py = pybind11;

namespace {

gcrs::ScenarioConfig load_or_throw(const std::string& path) {
    gcrs::LoadResult loaded = gcrs::load_scenario(path);
    if (!loaded.ok()) {
        std::string what = "invalid scenario:";
        for (const auto& err : loaded.errors) {
            what += "\n  " + err;
        }
        throw std::invalid_argument(what);
    }
    return *loaded.config;
}

py::dict message_to_dict(const gcrs::WireMessage& m) {
    py::dict d;
    d["kind"] = gcrs::to_string(m.kind());
    d["src"] = m.src;
    d["dst"] = m.dst;
    d["seq"] = m.seq;
    d["sent_at"] = m.sent_at.ticks;
    return d;
}

} // namespace

PYBIND11_MODULE(_gcrs, m) {
    m.doc() = "Global cognitive-radio spectrum simulator core";

    m.def("bands_overlap",
          [](std::uint64_t a_low, std::uint64_t a_high, std::uint64_t b_low,
             std::uint64_t b_high) {
              return gcrs::bands_overlap({a_low, a_high}, {b_low, b_high});
          },
          py::arg("a_low"), py::arg("a_high"), py::arg("b_low"), py::arg("b_high"));

    m.def("convert_time", &gcrs::convert_time, py::arg("utc_minutes_of_day"),
          py::arg("offset_minutes"),
          "Shift a minutes-of-day value by a UTC offset, mod 1440");

    m.def("local_minutes_of_day",
          [](std::uint64_t ticks, std::uint32_t tick_seconds, std::int32_t offset) {
              return gcrs::local_minutes_of_day(gcrs::UtcTime{ticks}, tick_seconds, offset);
          },
          py::arg("ticks"), py::arg("tick_seconds"), py::arg("offset_minutes"));

    m.def("is_downtime",
          [](std::uint32_t start, std::uint32_t duration, std::int32_t offset,
             std::uint64_t ticks, std::uint32_t tick_seconds) {
              gcrs::DowntimeWindow w{start, duration, true};
              gcrs::Region r{0, offset};
              return gcrs::is_downtime(w, r, gcrs::UtcTime{ticks}, tick_seconds);
          },
          py::arg("start_local_minutes"), py::arg("duration_minutes"),
          py::arg("offset_minutes"), py::arg("ticks"),
          py::arg("tick_seconds") = gcrs::kDefaultTickSeconds);

    m.def("compute_handover_chain",
          [](const std::vector<std::uint32_t>& ring, std::uint32_t busy_sat,
             std::uint32_t idle_sat) {
              std::vector<gcrs::Satellite> sats;
              for (std::size_t i = 0; i < ring.size(); ++i) {
                  sats.push_back({ring[i], static_cast<gcrs::RegionId>(1000 + i),
                                  static_cast<std::uint32_t>(i)});
              }
              gcrs::Constellation c(sats);
              return c.compute_handover_chain(busy_sat, idle_sat).sats;
          },
          py::arg("ring"), py::arg("busy_sat"), py::arg("idle_sat"),
          "Shorter ring path from the idle satellite to the busy one");

    m.def("validate_scenario",
          [](const std::string& path) { return gcrs::load_scenario(path).errors; },
          py::arg("path"), "Empty list when the scenario is valid");

    m.def("run_scenario",
          [](const std::string& path, std::optional<std::uint64_t> seed) {
              const gcrs::ScenarioConfig cfg = load_or_throw(path);
              const gcrs::SimResult result = gcrs::run_simulation(cfg, seed);
              py::dict out;
              out["trace_lines"] = result.trace_lines;
              out["metrics_json"] = gcrs::metrics_to_json(result.metrics);
              out["metrics_table"] = gcrs::metrics_to_table(result.metrics);
              return out;
          },
          py::arg("path"), py::arg("seed") = std::nullopt,
          "Run a scenario file; returns trace lines and metrics");

    m.def("compute_metrics_from_trace",
          [](const std::string& scenario_path, const std::vector<std::string>& lines) {
              const gcrs::ScenarioConfig cfg = load_or_throw(scenario_path);
              const gcrs::ParsedTrace trace = gcrs::parse_trace_lines(lines);
              if (!trace.ok()) {
                  throw std::invalid_argument("invalid trace: " + trace.errors.front());
              }
              return gcrs::metrics_to_json(gcrs::compute_metrics(trace.events, cfg));
          },
          py::arg("scenario_path"), py::arg("trace_lines"));

    m.def("encode_spectrum_query",
          [](std::uint32_t src, std::uint32_t dst, std::uint32_t seq, std::uint64_t sent_at,
             std::uint32_t requester, std::uint64_t width_hz, std::uint64_t min_duration,
             std::uint64_t duration, bool dynamic) {
              gcrs::WireMessage msg;
              msg.src = src;
              msg.dst = dst;
              msg.seq = seq;
              msg.sent_at = gcrs::UtcTime{sent_at};
              msg.payload = gcrs::SpectrumQuery{
                  requester, width_hz, min_duration, duration,
                  dynamic ? gcrs::AccessMode::dynamic : gcrs::AccessMode::opportunistic};
              const auto bytes = gcrs::encode_frame(msg);
              return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
          },
          py::arg("src"), py::arg("dst"), py::arg("seq"), py::arg("sent_at"),
          py::arg("requester"), py::arg("width_hz"), py::arg("min_duration"),
          py::arg("duration"), py::arg("dynamic") = true);

    m.def("decode_frame",
          [](const py::bytes& data) {
              const std::string buf = data;
              const auto decoded = gcrs::decode_frame(std::span<const std::uint8_t>(
                  reinterpret_cast<const std::uint8_t*>(buf.data()), buf.size()));
              if (std::holds_alternative<gcrs::DecodeError>(decoded)) {
                  throw std::invalid_argument(
                      std::string("decode failed: ") +
                      gcrs::to_string(std::get<gcrs::DecodeError>(decoded)));
              }
              return message_to_dict(std::get<gcrs::WireMessage>(decoded));
          },
          py::arg("frame"), "Header fields of a decoded frame; raises on a bad frame");

    m.def("diff_traces",
          [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
              const gcrs::TraceDiff d = gcrs::diff_traces(a, b);
              py::dict out;
              out["identical"] = d.identical;
              out["first_divergent_line"] = d.first_divergent_line;
              return out;
          },
          py::arg("left"), py::arg("right"));
}
