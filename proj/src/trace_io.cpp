#include <charconv>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "ratelab/engine.hpp"
#include "ratelab/errors.hpp"

namespace ratelab {

using nlohmann::json;

namespace {

constexpr std::string_view kBreakdownFields[] = {"u_error", "u_p",  "u_i",
                                                 "u_i_raw", "u_d",  "controller_error"};

// Indexed in kBreakdownFields order.
template <class Breakdown>
auto& breakdown_field(Breakdown& b, std::size_t i) {
  switch (i) {
    case 0:
      return b.u_error;
    case 1:
      return b.u_p;
    case 2:
      return b.u_i;
    case 3:
      return b.u_i_raw;
    case 4:
      return b.u_d;
    default:
      return b.controller_error;
  }
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void bad_line(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

std::int64_t parse_int(std::string_view text, std::size_t line, std::string_view column) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    bad_line(line, "column '" + std::string(column) + "' is not an integer: '" +
                       std::string(text) + "'");
  }
  return v;
}

Decimal parse_decimal(std::string_view text, std::size_t line, std::string_view column) {
  try {
    return Decimal::parse(text);
  } catch (const Error& e) {
    bad_line(line, "column '" + std::string(column) + "': " + e.what());
  }
}

json snapshot_to_json(const Snapshot& s) {
  json j = json::array();
  for (const auto& [k, v] : s) j.push_back(json::array({k, v}));
  return j;
}

Snapshot snapshot_from_json(const json& j) {
  Snapshot s;
  for (const auto& kv : j) s.emplace_back(kv.at(0).get<std::string>(), kv.at(1).get<std::string>());
  return s;
}

struct Mismatch {
  std::int64_t step;
  std::string field;
  std::string expected;
  std::string actual;
};

}  // namespace

std::string trace_to_csv(const SimTrace& trace) {
  std::string out = "step,timestamp,utilization";
  for (const auto& s : trace.strategies) {
    out += "," + s.name + ".rate";
    if (s.has_breakdown) {
      for (auto f : kBreakdownFields) out += "," + s.name + "." + std::string(f);
    }
  }
  out += "\n";
  for (const auto& row : trace.rows) {
    out += std::to_string(row.step) + "," + std::to_string(row.timestamp) + "," +
           row.utilization.to_string();
    for (std::size_t i = 0; i < trace.strategies.size(); ++i) {
      const StrategyCell& cell = row.cells[i];
      out += "," + cell.rate.to_string();
      if (trace.strategies[i].has_breakdown) {
        for (std::size_t f = 0; f < std::size(kBreakdownFields); ++f) {
          out += "," + breakdown_field(*cell.breakdown, f).to_string();
        }
      }
    }
    out += "\n";
  }
  return out;
}

SimTrace trace_from_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start < text.size()) {
      auto nl = text.find('\n', start);
      std::string_view line = text.substr(start, nl - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines.push_back(line);
      if (nl == std::string_view::npos) break;
      start = nl + 1;
    }
  }
  if (lines.empty() || lines.front().empty()) bad_line(1, "missing header row");

  const auto header = split(lines.front());
  if (header.size() < 4 || header[0] != "step" || header[1] != "timestamp" ||
      header[2] != "utilization") {
    bad_line(1, "header must start with step,timestamp,utilization and name at least one rate");
  }

  SimTrace trace;
  // Column layout: for each strategy, the index of its rate column and, if
  // present, of its six breakdown columns.
  struct Layout {
    std::size_t rate = 0;
    std::vector<std::size_t> breakdown;
  };
  std::vector<Layout> layout;
  for (std::size_t c = 3; c < header.size();) {
    const std::string_view col = header[c];
    const auto dot = col.rfind('.');
    if (dot == std::string_view::npos || col.substr(dot + 1) != "rate") {
      bad_line(1, "expected a '<strategy>.rate' column, found '" + std::string(col) + "'");
    }
    const std::string name(col.substr(0, dot));
    TraceStrategy s;
    s.name = name;
    Layout l;
    l.rate = c++;
    if (c < header.size() && header[c] == name + ".u_error") {
      for (auto f : kBreakdownFields) {
        if (c >= header.size() || header[c] != name + "." + std::string(f)) {
          bad_line(1, "incomplete breakdown columns for strategy '" + name + "'");
        }
        l.breakdown.push_back(c++);
      }
      s.has_breakdown = true;
    }
    trace.strategies.push_back(s);
    layout.push_back(l);
  }

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    if (lines[li].empty()) {
      if (li + 1 == lines.size()) break;
      bad_line(line_no, "empty line");
    }
    const auto fields = split(lines[li]);
    if (fields.size() != header.size()) {
      bad_line(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                            std::to_string(fields.size()));
    }
    TraceRow row;
    row.step = parse_int(fields[0], line_no, "step");
    row.timestamp = parse_int(fields[1], line_no, "timestamp");
    row.utilization = parse_decimal(fields[2], line_no, "utilization");
    for (const auto& l : layout) {
      StrategyCell cell;
      cell.rate = parse_decimal(fields[l.rate], line_no, header[l.rate]);
      if (!l.breakdown.empty()) {
        ControllerBreakdown<Decimal> b;
        for (std::size_t f = 0; f < l.breakdown.size(); ++f) {
          breakdown_field(b, f) =
              parse_decimal(fields[l.breakdown[f]], line_no, header[l.breakdown[f]]);
        }
        b.rate = cell.rate;
        cell.breakdown = b;
      }
      row.cells.push_back(cell);
    }
    if (!trace.rows.empty() && row.timestamp <= trace.rows.back().timestamp) {
      bad_line(line_no, "timestamps must be strictly increasing");
    }
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

std::filesystem::path sidecar_path(const std::filesystem::path& trace_path) {
  return std::filesystem::path(trace_path.string() + ".run.json");
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp =
      path.string() + ".tmp." + std::to_string(static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_run_artifacts(const std::filesystem::path& trace_path, const SimTrace& trace,
                         const RunConfig& config) {
  RunConfig recorded = config;
  recorded.trace_path.reset();
  recorded.metrics_path.reset();
  json side;
  side["format"] = 1;
  side["config"] = to_json(recorded);
  side["rows"] = trace.rows.size();
  side["final_states"] = json::object();
  for (std::size_t i = 0; i < trace.strategies.size() && i < trace.final_states.size(); ++i) {
    side["final_states"][trace.strategies[i].name] = snapshot_to_json(trace.final_states[i]);
  }
  write_file_atomic(trace_path, trace_to_csv(trace));
  write_file_atomic(sidecar_path(trace_path), side.dump(2) + "\n");
}

std::string ReplayReport::describe() const {
  if (ok) return "replay clean (" + std::to_string(rows_checked) + " rows)";
  std::string where = step > 0 ? "step " + std::to_string(step) + ", " : std::string{};
  return "regression: " + where + "field '" + field + "': expected " + expected + ", got " +
         actual;
}

namespace {

struct Recorded {
  RunConfig config;
  json final_states;
};

Recorded load_sidecar(const std::filesystem::path& trace_path) {
  const auto path = sidecar_path(trace_path);
  if (!std::filesystem::exists(path)) {
    throw IoError("replay needs " + path.string() + " next to the trace");
  }
  json side;
  try {
    side = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  if (!side.contains("config")) throw ValidationError(path.string() + ": missing 'config'");
  return {run_config_from_json(side["config"]), side.value("final_states", json::object())};
}

}  // namespace

ReplayReport replay(const std::filesystem::path& trace_path,
                    std::optional<Backend> backend_override) {
  const Recorded recorded = load_sidecar(trace_path);
  const Backend backend = backend_override.value_or(recorded.config.backend);
  const bool exact = backend == recorded.config.backend;
  static const Decimal tolerance = Decimal::parse("0.000001");

  const SimTrace expected = trace_from_csv(read_file(trace_path));
  const SimTrace actual = run(recorded.config.strategies, recorded.config.scenario, backend);

  ReplayReport report;
  auto fail = [&](std::int64_t step, std::string field, std::string want, std::string got) {
    report.ok = false;
    report.step = step;
    report.field = std::move(field);
    report.expected = std::move(want);
    report.actual = std::move(got);
    return report;
  };
  auto same = [&](Decimal want, Decimal got) {
    return exact ? want == got : within_relative(want, got, tolerance);
  };

  if (expected.strategies.size() != actual.strategies.size()) {
    return fail(0, "header", std::to_string(expected.strategies.size()) + " strategies",
                std::to_string(actual.strategies.size()) + " strategies");
  }
  for (std::size_t i = 0; i < expected.strategies.size(); ++i) {
    if (expected.strategies[i].name != actual.strategies[i].name ||
        expected.strategies[i].has_breakdown != actual.strategies[i].has_breakdown) {
      return fail(0, "header", expected.strategies[i].name, actual.strategies[i].name);
    }
  }
  if (expected.rows.size() != actual.rows.size()) {
    return fail(0, "rows", std::to_string(expected.rows.size()),
                std::to_string(actual.rows.size()));
  }

  for (std::size_t k = 0; k < expected.rows.size(); ++k) {
    const TraceRow& want = expected.rows[k];
    const TraceRow& got = actual.rows[k];
    if (want.step != got.step) {
      return fail(want.step, "step", std::to_string(want.step), std::to_string(got.step));
    }
    if (want.timestamp != got.timestamp) {
      return fail(want.step, "timestamp", std::to_string(want.timestamp),
                  std::to_string(got.timestamp));
    }
    if (!same(want.utilization, got.utilization)) {
      return fail(want.step, "utilization", want.utilization.to_string(),
                  got.utilization.to_string());
    }
    for (std::size_t i = 0; i < expected.strategies.size(); ++i) {
      const std::string& name = expected.strategies[i].name;
      const StrategyCell& wc = want.cells[i];
      const StrategyCell& gc = got.cells[i];
      if (!same(wc.rate, gc.rate)) {
        return fail(want.step, name + ".rate", wc.rate.to_string(), gc.rate.to_string());
      }
      if (wc.breakdown) {
        for (std::size_t f = 0; f < std::size(kBreakdownFields); ++f) {
          const Decimal a = breakdown_field(*wc.breakdown, f);
          const Decimal b = breakdown_field(*gc.breakdown, f);
          if (!same(a, b)) {
            return fail(want.step, name + "." + std::string(kBreakdownFields[f]), a.to_string(),
                        b.to_string());
          }
        }
      }
    }
    ++report.rows_checked;
  }

  if (exact) {
    for (std::size_t i = 0; i < actual.strategies.size(); ++i) {
      const std::string& name = actual.strategies[i].name;
      if (!recorded.final_states.contains(name)) continue;
      const Snapshot want = snapshot_from_json(recorded.final_states[name]);
      const Snapshot& got = actual.final_states[i];
      for (const auto& [key, value] : want) {
        const std::string& now = snapshot_value(got, key);
        if (now != value) return fail(0, name + ".state." + key, value, now);
      }
    }
  }
  return report;
}

void regenerate(const std::filesystem::path& trace_path) {
  const Recorded recorded = load_sidecar(trace_path);
  const SimTrace trace =
      run(recorded.config.strategies, recorded.config.scenario, recorded.config.backend);
  write_run_artifacts(trace_path, trace, recorded.config);
}

}  // namespace ratelab
