#include "daspa/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace daspa {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char byte : data) {
    hash ^= byte;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

void atomic_write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string make_csv(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

std::string trace_to_csv(const std::vector<IterationRecord>& trace) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(trace.size());
  for (const auto& rec : trace) {
    rows.push_back({std::to_string(rec.iteration), format_double(rec.lagrangian),
                    format_double(rec.dual_gap), format_double(rec.dual_step_inf),
                    format_double(rec.anchor_step_inf)});
  }
  return make_csv({"t", "lagrangian", "dual_gap", "lambda_step_inf", "y_step_inf"}, rows);
}

std::string throughput_to_csv(const ThroughputReport& report) {
  std::vector<std::vector<std::string>> rows;
  for (int n = 0; n < report.true_bps_hz.size(); ++n) {
    rows.push_back({std::to_string(report.seed), report.strategy, std::to_string(n),
                    format_double(report.conservative_bps_hz[n]),
                    format_double(report.true_bps_hz[n])});
  }
  return make_csv({"seed", "strategy", "user", "rate_conservative", "rate_true"}, rows);
}

std::string gains_to_csv(const ChannelScenario& scenario) {
  std::vector<std::vector<std::string>> rows;
  for (int k = 0; k < scenario.raw_gain.rows(); ++k)
    for (int n = 0; n < scenario.raw_gain.cols(); ++n)
      rows.push_back({std::to_string(k), std::to_string(n),
                      format_double(scenario.raw_gain(k, n))});
  return make_csv({"antenna", "user", "gain_linear"}, rows);
}

std::string ledger_to_csv(const std::vector<BackhaulMessage>& ledger) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(ledger.size());
  for (const auto& msg : ledger) {
    rows.push_back({std::to_string(msg.round),
                    msg.kind == MessageKind::PowerReport ? "power_report" : "dual_report",
                    std::to_string(msg.from_bs), std::to_string(msg.to_bs),
                    std::to_string(msg.antenna), std::to_string(msg.user),
                    format_double(msg.value)});
  }
  return make_csv({"round", "kind", "from_bs", "to_bs", "antenna", "user", "value"}, rows);
}

}  // namespace daspa
