#ifndef DASPA_IO_HPP_
#define DASPA_IO_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "daspa/distributed.hpp"
#include "daspa/engine.hpp"
#include "daspa/evaluation.hpp"
#include "daspa/scenario.hpp"

namespace daspa {

/// Shortest-exact decimal rendering of a double ("%.17g"), so identical runs
/// produce identical files.
std::string format_double(double value);

/// FNV-1a 64-bit content hash, used for the run manifest.
std::uint64_t fnv1a64(std::string_view data);

/// Writes content to path via a temporary file plus rename.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

/// CSV with a header row, comma delimiter, '.' decimal, LF line endings.
std::string make_csv(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

std::string trace_to_csv(const std::vector<IterationRecord>& trace);
std::string throughput_to_csv(const ThroughputReport& report);
std::string gains_to_csv(const ChannelScenario& scenario);
std::string ledger_to_csv(const std::vector<BackhaulMessage>& ledger);

}  // namespace daspa

#endif  // DASPA_IO_HPP_
