#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "probekit/store.hpp"

namespace probekit::cli {

struct ParseArgs {
  std::filesystem::path capture;
  std::filesystem::path out;
  std::optional<GpsCoord> gps;
  std::string device_id = "cli";
  std::optional<std::filesystem::path> registry;
};

struct UploadArgs {
  std::filesystem::path batch;
  std::string endpoint;  // host:port
  std::string device_id = "cli";
  std::optional<std::filesystem::path> registry;
};

struct ServeArgs {
  std::filesystem::path store;
  std::string host = "0.0.0.0";
  int port = 8077;
  std::optional<std::filesystem::path> registry;
};

struct SimulateArgs {
  std::uint32_t people = 50;
  std::uint32_t lectures = 30;
  double attendance = 0.7;
  double probe = 0.95;
  std::uint32_t noise_per_lecture = 0;
  std::uint32_t noise_pool = 0;
  std::uint64_t seed = 1;
  std::filesystem::path out;
};

struct IdentifyArgs {
  std::filesystem::path transcript;
  std::filesystem::path out;  // accuracy CSV
  std::string mode = "duplicates";
  std::size_t cap = 32;
  std::optional<double> threshold;
  std::optional<std::filesystem::path> proposal_out;
};

struct ReportArgs {
  std::filesystem::path store;
  std::filesystem::path out_dir = ".";
};

struct SweepArgs {
  std::uint32_t people = 50;
  std::vector<std::uint32_t> observations{5, 10, 15, 20, 25, 30};
  std::vector<double> probe{0.6, 0.725, 0.85, 0.95};
  std::vector<double> attendance{0.5, 0.7, 0.9};
  std::uint32_t seeds = 6;
  std::uint64_t base_seed = 1;
  std::size_t cap = 32;
  std::filesystem::path samples_out;
  std::optional<std::filesystem::path> summary_out;
};

struct OuiArgs {
  std::optional<std::filesystem::path> registry;
  std::optional<std::string> mac;
  std::optional<std::filesystem::path> convert_ieee;
  std::optional<std::filesystem::path> out;
};

int cmd_parse(const ParseArgs& args, std::ostream& out, std::ostream& err);
int cmd_upload(const UploadArgs& args, std::ostream& out, std::ostream& err);
int cmd_serve(const ServeArgs& args, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_identify(const IdentifyArgs& args, std::ostream& out, std::ostream& err);
int cmd_report(const ReportArgs& args, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);
int cmd_oui(const OuiArgs& args, std::ostream& out, std::ostream& err);

// Full command line; returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace probekit::cli
