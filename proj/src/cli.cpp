#include "probekit/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "probekit/client.hpp"
#include "probekit/frame.hpp"
#include "probekit/identify.hpp"
#include "probekit/regression.hpp"
#include "probekit/server.hpp"
#include "probekit/simlab.hpp"
#include "probekit/wire.hpp"

namespace probekit::cli {

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

std::vector<std::uint8_t> slurp_bytes(const std::filesystem::path& path) {
  const std::string text = slurp(path);
  return {text.begin(), text.end()};
}

void spill(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed for " + path.string());
}

OuiTable load_registry(const std::optional<std::filesystem::path>& path,
                       std::ostream& err) {
  if (!path) return {};
  auto result = load_oui(slurp(*path));
  for (const auto& e : result.errors) {
    err << path->string() << ":" << e.line << ": " << e.reason << "\n";
  }
  return std::move(result.table);
}

AssignMode parse_mode(const std::string& mode) {
  if (mode == "duplicates") return AssignMode::DuplicatesAllowed;
  if (mode == "unique") return AssignMode::UniqueAssignments;
  throw std::runtime_error("mode must be \"duplicates\" or \"unique\"");
}

std::atomic<bool> g_stop_requested{false};

void handle_stop_signal(int) { g_stop_requested.store(true); }

}  // namespace

int cmd_parse(const ParseArgs& args, std::ostream& out, std::ostream& err) {
  try {
    if (args.gps && !gps_in_range(*args.gps)) {
      throw std::runtime_error("gps coordinates out of range");
    }
    const auto capture = read_capture(slurp_bytes(args.capture));
    const auto extracted = extract_probes(capture);
    const auto sightings = dedup_scan(extracted.probes, args.gps);

    ScanBatch batch;
    batch.device_id = args.device_id;
    if (!sightings.empty()) {
      UnixTime lo = sightings.front().seen_at;
      UnixTime hi = lo;
      for (const auto& s : sightings) {
        lo = std::min(lo, s.seen_at);
        hi = std::max(hi, s.seen_at);
      }
      batch.scan_start = lo;
      batch.scan_len_s = static_cast<std::uint32_t>(std::max<UnixTime>(hi - lo, 1));
    }
    batch.sightings = sightings;

    spill(args.out, encode_batch(batch, load_registry(args.registry, err)));
    out << "frames read:     " << capture.records.size() << "\n"
        << "probes found:    " << extracted.probes.size() << "\n"
        << "sightings kept:  " << sightings.size() << "\n"
        << "malformed:       " << extracted.malformed_records << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "parse: " << e.what() << "\n";
    return 1;
  }
}

int cmd_upload(const UploadArgs& args, std::ostream& out, std::ostream& err) {
  try {
    ScanBatch batch = decode_batch(slurp(args.batch));
    batch.device_id = args.device_id;
    const auto summary = upload(args.endpoint, batch, load_registry(args.registry, err));
    out << encode_summary(summary) << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "upload: " << e.what() << "\n";
    return 1;
  }
}

int cmd_serve(const ServeArgs& args, std::ostream& out, std::ostream& err) {
  try {
    Store store = Store::open(args.store);
    Service service(store, load_registry(args.registry, err),
                    ServeConfig{args.host, args.port});
    out << "listening on " << args.host << ":" << service.port() << "\n";
    std::signal(SIGINT, handle_stop_signal);
    std::signal(SIGTERM, handle_stop_signal);
    while (!g_stop_requested.load()) {
      std::this_thread::sleep_for(std::chrono::milliseconds(200));
    }
    service.stop();
    return 0;
  } catch (const std::exception& e) {
    err << "serve: " << e.what() << "\n";
    return 1;
  }
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  try {
    ExperimentConfig config;
    config.num_people = args.people;
    config.num_lectures = args.lectures;
    config.attendance_prob = args.attendance;
    config.probe_prob = args.probe;
    config.noise_macs_per_lecture = args.noise_per_lecture;
    config.noise_pool_size = args.noise_pool;
    config.seed = args.seed;
    const auto transcript = run_experiment(config, default_roster(args.people));
    spill(args.out, transcript_to_json(transcript));
    out << "wrote " << transcript.observations.size() << " observations for "
        << args.people << " people to " << args.out.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "simulate: " << e.what() << "\n";
    return 1;
  }
}

int cmd_identify(const IdentifyArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const auto transcript = transcript_from_json(slurp(args.transcript));
    const AssignMode mode = parse_mode(args.mode);

    OccupancyGrid grid(transcript.roster, args.cap);
    const UpdateRule rule;
    std::ostringstream csv;
    csv << "observation,accuracy\n";
    AssignmentProposal proposal;
    proposal.roster = transcript.roster;
    proposal.proposals.assign(transcript.roster.size(), std::nullopt);
    for (const auto& obs : transcript.observations) {
      grid.observe(obs, rule);
      proposal = grid.assign(mode, args.threshold);
      char line[64];
      std::snprintf(line, sizeof(line), "%llu,%0.6f\n",
                    static_cast<unsigned long long>(grid.observations_seen()),
                    score(proposal, transcript.truth));
      csv << line;
    }
    spill(args.out, csv.str());

    std::ostringstream listing;
    listing << "person,proposed_mac,weight\n";
    for (std::size_t p = 0; p < proposal.roster.size(); ++p) {
      listing << proposal.roster[p] << ",";
      if (proposal.proposals[p]) {
        char w[32];
        std::snprintf(w, sizeof(w), "%0.6f", proposal.proposals[p]->weight);
        listing << proposal.proposals[p]->mac.to_string() << "," << w;
      } else {
        listing << ",";
      }
      listing << "\n";
    }
    out << listing.str();
    if (args.proposal_out) spill(*args.proposal_out, listing.str());
    return 0;
  } catch (const std::exception& e) {
    err << "identify: " << e.what() << "\n";
    return 1;
  }
}

int cmd_report(const ReportArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const Store store = Store::open(args.store);
    std::filesystem::create_directories(args.out_dir);

    const auto stats = store.stats();
    nlohmann::json stats_doc{{"total_sightings", stats.total_sightings},
                             {"unique_macs", stats.unique_macs},
                             {"manufacturer_count", stats.manufacturer_count},
                             {"unique_ssids", stats.unique_ssids}};
    spill(args.out_dir / "stats.json", stats_doc.dump(2));
    out << stats_doc.dump() << "\n";

    // manufacturer counts, descending
    std::map<std::string, std::uint64_t> by_manufacturer;
    for (const auto& [mac, rec] : store.macs()) {
      by_manufacturer[rec.manufacturer] += 1;
    }
    std::vector<std::pair<std::string, std::uint64_t>> manufacturers(
        by_manufacturer.begin(), by_manufacturer.end());
    std::sort(manufacturers.begin(), manufacturers.end(),
              [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first < b.first;
              });
    std::ostringstream mcsv;
    mcsv << "manufacturer,macs\n";
    for (const auto& [name, count] : manufacturers) {
      mcsv << name << "," << count << "\n";
    }
    spill(args.out_dir / "manufacturers.csv", mcsv.str());
    out << "top manufacturers:\n";
    for (std::size_t i = 0; i < manufacturers.size() && i < 10; ++i) {
      out << "  " << manufacturers[i].first << ": " << manufacturers[i].second << "\n";
    }

    std::ostringstream maccsv;
    maccsv << "mac,manufacturer,times_seen,locally_administered,ssids\n";
    for (const auto& [mac, rec] : store.macs()) {
      maccsv << mac.to_string() << "," << rec.manufacturer << ","
             << rec.times_seen << "," << (rec.locally_administered ? 1 : 0) << ",";
      bool first = true;
      for (const auto& ssid : rec.known_ssids) {
        if (!first) maccsv << ";";
        maccsv << ssid;
        first = false;
      }
      maccsv << "\n";
    }
    spill(args.out_dir / "macs.csv", maccsv.str());

    std::ostringstream scsv;
    scsv << "mac,ssid,seen_at,lat,lon\n";
    std::array<std::uint64_t, 24> hour_bins{};
    for (const auto& s : store.all_sightings()) {
      scsv << s.mac.to_string() << "," << s.ssid_label << ","
           << format_utc(s.seen_at) << ",";
      if (s.gps) {
        scsv << s.gps->lat << "," << s.gps->lon;
      } else {
        scsv << ",";
      }
      scsv << "\n";
      hour_bins[static_cast<std::size_t>(((s.seen_at % 86400) + 86400) % 86400) / 3600] += 1;
    }
    spill(args.out_dir / "sightings.csv", scsv.str());

    std::ostringstream hcsv;
    hcsv << "hour,sightings\n";
    for (int h = 0; h < 24; ++h) {
      hcsv << h << "," << hour_bins[static_cast<std::size_t>(h)] << "\n";
    }
    spill(args.out_dir / "sightings_per_hour.csv", hcsv.str());
    return 0;
  } catch (const std::exception& e) {
    err << "report: " << e.what() << "\n";
    return 1;
  }
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  try {
    if (args.observations.empty() || args.probe.empty() || args.attendance.empty() ||
        args.seeds == 0) {
      throw std::runtime_error("empty sweep grid");
    }
    const std::size_t total = args.observations.size() * args.probe.size() *
                              args.attendance.size() * args.seeds;
    if (total < 5) {
      throw std::runtime_error("sweep must produce at least 5 samples");
    }
    const std::uint32_t max_lectures =
        *std::max_element(args.observations.begin(), args.observations.end());

    std::vector<RegressionSample> samples;
    samples.reserve(total);
    const auto roster = default_roster(args.people);
    for (const double probe : args.probe) {
      for (const double attendance : args.attendance) {
        for (std::uint32_t s = 0; s < args.seeds; ++s) {
          ExperimentConfig config;
          config.num_people = args.people;
          config.num_lectures = max_lectures;
          config.attendance_prob = attendance;
          config.probe_prob = probe;
          config.seed = args.base_seed + s;
          const auto transcript = run_experiment(config, roster);
          IdentifyOptions options;
          options.cap = args.cap;
          const auto series = run_identification(transcript, options);
          for (const std::uint32_t k : args.observations) {
            samples.push_back(RegressionSample{
                static_cast<double>(k), probe, attendance, series[k - 1]});
          }
        }
      }
    }

    std::ostringstream csv;
    csv << "observation_number,probe_prob,attendance_prob,accuracy\n";
    for (const auto& s : samples) {
      char line[96];
      std::snprintf(line, sizeof(line), "%g,%g,%g,%0.6f\n", s.observation_number,
                    s.probe_prob, s.attendance_prob, s.accuracy);
      csv << line;
    }
    spill(args.samples_out, csv.str());

    const auto summary = fit_regression(samples);
    const std::string text = format_summary(summary);
    if (args.summary_out) spill(*args.summary_out, text);
    out << text;
    return 0;
  } catch (const std::exception& e) {
    err << "sweep: " << e.what() << "\n";
    return 1;
  }
}

int cmd_oui(const OuiArgs& args, std::ostream& out, std::ostream& err) {
  try {
    if (args.convert_ieee) {
      if (!args.out) throw std::runtime_error("--convert-ieee needs --out");
      spill(*args.out, convert_ieee_dump(slurp(*args.convert_ieee)));
      return 0;
    }
    if (!args.mac) throw std::runtime_error("nothing to do: give --mac or --convert-ieee");
    const auto mac = MacAddress::parse(*args.mac);
    if (!mac) throw std::runtime_error("bad mac \"" + *args.mac + "\"");
    const auto table = load_registry(args.registry, err);
    out << table.lookup(*mac).value_or("Unknown") << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "oui: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, const char* const* argv) {
  CLI::App app{"WiFi probe-request capture, ingestion, and identification toolkit"};
  app.require_subcommand(1);

  ParseArgs parse_args;
  std::string gps_text;
  auto* parse_cmd = app.add_subcommand("parse", "extract sightings from a pcap capture");
  parse_cmd->add_option("--capture", parse_args.capture, "pcap file")->required();
  parse_cmd->add_option("--out", parse_args.out, "output batch JSON")->required();
  parse_cmd->add_option("--gps", gps_text, "scan location as lat,lon");
  parse_cmd->add_option("--device", parse_args.device_id, "device id");
  parse_cmd->add_option("--registry", parse_args.registry, "OUI registry file");

  UploadArgs upload_args;
  auto* upload_cmd = app.add_subcommand("upload", "POST a batch to a running server");
  upload_cmd->add_option("--batch", upload_args.batch, "batch JSON file")->required();
  upload_cmd->add_option("--endpoint", upload_args.endpoint, "host:port")->required();
  upload_cmd->add_option("--device", upload_args.device_id, "device id");
  upload_cmd->add_option("--registry", upload_args.registry, "OUI registry file");

  ServeArgs serve_args;
  auto* serve_cmd = app.add_subcommand("serve", "run the ingestion endpoint");
  serve_cmd->add_option("--store", serve_args.store, "store file")->required();
  serve_cmd->add_option("--host", serve_args.host, "bind host");
  serve_cmd->add_option("--port", serve_args.port, "bind port");
  serve_cmd->add_option("--registry", serve_args.registry, "OUI registry file");

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "generate a lecture experiment transcript");
  sim_cmd->add_option("--people", sim_args.people, "number of people");
  sim_cmd->add_option("--lectures", sim_args.lectures, "number of lectures");
  sim_cmd->add_option("--attendance", sim_args.attendance, "attendance probability");
  sim_cmd->add_option("--probe", sim_args.probe, "probe emission probability");
  sim_cmd->add_option("--noise-per-lecture", sim_args.noise_per_lecture,
                      "noise MACs per lecture");
  sim_cmd->add_option("--noise-pool", sim_args.noise_pool, "noise pool size");
  sim_cmd->add_option("--seed", sim_args.seed, "rng seed");
  sim_cmd->add_option("--out", sim_args.out, "transcript file")->required();

  IdentifyArgs id_args;
  double threshold_value = 0.0;
  auto* id_cmd = app.add_subcommand("identify", "run the occupancy-grid identification");
  id_cmd->add_option("--transcript", id_args.transcript, "transcript file")->required();
  id_cmd->add_option("--out", id_args.out, "accuracy CSV")->required();
  id_cmd->add_option("--mode", id_args.mode, "duplicates|unique");
  id_cmd->add_option("--cap", id_args.cap, "max candidates per person");
  auto* threshold_opt =
      id_cmd->add_option("--threshold", threshold_value, "minimum proposal weight");
  id_cmd->add_option("--proposal", id_args.proposal_out, "final proposal CSV");

  ReportArgs report_args;
  auto* report_cmd = app.add_subcommand("report", "export store statistics");
  report_cmd->add_option("--store", report_args.store, "store file")->required();
  report_cmd->add_option("--out-dir", report_args.out_dir, "output directory");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep plus regression");
  sweep_cmd->add_option("--people", sweep_args.people, "number of people");
  sweep_cmd->add_option("--observations", sweep_args.observations,
                        "observation counts to sample")->delimiter(',');
  sweep_cmd->add_option("--probe", sweep_args.probe, "probe probabilities")->delimiter(',');
  sweep_cmd->add_option("--attendance", sweep_args.attendance,
                        "attendance probabilities")->delimiter(',');
  sweep_cmd->add_option("--seeds", sweep_args.seeds, "seeds per configuration");
  sweep_cmd->add_option("--base-seed", sweep_args.base_seed, "first seed");
  sweep_cmd->add_option("--cap", sweep_args.cap, "max candidates per person");
  sweep_cmd->add_option("--out", sweep_args.samples_out, "samples CSV")->required();
  sweep_cmd->add_option("--summary", sweep_args.summary_out, "regression summary file");

  OuiArgs oui_args;
  auto* oui_cmd = app.add_subcommand("oui", "registry lookup and conversion");
  oui_cmd->add_option("--registry", oui_args.registry, "OUI registry file");
  oui_cmd->add_option("--mac", oui_args.mac, "mac address to resolve");
  oui_cmd->add_option("--convert-ieee", oui_args.convert_ieee, "IEEE oui.txt dump");
  oui_cmd->add_option("--out", oui_args.out, "converted registry output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (!gps_text.empty()) {
    GpsCoord gps{};
    if (std::sscanf(gps_text.c_str(), "%lf,%lf", &gps.lat, &gps.lon) != 2) {
      std::cerr << "parse: --gps must be lat,lon\n";
      return 1;
    }
    parse_args.gps = gps;
  }
  if (threshold_opt->count() > 0) id_args.threshold = threshold_value;

  if (parse_cmd->parsed()) return cmd_parse(parse_args, std::cout, std::cerr);
  if (upload_cmd->parsed()) return cmd_upload(upload_args, std::cout, std::cerr);
  if (serve_cmd->parsed()) return cmd_serve(serve_args, std::cout, std::cerr);
  if (sim_cmd->parsed()) return cmd_simulate(sim_args, std::cout, std::cerr);
  if (id_cmd->parsed()) return cmd_identify(id_args, std::cout, std::cerr);
  if (report_cmd->parsed()) return cmd_report(report_args, std::cout, std::cerr);
  if (sweep_cmd->parsed()) return cmd_sweep(sweep_args, std::cout, std::cerr);
  if (oui_cmd->parsed()) return cmd_oui(oui_args, std::cout, std::cerr);
  return 1;
}

}  // namespace probekit::cli
