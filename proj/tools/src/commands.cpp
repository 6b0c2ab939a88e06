#include "commands.hpp"

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "frc/draft.hpp"
#include "frc/error.hpp"
#include "frc/ingest.hpp"
#include "frc/optimizer.hpp"
#include "frc/predictor.hpp"
#include "frc/schema.hpp"
#include "frc/service.hpp"
#include "frc/stats.hpp"
#include "frc/synthetic.hpp"
#include "http_server.hpp"

namespace frc::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void write_json(const fs::path& path, const json& doc) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("cannot write " + path.string());
}

std::vector<TeamId> split_teams(const std::string& list) {
  std::vector<TeamId> out;
  std::istringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(normalize_team_key(json(item)));
  }
  return out;
}

fs::path resolve_schema(const std::string& explicit_path, int year) {
  if (!explicit_path.empty()) return explicit_path;
  const std::string name = std::to_string(year) + ".json";
  for (const fs::path dir : {fs::path("schemas"), fs::path(FRC_SOURCE_SCHEMA_DIR), fs::path(FRC_INSTALL_SCHEMA_DIR)}) {
    if (fs::exists(dir / name)) return dir / name;
  }
  throw ConfigError("no schema for " + std::to_string(year) + "; pass --schema");
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

// ---------------------------------------------------------------------------

struct IngestArgs {
  std::vector<std::string> paths;
  std::string out_dir = ".";
};

int run_ingest(const IngestArgs& a) {
  std::vector<fs::path> paths(a.paths.begin(), a.paths.end());
  const auto events = load_events(paths);
  json report = json::array();
  std::cout << "event            matches  teams  ties  skipped\n";
  for (const auto& ds : events) {
    const auto r = dataset_integrity_report(ds);
    std::cout << std::left << std::setw(16) << ds.event_key << std::right << std::setw(9) << r.matches
              << std::setw(7) << r.teams << std::setw(6) << r.ties << std::setw(9) << r.skipped << '\n';
    json skipped = json::array();
    for (const auto& s : ds.skipped) {
      std::cout << "  skipped " << s.match_key << ": " << s.reason << '\n';
      skipped.push_back({{"match_key", s.match_key}, {"reason", s.reason}});
    }
    report.push_back({{"event_key", ds.event_key}, {"year", ds.year}, {"report", r}, {"skipped", skipped}});
  }
  write_json(fs::path(a.out_dir) / "ingest-report.json", report);
  return 0;
}

// ---------------------------------------------------------------------------

struct ProfilesArgs {
  int year = 0;
  std::string scope = "season";
  std::string schema;
  std::vector<std::string> matches;
  std::string out_dir = ".";
};

int run_profiles(const ProfilesArgs& a) {
  const YearSchema schema = load_year_schema(resolve_schema(a.schema, a.year));
  if (schema.year != a.year) throw YearMismatchError(a.year, schema.year, "schema");
  std::vector<fs::path> paths(a.matches.begin(), a.matches.end());
  auto events = load_events(paths);
  if (a.scope == "event" && events.size() != 1) {
    throw ConfigError("--scope event takes exactly one event, got " + std::to_string(events.size()));
  }
  for (const auto& ds : events) check_schema_fields(schema, ds);

  const ProfileSet set = normalize_profiles(aggregate_robot_profiles(events, schema));
  const fs::path out = fs::path(a.out_dir) / ("profiles-" + std::to_string(a.year) + ".json");
  save_profiles(set, out);

  std::size_t matches = 0;
  for (const auto& ds : events) matches += ds.matches.size();
  std::cout << set.profiles.size() << " robot profiles from " << matches << " matches in " << events.size()
            << " event(s), scope " << a.scope << '\n';
  std::cout << "extrema:";
  for (Indicator i : kAllIndicators) std::cout << ' ' << indicator_name(i) << '=' << fixed(set.extrema[i], 2);
  std::cout << "\nwrote " << out.string() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string grid;
  std::uint64_t seed = 0;
  std::vector<std::string> matches;
  std::string profiles;
  std::size_t synthetic = 0;
  unsigned threads = 0;
  std::string out_dir = ".";
};

int run_train(const TrainArgs& a) {
  const ParameterGrid grid = load_grid(a.grid);
  std::vector<PredictionSample> samples;
  json source;
  if (a.synthetic > 0) {
    synthetic::MatchSampleOptions o;
    o.matches = a.synthetic;
    o.seed = a.seed;
    samples = synthetic::oracle_match_samples(o);
    source = {{"kind", "synthetic"}, {"matches", a.synthetic}};
  } else {
    if (a.profiles.empty() || a.matches.empty()) throw ConfigError("train needs --profiles and --matches, or --synthetic");
    const ProfileSet profiles = load_profiles(a.profiles);
    std::vector<fs::path> paths(a.matches.begin(), a.matches.end());
    const auto events = load_events(paths);
    TrainingSet ts = build_training_set(events, profiles);
    samples = std::move(ts.samples);
    source = {{"kind", "matches"}, {"profiles", a.profiles}, {"ties_excluded", ts.ties_excluded}};
  }

  const DatasetSplit split = split_dataset(samples, 0.85, a.seed);
  std::cout << samples.size() << " samples: " << split.train.size() << " train, " << split.test.size() << " test\n";
  std::cout << "grid search over " << grid.size() << " combinations, " << grid.folds << "-fold cross-validation\n";
  const GridSearchReport report = grid_search(grid, split.train, a.seed, a.threads);
  const GridEntry& best = report.best();
  std::cout << "best: " << best.config.describe() << "  cv accuracy " << fixed(best.mean_accuracy) << '\n';

  ModelConfig final_config = best.config;
  final_config.seed = a.seed;
  TrainedModel model = train(final_config, split.train);
  if (!split.test.empty()) model.metadata.test_accuracy = accuracy(model, split.test);
  std::cout << "train accuracy " << fixed(model.metadata.train_accuracy);
  if (model.metadata.test_accuracy) std::cout << ", test accuracy " << fixed(*model.metadata.test_accuracy);
  std::cout << ", " << model.metadata.epochs_run << " epochs\n";

  const fs::path out(a.out_dir);
  save_model(model, out / "model.json");
  json doc{{"source", source},
           {"seed", a.seed},
           {"samples", samples.size()},
           {"train_samples", split.train.size()},
           {"test_samples", split.test.size()},
           {"grid_search", to_json(report)},
           {"final_model",
            {{"config", final_config},
             {"epochs_run", model.metadata.epochs_run},
             {"final_loss", model.metadata.final_loss},
             {"train_accuracy", model.metadata.train_accuracy},
             {"test_accuracy", model.metadata.test_accuracy ? json(*model.metadata.test_accuracy) : json(nullptr)}}}};
  write_json(out / "training-report.json", doc);
  std::cout << "wrote " << (out / "model.json").string() << " and " << (out / "training-report.json").string() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct PredictArgs {
  std::string model;
  std::string profiles;
  std::string red;
  std::string blue;
  std::string out_dir;
};

IndicatorVector alliance_vector(const ProfileSet& profiles, const std::vector<TeamId>& teams) {
  std::vector<const RobotProfile*> members;
  for (const auto& t : teams) members.push_back(&profiles.at(t));
  return alliance_effectiveness(members);
}

int run_predict(const PredictArgs& a) {
  const TrainedModel model = load_model(a.model);
  const ProfileSet profiles = load_profiles(a.profiles);
  const auto red_teams = split_teams(a.red);
  if (red_teams.size() != 3) throw ValidationError("red", "expected three teams");
  const IndicatorVector red = alliance_vector(profiles, red_teams);
  IndicatorVector blue;
  json blue_desc;
  if (a.blue.empty()) {
    blue = average_alliance(profiles);
    blue_desc = "average";
  } else {
    const auto blue_teams = split_teams(a.blue);
    if (blue_teams.size() != 3) throw ValidationError("blue", "expected three teams");
    blue = alliance_vector(profiles, blue_teams);
    blue_desc = blue_teams;
  }
  const Prediction p = predict(model, red, blue);
  json doc{{"red", red_teams},
           {"blue", blue_desc},
           {"red_effectiveness", radar_json(red)},
           {"blue_effectiveness", radar_json(blue)},
           {"probability_red_wins", p.probability},
           {"red_wins", p.red_wins}};
  std::cout << doc.dump(2) << '\n';
  std::cout << "P(red wins) = " << fixed(p.probability) << (p.red_wins ? "  -> red" : "  -> blue") << '\n';
  if (!a.out_dir.empty()) write_json(fs::path(a.out_dir) / "prediction.json", doc);
  return 0;
}

// ---------------------------------------------------------------------------

struct DraftArgs {
  std::string event;
  std::string profiles;
  std::string mode = "all";
  std::string picks;
  std::size_t top_k = 3;
  std::string out_dir = ".";
};

json alliances_json(const DraftState& state, const ProfileSet& profiles) {
  json out = json::array();
  for (std::size_t s = 0; s < kAllianceCount; ++s) {
    const auto& slot = state.seats()[s];
    std::vector<const RobotProfile*> members{&profiles.at(slot.captain)};
    for (const auto& p : slot.partners) members.push_back(&profiles.at(p));
    const IndicatorVector eff = alliance_effectiveness(members);
    out.push_back({{"seat", s + 1},
                   {"captain", slot.captain},
                   {"partners", slot.partners},
                   {"effectiveness", eff},
                   {"area", radar_area(eff).value}});
  }
  return out;
}

void print_alliances(const json& alliances) {
  std::cout << "seat  captain  partners          area\n";
  for (const auto& a : alliances) {
    std::string partners;
    for (const auto& p : a["partners"]) partners += (partners.empty() ? "" : ",") + p.get<std::string>();
    std::cout << std::setw(4) << a["seat"].get<int>() << "  " << std::left << std::setw(7)
              << a["captain"].get<std::string>() << "  " << std::setw(16) << partners << std::right << "  "
              << fixed(a["area"].get<double>()) << '\n';
  }
}

void print_suggestions(const std::vector<PartnerSuggestion>& list) {
  for (std::size_t i = 0; i < list.size(); ++i) {
    std::cout << "  " << i + 1 << ". " << std::left << std::setw(8) << list[i].team_id << std::right << " area "
              << fixed(list[i].area) << '\n';
  }
}

json suggestions_json(const std::vector<PartnerSuggestion>& list) {
  json out = json::array();
  for (const auto& s : list) {
    out.push_back({{"team", s.team_id}, {"area", s.area}, {"radar", radar_json(s.effectiveness)}});
  }
  return out;
}

int run_draft(const DraftArgs& a) {
  const auto ranking = load_rankings(a.event);
  const ProfileSet profiles = load_profiles(a.profiles);
  const DraftMode mode = DraftMode::parse(a.mode);
  DraftState state(ranking, mode);
  const fs::path out(a.out_dir);
  fs::create_directories(out);

  std::vector<PickEvent> log;
  json offered = json::array();
  if (mode.kind == DraftMode::Kind::OptimizeAll) {
    DraftRun run = run_optimize_all(std::move(state), profiles);
    state = std::move(run.state);
    log = std::move(run.log);
    for (const auto& e : log) std::cout << "pick " << e.pick_number << ": " << e.picking_captain << " takes " << e.picked << '\n';
  } else {
    // Picks come in one team per line, from a file or standard input.
    const bool from_stdin = a.picks.empty() || a.picks == "-";
    std::ifstream file;
    if (!from_stdin) {
      file.open(a.picks);
      if (!file) throw IoError("cannot read " + a.picks);
    }
    std::istream& in = from_stdin ? std::cin : file;
    std::optional<OptimizeOneSession> session;
    if (mode.kind == DraftMode::Kind::OptimizeOne) session.emplace(state, mode.team, profiles);

    auto offer = [&] {
      if (!session || session->state().complete() || !session->our_turn()) return;
      const auto list = session->suggestions(a.top_k);
      std::cout << "pick " << session->state().picks_made() + 1 << ", " << session->our_team() << " on the clock:\n";
      print_suggestions(list);
      offered.push_back({{"pick", session->state().picks_made() + 1}, {"suggestions", suggestions_json(list)}});
    };
    offer();
    std::string line;
    while (!(session ? session->state() : state).complete() && std::getline(in, line)) {
      line.erase(0, line.find_first_not_of(" \t\r"));
      line.erase(line.find_last_not_of(" \t\r") + 1);
      if (line.empty() || line[0] == '#') continue;
      const TeamId team = normalize_team_key(json(line));
      try {
        const PickEvent e = session ? session->enter_pick(team) : state.pick(team);
        if (!session) log.push_back(e);
        std::cout << "pick " << e.pick_number << ": " << e.picking_captain << " takes " << e.picked << '\n';
        for (const auto& p : e.promotions) {
          std::cout << "  " << p.team << " moves to seat " << p.to_seat << '\n';
        }
      } catch (const IneligiblePickError& err) {
        if (!from_stdin) throw;
        std::cerr << "rejected: " << err.what() << '\n';
      }
      offer();
    }
    if (session) {
      state = session->state();
      log = session->log();
    }
  }

  write_pick_log(out / "picks.jsonl", log);
  const json alliances = alliances_json(state, profiles);
  json doc{{"mode", mode.to_string()},
           {"picks", log.size()},
           {"complete", state.complete()},
           {"alliances", alliances},
           {"state", to_json(state)}};
  if (!offered.empty()) doc["suggestions"] = offered;
  write_json(out / "draft-result.json", doc);
  print_alliances(alliances);
  std::cout << "wrote " << (out / "picks.jsonl").string() << " and " << (out / "draft-result.json").string() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct ServeArgs {
  std::string event;
  std::string profiles;
  std::string model;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string state_dir;
};

http::Server* g_server = nullptr;

extern "C" void handle_signal(int) {
  if (g_server) g_server->stop();
}

int run_serve(const ServeArgs& a) {
  std::optional<TrainedModel> model;
  if (!a.model.empty()) model = load_model(a.model);
  DraftService::Options options;
  if (!a.state_dir.empty()) options.state_dir = a.state_dir;
  DraftService service(load_profiles(a.profiles), std::move(model), load_rankings(a.event), options);
  http::Server server(service);
  const int port = server.bind(a.host, a.port);
  g_server = &server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  std::cout << "listening on http://" << a.host << ':' << port << " (" << service.session_count()
            << " restored sessions)" << std::endl;
  server.listen();
  g_server = nullptr;
  return 0;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  int year = 2019;
  std::string schema;
  std::string event_key;
  std::size_t teams = 24;
  std::size_t matches_per_team = 10;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

int run_synth(const SynthArgs& a) {
  const YearSchema schema = load_year_schema(resolve_schema(a.schema, a.year));
  synthetic::EventOptions o;
  o.event_key = a.event_key.empty() ? std::to_string(schema.year) + "synth" : a.event_key;
  o.teams = a.teams;
  o.matches_per_team = a.matches_per_team;
  o.seed = a.seed;
  const auto event = synthetic::generate_event(schema, o);
  json matches = json::array();
  for (const auto& m : event.dataset.matches) matches.push_back(to_fixture_json(m));
  const fs::path out(a.out_dir);
  write_json(out / (o.event_key + ".json"), matches);
  write_json(out / ("rankings-" + o.event_key + ".json"), rankings_json(event.ranking));
  std::cout << event.dataset.matches.size() << " matches for " << event.ranking.size() << " teams; wrote "
            << (out / (o.event_key + ".json")).string() << " and "
            << (out / ("rankings-" + o.event_key + ".json")).string() << '\n';
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Alliance selection toolkit: match data to robot profiles, win prediction and draft assistance"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Validate match fixtures and report per-event counts");
  c_ingest->add_option("paths", ingest.paths, "Match files or directories, one event each")->required();
  c_ingest->add_option("--out-dir", ingest.out_dir, "Where ingest-report.json goes");

  ProfilesArgs profiles;
  auto* c_profiles = app.add_subcommand("profiles", "Build normalized robot profiles");
  c_profiles->add_option("--year", profiles.year, "Season")->required();
  c_profiles->add_option("--scope", profiles.scope, "Normalization population")
      ->check(CLI::IsMember({"event", "season"}));
  c_profiles->add_option("--schema", profiles.schema, "Schema config (default: schemas/<year>.json)");
  c_profiles->add_option("--matches", profiles.matches, "Match files or directories, one event each")->required();
  c_profiles->add_option("--out-dir", profiles.out_dir, "Where profiles-<year>.json goes");

  TrainArgs train_args;
  auto* c_train = app.add_subcommand("train", "Grid-search, train and evaluate the win predictor");
  c_train->add_option("--grid", train_args.grid, "Parameter grid JSON")->required();
  c_train->add_option("--seed", train_args.seed, "Seed for the split, folds and weights");
  c_train->add_option("--matches", train_args.matches, "Match files or directories");
  c_train->add_option("--profiles", train_args.profiles, "Profiles JSON for the teams in --matches");
  c_train->add_option("--synthetic", train_args.synthetic, "Train on N synthetic matches instead");
  c_train->add_option("--threads", train_args.threads, "Worker threads for the grid (0 = all cores)");
  c_train->add_option("--out-dir", train_args.out_dir, "Where model.json and training-report.json go");

  PredictArgs predict_args;
  auto* c_predict = app.add_subcommand("predict", "Probability that the red alliance wins");
  c_predict->add_option("--model", predict_args.model, "Model JSON")->required();
  c_predict->add_option("--profiles", predict_args.profiles, "Profiles JSON")->required();
  c_predict->add_option("--red", predict_args.red, "Three comma-separated teams")->required();
  c_predict->add_option("--blue", predict_args.blue, "Three comma-separated teams (default: the average alliance)");
  c_predict->add_option("--out-dir", predict_args.out_dir, "Also write prediction.json here");

  DraftArgs draft;
  auto* c_draft = app.add_subcommand("draft", "Run or assist an alliance selection");
  c_draft->add_option("--event", draft.event, "Rankings JSON for the event")->required();
  c_draft->add_option("--profiles", draft.profiles, "Profiles JSON")->required();
  c_draft->add_option("--mode", draft.mode, "all, one:TEAM or manual");
  c_draft->add_option("--picks", draft.picks, "Entered picks, one team per line ('-' or omitted: stdin)");
  c_draft->add_option("--top-k", draft.top_k, "Suggestions offered per turn")->check(CLI::PositiveNumber);
  c_draft->add_option("--out-dir", draft.out_dir, "Where picks.jsonl and draft-result.json go");

  ServeArgs serve;
  auto* c_serve = app.add_subcommand("serve", "HTTP API for the draft assistant");
  c_serve->add_option("--event", serve.event, "Rankings JSON for the event")->required();
  c_serve->add_option("--profiles", serve.profiles, "Profiles JSON")->required();
  c_serve->add_option("--model", serve.model, "Model JSON (enables /predict)");
  c_serve->add_option("--host", serve.host, "Bind address");
  c_serve->add_option("--port", serve.port, "Port (0 = any free port)");
  c_serve->add_option("--state-dir", serve.state_dir, "Persist sessions here and restore them on start");

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Write a synthetic event and its rankings");
  c_synth->add_option("--year", synth.year, "Season whose schema fields the breakdowns carry");
  c_synth->add_option("--schema", synth.schema, "Schema config (default: schemas/<year>.json)");
  c_synth->add_option("--event-key", synth.event_key, "Event key (default: <year>synth)");
  c_synth->add_option("--teams", synth.teams, "Number of teams")->check(CLI::Range(9, 1000));
  c_synth->add_option("--matches-per-team", synth.matches_per_team, "Qualification matches per team");
  c_synth->add_option("--seed", synth.seed, "Generator seed");
  c_synth->add_option("--out-dir", synth.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*c_ingest) return run_ingest(ingest);
    if (*c_profiles) return run_profiles(profiles);
    if (*c_train) return run_train(train_args);
    if (*c_predict) return run_predict(predict_args);
    if (*c_draft) return run_draft(draft);
    if (*c_serve) return run_serve(serve);
    if (*c_synth) return run_synth(synth);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace frc::cli
