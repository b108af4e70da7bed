// tempus: run pipeline stages over a workspace directory.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tempus/error.hpp"
#include "tempus/pipeline.hpp"

namespace {

int exit_code(tempus::ErrorKind kind) {
  switch (kind) {
    case tempus::ErrorKind::Validation:
    case tempus::ErrorKind::MissingArtifact: return 2;
    case tempus::ErrorKind::Backend: return 3;
    case tempus::ErrorKind::Io: return 1;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  namespace pl = tempus::pipeline;
  CLI::App app{"Temporal-expression corpus analysis pipeline"};
  app.require_subcommand(0, 1);

  pl::RunConfig config;
  std::string workspace = ".";
  std::string weighting = "unweighted";
  std::string metadata;

  app.add_option("--workspace", workspace, "Workspace directory")->capture_default_str();
  app.add_flag("--stub", config.stub, "Use the in-process stub backend");
  app.add_option("--backend-url", config.backend_url,
                 "Sidecar base URL (http://host:port); falls back to TEMPUS_BACKEND_URL");
  app.add_option("--min-count", config.min_count, "Control-group frequency threshold")->capture_default_str();
  app.add_option("--story-len", config.story_length, "Sentences per sequentiality story")->capture_default_str();
  app.add_option("--max-history", config.max_history, "Largest history size swept (0 = longest story - 1)")
      ->capture_default_str();
  app.add_option("--concurrency", config.concurrency, "Backend requests in flight")->capture_default_str();
  app.add_option("--weighting", weighting, "Category means: unweighted or occurrence")
      ->check(CLI::IsMember({"unweighted", "occurrence"}))
      ->capture_default_str();
  app.add_flag("--include-first-sentence", config.include_first_sentence,
               "Count the first story sentence (always 0) in sequentiality means");
  app.add_option("--topic", config.topic, "Story topic for every book (default: the book title)");
  app.add_option("--metadata", metadata, "Book metadata JSON (default: <workspace>/metadata.json)");

  std::string stage;
  for (auto name : pl::kStages) {
    app.add_subcommand(std::string(name), "Run the " + std::string(name) + " stage")->fallthrough();
  }
  app.add_subcommand("all", "Run every stage in order")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 2;
  }
  stage = app.get_subcommands().front()->get_name();

  config.workspace = workspace;
  if (!metadata.empty()) config.metadata = metadata;
  config.weighting = *tempus::sentiment::parse_weighting(weighting);
  // The environment only fills in a URL; it never conflicts with --stub.
  if (!config.stub && config.backend_url.empty()) {
    if (const char* env = std::getenv("TEMPUS_BACKEND_URL")) config.backend_url = env;
  }

  try {
    if (stage == "all") {
      for (const auto& r : pl::run_all(config)) std::cout << pl::to_json(r).dump() << "\n";
    } else {
      std::cout << pl::to_json(pl::run_stage(stage, config)).dump() << "\n";
    }
  } catch (const tempus::Error& e) {
    std::cerr << "tempus " << stage << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "tempus " << stage << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
