#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "panelcast/error.hpp"

namespace {

std::string one_line(std::string text) {
  for (char& c : text)
    if (c == '\n' || c == '\r') c = ' ';
  while (!text.empty() && text.back() == ' ') text.pop_back();
  return text;
}

int report(std::string_view kind, const std::string& message) {
  std::cerr << kind << ": " << one_line(message) << "\n";
  return 1;
}

int parse(CLI::App& app, const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  app.parse(static_cast<int>(argv.size()), argv.data());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace panelcast;
  CLI::App app{"Solar panel irradiance forecasting from a single hemispherical capture"};
  app.name("panelcast");
  app.require_subcommand(1);
  auto commands = cli::register_commands(app);

  const std::vector<std::string> args(argv, argv + argc);
  try {
    try {
      // Config entries the command line leaves unset are spliced in right
      // after the subcommand name, so required flags may come from the file.
      std::vector<std::string> merged = args;
      if (args.size() > 1) {
        for (auto& c : commands) {
          if (c->app->get_name() != args[1]) continue;
          const std::vector<std::string> rest(args.begin() + 2, args.end());
          const std::string config = cli::find_config(rest);
          if (config.empty()) break;
          const auto extra = cli::config_arguments(*c->app, config, rest);
          merged.insert(merged.begin() + 2, extra.begin(), extra.end());
          break;
        }
      }
      parse(app, merged);
      for (auto& c : commands)
        if (c->app->parsed()) c->run();
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      return report("config_error", e.what());
    }
  } catch (const Error& e) {
    return report(error_kind_name(e.kind()), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return report("io_error", e.what());
  } catch (const std::bad_alloc&) {
    return report("resource_error", "out of memory");
  } catch (const std::exception& e) {
    return report("internal_error", e.what());
  }
  return 0;
}
