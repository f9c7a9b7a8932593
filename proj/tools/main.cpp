// tweetsent: split, train, evaluate, predict and freq over a tweet corpus.
//
// Exit codes: 0 success, 1 configuration or usage error, 2 data error,
// 3 internal error.

#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tweetsent/config.hpp"
#include "tweetsent/error.hpp"
#include "tweetsent/experiment.hpp"

namespace {

using namespace tweetsent;

struct Command {
  CLI::App* app = nullptr;
  std::string config_file;
  std::map<std::string, CLI::Option*> options;
  std::map<std::string, std::string> values;
};

std::string flag_name(std::string_view key) {
  std::string s(key);
  for (auto& ch : s) {
    if (ch == '_') ch = '-';
  }
  return "--" + s;
}

void add_config_options(Command& cmd) {
  cmd.app->add_option("-c,--config", cmd.config_file, "JSON config file")->check(CLI::ExistingFile);
  for (const auto& key : config_keys()) {
    const std::string name(key.name);
    std::string help(key.help);
    help += " [" + std::string(key.default_value.empty() ? "\"\"" : key.default_value) + "]";
    auto& target = cmd.values[name];
    CLI::Option* opt = nullptr;
    if (key.default_value == "true" || key.default_value == "false") {
      opt = cmd.app->add_flag(flag_name(name) + "{true}", target, help);
    } else {
      opt = cmd.app->add_option(flag_name(name), target, help);
    }
    opt->group("Config keys");
    cmd.options[name] = opt;
  }
}

ExperimentConfig resolve(const Command& cmd) {
  ConfigValues values;
  if (!cmd.config_file.empty()) values = load_config_file(cmd.config_file);
  for (const auto& [name, opt] : cmd.options) {
    if (opt->count() > 0) values.set(name, cmd.values.at(name));
  }
  return ExperimentConfig::from_values(values);
}

void report(const RunSummary& summary) {
  for (const auto& note : summary.notes) std::cout << note << '\n';
  for (const auto& file : summary.files) std::cout << "wrote " << file.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sentiment classification of Persian cryptocurrency tweets"};
  app.require_subcommand(1);

  struct Entry {
    const char* name;
    const char* help;
    std::function<RunSummary(const ExperimentConfig&)> run;
  };
  std::vector<std::filesystem::path> reports;
  const std::vector<Entry> entries = {
      {"split", "Seeded train/test split of the corpus", cmd_split},
      {"train", "Fit preprocessing, vectorizer and classifier on the training split", cmd_train},
      {"evaluate", "Score the test split and export metrics", cmd_evaluate},
      {"predict", "Label an input CSV with a trained model", cmd_predict},
      {"freq", "Term-frequency, class and tag distribution exports", cmd_freq},
      {"compare", "Rank several metrics.json reports by accuracy",
       [&](const ExperimentConfig& c) { return cmd_compare(c, reports); }},
  };

  std::vector<Command> commands(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    commands[i].app = app.add_subcommand(entries[i].name, entries[i].help);
    add_config_options(commands[i]);
  }
  commands.back().app->add_option("reports", reports, "metrics.json files")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!commands[i].app->parsed()) continue;
    try {
      report(entries[i].run(resolve(commands[i])));
      return 0;
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return 1;
    } catch (const DataError& e) {
      std::cerr << "data error: " << e.what() << '\n';
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "internal error: " << e.what() << '\n';
      return 3;
    }
  }
  return 1;
}
