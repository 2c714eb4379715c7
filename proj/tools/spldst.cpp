// Command-line front end: assess, calibrate, analyze, model, serve.

#include <csignal>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <pthread.h>

#include <CLI11.hpp>
#include <httplib.h>

#include "spldst/commands.hpp"
#include "spldst/service.hpp"

namespace {

int serve(const std::string& host, int port) {
  // Deliver SIGINT/SIGTERM to a waiter thread instead of interrupting accept().
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  httplib::Server server;
  spldst::service::register_routes(server);
  if (!server.bind_to_port(host, port)) {
    std::cerr << "error: cannot listen on " << host << ":" << port << '\n';
    return spldst::cli::kExitIo;
  }

  std::thread waiter([&server, signals] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  std::cerr << "listening on http://" << host << ":" << port << '\n';
  server.listen_after_bind();
  if (waiter.joinable()) {
    // listen_after_bind only returns after stop(), so the waiter has fired.
    waiter.join();
  }
  return spldst::cli::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy-logic maturity assessment for software product line processes"};
  app.require_subcommand(1);

  spldst::cli::AssessOptions assess_opt;
  std::string config_path;
  auto* assess = app.add_subcommand("assess", "Assess a questionnaire file");
  assess->add_option("input", assess_opt.input, "Questionnaire JSON file")->required();
  assess->add_option("-c,--config", config_path, "Tree configuration JSON (default: $SPLMAT_CONFIG or built-in)");
  assess->add_option("-o,--output", assess_opt.output, "Output path (default: stdout)");
  assess->add_option("-f,--format", assess_opt.format, "Output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();

  std::string targets = "builtin";
  auto* calibrate = app.add_subcommand("calibrate", "Search tree shapes against case-study targets");
  calibrate->add_option("-t,--targets", targets, "'builtin' or a targets JSON file")->capture_default_str();

  std::string csv_path;
  auto* analyze = app.add_subcommand("analyze", "Reliability analysis of a response CSV");
  analyze->add_option("csv", csv_path, "CSV with header row and one row per respondent")->required();

  auto* model = app.add_subcommand("model", "Print membership functions and rules as JSON");

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP JSON API");
  serve_cmd->add_option("--host", host, "Bind address")->capture_default_str();
  serve_cmd->add_option("-p,--port", port, "Port")->check(CLI::Range(1, 65535))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : spldst::cli::kExitDomain;
  }

  if (assess->parsed()) {
    if (!config_path.empty()) assess_opt.config = config_path;
    return spldst::cli::cmd_assess(assess_opt, std::cout, std::cerr);
  }
  if (calibrate->parsed()) return spldst::cli::cmd_calibrate(targets, std::cout, std::cerr);
  if (analyze->parsed()) return spldst::cli::cmd_analyze(csv_path, std::cout, std::cerr);
  if (model->parsed()) return spldst::cli::cmd_model(std::cout);
  if (serve_cmd->parsed()) return serve(host, port);
  return spldst::cli::kExitDomain;
}
