#include "magweyl/errors.hpp"
#include "magweyl/harness.hpp"
#include "magweyl/parallel.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace magweyl;

namespace {

const char* error_name(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  if (dynamic_cast<const JacobiViolation*>(&e)) return "JacobiViolation";
  if (dynamic_cast<const NotNilpotent*>(&e)) return "NotNilpotent";
  if (dynamic_cast<const ShapeError*>(&e)) return "ShapeError";
  if (dynamic_cast<const ClassTooLarge*>(&e)) return "ClassTooLarge";
  if (dynamic_cast<const BadGridSpec*>(&e)) return "BadGridSpec";
  if (dynamic_cast<const DegreeTooHigh*>(&e)) return "DegreeTooHigh";
  if (dynamic_cast<const FieldsDiffer*>(&e)) return "FieldsDiffer";
  if (dynamic_cast<const WrongClass*>(&e)) return "WrongClass";
  return "Error";
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << text;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int emit(const Report& report, const std::filesystem::path* out_dir) {
  for (const auto& c : report.checks) {
    std::printf("%s %-40s value=%.3e tol=%.1e\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value, c.tolerance);
  }
  std::printf("%s\n", report.pass() ? "overall: PASS" : "overall: FAIL");
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    write_file(*out_dir / "report.json", report_json(report));
    write_file(*out_dir / "summary.csv", report_csv(report));
  }
  return report.pass() ? 0 : 1;
}

void write_meta(const std::filesystem::path& dump, const std::string& header) {
  std::ostringstream meta;
  meta << "{\"file\":\"" << dump.filename().string() << "\",\"sha256\":\"" << sha256_file(dump)
       << "\",\"header\":" << header << "}\n";
  auto p = dump;
  p.replace_extension(".json");
  write_file(p, meta.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Magnetic Weyl calculus on nilpotent Lie groups"};
  app.require_subcommand(1);

  std::string config_path, out_dir, suites;
  std::uint64_t seed = 0;
  int threads = 0;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "RNG seed (default from config, else 42)");
    sub->add_option("--threads", threads, "worker threads (fallback: MAGWEYL_THREADS)")->check(CLI::PositiveNumber);
  };
  auto* verify = app.add_subcommand("verify-algebra", "BCH, Psi and lower central series checks");
  auto* build = app.add_subcommand("build-kernel", "write the kernel of the config symbol");
  auto* moyal = app.add_subcommand("moyal", "write symbol # symbol_b (kernel route)");
  auto* suite = app.add_subcommand("suite", "run verification suites");
  for (auto* sub : {verify, build, moyal, suite}) common(sub);
  suite->add_option("--suites", suites, "comma separated suite names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (threads > 0) set_num_threads(threads);
    RunConfig config = load_run_config(config_path);
    for (auto* sub : {verify, build, moyal, suite}) {
      if (sub->parsed() && sub->count("--seed")) config.seed = seed;
    }
    const bool have_out = !out_dir.empty() || config.out_dir != ".";
    if (!out_dir.empty()) config.out_dir = out_dir;

    if (verify->parsed()) return emit(run_suites(config, {"algebra"}), have_out ? &config.out_dir : nullptr);

    if (suite->parsed()) {
      std::vector<std::string> names = !suites.empty() ? split(suites) : config.suites;
      if (names.empty()) names = known_suites();
      return emit(run_suites(config, names), have_out ? &config.out_dir : nullptr);
    }

    const auto ctx = make_context(config);
    std::filesystem::create_directories(config.out_dir);
    const auto a = make_symbol(config.symbol, ctx.grid(), config.base_dir);
    if (build->parsed()) {
      const auto path = config.out_dir / "kernel.bin";
      write_dump(path, kernel_from_symbol(ctx, a));
      write_meta(path, dump_header("kernel", ctx.grid()));
      std::printf("%s  %s\n", sha256_file(path).c_str(), path.string().c_str());
      return 0;
    }
    if (!config.symbol_b) throw ConfigError("moyal needs symbol_b in the config");
    const auto b = make_symbol(*config.symbol_b, ctx.grid(), config.base_dir);
    const auto path = config.out_dir / "product.bin";
    write_dump(path, moyal_product(ctx, a, b));
    write_meta(path, dump_header("symbol", ctx.grid()));
    std::printf("%s  %s\n", sha256_file(path).c_str(), path.string().c_str());
    return 0;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s: %s\n", error_name(e), e.what());
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
