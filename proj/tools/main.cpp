// Command-line front end: distance reports between state files, success and
// branch probabilities of an operation on a state, and the randomized
// verification suite.
//
// Exit codes: 0 success, 1 verification violations, 2 input or usage error,
// 3 dimension mismatch.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sinedist/harness.hpp"
#include "sinedist/io.hpp"
#include "sinedist/metrics.hpp"

namespace {

using namespace sinedist;

bool machine_format(const std::string& format) { return format == "records"; }

// Aligned key/value for humans, tab-separated for machines; 15 significant
// digits either way.
void print_value(const std::string& format, const char* key, double value) {
  if (machine_format(format))
    std::printf("%s\t%.15g\n", key, value);
  else
    std::printf("%-9s %.15g\n", key, value);
}

int run_distance(const std::string& file_a, const std::string& file_b, const std::string& format) {
  const DensityMatrix a = to_state(load_matrix_file(file_a));
  const DensityMatrix b = to_state(load_matrix_file(file_b));
  const DistanceReport report = distance_report(a, b);
  print_value(format, "fidelity", report.fidelity);
  print_value(format, "sine", report.sine);
  print_value(format, "angle", report.angle);
  print_value(format, "bures", report.bures);
  return 0;
}

int run_probe(const std::string& object_file, const std::string& state_file,
              const std::string& format) {
  const MatrixFile object = load_matrix_file(object_file);
  const DensityMatrix state = to_state(load_matrix_file(state_file));
  if (object.kind == MatrixKind::Povm) {
    const Povm povm = to_povm(object);
    const RealVector<double> probs = povm_probs(povm, state);
    print_value(format, "total", probs.sum());
    for (Eigen::Index mu = 0; mu < probs.size(); ++mu)
      print_value(format, ("outcome " + std::to_string(mu)).c_str(), probs(mu));
    return 0;
  }
  const KrausChannel channel = to_channel(object);
  print_value(format, "total", success_prob(channel, state));
  for (std::size_t mu = 0; mu < channel.size(); ++mu)
    print_value(format, ("branch " + std::to_string(mu)).c_str(),
                success_prob(branch(channel, mu), state));
  return 0;
}

// "lo..hi" or a single dimension.
void parse_dims(const std::string& text, SuiteConfig& config) {
  const auto parse_one = [&text](const std::string& part) {
    std::size_t used = 0;
    long long v = -1;
    try {
      v = std::stoll(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size() || v < 0)
      fail(Errc::ParseError, "bad --dims value '" + text + "' (expected lo..hi)");
    return static_cast<Eigen::Index>(v);
  };
  const auto sep = text.find("..");
  if (sep == std::string::npos) {
    config.dim_lo = config.dim_hi = parse_one(text);
  } else {
    config.dim_lo = parse_one(text.substr(0, sep));
    config.dim_hi = parse_one(text.substr(sep + 2));
  }
}

int run_verify(const SuiteConfig& config, const std::string& format, const std::string& output) {
  validate_config(config);
  const std::vector<CheckResult> results = run_suite(config);
  const std::string records = format_records(results);

  long long total_violations = 0;
  for (const auto& r : results) total_violations += r.violations;

  if (!output.empty()) {
    std::ofstream out(output, std::ios::binary);
    if (!out) fail(Errc::IoError, "cannot open '" + output + "' for writing");
    out << records;
    out.flush();
    if (!out) fail(Errc::IoError, "failed writing '" + output + "'");
  }

  if (machine_format(format) && output.empty()) {
    // stdout is the report body itself; keep it clean.
    std::fputs(records.c_str(), stdout);
  } else {
    std::fputs(format_table(results).c_str(), stdout);
    std::printf("%lld check%s, %lld violation%s, seed %llu\n",
                static_cast<long long>(results.size()), results.size() == 1 ? "" : "s",
                total_violations, total_violations == 1 ? "" : "s",
                static_cast<unsigned long long>(config.seed));
    if (!output.empty()) std::printf("report written to %s\n", output.c_str());
  }
  return total_violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sine distance between quantum states: reports and verification"};
  app.require_subcommand(1);

  std::string file_a, file_b, object_file, state_file;
  std::string format = "table", output;
  SuiteConfig config;
  std::string dims = "2..6";

  CLI::App* distance = app.add_subcommand("distance", "distance report between two state files");
  distance->add_option("file_a", file_a, "density or pure state file")->required();
  distance->add_option("file_b", file_b, "density or pure state file")->required();
  distance->add_option("--format", format, "table or records")
      ->check(CLI::IsMember({"table", "records"}));

  CLI::App* probe = app.add_subcommand("probe", "success and branch probabilities on a state");
  probe->add_option("operation", object_file, "kraus_set or povm file")->required();
  probe->add_option("state", state_file, "density or pure state file")->required();
  probe->add_option("--format", format, "table or records")
      ->check(CLI::IsMember({"table", "records"}));

  CLI::App* verify = app.add_subcommand("verify", "run the randomized verification suite");
  verify->add_option("--seed", config.seed, "master seed for every check");
  verify->add_option("--trials", config.trials, "base trial budget per check")
      ->check(CLI::PositiveNumber);
  verify->add_option("--dims", dims, "dimension range lo..hi (2 to 8)");
  verify->add_option("--format", format, "table or records")
      ->check(CLI::IsMember({"table", "records"}));
  verify->add_option("--output", output, "also write the record report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (distance->parsed()) return run_distance(file_a, file_b, format);
    if (probe->parsed()) return run_probe(object_file, state_file, format);
    parse_dims(dims, config);
    return run_verify(config, format, output);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == Errc::DimensionMismatch ? 3 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
