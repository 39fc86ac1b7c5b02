#include "flagtune/external.hpp"

#include <charconv>
#include <cmath>

#include "flagtune/error.hpp"
#include "flagtune/subprocess.hpp"

namespace flagtune {

namespace {

std::optional<double> last_line_seconds(const std::string& out) {
  std::size_t end = out.size();
  while (end > 0) {
    while (end > 0 && (out[end - 1] == '\n' || out[end - 1] == '\r' || out[end - 1] == ' ')) --end;
    if (end == 0) return std::nullopt;
    auto begin = out.rfind('\n', end - 1);
    begin = begin == std::string::npos ? 0 : begin + 1;
    std::string line = out.substr(begin, end - begin);
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) {
      end = begin;
      continue;
    }
    line = line.substr(first);
    double value = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
    if (ec != std::errc() || ptr != line.data() + line.size()) return std::nullopt;
    return value;
  }
  return std::nullopt;
}

}  // namespace

std::string substitute(std::string templ, std::string_view name, std::string_view value) {
  const std::string token = "{" + std::string(name) + "}";
  std::size_t pos = 0;
  while ((pos = templ.find(token, pos)) != std::string::npos) {
    templ.replace(pos, token.size(), value);
    pos += value.size();
  }
  return templ;
}

ExternalBackend::ExternalBackend(const FlagSpace& space, std::filesystem::path work_dir,
                                 TimingMode timing, std::string digest_algorithm)
    : space_(space), work_dir_(std::move(work_dir)), timing_(timing), algorithm_(std::move(digest_algorithm)) {
  std::filesystem::create_directories(work_dir_);
  work_dir_ = std::filesystem::absolute(work_dir_);
}

CompileOutcome ExternalBackend::compile(const Configuration& config, const Benchmark& bench) {
  std::string flags;
  for (const auto& arg : render_args(space_, config)) {
    if (!flags.empty()) flags.push_back(' ');
    flags += shell_quote(arg);
  }
  auto binary = work_dir_ / (bench.name + "-" + std::to_string(counter_++) + ".bin");
  std::error_code ec;
  std::filesystem::remove(binary, ec);

  auto command = substitute(substitute(bench.compile_command, "flags", flags), "out", shell_quote(binary.string()));
  auto result = run_shell(command, bench.timeout, bench.working_dir);
  if (!result.ok() || !std::filesystem::exists(binary)) return {false, {}, binary};
  return {true, digest_file(algorithm_, binary), binary};
}

RunOutcome ExternalBackend::run(const Benchmark& bench, const CompileOutcome& binary) {
  auto command = substitute(bench.run_command, "bin", shell_quote(binary.binary.string()));
  auto result = run_shell(command, bench.timeout, bench.working_dir);
  if (result.timed_out) return {Status::timeout, 0.0};
  if (result.exit_code != 0) return {Status::run_error, 0.0};
  if (timing_ == TimingMode::external) return {Status::ok, result.wall_seconds};
  auto seconds = last_line_seconds(result.out);
  if (!seconds || !std::isfinite(*seconds) || !(*seconds > 0)) return {Status::run_error, 0.0};
  return {Status::ok, *seconds};
}

void ExternalBackend::discard(const CompileOutcome& binary) {
  if (binary.binary.empty()) return;
  std::error_code ec;
  std::filesystem::remove(binary.binary, ec);
}

}  // namespace flagtune
