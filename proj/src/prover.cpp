#include "hammer/prover.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hammer/error.hpp"

extern char** environ;

namespace hammer {

namespace {

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::vector<std::string> known_provers() { return {"vampire", "eprover", "z3"}; }

ProverConfig default_prover(std::string_view name) {
  if (name == "vampire")
    return {"vampire", "vampire", split_words("--mode casc -t {timeout} --output_axiom_names on {file}"),
            ProblemFormat::Tptp, 96, kDefaultTimeout};
  if (name == "eprover")
    return {"eprover", "eprover",
            split_words("--auto-schedule --tstp-format -s --proof-object --cpu-limit={timeout} {file}"),
            ProblemFormat::Tptp, 128, kDefaultTimeout};
  if (name == "z3")
    return {"z3", "z3", split_words("-smt2 -T:{timeout} {file}"), ProblemFormat::Smt2, 32, kDefaultTimeout};
  throw Error(Errc::Usage, "unknown prover '" + std::string(name) + "'");
}

std::map<std::string, ProverConfig> parse_prover_config(std::string_view text) {
  std::map<std::string, ProverConfig> out;
  std::istringstream in{std::string(text)};
  int lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    std::string key = trim(line.substr(0, eq == std::string::npos ? 0 : eq));
    auto dot = key.find('.');
    if (eq == std::string::npos || dot == std::string::npos)
      throw Error(Errc::Usage, "prover config line " + std::to_string(lineno) + ": expected NAME.KEY = VALUE");
    std::string name = key.substr(0, dot), field = key.substr(dot + 1), value = trim(line.substr(eq + 1));
    auto it = out.find(name);
    if (it == out.end()) {
      ProverConfig base;
      base.name = name;
      auto known = known_provers();
      if (std::find(known.begin(), known.end(), name) != known.end()) base = default_prover(name);
      it = out.emplace(name, base).first;
    }
    ProverConfig& c = it->second;
    try {
      if (field == "exe") {
        c.executable = value;
      } else if (field == "args") {
        c.args = split_words(value);
      } else if (field == "format") {
        if (value != "tptp" && value != "smt2") throw Error(Errc::Usage, "format must be tptp or smt2");
        c.format = value == "smt2" ? ProblemFormat::Smt2 : ProblemFormat::Tptp;
      } else if (field == "budget") {
        c.budget = std::stoul(value);
      } else if (field == "timeout") {
        c.timeout = std::stod(value);
      } else {
        throw Error(Errc::Usage, "unknown key '" + field + "'");
      }
    } catch (const std::logic_error&) {
      throw Error(Errc::Usage, "prover config line " + std::to_string(lineno) + ": bad value '" + value + "'");
    } catch (const Error& e) {
      throw Error(Errc::Usage, "prover config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

ProverConfig resolve_prover(std::string_view name, const std::map<std::string, ProverConfig>& file_configs) {
  auto it = file_configs.find(std::string(name));
  ProverConfig c = it != file_configs.end() ? it->second : default_prover(name);
  std::string var = "HAMMER_PROVER_";
  for (char ch : name) var += std::isalnum(static_cast<unsigned char>(ch)) ? static_cast<char>(std::toupper(ch)) : '_';
  if (const char* exe = std::getenv(var.c_str()); exe && *exe) c.executable = exe;
  if (c.executable.empty() || c.args.empty())
    throw Error(Errc::Usage, "prover '" + c.name + "' needs exe and args");
  if (c.budget == 0) throw Error(Errc::Usage, "prover '" + c.name + "' budget must be positive");
  if (!(c.timeout > 0)) throw Error(Errc::Usage, "prover '" + c.name + "' timeout must be positive");
  return c;
}

std::string find_executable(const std::string& exe) {
  auto runnable = [](const std::filesystem::path& p) {
    struct stat st {};
    return ::stat(p.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(p.c_str(), X_OK) == 0;
  };
  if (exe.find('/') != std::string::npos) return runnable(exe) ? exe : std::string();
  const char* path = std::getenv("PATH");
  std::istringstream dirs(path ? path : "/usr/local/bin:/usr/bin:/bin");
  for (std::string d; std::getline(dirs, d, ':');) {
    auto p = std::filesystem::path(d.empty() ? "." : d) / exe;
    if (runnable(p)) return p.string();
  }
  return {};
}

ProcessOutput run_process(const std::vector<std::string>& argv, double timeout) {
  if (argv.empty()) throw Error(Errc::SpawnError, "empty command");
  std::string exe = find_executable(argv[0]);
  if (exe.empty()) throw Error(Errc::SpawnError, "cannot execute '" + argv[0] + "'");

  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) throw Error(Errc::SpawnError, std::string("pipe: ") + std::strerror(errno));
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, fds[1], 1);
  posix_spawn_file_actions_adddup2(&actions, fds[1], 2);
  posix_spawn_file_actions_addopen(&actions, 0, "/dev/null", O_RDONLY, 0);
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  auto start = std::chrono::steady_clock::now();
  pid_t pid = 0;
  int rc = posix_spawn(&pid, exe.c_str(), &actions, &attr, cargv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  ::close(fds[1]);
  if (rc != 0) {
    ::close(fds[0]);
    throw Error(Errc::SpawnError, "cannot execute '" + exe + "': " + std::strerror(rc));
  }

  ProcessOutput out;
  auto deadline = start + std::chrono::duration<double>(timeout);
  char buf[4096];
  for (;;) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      ::kill(-pid, SIGKILL);
      out.killed = true;
      break;
    }
    pollfd p{fds[0], POLLIN, 0};
    int r = ::poll(&p, 1, static_cast<int>(std::min<long long>(left.count(), 100)));
    if (r < 0 && errno != EINTR) break;
    if (r <= 0) continue;
    ssize_t n = ::read(fds[0], buf, sizeof buf);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    out.output.append(buf, static_cast<std::size_t>(n));
  }
  ::close(fds[0]);
  int status = 0;
  for (;;) {
    pid_t w = ::waitpid(pid, &status, out.killed ? 0 : WNOHANG);
    if (w == pid || (w < 0 && errno != EINTR)) break;
    if (w == 0 && std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      out.killed = true;
    } else if (w == 0) {
      ::usleep(2000);
    }
  }
  if (out.killed) ::kill(-pid, SIGKILL);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (WIFEXITED(status)) out.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status)) out.exit_code = 128 + WTERMSIG(status);
  return out;
}

namespace {

std::filesystem::path temp_problem(const std::string& text, const char* suffix) {
  auto dir = std::filesystem::temp_directory_path();
  std::string tmpl = (dir / "hammerkit-XXXXXX").string() + suffix;
  std::vector<char> name(tmpl.begin(), tmpl.end());
  name.push_back('\0');
  int fd = ::mkstemps(name.data(), static_cast<int>(std::strlen(suffix)));
  if (fd < 0) throw Error(Errc::Io, "cannot create temporary problem file");
  ::close(fd);
  std::ofstream(name.data()) << text;
  return name.data();
}

}  // namespace

AtpResult run_prover(const FofProblem& problem, const ProverConfig& config, const std::string& label) {
  AtpResult res;
  res.problem = label;
  res.prover = config.name;
  bool smt = config.format == ProblemFormat::Smt2;
  auto file = temp_problem(smt ? print_smt2(problem) : print_problem(problem), smt ? ".smt2" : ".p");

  std::vector<std::string> argv{config.executable};
  std::string secs = std::to_string(static_cast<long long>(std::ceil(config.timeout)));
  for (std::string a : config.args) {
    for (auto [key, val] : {std::pair<std::string, std::string>{"{file}", file.string()}, {"{timeout}", secs}})
      for (auto p = a.find(key); p != std::string::npos; p = a.find(key, p + val.size())) a.replace(p, key.size(), val);
    argv.push_back(a);
  }
  ProcessOutput run;
  try {
    run = run_process(argv, config.timeout);
  } catch (...) {
    std::filesystem::remove(file);
    throw;
  }
  std::filesystem::remove(file);

  SzsResult szs = parse_szs(run.output, run.killed, run.exit_code, problem.conjecture() != nullptr);
  res.status = szs.status;
  res.detail = szs.detail;
  res.seconds = run.seconds;
  if (proves(res.status)) res.core = extract_core(run.output, problem);
  return res;
}

}  // namespace hammer
