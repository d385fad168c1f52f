#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <regex>
#include <sstream>
#include <unordered_set>

#include "neuconj/eval/prover.hpp"
#include "neuconj/library.hpp"
#include "neuconj/tptp/printer.hpp"

namespace neuconj::eval {

namespace fs = std::filesystem;

namespace {

bool is_executable(const fs::path& p) {
  struct stat st {};
  return ::stat(p.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(p.c_str(), X_OK) == 0;
}

std::string resolve(const std::string& path) {
  if (path.find('/') != std::string::npos) {
    if (is_executable(path)) return path;
    throw ProverNotFound(path);
  }
  if (const char* env = std::getenv("PATH")) {
    std::stringstream dirs(env);
    std::string dir;
    while (std::getline(dirs, dir, ':')) {
      const fs::path candidate = fs::path(dir.empty() ? "." : dir) / path;
      if (is_executable(candidate)) return candidate.string();
    }
  }
  throw ProverNotFound(path);
}

std::string excerpt(const std::string& out) {
  constexpr std::size_t kMax = 400;
  return out.size() <= kMax ? out : "..." + out.substr(out.size() - kMax);
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "neuconj_prover_XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) throw IoError("cannot create a temporary directory");
    path = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

const std::regex& status_regex() {
  static const std::regex re(R"(SZS status\s+([A-Za-z]+))");
  return re;
}

}  // namespace

std::string_view to_string(UnknownReason r) {
  switch (r) {
    case UnknownReason::Timeout: return "timeout";
    case UnknownReason::GaveUp: return "gaveup";
    case UnknownReason::Error: return "error";
  }
  return "?";
}

std::string_view verdict_name(const AtpVerdict& v) {
  if (std::holds_alternative<Proved>(v)) return "proved";
  if (std::holds_alternative<CounterSatisfiable>(v)) return "countersatisfiable";
  return "unknown";
}

AtpVerdict parse_szs_output(const std::string& output, const std::vector<std::string>& axiom_names) {
  std::smatch m;
  if (!std::regex_search(output, m, status_regex())) {
    return Unknown{UnknownReason::GaveUp, "no SZS status"};
  }
  const std::string status = m[1];
  if (status == "Theorem" || status == "Unsatisfiable" || status == "ContradictoryAxioms") {
    static const std::regex source(R"(file\(\s*(?:'[^']*'|"[^"]*")\s*,\s*([A-Za-z0-9_]+)\s*\))");
    const std::unordered_set<std::string> allowed(axiom_names.begin(), axiom_names.end());
    std::unordered_set<std::string> seen;
    Proved p;
    for (auto it = std::sregex_iterator(output.begin(), output.end(), source);
         it != std::sregex_iterator(); ++it) {
      const std::string name = (*it)[1];
      if (allowed.count(name) && seen.insert(name).second) p.used_premises.push_back(name);
    }
    return p;
  }
  if (status == "CounterSatisfiable" || status == "Satisfiable") return CounterSatisfiable{};
  if (status == "Timeout" || status == "ResourceOut") return Unknown{UnknownReason::Timeout, status};
  return Unknown{UnknownReason::GaveUp, status};
}

ExternalProver::ExternalProver(std::string path, std::string arg_template, double grace_seconds)
    : path_(resolve(path)), arg_template_(std::move(arg_template)), grace_seconds_(grace_seconds) {}

AtpVerdict ExternalProver::prove(const tptp::Problem& problem, double limit_seconds) const {
  if (!is_executable(path_)) throw ProverNotFound(path_);
  TempDir dir;
  const fs::path file = dir.path / "problem.p";
  write_file(file.string(), tptp::print_problem(problem));

  const long limit = std::max(1L, static_cast<long>(std::ceil(limit_seconds)));
  std::vector<std::string> args{path_};
  std::istringstream words(arg_template_);
  for (std::string w; words >> w;) {
    for (auto [key, value] : {std::pair<std::string, std::string>{"{file}", file.string()},
                              {"{limit}", std::to_string(limit)}}) {
      for (std::size_t pos; (pos = w.find(key)) != std::string::npos;) w.replace(pos, key.size(), value);
    }
    args.push_back(w);
  }
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) throw Error("pipe() failed");
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw Error("fork() failed");
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(fds[1], STDOUT_FILENO);
    ::dup2(fds[1], STDERR_FILENO);
    if (::chdir(dir.path.c_str()) != 0) ::_exit(127);
    ::execv(argv[0], argv.data());
    ::_exit(127);
  }
  ::close(fds[1]);

  using Clock = std::chrono::steady_clock;
  const auto deadline =
      Clock::now() + std::chrono::milliseconds(static_cast<long>((limit + grace_seconds_) * 1000));
  std::string output;
  bool timed_out = false;
  char buf[4096];
  for (;;) {
    const auto left =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    if (left <= 0) {
      timed_out = true;
      break;
    }
    pollfd pfd{fds[0], POLLIN, 0};
    const int r = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left, 1000)));
    if (r < 0 && errno == EINTR) continue;
    if (r <= 0) continue;
    const ssize_t n = ::read(fds[0], buf, sizeof buf);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    output.append(buf, static_cast<std::size_t>(n));
  }
  if (timed_out) ::kill(-pid, SIGKILL);
  ::close(fds[0]);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (timed_out) return Unknown{UnknownReason::Timeout, "killed after " + std::to_string(limit) + " s"};
  if (WIFSIGNALED(status)) throw ProverCrashed(128 + WTERMSIG(status), excerpt(output));

  const int code = WEXITSTATUS(status);
  if (code == 127 && output.empty()) throw ProverNotFound(path_);
  std::vector<std::string> axiom_names;
  for (const auto& af : problem.formulas) {
    if (af.role != tptp::Role::Conjecture) axiom_names.push_back(af.name);
  }
  if (code != 0 && !std::regex_search(output, status_regex())) throw ProverCrashed(code, excerpt(output));
  return parse_szs_output(output, axiom_names);
}

}  // namespace neuconj::eval
