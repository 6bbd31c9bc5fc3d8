#include "qmemcap/report.hpp"

#include <fstream>
#include <system_error>

#include <unistd.h>

namespace qmemcap {

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorKind::InvalidArgument, "cannot open " + tmp.string() + " for writing");
    os << content;
    os.flush();
    if (!os) throw Error(ErrorKind::InvalidArgument, "write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::InvalidArgument, "cannot move report into " + path.string());
  }
}

std::string dump_report(nlohmann::json j) {
  if (j.is_object() && !j.contains("schema")) j["schema"] = kSchemaVersion;
  return j.dump(2) + "\n";
}

nlohmann::json error_json(ErrorKind kind, const std::string& message) {
  return {{"schema", kSchemaVersion}, {"error", to_string(kind)}, {"message", message}};
}

int exit_code_for(ErrorKind kind) { return is_data_error(kind) ? 2 : 3; }

}  // namespace qmemcap
