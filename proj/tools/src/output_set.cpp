#include "output_set.hpp"

#include <fstream>
#include <stdexcept>

namespace carenet::cli {

namespace fs = std::filesystem;

void OutputSet::add(fs::path relative, std::string content) {
  files_.emplace_back(std::move(relative), std::move(content));
}

void OutputSet::commit(const fs::path& dir) const {
  std::vector<fs::path> created_dirs;
  std::vector<fs::path> created_files;
  const auto rollback = [&] {
    std::error_code ignored;
    for (const auto& f : created_files) fs::remove(f, ignored);
    for (auto it = created_dirs.rbegin(); it != created_dirs.rend(); ++it) fs::remove(*it, ignored);
  };
  const auto make_dirs = [&](const fs::path& target) {
    std::vector<fs::path> missing;
    for (fs::path p = target; !p.empty() && !fs::exists(p); p = p.parent_path()) {
      missing.push_back(p);
      if (p == p.parent_path()) break;
    }
    for (auto it = missing.rbegin(); it != missing.rend(); ++it) {
      fs::create_directory(*it);
      created_dirs.push_back(*it);
    }
  };

  std::vector<std::pair<fs::path, fs::path>> staged;
  try {
    make_dirs(dir);
    for (const auto& [relative, content] : files_) {
      const fs::path final_path = dir / relative;
      make_dirs(final_path.parent_path());
      fs::path temp = final_path;
      temp += ".partial";
      created_files.push_back(temp);
      std::ofstream out(temp, std::ios::binary | std::ios::trunc);
      out << content;
      out.close();
      if (!out) throw std::runtime_error("cannot write " + final_path.string());
      staged.emplace_back(temp, final_path);
    }
    for (const auto& [temp, final_path] : staged) {
      fs::rename(temp, final_path);
      created_files.push_back(final_path);
    }
  } catch (const fs::filesystem_error& e) {
    rollback();
    throw std::runtime_error(e.what());
  } catch (...) {
    rollback();
    throw;
  }
}

}  // namespace carenet::cli
