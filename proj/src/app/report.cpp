#include "repp/report.hpp"

#include "repp/errors.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>
#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace repp {

namespace {

std::string to_hex(const unsigned char* data, unsigned len) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(kDigits[data[i] >> 4]);
    out.push_back(kDigits[data[i] & 15]);
  }
  return out;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw StateError("SHA-256 digest failed");
  return to_hex(md.data(), len);
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_text_file(path)); }

nlohmann::json version_info() {
  return {{"repp", kVersion},
          {"boost", std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000) +
                        "." + std::to_string(BOOST_VERSION % 100)},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                       "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

nlohmann::json TestEntry::to_json() const {
  nlohmann::json j = report.to_json();
  j["skipped"] = skipped;
  j["pass"] = skipped || report.pass();
  if (!note.empty()) j["note"] = note;
  return j;
}

RunReport::RunReport(std::string command, const std::string& canonical_config,
                     std::optional<std::uint64_t> seed)
    : command_(std::move(command)), config_hash_(sha256_hex(canonical_config)), seed_(seed) {}

void RunReport::add_output(const std::filesystem::path& out_dir, const std::filesystem::path& file) {
  outputs_.emplace_back(std::filesystem::relative(file, out_dir).generic_string(), sha256_file(file));
}

void RunReport::add_test(GofReport report, std::string note) {
  tests_.push_back({std::move(report), false, std::move(note)});
}

void RunReport::add_skipped(std::string test, std::string reason) {
  GofReport r;
  r.test = std::move(test);
  tests_.push_back({r, true, std::move(reason)});
}

bool RunReport::pass() const {
  for (const auto& t : tests_)
    if (!t.skipped && !t.report.pass()) return false;
  return true;
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["command"] = command_;
  j["config_hash"] = config_hash_;
  j["versions"] = version_info();
  j["seed"] = seed_ ? nlohmann::json(*seed_) : nlohmann::json(nullptr);
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& [path, hash] : outputs_) outs.push_back({{"path", path}, {"sha256", hash}});
  j["outputs"] = outs;
  nlohmann::json tests = nlohmann::json::array();
  for (const auto& t : tests_) tests.push_back(t.to_json());
  j["tests"] = tests;
  j["data"] = data_;
  j["pass"] = pass();
  return j;
}

std::filesystem::path RunReport::write(const std::filesystem::path& out_dir, const std::string& name) const {
  const auto path = out_dir / name;
  write_text_file(path, to_json().dump(2) + "\n");
  return path;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string scatter_svg(const PointMeasure& pm, const Window& window, const ScatterStyle& style) {
  const double left = 50.0, right = 15.0, top = 30.0, bottom = 40.0;
  const double pw = style.width - left - right;
  const double ph = style.height - top - bottom;
  const double xmax = window.horizon > 0.0 ? window.horizon : 1.0;
  const double ymax = window.mark_cap > 0.0 ? window.mark_cap : 1.0;
  auto px = [&](double t) { return left + pw * t / xmax; };
  auto py = [&](double y) { return top + ph * (1.0 - y / ymax); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(style.width)
      << "\" height=\"" << fmt(style.height) << "\" viewBox=\"0 0 " << fmt(style.width) << ' '
      << fmt(style.height) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << fmt(style.width) << "\" height=\"" << fmt(style.height)
      << "\" fill=\"white\"/>\n";
  if (!style.title.empty())
    svg << "<text x=\"" << fmt(style.width / 2) << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">"
        << escape_xml(style.title) << "</text>\n";
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top + ph) << "\" x2=\"" << fmt(left + pw) << "\" y2=\""
      << fmt(top + ph) << "\"/>\n"
      << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(left) << "\" y2=\""
      << fmt(top + ph) << "\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xt = xmax * k / 4.0, yt = ymax * k / 4.0;
    svg << "<line x1=\"" << fmt(px(xt)) << "\" y1=\"" << fmt(top + ph) << "\" x2=\"" << fmt(px(xt))
        << "\" y2=\"" << fmt(top + ph + 4) << "\"/>\n"
        << "<line x1=\"" << fmt(left - 4) << "\" y1=\"" << fmt(py(yt)) << "\" x2=\"" << fmt(left) << "\" y2=\""
        << fmt(py(yt)) << "\"/>\n";
  }
  svg << "</g>\n<g font-size=\"10\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double xt = xmax * k / 4.0, yt = ymax * k / 4.0;
    svg << "<text x=\"" << fmt(px(xt)) << "\" y=\"" << fmt(top + ph + 15) << "\" text-anchor=\"middle\">"
        << tick_label(xt) << "</text>\n"
        << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(py(yt) + 3) << "\" text-anchor=\"end\">"
        << tick_label(yt) << "</text>\n";
  }
  svg << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(style.height - 6)
      << "\" text-anchor=\"middle\">" << escape_xml(style.x_label) << "</text>\n"
      << "<text x=\"12\" y=\"" << fmt(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 12 "
      << fmt(top + ph / 2) << ")\">" << escape_xml(style.y_label) << "</text>\n</g>\n";
  svg << "<g fill=\"steelblue\">\n";
  for (std::size_t i = 0; i < pm.size(); ++i) {
    if (pm.mark_dim() == 0) continue;
    const double t = pm.time(i), y = pm.mark(i);
    if (t < 0.0 || t >= xmax || y < 0.0 || y > ymax) continue;
    svg << "<circle cx=\"" << fmt(px(t)) << "\" cy=\"" << fmt(py(y)) << "\" r=\"2\"/>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace repp
