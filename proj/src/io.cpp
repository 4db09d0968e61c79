#include "sbk/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sbk {

namespace {

constexpr char kMagic[8] = {'S', 'B', 'K', 'P', 'R', 'O', 'B', '\0'};
constexpr std::uint32_t kVersion = 1;

void put_u64(std::ostream& os, std::uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); }
void put_u32(std::ostream& os, std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void put_u8(std::ostream& os, std::uint8_t v) { os.write(reinterpret_cast<const char*>(&v), 1); }
void put_f64(std::ostream& os, double v) { os.write(reinterpret_cast<const char*>(&v), 8); }

std::uint64_t get_u64(std::istream& is) {
  std::uint64_t v;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}
std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}
std::uint8_t get_u8(std::istream& is) {
  std::uint8_t v;
  is.read(reinterpret_cast<char*>(&v), 1);
  return v;
}
double get_f64(std::istream& is) {
  double v;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}

void put_array(std::ostream& os, const double* data, std::uint64_t count) {
  put_u64(os, count);
  os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * 8));
}

std::vector<double> get_array(std::istream& is) {
  const std::uint64_t count = get_u64(is);
  std::vector<double> data(count);
  is.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(count * 8));
  if (!is) throw std::runtime_error("problem file truncated");
  return data;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream os(path, mode);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  return os;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream is(path, mode);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  return is;
}

// skips PNM whitespace and '#' comment lines
int pnm_next_int(std::istream& is) {
  int c = is.get();
  while (c != EOF && (std::isspace(c) || c == '#')) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = is.get();
    }
    c = is.get();
  }
  if (c == EOF) throw std::runtime_error("greymap header truncated");
  int value = 0;
  bool any = false;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    any = true;
    c = is.get();
  }
  if (!any) throw std::runtime_error("greymap header malformed");
  return value;
}

}  // namespace

void save_problem(const std::string& path, const QuadraticSystem& sys) {
  auto os = open_out(path, std::ios::binary);
  os.write(kMagic, 8);
  put_u32(os, kVersion);
  put_u8(os, 0);  // quadratic
  put_u8(os, sys.kind() == MatrixKind::gaussian ? 0 : 1);
  put_u64(os, sys.seed());
  put_u64(os, static_cast<std::uint64_t>(sys.rows()));
  put_u64(os, static_cast<std::uint64_t>(sys.cols()));
  put_f64(os, sys.sparsity());
  put_array(os, sys.raw_stack().data(), static_cast<std::uint64_t>(sys.raw_stack().size()));
  put_array(os, sys.lin_terms().data(), static_cast<std::uint64_t>(sys.lin_terms().size()));
  put_array(os, sys.const_terms().data(), static_cast<std::uint64_t>(sys.const_terms().size()));
  put_array(os, sys.ground_truth().data(), static_cast<std::uint64_t>(sys.ground_truth().size()));
  put_u64(os, static_cast<std::uint64_t>(sys.omegas().size()));
  for (const auto& omega : sys.omegas())
    put_array(os, omega.data(), static_cast<std::uint64_t>(omega.size()));
  if (!os) throw std::runtime_error("failed writing problem file: " + path);
}

void save_problem(const std::string& path, const LinearSystem& sys) {
  auto os = open_out(path, std::ios::binary);
  os.write(kMagic, 8);
  put_u32(os, kVersion);
  put_u8(os, 1);  // linear
  put_u8(os, 0);
  put_u64(os, sys.seed());
  put_u64(os, static_cast<std::uint64_t>(sys.rows()));
  put_u64(os, static_cast<std::uint64_t>(sys.cols()));
  put_f64(os, sys.noise_level());
  put_array(os, sys.sensing().data(), static_cast<std::uint64_t>(sys.sensing().size()));
  put_array(os, sys.rhs().data(), static_cast<std::uint64_t>(sys.rhs().size()));
  put_array(os, sys.ground_truth().data(), static_cast<std::uint64_t>(sys.ground_truth().size()));
  if (!os) throw std::runtime_error("failed writing problem file: " + path);
}

void save_problem(const std::string& path, const StoredProblem& problem) {
  std::visit([&](const auto& sys) { save_problem(path, sys); }, problem);
}

StoredProblem load_problem(const std::string& path) {
  auto is = open_in(path, std::ios::binary);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("not a problem file: " + path);
  if (get_u32(is) != kVersion) throw std::runtime_error("unsupported problem file version");
  const std::uint8_t type = get_u8(is);
  const std::uint8_t kind = get_u8(is);
  const std::uint64_t seed = get_u64(is);
  const auto m = static_cast<Eigen::Index>(get_u64(is));
  const auto n = static_cast<Eigen::Index>(get_u64(is));
  const double scalar = get_f64(is);

  if (type == 0) {
    const std::vector<double> raw = get_array(is);
    const std::vector<double> lins = get_array(is);
    const std::vector<double> consts = get_array(is);
    const std::vector<double> truth = get_array(is);
    const std::uint64_t omega_count = get_u64(is);
    std::vector<Eigen::VectorXd> omegas;
    for (std::uint64_t i = 0; i < omega_count; ++i) {
      const std::vector<double> w = get_array(is);
      omegas.push_back(Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())));
    }
    if (static_cast<Eigen::Index>(raw.size()) != m * n * n ||
        static_cast<Eigen::Index>(lins.size()) != m * n ||
        static_cast<Eigen::Index>(consts.size()) != m ||
        static_cast<Eigen::Index>(truth.size()) != n)
      throw std::runtime_error("problem file arrays have wrong sizes");
    return QuadraticSystem(
        Eigen::Map<const Eigen::MatrixXd>(raw.data(), m * n, n),
        Eigen::Map<const Eigen::MatrixXd>(lins.data(), n, m),
        Eigen::Map<const Eigen::VectorXd>(consts.data(), m),
        Eigen::Map<const Eigen::VectorXd>(truth.data(), n),
        kind == 0 ? MatrixKind::gaussian : MatrixKind::dct, std::move(omegas), seed, scalar);
  }
  if (type == 1) {
    const std::vector<double> sensing = get_array(is);
    const std::vector<double> rhs = get_array(is);
    const std::vector<double> truth = get_array(is);
    if (static_cast<Eigen::Index>(sensing.size()) != m * n ||
        static_cast<Eigen::Index>(rhs.size()) != m ||
        static_cast<Eigen::Index>(truth.size()) != n)
      throw std::runtime_error("problem file arrays have wrong sizes");
    return LinearSystem(Eigen::Map<const Eigen::MatrixXd>(sensing.data(), m, n),
                        Eigen::Map<const Eigen::VectorXd>(rhs.data(), m),
                        Eigen::Map<const Eigen::VectorXd>(truth.data(), n), scalar, seed);
  }
  throw std::runtime_error("unknown problem type in file");
}

const SystemView& problem_view(const StoredProblem& problem) {
  return std::visit([](const auto& sys) -> const SystemView& { return sys; }, problem);
}

const Eigen::VectorXd& problem_ground_truth(const StoredProblem& problem) {
  return std::visit([](const auto& sys) -> const Eigen::VectorXd& { return sys.ground_truth(); },
                    problem);
}

Eigen::MatrixXd read_greymap(const std::string& path) {
  auto is = open_in(path, std::ios::binary);
  char m0 = 0, m1 = 0;
  is.get(m0);
  is.get(m1);
  if (!is) throw std::runtime_error("greymap header truncated: " + path);

  if (m0 == 'P' && (m1 == '2' || m1 == '5')) {
    const int width = pnm_next_int(is);
    const int height = pnm_next_int(is);
    const int maxval = pnm_next_int(is);
    if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535)
      throw std::runtime_error("unsupported greymap geometry");
    Eigen::MatrixXd img(height, width);
    if (m1 == '2') {
      for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) img(r, c) = pnm_next_int(is);
    } else {
      // single whitespace byte after maxval already consumed by pnm_next_int
      const int bytes = maxval > 255 ? 2 : 1;
      std::vector<unsigned char> buf(static_cast<std::size_t>(width) * height * bytes);
      is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
      if (!is) throw std::runtime_error("greymap pixel data truncated");
      std::size_t k = 0;
      for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
          if (bytes == 1) img(r, c) = buf[k++];
          else {
            img(r, c) = buf[k] * 256.0 + buf[k + 1];  // 16-bit samples are big-endian
            k += 2;
          }
        }
    }
    return img;
  }

  if (m0 == 'P' && m1 == 'f') {
    const int width = pnm_next_int(is);
    const int height = pnm_next_int(is);
    std::string scale_token;
    is >> scale_token;
    is.get();  // the single whitespace before the raster
    const double scale = std::stod(scale_token);
    std::vector<float> buf(static_cast<std::size_t>(width) * height);
    is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * 4));
    if (!is) throw std::runtime_error("greymap pixel data truncated");
    if (scale > 0) {  // big-endian floats
      for (auto& f : buf) {
        unsigned char* b = reinterpret_cast<unsigned char*>(&f);
        std::swap(b[0], b[3]);
        std::swap(b[1], b[2]);
      }
    }
    Eigen::MatrixXd img(height, width);
    // PFM rasters run bottom-up
    for (int r = 0; r < height; ++r)
      for (int c = 0; c < width; ++c)
        img(height - 1 - r, c) = buf[static_cast<std::size_t>(r) * width + c];
    return img;
  }

  throw std::runtime_error("unsupported greymap magic in " + path);
}

void write_pgm(const std::string& path, const Eigen::MatrixXd& img) {
  if (img.size() == 0) throw std::invalid_argument("write_pgm: empty image");
  auto os = open_out(path, std::ios::binary);
  os << "P5\n" << img.cols() << " " << img.rows() << "\n255\n";
  for (Eigen::Index r = 0; r < img.rows(); ++r)
    for (Eigen::Index c = 0; c < img.cols(); ++c) {
      const double v = std::min(1.0, std::max(0.0, img(r, c)));
      os.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
    }
  if (!os) throw std::runtime_error("failed writing image: " + path);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back;
    std::sscanf(buf, "%lf", &back);
    if (back == v) return buf;
  }
  return "0";
}

void write_report_csv(const std::string& path, const SolveReport& report) {
  std::ostringstream os;
  const bool breg = report.bregman_history.has_value();
  os << "iteration,relative_residual" << (breg ? ",bregman_distance" : "") << "\n";
  for (std::size_t k = 0; k < report.residual_history.size(); ++k) {
    os << k << "," << format_double(report.residual_history[k]);
    if (breg) os << "," << format_double((*report.bregman_history)[k]);
    os << "\n";
  }
  write_text_file(path, os.str());
}

nlohmann::ordered_json report_json(const SolveReport& report, const SolverConfig& config,
                                   Eigen::Index m, Eigen::Index n) {
  nlohmann::ordered_json j;
  j["method"] = method_name(report.method);
  j["m"] = m;
  j["n"] = n;
  nlohmann::ordered_json params;
  params["delta"] = config.delta;
  params["gamma"] = config.gamma;
  params["block_size"] =
      config.block_size > 0 ? config.block_size
                            : (config.method == Method::scbnb ? default_block_size(n) : 0);
  params["lambda"] = config.lambda;
  params["tol"] = config.tol;
  params["max_iters"] = config.max_iters;
  params["seed"] = config.seed;
  params["init"] = config.init == SolverConfig::Init::zero
                       ? "zero"
                       : (config.init == SolverConfig::Init::given ? "given" : "normal");
  j["params"] = params;
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  j["final_relative_residual"] = report.final_relative_residual;
  j["skipped_steps"] = report.skipped_steps;
  j["degenerate_steps"] = report.degenerate_steps;
  j["cpu_seconds"] = report.wall_time;
  return j;
}

void write_comparison_csv(const std::string& path, const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  os << "method,m,n,sp,median_it,median_cpu,failed,converged_trials,trials\n";
  for (const auto& row : rows) {
    os << method_name(row.method) << "," << row.m << "," << row.n << "," << format_double(row.sp)
       << ",";
    if (row.failed || row.converged_trials == 0) os << "--,--";
    else os << format_double(row.median_it) << "," << format_double(row.median_cpu);
    os << "," << (row.failed ? 1 : 0) << "," << row.converged_trials << "," << row.trials << "\n";
  }
  write_text_file(path, os.str());
}

nlohmann::ordered_json comparison_json(const std::vector<ComparisonRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json j;
    j["method"] = method_name(row.method);
    j["m"] = row.m;
    j["n"] = row.n;
    j["sp"] = row.sp;
    j["failed"] = row.failed;
    if (row.converged_trials > 0 && !row.failed) {
      j["median_it"] = row.median_it;
      j["median_cpu"] = row.median_cpu;
    } else {
      j["median_it"] = nullptr;
      j["median_cpu"] = nullptr;
    }
    j["converged_trials"] = row.converged_trials;
    j["trials"] = row.trials;
    arr.push_back(std::move(j));
  }
  return arr;
}

void write_success_csv(const std::string& path, const std::vector<SuccessCell>& cells) {
  std::ostringstream os;
  os << "method,n,sp,successes,trials,success_rate\n";
  for (const auto& cell : cells)
    os << method_name(cell.method) << "," << cell.n << "," << format_double(cell.sp) << ","
       << cell.successes << "," << cell.trials << "," << format_double(cell.rate) << "\n";
  write_text_file(path, os.str());
}

nlohmann::ordered_json success_json(const std::vector<SuccessCell>& cells) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& cell : cells) {
    nlohmann::ordered_json j;
    j["method"] = method_name(cell.method);
    j["n"] = cell.n;
    j["sp"] = cell.sp;
    j["successes"] = cell.successes;
    j["trials"] = cell.trials;
    j["success_rate"] = cell.rate;
    arr.push_back(std::move(j));
  }
  return arr;
}

void write_text_file(const std::string& path, const std::string& contents) {
  auto os = open_out(path, std::ios::binary);
  os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!os) throw std::runtime_error("failed writing: " + path);
}

std::string read_text_file(const std::string& path) {
  auto is = open_in(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace sbk
