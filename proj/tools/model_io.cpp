#include "model_io.hpp"

#include <fstream>
#include <sstream>

#include "krglm/error.hpp"
#include "table.hpp"

namespace krglm::cli {

std::string serialize_model(const FittedModel& m) {
  std::ostringstream os;
  os << "krglm-model " << kModelFormatVersion << '\n'
     << "family " << family_name(m.family) << '\n'
     << "kernel " << kernel_name(m.kernel) << '\n'
     << "degree " << m.kernel.degree << '\n'
     << "lambda " << fmt(m.lambda) << '\n'
     << "converged " << (m.converged ? 1 : 0) << '\n'
     << "iterations " << m.iterations << '\n'
     << "objective " << fmt(m.objective()) << '\n'
     << "rows " << m.train_x.rows() << '\n'
     << "cols " << m.train_x.cols() << '\n';
  for (std::size_t i = 0; i < m.train_x.rows(); ++i) {
    os << fmt(m.alpha[i]);
    for (double v : m.train_x.row(i)) os << ' ' << fmt(v);
    os << '\n';
  }
  return os.str();
}

namespace {

template <class T>
T field(std::istream& in, const std::string& key) {
  std::string k;
  T v{};
  if (!(in >> k) || k != key || !(in >> v))
    throw InputError("model file: expected field '" + key + "'");
  return v;
}

}  // namespace

FittedModel parse_model(const std::string& text) {
  std::istringstream in(text);
  const int version = field<int>(in, "krglm-model");
  if (version != kModelFormatVersion)
    throw InputError("model file: unsupported format version " + std::to_string(version));
  FittedModel m;
  m.family = parse_family(field<std::string>(in, "family"));
  const auto kname = field<std::string>(in, "kernel");
  const int degree = field<int>(in, "degree");
  m.kernel = parse_kernel(kname.substr(0, kname.find(':')), degree);
  m.lambda = field<double>(in, "lambda");
  m.converged = field<int>(in, "converged") != 0;
  m.iterations = field<int>(in, "iterations");
  m.objective_trace = {field<double>(in, "objective")};
  const auto n = field<std::size_t>(in, "rows");
  const auto d = field<std::size_t>(in, "cols");
  m.alpha.resize(n);
  std::vector<double> x(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(in >> m.alpha[i])) throw InputError("model file: truncated at row " + std::to_string(i));
    for (std::size_t j = 0; j < d; ++j)
      if (!(in >> x[i * d + j]))
        throw InputError("model file: truncated at row " + std::to_string(i));
  }
  m.train_x = Dataset(n, d, std::move(x));
  return m;
}

void save_model(const std::string& path, const FittedModel& m) {
  write_file(path, serialize_model(m));
}

FittedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open model file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

}  // namespace krglm::cli
