#pragma once

#include "mvdyn/deciders.hpp"
#include "mvdyn/elimination.hpp"
#include "mvdyn/hash.hpp"
#include "mvdyn/spectrum.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

// File formats. Indices of blocks, maps and points are 1-based on disk and
// 0-based in memory. Complex numbers are [re, im]; a matrix is a flat
// row-major list of complex numbers (nested rows are accepted on input).

namespace mvdyn {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "mvdyn 0.1.0";

namespace io_detail {

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::schema_error, (path.empty() ? std::string("<root>") : path) + ": " + what);
}

inline const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, "missing field \"" + key + "\"");
  return *it;
}

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
inline std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

inline int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

inline double number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

/// -0.0 prints as "-0.0"; canonical files never carry it.
inline double clean(double x) { return x == 0.0 ? 0.0 : x; }

inline std::vector<int> index_list(const Json& j, const std::string& path, int bound) {
  std::vector<int> out;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) {
    const int v = integer(j[i], at(path, i));
    if (v < 1 || v > bound) fail(at(path, i), "index " + std::to_string(v) + " outside 1.." + std::to_string(bound));
    out.push_back(v - 1);
  }
  return out;
}

inline Json one_based(const std::vector<int>& v) {
  Json out = Json::array();
  for (int x : v) out.push_back(x + 1);
  return out;
}

/// Rethrows library errors raised while building an object from `path` with the path prepended.
template <class F>
auto with_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::schema_error) throw;
    throw Error(e.code(), (path.empty() ? std::string("<root>") : path) + ": " + e.detail());
  }
}

}  // namespace io_detail

inline Json complex_to_json(Complex z) { return Json::array({io_detail::clean(z.real()), io_detail::clean(z.imag())}); }

inline Complex complex_from_json(const Json& j, const std::string& path = "") {
  if (!j.is_array() || j.size() != 2) io_detail::fail(path, "expected a complex number [re, im]");
  return {io_detail::number(j[0], io_detail::at(path, 0)), io_detail::number(j[1], io_detail::at(path, 1))};
}

inline Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(complex_to_json(m(i, j)));
  return out;
}

/// Square matrix of side `n`, or of inferred side when n < 0.
inline Matrix matrix_from_json(const Json& j, int n, const std::string& path = "") {
  io_detail::array(j, path);
  const bool nested = !j.empty() && j[0].is_array() && !j[0].empty() && j[0][0].is_array();
  std::vector<Complex> flat;
  if (nested) {
    for (std::size_t r = 0; r < j.size(); ++r) {
      const std::string rp = io_detail::at(path, r);
      io_detail::array(j[r], rp);
      if (j[r].size() != j.size()) io_detail::fail(rp, "row length differs from the number of rows");
      for (std::size_t c = 0; c < j[r].size(); ++c) flat.push_back(complex_from_json(j[r][c], io_detail::at(rp, c)));
    }
  } else {
    for (std::size_t i = 0; i < j.size(); ++i) flat.push_back(complex_from_json(j[i], io_detail::at(path, i)));
  }
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(flat.size()))));
  if (side * side != static_cast<int>(flat.size()) || side == 0)
    io_detail::fail(path, "matrix entry count " + std::to_string(flat.size()) + " is not a positive square");
  if (n >= 0 && side != n)
    io_detail::fail(path, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix, got " +
                              std::to_string(side) + "x" + std::to_string(side));
  Matrix m(side, side);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) m(r, c) = flat[static_cast<std::size_t>(r) * side + c];
  return m;
}

inline Json algebra_to_json(const BlockAlgebra& a) { return Json(a.block_sizes()); }

inline BlockAlgebra algebra_from_json(const Json& j, const std::string& path = "") {
  std::vector<int> sizes;
  for (std::size_t i = 0; i < io_detail::array(j, path).size(); ++i)
    sizes.push_back(io_detail::integer(j[i], io_detail::at(path, i)));
  return io_detail::with_path(path, [&] { return BlockAlgebra(sizes); });
}

inline Json element_to_json(const AlgebraElement& a) {
  Json out = Json::array();
  for (const auto& b : a.blocks()) out.push_back(matrix_to_json(b));
  return out;
}

inline AlgebraElement element_from_json(const Json& j, const BlockAlgebra& alg, const std::string& path = "") {
  io_detail::array(j, path);
  if (static_cast<int>(j.size()) != alg.num_blocks())
    io_detail::fail(path, "expected " + std::to_string(alg.num_blocks()) + " blocks");
  std::vector<Matrix> blocks;
  for (int k = 0; k < alg.num_blocks(); ++k) blocks.push_back(matrix_from_json(j[k], alg.block_size(k), io_detail::at(path, k)));
  return {alg, std::move(blocks)};
}

inline Json isomorphism_to_json(const StarIsomorphism& phi) {
  Json us = Json::array();
  for (const auto& u : phi.unitaries()) us.push_back(matrix_to_json(u));
  return {{"perm", io_detail::one_based(phi.perm())}, {"unitaries", us}};
}

inline StarIsomorphism isomorphism_from_json(const Json& j, const BlockAlgebra& source, const BlockAlgebra& target,
                                             const Tolerances& tol = {}, const std::string& path = "") {
  const int m = target.num_blocks();
  const std::string pp = io_detail::join(path, "perm");
  const std::vector<int> perm = io_detail::index_list(io_detail::field(j, "perm", path), pp, m);
  if (static_cast<int>(perm.size()) != m) io_detail::fail(pp, "expected " + std::to_string(m) + " entries");
  const std::string up = io_detail::join(path, "unitaries");
  const Json& uj = io_detail::array(io_detail::field(j, "unitaries", path), up);
  if (static_cast<int>(uj.size()) != m) io_detail::fail(up, "expected " + std::to_string(m) + " unitaries");
  std::vector<Matrix> us;
  for (int k = 0; k < m; ++k) us.push_back(matrix_from_json(uj[k], target.block_size(k), io_detail::at(up, k)));
  return io_detail::with_path(path, [&] { return StarIsomorphism(source, target, perm, us, tol); });
}

inline Json system_to_json(const MultivariableSystem& s) {
  Json maps = Json::array();
  for (const auto& m : s.maps()) maps.push_back(isomorphism_to_json(m));
  return {{"schema", kSchemaVersion}, {"blocks", algebra_to_json(s.algebra())}, {"maps", maps}, {"arity", s.arity()}};
}

inline void check_schema(const Json& j, const std::string& path = "") {
  if (!j.is_object()) io_detail::fail(path, "expected an object");
  auto it = j.find("schema");
  if (it == j.end()) return;
  if (!it->is_number_integer() || it->get<int>() != kSchemaVersion)
    io_detail::fail(io_detail::join(path, "schema"), "unsupported schema version");
}

inline MultivariableSystem system_from_json(const Json& j, const Tolerances& tol = {}, const std::string& path = "") {
  check_schema(j, path);
  const BlockAlgebra alg = algebra_from_json(io_detail::field(j, "blocks", path), io_detail::join(path, "blocks"));
  const std::string mp = io_detail::join(path, "maps");
  const Json& mj = io_detail::array(io_detail::field(j, "maps", path), mp);
  std::vector<StarIsomorphism> maps;
  for (std::size_t i = 0; i < mj.size(); ++i) maps.push_back(isomorphism_from_json(mj[i], alg, alg, tol, io_detail::at(mp, i)));
  if (j.contains("arity") && io_detail::integer(j["arity"], io_detail::join(path, "arity")) != static_cast<int>(maps.size()))
    io_detail::fail(io_detail::join(path, "arity"), "arity does not match the number of maps");
  return io_detail::with_path(path, [&] { return MultivariableSystem(alg, std::move(maps)); });
}

inline Json spectrum_to_json(const SpectrumDynamicalSystem& s) {
  Json maps = Json::array();
  for (const auto& m : s.maps) maps.push_back(io_detail::one_based(m));
  return {{"schema", kSchemaVersion}, {"labels", s.labels}, {"maps", maps}, {"arity", s.arity()}};
}

inline SpectrumDynamicalSystem spectrum_from_json(const Json& j, const std::string& path = "") {
  check_schema(j, path);
  SpectrumDynamicalSystem s;
  const std::string lp = io_detail::join(path, "labels");
  const Json& lj = io_detail::array(io_detail::field(j, "labels", path), lp);
  for (std::size_t i = 0; i < lj.size(); ++i) s.labels.push_back(io_detail::integer(lj[i], io_detail::at(lp, i)));
  const std::string mp = io_detail::join(path, "maps");
  const Json& mj = io_detail::array(io_detail::field(j, "maps", path), mp);
  for (std::size_t i = 0; i < mj.size(); ++i)
    s.maps.push_back(io_detail::index_list(mj[i], io_detail::at(mp, i), s.points()));
  io_detail::with_path(path, [&] {
    s.validate();
    return 0;
  });
  return s;
}

/// Either a system file (with "blocks") or a spectrum file (with "labels").
inline SpectrumDynamicalSystem spectrum_or_system_from_json(const Json& j, const Tolerances& tol = {}) {
  if (j.is_object() && j.contains("labels")) return spectrum_from_json(j);
  return spectrum_of(system_from_json(j, tol));
}

inline Json representation_to_json(const Representation& r) {
  Json images = Json::array();
  for (const auto& m : r.unit_images()) images.push_back(matrix_to_json(m));
  return {{"dimension", r.dimension()}, {"images", images}};
}

/// {"dimension": d, "images": [...]} (one image per matrix unit) or
/// {"irreps": [k, ...], "unitary": V} for b -> V diag(b_k, ...) V^*.
inline Representation representation_from_json(const Json& j, const BlockAlgebra& alg, const std::string& path = "") {
  if (j.is_object() && j.contains("irreps")) {
    const std::vector<int> irreps =
        io_detail::index_list(j["irreps"], io_detail::join(path, "irreps"), alg.num_blocks());
    int d = 0;
    for (int k : irreps) d += alg.block_size(k);
    Matrix v = Matrix::Identity(d, d);
    if (j.contains("unitary")) v = matrix_from_json(j["unitary"], d, io_detail::join(path, "unitary"));
    return io_detail::with_path(path, [&] { return Representation::from_irreps(alg, irreps, v); });
  }
  const int d = io_detail::integer(io_detail::field(j, "dimension", path), io_detail::join(path, "dimension"));
  const std::string ip = io_detail::join(path, "images");
  const Json& ij = io_detail::array(io_detail::field(j, "images", path), ip);
  std::vector<Matrix> images;
  for (std::size_t i = 0; i < ij.size(); ++i) images.push_back(matrix_from_json(ij[i], d, io_detail::at(ip, i)));
  return io_detail::with_path(path, [&] { return Representation(alg, d, std::move(images)); });
}

inline Json intertwiner_matrix_to_json(const IntertwinerMatrix& m) {
  Json rows = Json::array(), cols = Json::array(), entries = Json::array();
  for (const auto& r : m.row_reps()) rows.push_back(representation_to_json(r));
  for (const auto& r : m.col_reps()) cols.push_back(representation_to_json(r));
  for (const auto& e : m.entries()) entries.push_back(matrix_to_json(e));
  return {{"schema", kSchemaVersion},
          {"blocks", algebra_to_json(m.row_reps().front().algebra())},
          {"row_reps", rows},
          {"col_reps", cols},
          {"entries", entries}};
}

inline IntertwinerMatrix intertwiner_matrix_from_json(const Json& j, const std::string& path = "") {
  check_schema(j, path);
  const BlockAlgebra alg = algebra_from_json(io_detail::field(j, "blocks", path), io_detail::join(path, "blocks"));
  auto reps = [&](const char* key) {
    const std::string p = io_detail::join(path, key);
    const Json& a = io_detail::array(io_detail::field(j, key, path), p);
    std::vector<Representation> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(representation_from_json(a[i], alg, io_detail::at(p, i)));
    return out;
  };
  std::vector<Representation> rows = reps("row_reps");
  std::vector<Representation> cols = reps("col_reps");
  if (rows.empty() || cols.empty()) io_detail::fail(path, "row_reps and col_reps must be nonempty");
  const int d = rows.front().dimension();
  const std::string ep = io_detail::join(path, "entries");
  const Json& ej = io_detail::array(io_detail::field(j, "entries", path), ep);
  if (ej.size() != rows.size() * cols.size()) io_detail::fail(ep, "expected rows x cols entries in row-major order");
  std::vector<Matrix> entries;
  for (std::size_t i = 0; i < ej.size(); ++i) entries.push_back(matrix_from_json(ej[i], d, io_detail::at(ep, i)));
  return io_detail::with_path(path, [&] { return IntertwinerMatrix(std::move(rows), std::move(cols), std::move(entries)); });
}

// ---------------------------------------------------------------------------
// Certificates

inline Json elimination_certificate_to_json(const EliminationCertificate& c) {
  Json ops = Json::array(), diag = Json::array(), steps = Json::array();
  for (const auto& op : c.row_ops)
    ops.push_back({{"target", op.target + 1}, {"pivot", op.pivot + 1}, {"multiplier", matrix_to_json(op.multiplier)}});
  for (const auto& d : c.diagonal) diag.push_back(matrix_to_json(d));
  for (double r : c.step_residuals) steps.push_back(io_detail::clean(r));
  return {{"input_hash", c.input_hash},
          {"column_permutation", io_detail::one_based(c.column_permutation)},
          {"row_ops", ops},
          {"forward_ops", c.forward_ops},
          {"diagonal", diag},
          {"step_residuals", steps}};
}

inline EliminationCertificate elimination_certificate_from_json(const Json& j, int rows, int cols, int d,
                                                                const std::string& path = "payload") {
  using namespace io_detail;
  EliminationCertificate c;
  const Json& h = field(j, "input_hash", path);
  if (!h.is_string()) fail(join(path, "input_hash"), "expected a string");
  c.input_hash = h.get<std::string>();
  c.column_permutation = index_list(field(j, "column_permutation", path), join(path, "column_permutation"), cols);
  const std::string op = join(path, "row_ops");
  const Json& oj = array(field(j, "row_ops", path), op);
  for (std::size_t i = 0; i < oj.size(); ++i) {
    const std::string p = at(op, i);
    RowOperation r;
    r.target = integer(field(oj[i], "target", p), join(p, "target")) - 1;
    r.pivot = integer(field(oj[i], "pivot", p), join(p, "pivot")) - 1;
    if (r.target < 0 || r.target >= rows || r.pivot < 0 || r.pivot >= rows) fail(p, "row index out of range");
    r.multiplier = matrix_from_json(field(oj[i], "multiplier", p), d, join(p, "multiplier"));
    c.row_ops.push_back(std::move(r));
  }
  c.forward_ops = static_cast<std::size_t>(integer(field(j, "forward_ops", path), join(path, "forward_ops")));
  const std::string dp = join(path, "diagonal");
  const Json& dj = array(field(j, "diagonal", path), dp);
  for (std::size_t i = 0; i < dj.size(); ++i) c.diagonal.push_back(matrix_from_json(dj[i], d, at(dp, i)));
  if (j.contains("step_residuals"))
    for (const auto& r : array(j["step_residuals"], join(path, "step_residuals"))) c.step_residuals.push_back(r.get<double>());
  return c;
}

inline Json outer_certificate_to_json(const OuterConjugacyCertificate& c) {
  Json us = Json::array();
  for (const auto& u : c.unitaries) us.push_back(element_to_json(u));
  return {{"gamma", isomorphism_to_json(c.gamma)}, {"permutation", io_detail::one_based(c.permutation)}, {"unitaries", us}};
}

inline OuterConjugacyCertificate outer_certificate_from_json(const Json& j, const MultivariableSystem& a,
                                                             const MultivariableSystem& b, const Tolerances& tol = {},
                                                             const std::string& path = "payload") {
  using namespace io_detail;
  OuterConjugacyCertificate c{isomorphism_from_json(field(j, "gamma", path), a.algebra(), b.algebra(), tol, join(path, "gamma")),
                              index_list(field(j, "permutation", path), join(path, "permutation"), a.arity()),
                              {}};
  const std::string up = join(path, "unitaries");
  const Json& uj = array(field(j, "unitaries", path), up);
  for (std::size_t i = 0; i < uj.size(); ++i) c.unitaries.push_back(element_from_json(uj[i], b.algebra(), at(up, i)));
  return c;
}

inline Json element_matrix_to_json(const ElementMatrix& m) {
  Json entries = Json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) entries.push_back(element_to_json(m.at(i, j)));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

inline ElementMatrix element_matrix_from_json(const Json& j, const BlockAlgebra& alg, const std::string& path = "") {
  using namespace io_detail;
  const int rows = integer(field(j, "rows", path), join(path, "rows"));
  const int cols = integer(field(j, "cols", path), join(path, "cols"));
  if (rows < 1 || cols < 1) fail(path, "rows and cols must be positive");
  const std::string ep = join(path, "entries");
  const Json& ej = array(field(j, "entries", path), ep);
  if (ej.size() != static_cast<std::size_t>(rows) * cols) fail(ep, "expected rows x cols entries in row-major order");
  ElementMatrix m(alg, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) {
      const std::size_t idx = static_cast<std::size_t>(i) * cols + c;
      m.at(i, c) = element_from_json(ej[idx], alg, at(ep, idx));
    }
  return m;
}

inline Json unitary_equivalence_certificate_to_json(const UnitaryEquivalenceCertificate& c) {
  return {{"gamma", isomorphism_to_json(c.gamma)}, {"matrix", element_matrix_to_json(c.matrix)}};
}

inline UnitaryEquivalenceCertificate unitary_equivalence_certificate_from_json(const Json& j, const MultivariableSystem& a,
                                                                               const MultivariableSystem& b,
                                                                               const Tolerances& tol = {},
                                                                               const std::string& path = "payload") {
  using namespace io_detail;
  return {isomorphism_from_json(field(j, "gamma", path), a.algebra(), b.algebra(), tol, join(path, "gamma")),
          element_matrix_from_json(field(j, "matrix", path), b.algebra(), join(path, "matrix"))};
}

inline Json piecewise_certificate_to_json(const PiecewiseCertificate& c) {
  Json assignment = Json::array();
  for (const auto& g : c.assignment) assignment.push_back(io_detail::one_based(g));
  return {{"bijection", io_detail::one_based(c.bijection)}, {"assignment", assignment}};
}

inline PiecewiseCertificate piecewise_certificate_from_json(const Json& j, int points, int arity,
                                                            const std::string& path = "payload") {
  using namespace io_detail;
  PiecewiseCertificate c;
  c.bijection = index_list(field(j, "bijection", path), join(path, "bijection"), points);
  const std::string ap = join(path, "assignment");
  const Json& aj = array(field(j, "assignment", path), ap);
  for (std::size_t i = 0; i < aj.size(); ++i) c.assignment.push_back(index_list(aj[i], at(ap, i), arity));
  return c;
}

/// Envelope shared by all certificate kinds.
struct CertificateFile {
  std::string kind;  // elimination | outer | unitary-equivalence | piecewise
  Json payload;
  Json residuals = Json::object();
  std::string tool_version = kToolVersion;
  /// Role name ("input", "a", "b", ...) to the hash of the canonical input.
  Json input_hashes = Json::object();
};

inline Json certificate_file_to_json(const CertificateFile& c) {
  return {{"schema", kSchemaVersion},       {"kind", c.kind},
          {"payload", c.payload},           {"residuals", c.residuals},
          {"tool_version", c.tool_version}, {"input_hashes", c.input_hashes}};
}

inline CertificateFile certificate_file_from_json(const Json& j) {
  using namespace io_detail;
  check_schema(j);
  CertificateFile c;
  const Json& kind = field(j, "kind", "");
  if (!kind.is_string()) fail("kind", "expected a string");
  c.kind = kind.get<std::string>();
  if (c.kind != "elimination" && c.kind != "outer" && c.kind != "unitary-equivalence" && c.kind != "piecewise")
    fail("kind", "unknown certificate kind \"" + c.kind + "\"");
  c.payload = field(j, "payload", "");
  if (j.contains("residuals")) c.residuals = j["residuals"];
  if (j.contains("tool_version") && j["tool_version"].is_string()) c.tool_version = j["tool_version"].get<std::string>();
  c.input_hashes = field(j, "input_hashes", "");
  if (!c.input_hashes.is_object()) fail("input_hashes", "expected an object");
  return c;
}

// ---------------------------------------------------------------------------
// Text and files

namespace io_detail {

inline bool contains_object(const Json& j) {
  if (j.is_object()) return true;
  if (j.is_array())
    for (const auto& x : j)
      if (contains_object(x)) return true;
  return false;
}

inline void print(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  if (j.is_object() && !j.empty()) {
    out += "{\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      out += pad + Json(it.key()).dump() + ": ";
      print(it.value(), indent + 2, out);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += std::string(static_cast<std::size_t>(indent), ' ') + "}";
  } else if (j.is_array() && contains_object(j)) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += pad;
      print(j[i], indent + 2, out);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += std::string(static_cast<std::size_t>(indent), ' ') + "]";
  } else {
    out += j.dump();
  }
}

}  // namespace io_detail

/// Canonical text: sorted keys (nlohmann's default object order), objects
/// one key per line, object-free arrays on a single line, shortest
/// round-trip doubles, trailing newline.
inline std::string canonical_dump(const Json& j) {
  std::string out;
  io_detail::print(j, 0, out);
  return out + "\n";
}

/// Hash of the compact canonical form, independent of whitespace in the source file.
inline std::string json_hash(const Json& j) { return fnv1a_hex(j.dump()); }

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::io_error, "write failed for " + path);
}

/// Parses JSON text; syntax errors report line and column.
inline Json parse_json_text(const std::string& text, const std::string& name = "<input>") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorCode::schema_error,
                name + ":" + std::to_string(line) + ":" + std::to_string(column) + ": malformed JSON");
  }
}

inline Json read_json_file(const std::string& path) { return parse_json_text(read_text_file(path), path); }

/// Prefixes schema and invariant errors with the file name.
template <class F>
auto with_file(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.detail().rfind(path, 0) == 0) throw;
    throw Error(e.code(), path + ": " + e.detail());
  }
}

inline MultivariableSystem parse_system(const std::string& path, const Tolerances& tol = {}) {
  const Json j = read_json_file(path);
  return with_file(path, [&] { return system_from_json(j, tol); });
}

inline std::string emit_system(const MultivariableSystem& s) { return canonical_dump(system_to_json(s)); }

}  // namespace mvdyn
