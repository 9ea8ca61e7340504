#include "ccpir/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccpir {

DistributionTable::DistributionTable(std::vector<Column> columns) : cols_(std::move(columns)) {
  strides_.resize(cols_.size());
  uint64_t stride = 1;
  for (size_t i = 0; i < cols_.size(); ++i) {
    if (cols_[i].radix == 0) throw std::invalid_argument("column radix must be positive");
    strides_[i] = stride;
    if (stride > (uint64_t(1) << 62) / cols_[i].radix)
      throw std::overflow_error("distribution table key space exceeds 2^62");
    stride *= cols_[i].radix;
  }
}

int DistributionTable::column_index(const std::string& name) const {
  for (size_t i = 0; i < cols_.size(); ++i)
    if (cols_[i].name == name) return int(i);
  throw std::invalid_argument("no such column: " + name);
}

uint64_t DistributionTable::pack(const std::vector<uint64_t>& values) const {
  if (values.size() != cols_.size()) throw std::invalid_argument("row width mismatch");
  uint64_t key = 0;
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= cols_[i].radix)
      throw std::invalid_argument("value out of radix for column " + cols_[i].name);
    key += values[i] * strides_[i];
  }
  return key;
}

std::vector<uint64_t> DistributionTable::unpack(uint64_t key) const {
  std::vector<uint64_t> values(cols_.size());
  for (size_t i = 0; i < cols_.size(); ++i) {
    values[i] = (key / strides_[i]) % cols_[i].radix;
  }
  return values;
}

void DistributionTable::add(const std::vector<uint64_t>& values, uint64_t count) {
  add_packed(pack(values), count);
}

void DistributionTable::merge(const DistributionTable& other) {
  if (other.cols_.size() != cols_.size()) throw std::invalid_argument("merge schema mismatch");
  for (auto& [key, count] : other.counts_) counts_[key] += count;
  total_ += other.total_;
}

Rational DistributionTable::probability(uint64_t key) const {
  auto it = counts_.find(key);
  if (it == counts_.end()) return Rational(0);
  return Rational(it->second, total_);
}

uint64_t DistributionTable::project(uint64_t key, const std::vector<int>& cols) const {
  // Re-packs the selected digits contiguously; column order in `cols` fixes
  // the projected radix layout.
  uint64_t out = 0, stride = 1;
  for (int c : cols) {
    uint64_t digit = (key / strides_[size_t(c)]) % cols_[size_t(c)].radix;
    out += digit * stride;
    stride *= cols_[size_t(c)].radix;
  }
  return out;
}

DistributionTable DistributionTable::marginal(const std::vector<int>& cols) const {
  std::vector<Column> mcols;
  for (int c : cols) mcols.push_back(cols_[size_t(c)]);
  DistributionTable out(std::move(mcols));
  for (auto& [key, count] : counts_) out.add_packed(project(key, cols), count);
  return out;
}

namespace {
double entropy_of_counts(const std::unordered_map<uint64_t, uint64_t>& counts, uint64_t total) {
  // H = (1/T) sum c log2(T/c), from exact counts. Dividing inside the log
  // keeps the deterministic case at exactly zero.
  double acc = 0.0;
  for (auto& [key, c] : counts) acc += double(c) * std::log2(double(total) / double(c));
  return acc / double(total);
}
}  // namespace

double DistributionTable::entropy(const std::vector<int>& cols) const {
  if (cols.empty()) throw std::invalid_argument("entropy needs at least one variable");
  if (total_ == 0) throw std::logic_error("entropy of empty table");
  std::unordered_map<uint64_t, uint64_t> m;
  for (auto& [key, count] : counts_) m[project(key, cols)] += count;
  return entropy_of_counts(m, total_);
}

double DistributionTable::entropy_all() const {
  if (total_ == 0) throw std::logic_error("entropy of empty table");
  return entropy_of_counts(counts_, total_);
}

double DistributionTable::conditional_entropy(const std::vector<int>& y,
                                              const std::vector<int>& x) const {
  // Group rows by x, accumulate per-group joint counts over y.
  std::unordered_map<uint64_t, std::unordered_map<uint64_t, uint64_t>> groups;
  for (auto& [key, count] : counts_)
    groups[project(key, x)][project(key, y)] += count;
  double h = 0.0;
  for (auto& [xkey, ycounts] : groups) {
    uint64_t group_total = 0;
    for (auto& [ykey, c] : ycounts) group_total += c;
    h += double(group_total) / double(total_) * entropy_of_counts(ycounts, group_total);
  }
  return h;
}

DistributionTable::MiResult DistributionTable::mutual_information(
    const std::vector<int>& x, const std::vector<int>& y, const std::vector<int>& z) const {
  for (int cx : x)
    for (int cy : y)
      if (cx == cy) throw std::invalid_argument("MI column sets must be disjoint");
  for (int cz : z)
    for (int c : x)
      if (c == cz) throw std::invalid_argument("MI column sets must be disjoint");
  for (int cz : z)
    for (int c : y)
      if (c == cz) throw std::invalid_argument("MI column sets must be disjoint");

  std::vector<int> xyz(x), xz(x), yz(y);
  xyz.insert(xyz.end(), y.begin(), y.end());
  xyz.insert(xyz.end(), z.begin(), z.end());
  xz.insert(xz.end(), z.begin(), z.end());
  yz.insert(yz.end(), z.begin(), z.end());

  // Marginalize onto x, y, z first; any columns beyond them are summed out.
  DistributionTable joint = marginal(xyz);
  std::vector<int> jx(x.size()), jy(y.size()), jz(z.size());
  for (size_t i = 0; i < x.size(); ++i) jx[i] = int(i);
  for (size_t i = 0; i < y.size(); ++i) jy[i] = int(x.size() + i);
  for (size_t i = 0; i < z.size(); ++i) jz[i] = int(x.size() + y.size() + i);
  std::vector<int> jxz(jx), jyz(jy);
  jxz.insert(jxz.end(), jz.begin(), jz.end());
  jyz.insert(jyz.end(), jz.begin(), jz.end());

  std::unordered_map<uint64_t, uint64_t> c_xz, c_yz, c_z;
  for (auto& [key, count] : joint.rows()) {
    c_xz[joint.project(key, jxz)] += count;
    c_yz[joint.project(key, jyz)] += count;
    c_z[joint.project(key, jz)] += count;
  }

  // Exact zero test: counts factorize row by row. With T = total this is
  // c(xyz) * c(z) == c(xz) * c(yz), all in integers.
  bool zero = true;
  double bits = 0.0;
  for (auto& [key, count] : joint.rows()) {
    unsigned __int128 lhs = (unsigned __int128)count * c_z[joint.project(key, jz)];
    unsigned __int128 rhs =
        (unsigned __int128)c_xz[joint.project(key, jxz)] * c_yz[joint.project(key, jyz)];
    if (lhs != rhs) zero = false;
    bits += double(count) * std::log2(double(lhs) / double(rhs));
  }
  if (zero) return {true, 0.0};
  return {false, bits / double(total_)};
}

void DistributionTable::write_csv(std::ostream& os) const {
  for (auto& col : cols_) os << col.name << ",";
  os << "p_num,p_den\n";
  std::vector<uint64_t> keys;
  keys.reserve(counts_.size());
  for (auto& [key, count] : counts_) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  for (uint64_t key : keys) {
    Rational p = probability(key);
    for (uint64_t v : unpack(key)) os << v << ",";
    os << rat_num(p).str() << "," << rat_den(p).str() << "\n";
  }
}

}  // namespace ccpir
