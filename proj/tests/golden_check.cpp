// Compares pipeline output against the pinned JSON corpus in tests/golden.
// Usage: golden_check DIR [--bless]

#include "qips/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

using namespace qips;

namespace {

ModelSpec dk(const char* p, const char* q, int sites = 2) {
  ModelSpec spec;
  spec.sites = sites;
  spec.p = parse_rational(p);
  spec.q = parse_rational(q);
  spec.mode = Mode::exact;
  return spec;
}

struct Case {
  std::string name;
  std::function<json()> run;
};

std::vector<Case> corpus() {
  return {
      {"model_n2_half_zero", [] { return cmd_model(dk("1/2", "0")).document; }},
      {"model_n3_third_half", [] { return cmd_model(dk("1/3", "1/2", 3)).document; }},
      {"zeta_n2_half_zero", [] { return cmd_zeta(dk("1/2", "0")).document; }},
      {"zeta_n2_zero_half", [] { return cmd_zeta(dk("0", "1/2")).document; }},
      {"abszeta_n2_half_zero", [] { return cmd_abszeta(dk("1/2", "0"), {}).document; }},
      {"abszeta_n2_zero_half", [] { return cmd_abszeta(dk("0", "1/2"), {}).document; }},
      {"abszeta_n2_zero_zero", [] { return cmd_abszeta(dk("0", "0"), {}).document; }},
      {"abszeta_n2_03_07", [] { return cmd_abszeta(dk("3/10", "7/10"), {}).document; }},
      {"scan_n2_half", [] { return cmd_scan(Rational(1, 2), 2, 1).document; }},
  };
}

/// Structural equality; binary64 numbers may differ by 1e-12 relative.
bool same(const json& a, const json& b, const std::string& path, std::string& where) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    if (std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y))) return true;
    where = path;
    return false;
  }
  if (a.type() != b.type()) {
    where = path + " (type)";
    return false;
  }
  if (a.is_object()) {
    if (a.size() != b.size()) {
      where = path + " (keys)";
      return false;
    }
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key())) {
        where = path + "/" + it.key();
        return false;
      }
      if (!same(it.value(), b[it.key()], path + "/" + it.key(), where)) return false;
    }
    return true;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) {
      where = path + " (length)";
      return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!same(a[i], b[i], path + "/" + std::to_string(i), where)) return false;
    return true;
  }
  if (a != b) where = path;
  return a == b;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: golden_check DIR [--bless]\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  const bool bless = argc > 2 && std::string(argv[2]) == "--bless";
  int failures = 0;
  for (const auto& c : corpus()) {
    const json doc = c.run();
    const auto file = dir / (c.name + ".json");
    if (bless) {
      std::ofstream(file) << doc.dump(2) << '\n';
      std::cout << "blessed " << file.string() << '\n';
      continue;
    }
    std::ifstream in(file);
    if (!in) {
      std::cout << "FAIL " << c.name << ": missing " << file.string() << '\n';
      ++failures;
      continue;
    }
    const json expected = json::parse(in);
    std::string where;
    if (same(doc, expected, "", where)) {
      std::cout << "ok   " << c.name << '\n';
    } else {
      std::cout << "FAIL " << c.name << ": differs at " << where << '\n';
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}
