// Command-line front end: build tautological systems, run the jet-space rank
// oracle against the cohomological predictions, and construct/verify rank-1
// certificates.

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cohomology.hpp"
#include "jetsolve.hpp"
#include "json.hpp"
#include "monomials.hpp"
#include "primefield.hpp"
#include "rank1.hpp"
#include "sparse_matrix.hpp"
#include "tautsys.hpp"

namespace {

using taut::Rational;
using taut::tsys::TautSystem;
using taut::tsys::VarietyTag;

void emit(const nlohmann::json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(path);
    out << j.dump(2) << "\n";
    std::cout << "wrote " << path << "\n";
  }
}

std::vector<Rational> parse_point(const std::string& s) {
  std::vector<Rational> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(Rational::from_string(tok));
  return v;
}

TautSystem build_from_spec(const std::string& spec, const Rational& beta_e) {
  VarietyTag tag = VarietyTag::parse(spec);
  if (tag.kind == VarietyTag::Kind::ProjectiveSpace)
    return taut::tsys::build_projective_system(tag.a, tag.b, beta_e);
  return taut::tsys::build_grassmannian_plucker_system(tag.a, tag.b, beta_e);
}

// Exact smoothness test for a plane cubic: the partials generate an ideal
// whose degree-4 graded piece must be everything (three quadrics cut out no
// projective point iff they form a complete intersection, socle degree 3).
bool plane_cubic_is_smooth(const std::vector<Rational>& a) {
  auto cubics = taut::monomials_of_degree(3, 3);
  auto quartics = taut::monomials_of_degree(3, 4);
  auto quadrics = taut::monomials_of_degree(3, 2);
  taut::MonomialIndex q4(quartics);
  // rows: monomial m (deg 2) times partial_i f ; columns: degree-4 monomials
  taut::SparseMatrix<Rational> mat(static_cast<int>(quadrics.size()) * 3, q4.size());
  int row = 0;
  for (int var = 0; var < 3; ++var) {
    for (const auto& m : quadrics) {
      for (size_t t = 0; t < cubics.size(); ++t) {
        if (cubics[t][var] == 0) continue;
        std::vector<int> e(3);
        for (int i = 0; i < 3; ++i) e[i] = cubics[t][i] + m[i];
        e[var] -= 1;
        mat.add(row, q4.find(e), a[t] * Rational(cubics[t][var]));
      }
      ++row;
    }
  }
  return taut::rank(mat) == q4.size();
}

// The coefficient point of the product-of-coordinate-hyperplanes section
// x_1...x_{n+1} inside the pn(n, n+1) variable ordering.
std::vector<Rational> toric_point(int n) {
  auto monos = taut::monomials_of_degree(n + 1, n + 1);
  std::vector<Rational> pt(monos.size(), Rational(0));
  std::vector<int> ones(n + 1, 1);
  taut::MonomialIndex idx(monos);
  pt[idx.find(ones)] = Rational(1);
  return pt;
}

bool is_toric_point(const std::vector<Rational>& a, int n, int k) {
  if (k != n + 1) return false;
  auto monos = taut::monomials_of_degree(n + 1, k);
  std::vector<int> ones(n + 1, 1);
  for (size_t i = 0; i < monos.size(); ++i) {
    bool is_ones = monos[i] == ones;
    if (is_ones && a[i].is_zero()) return false;
    if (!is_ones && !a[i].is_zero()) return false;
  }
  return true;
}

struct Prediction {
  std::optional<long long> rank;
  std::string reason;
};

Prediction predict_rank(const VarietyTag& tag, const std::vector<Rational>& a) {
  Prediction p;
  if (tag.kind == VarietyTag::Kind::ProjectiveSpace && tag.a == 1 && tag.b == 2) {
    bool origin = a[0].is_zero() && a[1].is_zero() && a[2].is_zero();
    if (origin) {
      p.reason = "origin point: no prediction";
      return p;
    }
    Rational disc = a[1] * a[1] - Rational(4) * a[0] * a[2];
    taut::coh::ComplementCase c;
    c.kind = taut::coh::ComplementCase::Kind::P1Roots;
    c.multiplicities = disc.is_zero() ? std::vector<int>{2} : std::vector<int>{1, 1};
    p.rank = taut::coh::complement_rank_special(c);
    p.reason = disc.is_zero() ? "P1 double root: dim H_1(A^1)" : "P1 distinct roots: dim H_1(C*)";
    return p;
  }
  if (tag.kind == VarietyTag::Kind::ProjectiveSpace && tag.a == 2 && tag.b == 3) {
    if (is_toric_point(a, 2, 3)) {
      taut::coh::ComplementCase c;
      c.kind = taut::coh::ComplementCase::Kind::PnToric;
      p.rank = taut::coh::complement_rank_special(c);
      p.reason = "toric divisor union: rank 1 point";
      return p;
    }
    if (plane_cubic_is_smooth(a)) {
      p.rank = taut::coh::generic_rank(1, 3);
      p.reason = "smooth anticanonical cubic: generic rank formula";
      return p;
    }
    p.reason = "unsupported configuration: singular cubic, no formula";
    return p;
  }
  p.reason = "prediction implemented only for the anticanonical P^1/P^2 families";
  return p;
}

std::vector<Rational> resolve_point(const std::string& point, const TautSystem& sys,
                                    uint64_t seed) {
  const VarietyTag& tag = sys.tag;
  if (point == "rank1-cert") {
    if (tag.kind != VarietyTag::Kind::ProjectiveSpace || tag.b != tag.a + 1)
      throw taut::tsys::UnsupportedSpec("rank1-cert preset needs the anticanonical pn(n,n+1)");
    return toric_point(tag.a);
  }
  if (point == "generic-sample") {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(-9, 9);
    for (int tries = 0; tries < 500; ++tries) {
      std::vector<Rational> a(sys.num_vars);
      for (auto& c : a) c = Rational(num(rng));
      bool all_zero = true;
      for (const auto& c : a)
        if (!c.is_zero()) all_zero = false;
      if (all_zero) continue;
      if (tag.kind == VarietyTag::Kind::ProjectiveSpace && tag.a == 1 && tag.b == 2) {
        if ((a[1] * a[1] - Rational(4) * a[0] * a[2]).is_zero()) continue;
      }
      if (tag.kind == VarietyTag::Kind::ProjectiveSpace && tag.a == 2 && tag.b == 3) {
        if (!plane_cubic_is_smooth(a)) continue;
      }
      return a;
    }
    throw std::runtime_error("generic-sample: no admissible point found");
  }
  auto a = parse_point(point);
  if (static_cast<int>(a.size()) != sys.num_vars)
    throw std::invalid_argument("point has " + std::to_string(a.size()) + " entries, need " +
                                std::to_string(sys.num_vars));
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tautological-system rank toolkit"};
  app.require_subcommand(1);

  std::string spec, point = "generic-sample", orders = "", json_path, shape_str, pcase;
  std::string beta_e_str = "1";
  int window = 3, samples = 10;
  uint64_t seed = 20240501;
  std::string mod_p;
  bool do_verify = false;

  auto* cb = app.add_subcommand("build", "emit the generators of tau");
  cb->add_option("--spec", spec, "pn(n,k) or grassmannian-plucker(d,n)")->required();
  cb->add_option("--beta-e", beta_e_str, "value of beta(e), default 1");
  cb->add_option("--json", json_path, "output path");

  auto* cr = app.add_subcommand("rank", "jet-space rank oracle vs prediction");
  cr->add_option("--spec", spec)->required();
  cr->add_option("--point", point, "generic-sample | rank1-cert | comma rationals");
  cr->add_option("--orders", orders, "N_min:N_max");
  cr->add_option("--window", window);
  cr->add_option("--mod-p", mod_p, "prime modulus, or 'auto'");
  cr->add_option("--seed", seed);
  cr->add_option("--beta-e", beta_e_str);
  cr->add_option("--json", json_path);

  auto* c1 = app.add_subcommand("rank1", "rank-1 certificate for a flag shape");
  c1->add_option("--shape", shape_str, "d_1,...,d_r,n")->required();
  c1->add_flag("--verify", do_verify, "run the decomposition verifier");
  c1->add_option("--samples", samples);
  c1->add_option("--seed", seed);
  c1->add_option("--json", json_path);

  auto* cp = app.add_subcommand("predict", "cohomological rank predictions");
  cp->add_option("--spec", spec)->required();
  cp->add_option("--case", pcase, "generic | toric | p1:m1,m2,...");
  cp->add_option("--json", json_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cb->parsed()) {
      TautSystem sys = build_from_spec(spec, Rational::from_string(beta_e_str));
      std::cout << spec << ": " << sys.count(taut::tsys::GenKind::Ideal) << " ideal + "
                << sys.count(taut::tsys::GenKind::Lie) << " lie + "
                << sys.count(taut::tsys::GenKind::Euler) << " euler generators, "
                << sys.num_vars << " variables\n";
      emit(nlohmann::json::parse(sys.to_json()), json_path);
      return 0;
    }

    if (cr->parsed()) {
      TautSystem sys = build_from_spec(spec, Rational::from_string(beta_e_str));
      std::vector<Rational> a = resolve_point(point, sys, seed);
      int nmin = 1, nmax = sys.num_vars <= 3 ? 10 : 4;
      if (!orders.empty()) {
        auto colon = orders.find(':');
        nmin = std::stoi(orders.substr(0, colon));
        nmax = std::stoi(orders.substr(colon + 1));
      }
      std::optional<uint64_t> prime;
      if (!mod_p.empty()) {
        uint64_t p = mod_p == "auto" ? taut::random_prime_62(seed) : std::stoull(mod_p);
        if (!taut::is_prime_u64(p)) throw std::invalid_argument("--mod-p is not prime");
        prime = p;
      }
      taut::jets::JetReport rep = taut::jets::rank_estimate(sys, a, nmin, nmax, window, prime);
      Prediction pred = predict_rank(sys.tag, a);

      nlohmann::json j = nlohmann::json::parse(rep.to_json());
      j["config"] = {{"command", "rank"}, {"spec", spec},   {"point", point},
                     {"orders", std::to_string(nmin) + ":" + std::to_string(nmax)},
                     {"window", window},  {"seed", seed}};
      nlohmann::json cmp;
      cmp["oracle_rank"] = rep.rank_estimate ? nlohmann::json(*rep.rank_estimate)
                                             : nlohmann::json("unstable");
      cmp["predicted_rank"] =
          pred.rank ? nlohmann::json(*pred.rank) : nlohmann::json(nullptr);
      cmp["prediction_reason"] = pred.reason;
      bool match = rep.rank_estimate && pred.rank &&
                   static_cast<long long>(*rep.rank_estimate) == *pred.rank;
      cmp["match"] = pred.rank ? nlohmann::json(match) : nlohmann::json(nullptr);
      j["comparison"] = cmp;
      emit(j, json_path);
      std::cout << "oracle=" << (rep.rank_estimate ? std::to_string(*rep.rank_estimate) : "unstable")
                << " predicted=" << (pred.rank ? std::to_string(*pred.rank) : "n/a")
                << (pred.rank ? (match ? " MATCH" : " MISMATCH") : "") << "\n";
      if (pred.rank && !match) return 1;
      return 0;
    }

    if (c1->parsed()) {
      auto dims = parse_point(shape_str);
      std::vector<int> d;
      for (const auto& r : dims) d.push_back(static_cast<int>(r.num().get_si()));
      int n = d.back();
      d.pop_back();
      taut::rank1::Rank1Certificate cert = taut::rank1::rstep_rank1(taut::flag::FlagShape(d, n));
      nlohmann::json j = nlohmann::json::parse(cert.to_json());
      j["config"] = {{"command", "rank1"}, {"shape", shape_str}, {"seed", seed},
                     {"samples", samples}};
      bool ok = true;
      if (do_verify) {
        auto rep = taut::rank1::verify_decomposition(cert, samples, seed);
        j["verify"] = nlohmann::json::parse(rep.to_json());
        ok = rep.all_passed();
        std::cout << "verify: " << (ok ? "all passed" : "FAILURES") << "\n";
      }
      emit(j, json_path);
      return ok ? 0 : 1;
    }

    if (cp->parsed()) {
      VarietyTag tag = VarietyTag::parse(spec);
      int d = tag.kind == VarietyTag::Kind::ProjectiveSpace ? 1 : tag.a;
      int n = tag.kind == VarietyTag::Kind::ProjectiveSpace ? tag.a + 1 : tag.b;
      nlohmann::json j;
      j["schema_version"] = 1;
      j["spec"] = spec;
      j["grassmannian"] = {d, n};
      j["poincare"] = taut::coh::poincare_grassmannian(d, n).coefficients;
      j["chi_X"] = taut::coh::integrate(
          taut::coh::total_chern_tangent(d, n).graded_part(d * (n - d)));
      j["chi_anticanonical_section"] = taut::coh::euler_char_hypersurface(d, n, n);
      j["generic_rank"] = taut::coh::generic_rank(d, n);
      if (!pcase.empty()) {
        taut::coh::ComplementCase c;
        if (pcase == "toric") {
          c.kind = taut::coh::ComplementCase::Kind::PnToric;
        } else if (pcase == "generic") {
          c.kind = taut::coh::ComplementCase::Kind::SmoothAnticanonical;
          c.d = d;
          c.n = n;
        } else if (pcase.rfind("p1:", 0) == 0) {
          c.kind = taut::coh::ComplementCase::Kind::P1Roots;
          std::stringstream ss(pcase.substr(3));
          std::string tok;
          while (std::getline(ss, tok, ',')) c.multiplicities.push_back(std::stoi(tok));
        } else {
          throw taut::coh::UnsupportedCase("unknown --case " + pcase);
        }
        j["complement_rank"] = taut::coh::complement_rank_special(c);
      }
      emit(j, json_path);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
