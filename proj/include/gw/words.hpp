#pragma once
// Elements of G = A_1 * ... * A_k * F_N in free product normal form.
// Peripheral factors are finite rank free or free abelian groups.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gw {

// Domain error carrying a machine readable code ("UnknownGenerator", ...).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

enum class FactorKind { Free, Abelian };

struct FactorSpec {
  FactorKind kind = FactorKind::Free;
  int rank = 1;
  bool operator==(const FactorSpec&) const = default;
};

// Element of one peripheral factor.
// Free kind: freely reduced word, letter +-(j+1) for generator j.
// Abelian kind: exponent vector with trailing zeros trimmed.
// In both kinds the identity is the empty payload.
struct FactorElement {
  int factor = -1;
  FactorKind kind = FactorKind::Free;
  std::vector<int64_t> payload;

  bool trivial() const { return payload.empty(); }
  bool operator==(const FactorElement& o) const {
    return payload == o.payload && (payload.empty() || factor == o.factor);
  }
  bool operator<(const FactorElement& o) const;
};

FactorElement fe_identity(int factor, FactorKind kind);
FactorElement fe_generator(int factor, FactorKind kind, int gen, int64_t power = 1);
FactorElement fe_mul(const FactorElement& a, const FactorElement& b);
FactorElement fe_inv(const FactorElement& a);
FactorElement fe_pow(const FactorElement& a, int64_t n);
// Letter count (free kind) or l1 norm (abelian kind).
int64_t fe_size(const FactorElement& a);

struct Presentation {
  std::vector<FactorSpec> factors;
  int free_rank = 0;
  // alias -> canonical name; canonical names are a<i>.<j> and x<m>, 1-based
  std::map<std::string, std::string> aliases;

  int k() const { return static_cast<int>(factors.size()); }
  int xi() const { return 2 * k() + 3 * free_rank - 3; }
  bool sporadic() const;
  void validate() const;

  FactorElement identity_in(int factor) const {
    return fe_identity(factor, factors.at(factor).kind);
  }
  // display name of factor generator / free generator (alias when present)
  std::string factor_gen_name(int factor, int gen) const;
  std::string free_gen_name(int m) const;

  bool operator==(const Presentation& o) const {
    return factors == o.factors && free_rank == o.free_rank;
  }
};

using PresPtr = std::shared_ptr<const Presentation>;

// One syllable: a nontrivial factor element, or x_m^power with power != 0.
struct Syllable {
  int factor = -1;  // >= 0 for factor syllables
  int gen = -1;     // free generator index when factor < 0
  int64_t power = 0;
  FactorElement elem;

  bool is_factor() const { return factor >= 0; }
  bool operator==(const Syllable& o) const {
    if (factor != o.factor) return false;
    if (factor >= 0) return elem == o.elem;
    return gen == o.gen && power == o.power;
  }
  bool operator<(const Syllable& o) const;
};

struct NormalWord {
  PresPtr pres;
  std::vector<Syllable> syl;

  bool is_identity() const { return syl.empty(); }
  bool operator==(const NormalWord& o) const { return syl == o.syl; }
  bool operator<(const NormalWord& o) const { return syl < o.syl; }
};

// raw signed generator symbol
struct RawLetter {
  std::string name;
  int64_t power = 1;
};

std::pair<int, int> complexity(const Presentation& p);  // (xi, sporadic)

NormalWord identity_word(const PresPtr& p);
NormalWord normalize(const std::vector<RawLetter>& raw, const PresPtr& p);
NormalWord normalize_syllables(const std::vector<Syllable>& s, const PresPtr& p);
NormalWord multiply(const NormalWord& u, const NormalWord& v);
NormalWord invert(const NormalWord& u);
NormalWord power(const NormalWord& u, int64_t n);
NormalWord from_factor(const PresPtr& p, const FactorElement& f);
NormalWord free_gen_word(const PresPtr& p, int m, int64_t t = 1);
// conj(a, b) = a b a^-1
NormalWord conjugate(const NormalWord& a, const NormalWord& b);

struct CyclicReduction {
  NormalWord conjugator;
  NormalWord core;
};
CyclicReduction cyclically_reduce(const NormalWord& w);

struct Peripheral {
  bool trivial = false;
  std::optional<int> factor;
};
// nullopt when not peripheral
std::optional<Peripheral> is_peripheral(const NormalWord& w);

// Number of letters counted with multiplicity (|power| and fe_size).
int64_t word_size(const NormalWord& w);

// Word grammar: whitespace separated `name` or `name^<int>`.
std::vector<RawLetter> tokenize_word(const std::string& text);
NormalWord parse_word(const std::string& text, const PresPtr& p);
std::string format_word(const NormalWord& w);
std::string format_factor_element(const Presentation& p, const FactorElement& f);
FactorElement parse_factor_element(const std::string& text, const Presentation& p, int factor);

// Presentation grammar:
//   presentation { factors = [free:1, abelian:2]; free_rank = 2 }
//   aliases { a = a1.1; b = x1; c = x2 }
Presentation parse_presentation(const std::string& text);
std::string format_presentation(const Presentation& p);

// ---- subgroups of a single factor ----

struct FactorSubgroupReport {
  int factor = -1;
  FactorKind kind = FactorKind::Free;
  std::vector<FactorElement> generators;
  bool isTrivial = true;
  bool equalsWholeFactor = false;
  // free kind: rank of the folded core; abelian kind: lattice rank
  int rank = 0;
  // finite index, or nullopt when infinite
  std::optional<int64_t> index;
  // abelian kind: Hermite normal form rows of the lattice
  std::vector<std::vector<int64_t>> lattice;
};

FactorSubgroupReport factor_subgroup(const Presentation& p,
                                     const std::vector<FactorElement>& gens,
                                     int factor = -1);

// Membership test in the subgroup generated by gens.
class FactorSubgroup {
 public:
  FactorSubgroup(const Presentation& p, int factor, const std::vector<FactorElement>& gens);
  bool contains(const FactorElement& x) const;
  const FactorSubgroupReport& report() const { return rep_; }

 private:
  FactorSubgroupReport rep_;
  int rank_ = 1;
  // free kind: folded graph, adjacency[v][letter index] = target or -1
  std::vector<std::vector<int>> adj_;
};

// Is x = d^n for some integer n >= 0 (d nontrivial)? Returns n.
std::optional<int64_t> nonneg_power_of(const FactorElement& x, const FactorElement& d);
// Is x = d^n for some integer n (any sign)?
std::optional<int64_t> integer_power_of(const FactorElement& x, const FactorElement& d);
// Root d with x = d^n, n maximal (x nontrivial).
FactorElement factor_root(const FactorElement& x);

}  // namespace gw
