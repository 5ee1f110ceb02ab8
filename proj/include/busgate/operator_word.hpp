#pragma once

#include <vector>

#include "busgate/common.hpp"

namespace busgate::ffq {

struct SlaterDeterminant;

enum class OpKind { Create, Annihilate, Gauge };

/// One factor of a fermionic operator word.
///
/// Create/Annihilate act on `site`. Gauge is the string prod (-1)^{n_k} over
/// sites [site, end); it flips the sign of every orbital amplitude in that range.
struct FermionOp {
  OpKind kind = OpKind::Create;
  int site = 0;
  int end = 0;

  static FermionOp create(int s) { return {OpKind::Create, s, s}; }
  static FermionOp annihilate(int s) { return {OpKind::Annihilate, s, s}; }
  static FermionOp gauge(int first, int last_exclusive) { return {OpKind::Gauge, first, last_exclusive}; }
};

/// Product of factors, leftmost first.
using OperatorWord = std::vector<FermionOp>;

/// Word rewritten as  coefficient * (annihilators)(gauges)(creators).
///
/// The annihilators are absorbed by the bra as creations of its adjoint and the
/// creators by the ket; gauges are applied to the ket orbitals.
struct NormalTerm {
  double coefficient = 1.0;
  std::vector<int> bra_sites;  // annihilated sites, word order
  std::vector<std::pair<int, int>> gauges;
  std::vector<int> ket_sites;  // created sites, word order
};

/// Reorders a word into normal terms using the canonical anticommutators and
/// the gauge sign rules. Throws ConfigError for malformed words.
std::vector<NormalTerm> normal_form(const OperatorWord& word, int total_sites);

/// <bra| word |ket> for Slater determinants with total_sites orbital rows.
cplx sd_matrix_element(const SlaterDeterminant& bra, const OperatorWord& word, const SlaterDeterminant& ket);

/// Same, with the normal form computed ahead of time.
cplx sd_matrix_element(const SlaterDeterminant& bra, const std::vector<NormalTerm>& terms,
                       const SlaterDeterminant& ket);

/// Evaluates many normal terms between one fixed bra and ket. The overlap
/// block bra^+ D ket is cached per gauge pattern D, so each term costs a
/// bordered determinant only.
class MatrixElementEvaluator {
 public:
  MatrixElementEvaluator(const SlaterDeterminant& bra, const SlaterDeterminant& ket);
  cplx operator()(const std::vector<NormalTerm>& terms);

 private:
  const CMatrix& overlap_block(const std::vector<std::pair<int, int>>& gauges);
  const SlaterDeterminant& bra_;
  const SlaterDeterminant& ket_;
  std::vector<std::pair<std::vector<std::pair<int, int>>, CMatrix>> cache_;
};

/// Word for the single-site spin operator |out><in| at `site` (with its string).
OperatorWord spin_transition(int site, int out, int in);

}  // namespace busgate::ffq
