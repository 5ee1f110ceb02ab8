#include "busgate/operator_word.hpp"

#include <string>

#include "busgate/ffq.hpp"

namespace busgate::ffq {

namespace {

int rank_of(OpKind k) {
  switch (k) {
    case OpKind::Annihilate: return 0;
    case OpKind::Gauge: return 1;
    case OpKind::Create: return 2;
  }
  return 0;
}

bool in_gauge(const FermionOp& g, int site) { return site >= g.site && site < g.end; }

struct RawTerm {
  double coefficient;
  OperatorWord word;
};

// Moves every word into (annihilators)(gauges)(creators) order by adjacent swaps.
void reorder(RawTerm term, std::vector<RawTerm>& out) {
  auto& w = term.word;
  for (std::size_t p = 0; p + 1 < w.size(); ++p) {
    const FermionOp x = w[p], y = w[p + 1];
    if (rank_of(x.kind) <= rank_of(y.kind)) continue;

    double sign = -1.0;
    if (x.kind == OpKind::Create && y.kind == OpKind::Annihilate) {
      if (x.site == y.site) {
        RawTerm contracted{term.coefficient, {}};
        contracted.word.insert(contracted.word.end(), w.begin(), w.begin() + p);
        contracted.word.insert(contracted.word.end(), w.begin() + p + 2, w.end());
        reorder(std::move(contracted), out);
      }
    } else if (x.kind == OpKind::Gauge) {
      sign = in_gauge(x, y.site) ? -1.0 : 1.0;  // gauge then annihilator
    } else {
      sign = in_gauge(y, x.site) ? -1.0 : 1.0;  // creator then gauge
    }
    std::swap(w[p], w[p + 1]);
    term.coefficient *= sign;
    reorder(std::move(term), out);
    return;
  }
  out.push_back(std::move(term));
}

}  // namespace

std::vector<NormalTerm> normal_form(const OperatorWord& word, int total_sites) {
  for (const auto& op : word) {
    if (op.site < 0 || op.site >= total_sites + (op.kind == OpKind::Gauge ? 1 : 0))
      throw ConfigError("operator word: site " + std::to_string(op.site) + " out of range");
    if (op.kind == OpKind::Gauge && (op.end < op.site || op.end > total_sites))
      throw ConfigError("operator word: malformed gauge range");
  }
  std::vector<RawTerm> raw;
  reorder({1.0, word}, raw);

  std::vector<NormalTerm> terms;
  for (auto& r : raw) {
    NormalTerm t;
    t.coefficient = r.coefficient;
    for (const auto& op : r.word) {
      switch (op.kind) {
        case OpKind::Annihilate: t.bra_sites.push_back(op.site); break;
        case OpKind::Gauge:
          if (op.end > op.site) t.gauges.emplace_back(op.site, op.end);
          break;
        case OpKind::Create: t.ket_sites.push_back(op.site); break;
      }
    }
    terms.push_back(std::move(t));
  }
  return terms;
}

MatrixElementEvaluator::MatrixElementEvaluator(const SlaterDeterminant& bra, const SlaterDeterminant& ket)
    : bra_(bra), ket_(ket) {
  if (bra.sites() != ket.sites()) throw ConfigError("sd_matrix_element: orbital row counts differ");
}

const CMatrix& MatrixElementEvaluator::overlap_block(const std::vector<std::pair<int, int>>& gauges) {
  for (const auto& [key, block] : cache_)
    if (key == gauges) return block;
  CMatrix dk = ket_.orbitals;
  for (const auto& [first, end] : gauges) dk.middleRows(first, end - first) *= -1.0;
  cache_.emplace_back(gauges, bra_.orbitals.adjoint() * dk);
  return cache_.back().second;
}

cplx MatrixElementEvaluator::operator()(const std::vector<NormalTerm>& terms) {
  const int mb = bra_.particles(), mk = ket_.particles();
  cplx total = 0.0;
  for (const auto& t : terms) {
    const int kb = static_cast<int>(t.bra_sites.size());
    const int kk = static_cast<int>(t.ket_sites.size());
    const int m = mb + kb;
    if (m != mk + kk) continue;
    if (m == 0) {
      total += t.coefficient;
      continue;
    }
    auto sign = [&](int site) {
      double s = 1.0;
      for (const auto& [first, end] : t.gauges)
        if (site >= first && site < end) s = -s;
      return s;
    };
    // <bra| f_a1 .. f_ak  ==  (f_ak^+ .. f_a1^+ |bra>)^+, so bra column q is site a_{k-q}.
    // Bordered overlap [e_bra | bra]^+ D [e_ket | ket].
    CMatrix s(m, m);
    for (int r = 0; r < kb; ++r) {
      const int a = t.bra_sites[kb - 1 - r];
      const double da = sign(a);
      for (int c = 0; c < kk; ++c) s(r, c) = (a == t.ket_sites[c]) ? da : 0.0;
      s.block(r, kk, 1, mk) = da * ket_.orbitals.row(a);
    }
    for (int c = 0; c < kk; ++c) {
      const int site = t.ket_sites[c];
      s.block(kb, c, mb, 1) = sign(site) * bra_.orbitals.row(site).adjoint();
    }
    if (mb > 0 && mk > 0) s.block(kb, kk, mb, mk) = overlap_block(t.gauges);
    total += t.coefficient * s.determinant();
  }
  return total;
}

cplx sd_matrix_element(const SlaterDeterminant& bra, const std::vector<NormalTerm>& terms,
                       const SlaterDeterminant& ket) {
  MatrixElementEvaluator ev(bra, ket);
  return ev(terms);
}

cplx sd_matrix_element(const SlaterDeterminant& bra, const OperatorWord& word, const SlaterDeterminant& ket) {
  return sd_matrix_element(bra, normal_form(word, ket.sites()), ket);
}

OperatorWord spin_transition(int site, int out, int in) {
  if (out == 0 && in == 0) return {FermionOp::annihilate(site), FermionOp::create(site)};
  if (out == 1 && in == 1) return {FermionOp::create(site), FermionOp::annihilate(site)};
  if (out == 1 && in == 0) return {FermionOp::gauge(0, site), FermionOp::create(site)};
  if (out == 0 && in == 1) return {FermionOp::annihilate(site), FermionOp::gauge(0, site)};
  throw ConfigError("spin_transition: states must be 0 or 1");
}

}  // namespace busgate::ffq
