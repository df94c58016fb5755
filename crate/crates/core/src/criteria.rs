//! Decision layer: `∂∂̄`-degrees, the sGG property through several
//! equivalent characterizations, the `(n-1,n)`-th strong and weak
//! `∂∂̄`-Lemmas, and the full `∂∂̄`-Lemma.
//!
//! Direct subspace checks decide the verdicts; the numerical
//! characterizations are computed alongside and any disagreement is recorded
//! as a warning.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cohomology::{Cohomology, CohomologyTable, MapRanks};
use crate::complex::DoubleComplex;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::Scalar;

/// `Δ^k = Σ_{p+q=k} (h^{p,q}_BC + h^{p,q}_A) − 2 b_k`.
pub fn delta_degree(table: &CohomologyTable, k: usize) -> i64 {
    let n = table.n;
    let sum: usize = (0..=n)
        .filter(|&p| k >= p && k - p <= n)
        .map(|p| table.bott_chern(p, k - p) + table.aeppli(p, k - p))
        .sum();
    sum as i64 - 2 * table.betti(k) as i64
}

/// The `∂∂̄`-Lemma holds iff every `Δ^k` vanishes.
pub fn check_ddbar_lemma(table: &CohomologyTable) -> bool {
    (1..=2 * table.n).all(|k| delta_degree(table, k) == 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SggReport {
    /// Overall verdict: `b_1 = 2 h^{0,1}_∂̄`.
    pub verdict: bool,
    /// `ι^{n,n-1}_{∂̄,A}` is injective.
    pub dolbeault_to_aeppli_injective: bool,
    /// `T: H_A^{n-1,n-1} → H_∂̄^{n,n-1}` vanishes.
    pub t_vanishes: bool,
    /// `h^{0,1}_BC = h^{0,1}_∂̄`.
    pub bc_equals_dolbeault: bool,
    /// `b_1 = 2 h^{0,1}_∂̄`.
    pub betti_equals_twice_dolbeault: bool,
}

impl SggReport {
    pub fn consistent(&self) -> bool {
        let v = self.betti_equals_twice_dolbeault;
        self.dolbeault_to_aeppli_injective == v && self.t_vanishes == v && self.bc_equals_dolbeault == v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongLemmaReport {
    /// Equals `direct`.
    pub verdict: bool,
    /// `(ker ∂ ∩ (im ∂ + im ∂̄)) ⊆ im ∂∂̄` at `(n-1, n)`.
    pub direct: bool,
    /// `b_1 = 2 h^{0,1}_A`.
    pub numeric: bool,
}

pub fn check_sgg(coh: &Cohomology<'_>) -> SggReport {
    let n = coh.n();
    let h01 = coh.dolbeault(0, 1);
    let b1 = coh.betti(1);
    let vii = b1 == 2 * h01;
    SggReport {
        verdict: vii,
        dolbeault_to_aeppli_injective: n == 0 || coh.natural_map_ranks(n, n - 1).dolbeault_to_aeppli.injective,
        t_vanishes: coh.t_rank() == 0,
        bc_equals_dolbeault: coh.bott_chern(0, 1) == h01,
        betti_equals_twice_dolbeault: vii,
    }
}

pub fn check_strong_lemma(coh: &Cohomology<'_>) -> StrongLemmaReport {
    let n = coh.n();
    let s = coh.spaces(n - 1, n);
    // ker ∂̄ is everything at (n-1, n)
    let closed_and_exact = s.ker_del.intersect(&s.im_sum);
    let direct = closed_and_exact.dim() == s.im_ddbar.dim();
    let numeric = coh.betti(1) == 2 * coh.aeppli(0, 1);
    StrongLemmaReport { verdict: direct, direct, numeric }
}

fn split(m: &Matrix) -> (Matrix, Matrix) {
    let mut re = Matrix::zeros(m.rows(), m.cols());
    let mut im = Matrix::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            re[(i, j)] = Scalar::real(m[(i, j)].re().clone());
            im[(i, j)] = Scalar::real(m[(i, j)].im().clone());
        }
    }
    (re, im)
}

fn neg(m: &Matrix) -> Matrix {
    let mut out = m.clone();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out[(i, j)] = -&m[(i, j)];
        }
    }
    out
}

/// Block matrix from rows of equally tall blocks.
fn blocks(rows: &[Vec<&Matrix>]) -> Matrix {
    let mut out: Option<Matrix> = None;
    for row in rows {
        let mut acc = row[0].clone();
        for b in &row[1..] {
            acc = acc.hstack(b);
        }
        out = Some(match out {
            None => acc,
            Some(o) => o.vstack(&acc),
        });
    }
    out.expect("at least one block row")
}

/// Real-linear constraints `C v̄ = v` for `v = x + iy`, as a matrix acting on
/// `(x, y)`.
fn reality_constraints(conj: &Matrix) -> Matrix {
    let n = conj.cols();
    let (cr, ci) = split(conj);
    let id = Matrix::identity(n);
    let a = cr.add(&neg(&id));
    let d = neg(&cr).add(&neg(&id));
    blocks(&[vec![&a, &ci], vec![&ci, &d]])
}

fn combine(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    x.iter().zip(y).map(|(a, b)| a + &(b * &Scalar::i())).collect()
}

/// A real basis (as complex coordinate vectors) of the real forms `α` of
/// bidegree `(p,p)` satisfying the extra real-linear conditions
/// `M α ∈ image(N)` for each `(M, N)` pair, `M: A^{p,p} → V`, `N: W → V`.
pub(crate) fn real_solutions(conj: &Matrix, conditions: &[(&Matrix, &Matrix)]) -> Vec<Vec<Scalar>> {
    let dim = conj.cols();
    let aux: usize = conditions.iter().map(|(_, nm)| nm.cols()).sum();
    let total = 2 * dim + 2 * aux;
    let mut rows = Vec::new();
    let reality = reality_constraints(conj);
    rows.push(reality.hstack(&Matrix::zeros(2 * dim, 2 * aux)));
    let mut offset = 0;
    for (mm, nm) in conditions {
        // M(x + iy) − N(u + iw) = 0, split into real and imaginary parts
        let (mr, mi) = split(mm);
        let (nr, ni) = split(nm);
        let k = nm.cols();
        let v = mm.rows();
        let before = Matrix::zeros(v, 2 * offset);
        let after = Matrix::zeros(v, 2 * (aux - offset - k));
        let re_row = blocks(&[vec![&mr, &neg(&mi), &before, &neg(&nr), &ni, &after]]);
        let im_row = blocks(&[vec![&mi, &mr, &before, &neg(&ni), &neg(&nr), &after]]);
        rows.push(re_row);
        rows.push(im_row);
        offset += k;
    }
    let mut system = rows[0].clone();
    for r in &rows[1..] {
        system = system.vstack(r);
    }
    debug_assert_eq!(system.cols(), total);
    let kernel = system.kernel();
    let vectors: Vec<Vec<Scalar>> = kernel.iter().map(|z| combine(&z[..dim], &z[dim..2 * dim])).collect();
    // reduce to a real-independent set
    let realified: Vec<Vec<Scalar>> = vectors
        .iter()
        .map(|v| {
            v.iter()
                .map(|s| Scalar::real(s.re().clone()))
                .chain(v.iter().map(|s| Scalar::real(s.im().clone())))
                .collect()
        })
        .collect();
    let mut chosen: Vec<Vec<Scalar>> = Vec::new();
    let mut span = Subspace::zero(2 * dim);
    for (v, r) in vectors.into_iter().zip(realified) {
        if !span.contains(&r) {
            span = span.sum(&Subspace::span(2 * dim, &[r]));
            chosen.push(v);
        }
    }
    chosen
}

/// Real basis of `S = {α real (n-1,n-1) : ∂̄α ∈ im ∂}`.
pub fn weak_lemma_space(dc: &DoubleComplex) -> Result<Vec<Vec<Scalar>>> {
    let n = dc.n();
    let conj = dc.conj(n - 1, n - 1).ok_or(Error::NoConjugation)?;
    let delbar = dc.delbar(n - 1, n - 1);
    let del_in = if n >= 2 { dc.del(n - 2, n).clone() } else { Matrix::zeros(dc.dim(n - 1, n), 0) };
    Ok(real_solutions(conj, &[(delbar, &del_in)]))
}

/// Solves `∂̄α = i ∂∂̄β` for `β ∈ A^{n-2,n-1}`, given `α ∈ A^{n-1,n-1}`.
pub fn ddbar_potential(dc: &DoubleComplex, alpha: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = dc.n();
    let rhs = dc.delbar(n - 1, n - 1).apply(alpha);
    if n < 2 {
        return rhs.iter().all(Zero::is_zero).then(Vec::new);
    }
    let m = dc.del_delbar(n - 2, n - 1);
    let mut im = m.clone();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            im[(r, c)] = &m[(r, c)] * &Scalar::i();
        }
    }
    im.solve(&rhs)
}

/// `(n-1,n)`-th weak `∂∂̄`-Lemma: `None` if the complex has no conjugation.
pub fn check_weak_lemma(coh: &Cohomology<'_>) -> Option<bool> {
    let dc = coh.complex();
    let n = dc.n();
    let space = weak_lemma_space(dc).ok()?;
    // ∂̄α = i∂∂̄β for some β iff ∂̄α ∈ im ∂∂̄, which is a complex subspace
    let target = &coh.spaces(n - 1, n).im_ddbar;
    let delbar = dc.delbar(n - 1, n - 1);
    let images: Vec<Vec<Scalar>> = space.iter().map(|a| delbar.apply(a)).collect();
    Some(target.contains_subspace(&Subspace::span(dc.dim(n - 1, n), &images)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub n: usize,
    /// `delta[k-1] = Δ^k` for `k = 1..=2n`.
    pub delta: Vec<i64>,
    pub sgg: SggReport,
    pub strong_lemma: StrongLemmaReport,
    /// `None` when undecidable (no conjugation on the complex).
    pub weak_lemma: Option<bool>,
    pub ddbar_lemma: bool,
    /// Natural map ranks at `(n-1, n)`.
    pub ranks: MapRanks,
    pub unimodular: Option<bool>,
    pub warnings: Vec<String>,
}

impl CriteriaReport {
    pub fn delta(&self, k: usize) -> i64 {
        self.delta[k - 1]
    }

    /// True when a characterization that must agree on unimodular inputs
    /// disagrees.
    pub fn inconsistent(&self) -> bool {
        self.unimodular == Some(true) && !self.warnings.is_empty()
    }
}

pub fn criteria_report(coh: &Cohomology<'_>) -> CriteriaReport {
    let n = coh.n();
    let table = coh.table();
    let delta: Vec<i64> = (1..=2 * n).map(|k| delta_degree(&table, k)).collect();
    let sgg = check_sgg(coh);
    let strong = check_strong_lemma(coh);
    let weak = check_weak_lemma(coh);
    let ddbar = check_ddbar_lemma(&table);
    let ranks = coh.natural_map_ranks(n - 1, n);
    let unimodular = coh.complex().unimodular();

    let mut warnings = Vec::new();
    if !sgg.consistent() {
        warnings.push(format!(
            "sGG characterizations disagree: (iii)={} (iv)={} (vi)={} (vii)={}",
            sgg.dolbeault_to_aeppli_injective, sgg.t_vanishes, sgg.bc_equals_dolbeault, sgg.betti_equals_twice_dolbeault
        ));
    }
    if strong.direct != strong.numeric {
        warnings.push(format!(
            "strong lemma: direct check {} but b1 = 2 h^{{0,1}}_A is {}",
            strong.direct, strong.numeric
        ));
    }
    let equiv = sgg.verdict && delta[0] == 0;
    if strong.direct != equiv {
        warnings.push(format!("strong lemma {} but (sGG and Delta^1 = 0) is {}", strong.direct, equiv));
    }
    for k in 1..=2 * n {
        if delta[k - 1] < 0 {
            warnings.push(format!("Delta^{k} = {} is negative", delta[k - 1]));
        }
        if k < n && delta[k - 1] != delta[2 * n - k - 1] {
            warnings.push(format!("Delta^{k} != Delta^{}", 2 * n - k));
        }
    }
    if ranks.bc_to_del.rank != coh.del_cohomology(n - 1, n) {
        warnings.push("natural map H_BC^{n-1,n} -> H_del^{n-1,n} is not surjective".into());
    }
    if strong.direct && weak == Some(false) {
        warnings.push("strong lemma holds but weak lemma fails".into());
    }
    if ddbar && !strong.direct {
        warnings.push("ddbar-Lemma holds but strong lemma fails".into());
    }

    CriteriaReport { n, delta, sgg, strong_lemma: strong, weak_lemma: weak, ddbar_lemma: ddbar, ranks, unimodular, warnings }
}

/// Half of `Δ^1` in the form `h^{0,1}_BC + h^{0,1}_A − b_1`.
pub fn half_delta1(table: &CohomologyTable) -> i64 {
    table.bott_chern(0, 1) as i64 + table.aeppli(0, 1) as i64 - table.betti(1) as i64
}
