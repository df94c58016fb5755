//! Dimensions of Dolbeault, conjugate-Dolbeault, Bott-Chern and Aeppli
//! cohomology, Betti numbers of the total complex, and ranks of the natural
//! maps between them. Everything is rank arithmetic on explicit subspaces.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::complex::DoubleComplex;
use crate::linalg::Subspace;

/// Kernels and images living in one bidegree.
#[derive(Debug)]
pub struct Spaces {
    pub ker_del: Subspace,
    pub ker_delbar: Subspace,
    /// `ker ∂ ∩ ker ∂̄`
    pub ker_bc: Subspace,
    /// `ker ∂∂̄`
    pub ker_ddbar: Subspace,
    /// `∂ A^{p-1,q}`
    pub im_del: Subspace,
    /// `∂̄ A^{p,q-1}`
    pub im_delbar: Subspace,
    /// `∂∂̄ A^{p-1,q-1}`
    pub im_ddbar: Subspace,
    /// `im ∂ + im ∂̄`
    pub im_sum: Subspace,
}

/// Cohomology of a fixed double complex with a per-bidegree memo. Safe to
/// share between threads; each slot is computed at most once.
pub struct Cohomology<'a> {
    dc: &'a DoubleComplex,
    spaces: Vec<OnceLock<Spaces>>,
    betti: Vec<OnceLock<usize>>,
}

impl<'a> Cohomology<'a> {
    pub fn new(dc: &'a DoubleComplex) -> Self {
        let n = dc.n();
        Cohomology {
            dc,
            spaces: (0..(n + 1) * (n + 1)).map(|_| OnceLock::new()).collect(),
            betti: (0..=2 * n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn complex(&self) -> &'a DoubleComplex {
        self.dc
    }

    pub fn n(&self) -> usize {
        self.dc.n()
    }

    pub fn spaces(&self, p: usize, q: usize) -> &Spaces {
        let n = self.dc.n();
        assert!(p <= n && q <= n, "bidegree ({p},{q}) out of range");
        self.spaces[p * (n + 1) + q].get_or_init(|| self.compute(p, q))
    }

    fn compute(&self, p: usize, q: usize) -> Spaces {
        let dc = self.dc;
        let dim = dc.dim(p, q);
        let ker_del = Subspace::kernel(dc.del(p, q));
        let ker_delbar = Subspace::kernel(dc.delbar(p, q));
        let ker_bc = ker_del.intersect(&ker_delbar);
        let ker_ddbar = Subspace::kernel(&dc.del_delbar(p, q));
        let im_del = if p > 0 { Subspace::image(dc.del(p - 1, q)) } else { Subspace::zero(dim) };
        let im_delbar = if q > 0 { Subspace::image(dc.delbar(p, q - 1)) } else { Subspace::zero(dim) };
        let im_ddbar = if p > 0 && q > 0 { Subspace::image(&dc.del_delbar(p - 1, q - 1)) } else { Subspace::zero(dim) };
        let im_sum = im_del.sum(&im_delbar);
        Spaces { ker_del, ker_delbar, ker_bc, ker_ddbar, im_del, im_delbar, im_ddbar, im_sum }
    }

    /// `h^{p,q}_∂̄`
    pub fn dolbeault(&self, p: usize, q: usize) -> usize {
        let s = self.spaces(p, q);
        s.ker_delbar.dim() - s.im_delbar.dim()
    }

    /// `h^{p,q}_∂`
    pub fn del_cohomology(&self, p: usize, q: usize) -> usize {
        let s = self.spaces(p, q);
        s.ker_del.dim() - s.im_del.dim()
    }

    pub fn bott_chern(&self, p: usize, q: usize) -> usize {
        let s = self.spaces(p, q);
        s.ker_bc.dim() - s.im_ddbar.dim()
    }

    pub fn aeppli(&self, p: usize, q: usize) -> usize {
        let s = self.spaces(p, q);
        s.ker_ddbar.dim() - s.im_sum.dim()
    }

    /// `b_k` of the total complex `(⊕_{p+q=k} A^{p,q}, ∂ + ∂̄)`.
    pub fn betti(&self, k: usize) -> usize {
        assert!(k <= 2 * self.n());
        *self.betti[k].get_or_init(|| {
            let dk = self.dc.total_d(k);
            let kernel = self.dc.total_dim(k) - dk.rank();
            let image = if k > 0 { self.dc.total_d(k - 1).rank() } else { 0 };
            kernel - image
        })
    }

    pub fn table(&self) -> CohomologyTable {
        let n = self.n();
        let mut entries = Vec::new();
        for p in 0..=n {
            for q in 0..=n {
                entries.push(HodgeEntry {
                    p,
                    q,
                    dim: self.dc.dim(p, q),
                    dolbeault: self.dolbeault(p, q),
                    del: self.del_cohomology(p, q),
                    bott_chern: self.bott_chern(p, q),
                    aeppli: self.aeppli(p, q),
                });
            }
        }
        CohomologyTable { n, entries, betti: (0..=2 * n).map(|k| self.betti(k)).collect() }
    }

    /// Rank of the map induced by inclusion from `source / R_s` to
    /// `target / R_t` (with `R_s ⊆ R_t`): `dim(S + R_t) − dim R_t`.
    fn induced(source: &Subspace, source_rel: &Subspace, target_rel: &Subspace) -> MapRank {
        let rank = source.sum(target_rel).dim() - target_rel.dim();
        let domain = source.dim() - source_rel.dim();
        MapRank { rank, domain, injective: rank == domain }
    }

    pub fn natural_map_ranks(&self, p: usize, q: usize) -> MapRanks {
        let s = self.spaces(p, q);
        MapRanks {
            p,
            q,
            bc_to_dolbeault: Self::induced(&s.ker_bc, &s.im_ddbar, &s.im_delbar),
            bc_to_del: Self::induced(&s.ker_bc, &s.im_ddbar, &s.im_del),
            dolbeault_to_aeppli: Self::induced(&s.ker_delbar, &s.im_delbar, &s.im_sum),
            del_to_aeppli: Self::induced(&s.ker_del, &s.im_del, &s.im_sum),
            bc_to_aeppli: Self::induced(&s.ker_bc, &s.im_ddbar, &s.im_sum),
            t_rank: self.t_rank(),
        }
    }

    /// Rank of `T: H_A^{n-1,n-1} → H_∂̄^{n,n-1}`, `[Ω] ↦ [∂Ω]`:
    /// `dim(∂(ker ∂∂̄) + im ∂̄) − dim im ∂̄` at `(n, n-1)`.
    pub fn t_rank(&self) -> usize {
        let n = self.n();
        if n == 0 {
            return 0;
        }
        let src = self.spaces(n - 1, n - 1);
        let tgt = self.spaces(n, n - 1);
        let image = src.ker_ddbar.map(self.dc.del(n - 1, n - 1));
        image.sum(&tgt.im_delbar).dim() - tgt.im_delbar.dim()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapRank {
    pub rank: usize,
    /// Dimension of the source cohomology group.
    pub domain: usize,
    pub injective: bool,
}

/// Ranks of the natural maps at one bidegree, plus the rank of `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapRanks {
    pub p: usize,
    pub q: usize,
    pub bc_to_dolbeault: MapRank,
    pub bc_to_del: MapRank,
    pub dolbeault_to_aeppli: MapRank,
    pub del_to_aeppli: MapRank,
    pub bc_to_aeppli: MapRank,
    pub t_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeEntry {
    pub p: usize,
    pub q: usize,
    pub dim: usize,
    pub dolbeault: usize,
    pub del: usize,
    pub bott_chern: usize,
    pub aeppli: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub n: usize,
    /// Row-major in `(p, q)`.
    pub entries: Vec<HodgeEntry>,
    /// `betti[k]` for `k = 0..=2n`.
    pub betti: Vec<usize>,
}

impl CohomologyTable {
    pub fn entry(&self, p: usize, q: usize) -> &HodgeEntry {
        &self.entries[p * (self.n + 1) + q]
    }

    pub fn dolbeault(&self, p: usize, q: usize) -> usize {
        self.entry(p, q).dolbeault
    }

    pub fn bott_chern(&self, p: usize, q: usize) -> usize {
        self.entry(p, q).bott_chern
    }

    pub fn aeppli(&self, p: usize, q: usize) -> usize {
        self.entry(p, q).aeppli
    }

    pub fn betti(&self, k: usize) -> usize {
        self.betti[k]
    }
}

pub fn dolbeault(dc: &DoubleComplex, p: usize, q: usize) -> usize {
    Cohomology::new(dc).dolbeault(p, q)
}

pub fn bott_chern(dc: &DoubleComplex, p: usize, q: usize) -> usize {
    Cohomology::new(dc).bott_chern(p, q)
}

pub fn aeppli(dc: &DoubleComplex, p: usize, q: usize) -> usize {
    Cohomology::new(dc).aeppli(p, q)
}

pub fn betti(dc: &DoubleComplex, k: usize) -> usize {
    Cohomology::new(dc).betti(k)
}

pub fn natural_map_ranks(dc: &DoubleComplex, p: usize, q: usize) -> MapRanks {
    Cohomology::new(dc).natural_map_ranks(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Assignment;
    use crate::structure::parse_manifold;

    fn build(d3: &str) -> DoubleComplex {
        let text = format!("[manifold]\ndim = 3\n[structure]\nd3 = \"{d3}\"\n");
        let s = parse_manifold(&text).unwrap().instantiate(&Assignment::new()).unwrap();
        DoubleComplex::from_structure("x", &s).unwrap()
    }

    #[test]
    fn torus_values() {
        let dc = build("0");
        let c = Cohomology::new(&dc);
        assert_eq!(c.dolbeault(0, 1), 3);
        assert_eq!(c.bott_chern(2, 2), 9);
        assert_eq!(c.aeppli(0, 1), 3);
        assert_eq!(c.betti(1), 6);
        assert_eq!(c.t_rank(), 0);
        let m = c.natural_map_ranks(2, 3);
        assert!(m.bc_to_aeppli.injective && m.bc_to_dolbeault.injective);
    }

    #[test]
    fn holomorphically_parallelizable_iwasawa() {
        let dc = build("-e(1,2)");
        let c = Cohomology::new(&dc);
        assert_eq!(c.dolbeault(0, 1), 2);
        assert_eq!(c.bott_chern(0, 1), 2);
        assert_eq!(c.aeppli(0, 1), 3);
        assert_eq!(c.betti(1), 4);
        assert_eq!(c.t_rank(), 0);
    }

    #[test]
    fn abelian_iwasawa() {
        let dc = build("e(1,-1) + e(1,-2)");
        let c = Cohomology::new(&dc);
        assert_eq!(c.dolbeault(0, 1), 3);
        assert_eq!(c.bott_chern(2, 2), 6);
        assert_eq!(c.betti(1), 4);
        assert!(!c.natural_map_ranks(2, 3).bc_to_dolbeault.injective);
    }
}
