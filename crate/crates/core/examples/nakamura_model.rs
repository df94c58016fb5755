//! Writes a finite Dolbeault model of the completely-solvable Nakamura
//! manifold for lattices with `b = (2m+1)π` to stdout, in `.dcplx` form.
//!
//! With `x + iy = z1`, the invariant coframe is `η1 = dz1`, `η2 = e^{-x} dz2`,
//! `η3 = e^{x} dz3`. Forms `e^{ijy} η_I ∧ η̄_J` descend to the quotient iff `j`
//! is even. Each Fourier mode `j` is a subcomplex with
//! `d_j = d_0 + (j/2)(η1 - η̄1)∧`. A monomial of weight
//! `c = (#3 - #2)/2` in mode `j` has `∂`-twist `c + j/2` and `∂̄`-twist
//! `c - j/2`. Unless one of the two twists vanishes the mode is acyclic for
//! all four cohomologies, so `j ∈ {-2, 0, 2}` carries everything.
//! Conjugation sends mode `j` to mode `-j`.

use ddbar::{BasisForm, DoubleComplex, Form, Matrix, Scalar, Structure};

const MODES: [i64; 3] = [-2, 0, 2];

fn half(k: i64) -> Scalar {
    Scalar::from_ratios(k, 2, 0, 1)
}

fn monomial(holo: &[usize], anti: &[usize]) -> BasisForm {
    BasisForm::new(holo.to_vec(), anti.to_vec()).expect("sorted indices")
}

/// Matrix of `s·(g ∧ ·)` from `src` into `tgt`.
fn wedge_matrix(g: &BasisForm, s: &Scalar, src: &[BasisForm], tgt: &[BasisForm]) -> Matrix {
    let mut m = Matrix::zeros(tgt.len(), src.len());
    for (j, b) in src.iter().enumerate() {
        if let Some((neg, w)) = g.wedge(b) {
            let i = tgt.binary_search(&w).expect("target basis is complete");
            m[(i, j)] = if neg { -s.clone() } else { s.clone() };
        }
    }
    m
}

/// Block matrix with `blocks[a][b]` at block row `a`, block column `b`.
fn assemble(blocks: &[Vec<Matrix>]) -> Matrix {
    let row = |r: &[Matrix]| r.iter().skip(1).fold(r[0].clone(), |acc, m| acc.hstack(m));
    blocks.iter().skip(1).fold(row(&blocks[0]), |acc, r| acc.vstack(&row(r)))
}

fn main() -> ddbar::Result<()> {
    let mut d2 = Form::zero();
    d2.add_term(half(-1), monomial(&[1, 2], &[]));
    d2.add_term(half(1), monomial(&[2], &[1]));
    let mut d3 = Form::zero();
    d3.add_term(half(1), monomial(&[1, 3], &[]));
    d3.add_term(half(-1), monomial(&[3], &[1]));
    let s = Structure::new(3, vec![Form::zero(), d2, d3])?;
    let inv = DoubleComplex::from_structure("invariant", &s)?;
    let n = inv.n();
    let (eta1, eta1bar) = (monomial(&[1], &[]), monomial(&[], &[1]));
    let zero = |r: usize, c: usize| Matrix::zeros(r, c);

    let (mut labels, mut del, mut delbar, mut conj) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for p in 0..=n {
        for q in 0..=n {
            let src = inv.form_basis(p, q)?;
            let del_tgt = if p < n { inv.form_basis(p + 1, q)? } else { Vec::new() };
            let delbar_tgt = if q < n { inv.form_basis(p, q + 1)? } else { Vec::new() };
            let conj_tgt = inv.form_basis(q, p)?;
            labels.push(
                MODES.iter().flat_map(|j| src.iter().map(move |b| format!("{b}*exp({j}iy)"))).collect::<Vec<_>>(),
            );
            let diag = |tgt: &[BasisForm], base: &Matrix, g: &BasisForm, sign: i64| -> Matrix {
                let rows: Vec<Vec<Matrix>> = MODES
                    .iter()
                    .enumerate()
                    .map(|(a, &j)| {
                        (0..MODES.len())
                            .map(|b| {
                                if a == b {
                                    base.add(&wedge_matrix(g, &half(sign * j), &src, tgt))
                                } else {
                                    zero(tgt.len(), src.len())
                                }
                            })
                            .collect()
                    })
                    .collect();
                assemble(&rows)
            };
            del.push(diag(&del_tgt, inv.del(p, q), &eta1, 1));
            delbar.push(diag(&delbar_tgt, inv.delbar(p, q), &eta1bar, -1));
            let c = inv.conj(p, q).expect("exterior complexes carry conjugation");
            let rows: Vec<Vec<Matrix>> = (0..MODES.len())
                .map(|a| {
                    (0..MODES.len())
                        .map(|b| if MODES[a] == -MODES[b] { c.clone() } else { zero(conj_tgt.len(), src.len()) })
                        .collect()
                })
                .collect();
            conj.push(assemble(&rows));
        }
    }
    let model = DoubleComplex::from_parts("nakamura ii", n, labels, del, delbar, Some(conj), Some(true))?;
    print!("{}", model.to_raw_text());
    Ok(())
}
