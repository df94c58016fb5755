//! Finite-dimensional double complexes `(Λ^{•,•}, ∂, ∂̄)` with exact
//! matrices, built from structure equations or loaded from a raw `.dcplx`
//! description.

use std::fmt::Write as _;


use crate::error::{Error, Result};
use crate::exterior::{basis, BasisForm, Bidegree, Form};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::structure::Structure;

/// A bigraded complex in complex dimension `n`, bidegrees `0 ≤ p,q ≤ n`.
///
/// `del(p,q)` is the matrix of `∂: A^{p,q} → A^{p+1,q}` (rows index the
/// target basis), `delbar(p,q)` that of `∂̄: A^{p,q} → A^{p,q+1}`. Out of range
/// targets have zero rows. The optional conjugation matrices `conj(p,q)`
/// describe the antilinear map `A^{p,q} → A^{q,p}`, `v ↦ C·v̄`.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleComplex {
    name: String,
    n: usize,
    labels: Vec<Vec<String>>,
    del: Vec<Matrix>,
    delbar: Vec<Matrix>,
    conj: Option<Vec<Matrix>>,
    unimodular: Option<bool>,
    exterior: bool,
}

impl DoubleComplex {
    fn idx(&self, p: usize, q: usize) -> usize {
        p * (self.n + 1) + q
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self, p: usize, q: usize) -> usize {
        if p > self.n || q > self.n {
            return 0;
        }
        self.labels[self.idx(p, q)].len()
    }

    pub fn labels(&self, p: usize, q: usize) -> &[String] {
        &self.labels[self.idx(p, q)]
    }

    pub fn del(&self, p: usize, q: usize) -> &Matrix {
        &self.del[self.idx(p, q)]
    }

    pub fn delbar(&self, p: usize, q: usize) -> &Matrix {
        &self.delbar[self.idx(p, q)]
    }

    /// Conjugation `A^{p,q} → A^{q,p}` if the complex carries one.
    pub fn conj(&self, p: usize, q: usize) -> Option<&Matrix> {
        self.conj.as_ref().map(|c| &c[self.idx(p, q)])
    }

    pub fn has_conjugation(&self) -> bool {
        self.conj.is_some()
    }

    /// `Some(true)` for complexes of unimodular Lie algebras; `None` when
    /// unknown (raw input without the flag).
    pub fn unimodular(&self) -> Option<bool> {
        self.unimodular
    }

    /// True when the complex is the full exterior algebra in the canonical
    /// basis, so forms can be converted to coordinate vectors.
    pub fn is_exterior(&self) -> bool {
        self.exterior
    }

    /// Canonical basis of `Λ^{p,q}` for exterior complexes.
    pub fn form_basis(&self, p: usize, q: usize) -> Result<Vec<BasisForm>> {
        if !self.exterior {
            return Err(Error::Invalid("complex is not an exterior algebra".into()));
        }
        basis(p, q, self.n)
    }

    pub fn to_vector(&self, f: &Form, p: usize, q: usize) -> Result<Vec<Scalar>> {
        if !f.has_bidegree(p, q) {
            return Err(Error::WrongBidegree { p, q });
        }
        f.to_vector(&self.form_basis(p, q)?)
    }

    pub fn from_vector(&self, v: &[Scalar], p: usize, q: usize) -> Result<Form> {
        Ok(Form::from_vector(&self.form_basis(p, q)?, v))
    }

    /// Matrix of `∂∂̄: A^{p,q} → A^{p+1,q+1}`.
    pub fn del_delbar(&self, p: usize, q: usize) -> Matrix {
        if p + 1 > self.n || q + 1 > self.n {
            return Matrix::zeros(0, self.dim(p, q));
        }
        self.del(p, q + 1).mul(self.delbar(p, q))
    }

    /// Matrix of `d = ∂ + ∂̄` from total degree `k` to `k+1`, with the
    /// bidegree blocks ordered by increasing `p`.
    pub fn total_d(&self, k: usize) -> Matrix {
        let src = self.total_blocks(k);
        let dst = self.total_blocks(k + 1);
        let offsets = |blocks: &[Bidegree]| {
            let mut off = Vec::new();
            let mut acc = 0;
            for &(p, q) in blocks {
                off.push(acc);
                acc += self.dim(p, q);
            }
            (off, acc)
        };
        let (soff, sdim) = offsets(&src);
        let (doff, ddim) = offsets(&dst);
        let mut m = Matrix::zeros(ddim, sdim);
        for (si, &(p, q)) in src.iter().enumerate() {
            let mut place = |mat: &Matrix, tp: usize, tq: usize| {
                if let Some(di) = dst.iter().position(|&b| b == (tp, tq)) {
                    for r in 0..mat.rows() {
                        for c in 0..mat.cols() {
                            m[(doff[di] + r, soff[si] + c)] = mat[(r, c)].clone();
                        }
                    }
                }
            };
            place(self.del(p, q), p + 1, q);
            place(self.delbar(p, q), p, q + 1);
        }
        m
    }

    /// Bidegrees of total degree `k`, increasing in `p`.
    pub fn total_blocks(&self, k: usize) -> Vec<Bidegree> {
        (0..=self.n).filter(|&p| k >= p && k - p <= self.n).map(|p| (p, k - p)).collect()
    }

    pub fn total_dim(&self, k: usize) -> usize {
        self.total_blocks(k).iter().map(|&(p, q)| self.dim(p, q)).sum()
    }

    /// Checks `∂² = 0`, `∂̄² = 0`, `∂∂̄ + ∂̄∂ = 0` and, when present, that the
    /// conjugation is an involution exchanging `∂` and `∂̄`.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n;
        for p in 0..=n {
            for q in 0..=n {
                let (r, c) = (self.del(p, q).rows(), self.del(p, q).cols());
                let want = (self.dim(p + 1, q), self.dim(p, q));
                if (r, c) != want {
                    return Err(Error::InvalidComplex(format!("del at ({p},{q}) has shape {r}x{c}, expected {}x{}", want.0, want.1)));
                }
                let (r, c) = (self.delbar(p, q).rows(), self.delbar(p, q).cols());
                let want = (self.dim(p, q + 1), self.dim(p, q));
                if (r, c) != want {
                    return Err(Error::InvalidComplex(format!("delbar at ({p},{q}) has shape {r}x{c}, expected {}x{}", want.0, want.1)));
                }
            }
        }
        for p in 0..=n {
            for q in 0..=n {
                if p + 2 <= n && !self.del(p + 1, q).mul(self.del(p, q)).is_zero() {
                    return Err(Error::InvalidComplex(format!("del^2 != 0 at ({p},{q})")));
                }
                if q + 2 <= n && !self.delbar(p, q + 1).mul(self.delbar(p, q)).is_zero() {
                    return Err(Error::InvalidComplex(format!("delbar^2 != 0 at ({p},{q})")));
                }
                if p < n && q < n {
                    let a = self.del(p, q + 1).mul(self.delbar(p, q));
                    let b = self.delbar(p + 1, q).mul(self.del(p, q));
                    if !a.add(&b).is_zero() {
                        return Err(Error::InvalidComplex(format!(
                            "del delbar + delbar del != 0 at ({p},{q})"
                        )));
                    }
                }
            }
        }
        if let Some(conj) = &self.conj {
            for p in 0..=n {
                for q in 0..=n {
                    let c = &conj[self.idx(p, q)];
                    if (c.rows(), c.cols()) != (self.dim(q, p), self.dim(p, q)) {
                        return Err(Error::InvalidComplex(format!("conj at ({p},{q}) has the wrong shape")));
                    }
                }
            }
            for p in 0..=n {
                for q in 0..=n {
                    let c = &conj[self.idx(p, q)];
                    let back = &conj[self.idx(q, p)];
                    if back.mul(&c.conj()) != Matrix::identity(self.dim(p, q)) {
                        return Err(Error::InvalidComplex(format!("conj is not an involution at ({p},{q})")));
                    }
                    // conj(∂v) = ∂̄ conj(v):  C_{p+1,q} conj(D) = Dbar_{q,p} C_{p,q}
                    if p < n {
                        let lhs = conj[self.idx(p + 1, q)].mul(&self.del(p, q).conj());
                        let rhs = self.delbar(q, p).mul(c);
                        if lhs != rhs {
                            return Err(Error::InvalidComplex(format!(
                                "conjugation does not exchange del and delbar at ({p},{q})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds the complex of invariant forms of an integrable structure.
    pub fn from_structure(name: &str, s: &Structure) -> Result<Self> {
        if let Some((k, o)) = s.obstructions().into_iter().next() {
            return Err(Error::NonIntegrable { generator: k, obstruction: o.to_string() });
        }
        let n = s.n();
        let mut labels = Vec::new();
        let mut del = Vec::new();
        let mut delbar = Vec::new();
        let mut conj = Vec::new();
        for p in 0..=n {
            for q in 0..=n {
                let src = basis(p, q, n)?;
                labels.push(src.iter().map(ToString::to_string).collect());
                let del_tgt = if p < n { basis(p + 1, q, n)? } else { Vec::new() };
                let delbar_tgt = if q < n { basis(p, q + 1, n)? } else { Vec::new() };
                let conj_tgt = basis(q, p, n)?;
                let mut dm = Matrix::zeros(del_tgt.len(), src.len());
                let mut bm = Matrix::zeros(delbar_tgt.len(), src.len());
                let mut cm = Matrix::zeros(conj_tgt.len(), src.len());
                for (j, b) in src.iter().enumerate() {
                    let d = s.d_monomial(b);
                    for (t, c) in d.terms() {
                        let slot = if t.bidegree() == (p + 1, q) {
                            del_tgt.binary_search(t).map(|i| (&mut dm, i))
                        } else if t.bidegree() == (p, q + 1) {
                            delbar_tgt.binary_search(t).map(|i| (&mut bm, i))
                        } else {
                            unreachable!("integrable structures only produce (1,0) and (0,1) shifts")
                        };
                        let (m, i) = slot.expect("target basis is complete");
                        m[(i, j)] = c.clone();
                    }
                    let (neg, cb) = b.conjugate();
                    let i = conj_tgt.binary_search(&cb).expect("conjugate basis is complete");
                    cm[(i, j)] = if neg { -Scalar::from(1) } else { Scalar::from(1) };
                }
                del.push(dm);
                delbar.push(bm);
                conj.push(cm);
            }
        }
        let dc = DoubleComplex {
            name: name.to_string(),
            n,
            labels,
            del,
            delbar,
            conj: Some(conj),
            unimodular: Some(s.is_unimodular()),
            exterior: true,
        };
        debug_assert!(dc.check_invariants().is_ok());
        Ok(dc)
    }

    /// Assembles a complex from explicit data and verifies the invariants.
    pub fn from_parts(
        name: &str,
        n: usize,
        labels: Vec<Vec<String>>,
        del: Vec<Matrix>,
        delbar: Vec<Matrix>,
        conj: Option<Vec<Matrix>>,
        unimodular: Option<bool>,
    ) -> Result<Self> {
        let slots = (n + 1) * (n + 1);
        if labels.len() != slots || del.len() != slots || delbar.len() != slots {
            return Err(Error::InvalidComplex("wrong number of bidegree slots".into()));
        }
        if conj.as_ref().is_some_and(|c| c.len() != slots) {
            return Err(Error::InvalidComplex("wrong number of conjugation blocks".into()));
        }
        let dc = DoubleComplex { name: name.to_string(), n, labels, del, delbar, conj, unimodular, exterior: false };
        dc.check_invariants()?;
        Ok(dc)
    }

    /// Serializes to the `.dcplx` format read by [`load_raw_complex`].
    pub fn to_raw_text(&self) -> String {
        let mut s = String::new();
        s.push_str("[complex]\n");
        let _ = writeln!(s, "name = \"{}\"", self.name);
        let _ = writeln!(s, "dim = {}", self.n);
        if let Some(u) = self.unimodular {
            let _ = writeln!(s, "unimodular = {u}");
        }
        if self.exterior {
            s.push_str("exterior = true\n");
        }
        let n = self.n;
        for p in 0..=n {
            for q in 0..=n {
                if self.dim(p, q) > 0 {
                    let _ = writeln!(s, "\n[basis {p},{q}]\n{}", self.labels(p, q).join(" "));
                }
            }
        }
        let block = |s: &mut String, kind: &str, p: usize, q: usize, m: &Matrix| {
            if m.rows() == 0 || m.cols() == 0 {
                return;
            }
            let _ = writeln!(s, "\n[{kind} {p},{q}]");
            for i in 0..m.rows() {
                let row: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
                let _ = writeln!(s, "{}", row.join(" "));
            }
        };
        for p in 0..=n {
            for q in 0..=n {
                block(&mut s, "del", p, q, self.del(p, q));
                block(&mut s, "delbar", p, q, self.delbar(p, q));
            }
        }
        if let Some(conj) = &self.conj {
            for p in 0..=n {
                for q in 0..=n {
                    block(&mut s, "conj", p, q, &conj[self.idx(p, q)]);
                }
            }
        }
        s
    }
}

/// Parses a `.dcplx` raw double complex:
///
/// ```text
/// [complex]
/// name = "toy"
/// dim = 1
/// unimodular = true        # optional
///
/// [basis 0,1]
/// x y                      # whitespace-separated labels
///
/// [delbar 1,0]             # one line per target basis element,
/// 0 1/2+i                  # one entry per source basis element
/// ```
///
/// Blocks `del p,q`, `delbar p,q`, `conj p,q` are row-major matrices; missing
/// `del`/`delbar` blocks are zero. Conjugation is present only if at least
/// one `conj` block is given (then all nonempty ones must be). The
/// anticommutation identities are verified on load.
pub fn load_raw_complex(text: &str) -> Result<DoubleComplex> {
    enum Block {
        Header,
        Basis,
        Matrix,
    }
    let mut name = String::new();
    let mut n: Option<usize> = None;
    let mut unimodular = None;
    let mut exterior = false;
    let mut labels_raw: Vec<((usize, usize), Vec<String>)> = Vec::new();
    // (kind, bidegree, header line, rows)
    type RawBlock = (&'static str, (usize, usize), usize, Vec<Vec<Scalar>>);
    let mut mats: Vec<RawBlock> = Vec::new();
    let mut block: Option<Block> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            let inner = line
                .strip_prefix('[')
                .and_then(|l| l.strip_suffix(']'))
                .ok_or_else(|| Error::syntax(line_no, 1, "malformed section header"))?
                .trim();
            if inner == "complex" {
                block = Some(Block::Header);
                continue;
            }
            let (kind, bideg) = inner
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::syntax(line_no, 1, format!("unknown section [{inner}]")))?;
            let (p, q) = parse_bidegree(bideg.trim()).ok_or_else(|| Error::syntax(line_no, 1, "expected p,q"))?;
            block = Some(match kind {
                "basis" => {
                    labels_raw.push(((p, q), Vec::new()));
                    Block::Basis
                }
                "del" | "delbar" | "conj" => {
                    let k: &'static str = match kind {
                        "del" => "del",
                        "delbar" => "delbar",
                        _ => "conj",
                    };
                    mats.push((k, (p, q), line_no, Vec::new()));
                    Block::Matrix
                }
                _ => return Err(Error::syntax(line_no, 1, format!("unknown section [{inner}]"))),
            });
            continue;
        }
        match block {
            None => return Err(Error::syntax(line_no, 1, "content before [complex]")),
            Some(Block::Header) => {
                let (k, v) = line.split_once('=').ok_or_else(|| Error::syntax(line_no, 1, "expected key = value"))?;
                let v = v.trim();
                match k.trim() {
                    "name" => name = v.trim_matches('"').to_string(),
                    "dim" => n = Some(v.parse().map_err(|_| Error::syntax(line_no, 1, "bad dim"))?),
                    "unimodular" => unimodular = Some(parse_bool(v, line_no)?),
                    "exterior" => exterior = parse_bool(v, line_no)?,
                    other => return Err(Error::syntax(line_no, 1, format!("unknown key '{other}'"))),
                }
            }
            Some(Block::Basis) => {
                let entry = labels_raw.last_mut().expect("basis block open");
                entry.1.extend(line.split_whitespace().map(str::to_string));
            }
            Some(Block::Matrix) => {
                let mut row = Vec::new();
                for (col, tok) in line.split_whitespace().enumerate() {
                    row.push(tok.parse::<Scalar>().map_err(|e| {
                        Error::syntax(line_no, col + 1, format!("bad matrix entry '{tok}': {e}"))
                    })?);
                }
                mats.last_mut().expect("matrix block open").3.push(row);
            }
        }
    }

    let n = n.ok_or_else(|| Error::syntax(1, 1, "missing dim in [complex]"))?;
    let slots = (n + 1) * (n + 1);
    let at = |p: usize, q: usize| p * (n + 1) + q;
    let mut labels: Vec<Vec<String>> = vec![Vec::new(); slots];
    for ((p, q), l) in labels_raw {
        if p > n || q > n {
            return Err(Error::BidegreeOutOfRange { p, q, n });
        }
        labels[at(p, q)].extend(l);
    }
    let dim = |p: usize, q: usize| if p > n || q > n { 0 } else { labels[at(p, q)].len() };
    let mut del: Vec<Matrix> = Vec::with_capacity(slots);
    let mut delbar: Vec<Matrix> = Vec::with_capacity(slots);
    let mut conj: Vec<Matrix> = Vec::with_capacity(slots);
    for p in 0..=n {
        for q in 0..=n {
            del.push(Matrix::zeros(dim(p + 1, q), dim(p, q)));
            delbar.push(Matrix::zeros(dim(p, q + 1), dim(p, q)));
            conj.push(Matrix::zeros(dim(q, p), dim(p, q)));
        }
    }
    let mut saw_conj = false;
    for (kind, (p, q), line_no, rows) in mats {
        if p > n || q > n {
            return Err(Error::BidegreeOutOfRange { p, q, n });
        }
        let (tr, tc) = match kind {
            "del" => (dim(p + 1, q), dim(p, q)),
            "delbar" => (dim(p, q + 1), dim(p, q)),
            _ => (dim(q, p), dim(p, q)),
        };
        if rows.len() != tr || rows.iter().any(|r| r.len() != tc) {
            return Err(Error::syntax(line_no, 1, format!("[{kind} {p},{q}] must be {tr}x{tc}")));
        }
        let m = if tr == 0 { Matrix::zeros(0, tc) } else { Matrix::from_rows(rows)? };
        match kind {
            "del" => del[at(p, q)] = m,
            "delbar" => delbar[at(p, q)] = m,
            _ => {
                saw_conj = true;
                conj[at(p, q)] = m;
            }
        }
    }
    let mut dc = DoubleComplex::from_parts(&name, n, labels, del, delbar, saw_conj.then_some(conj), unimodular)?;
    if exterior {
        // only trusted if the labels are exactly the canonical basis
        let canonical = (0..=n).all(|p| {
            (0..=n).all(|q| {
                basis(p, q, n)
                    .map(|b| b.iter().map(ToString::to_string).collect::<Vec<_>>() == dc.labels(p, q))
                    .unwrap_or(false)
            })
        });
        if !canonical {
            return Err(Error::InvalidComplex("exterior = true but labels are not the canonical basis".into()));
        }
        dc.exterior = true;
    }
    Ok(dc)
}

fn parse_bidegree(s: &str) -> Option<(usize, usize)> {
    let (p, q) = s.split_once(',')?;
    Some((p.trim().parse().ok()?, q.trim().parse().ok()?))
}

fn parse_bool(v: &str, line: usize) -> Result<bool> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::syntax(line, 1, "expected true or false")),
    }
}

/// Whether every matrix of the complex is zero.
pub fn is_trivial_differential(dc: &DoubleComplex) -> bool {
    (0..=dc.n()).all(|p| (0..=dc.n()).all(|q| dc.del(p, q).is_zero() && dc.delbar(p, q).is_zero()))
}
