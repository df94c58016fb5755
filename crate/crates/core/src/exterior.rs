//! The bigraded exterior algebra on `η^1..η^n, η^{1̄}..η^{n̄}`.
//!
//! Every basis element is stored in canonical order: all holomorphic factors
//! first, then all antiholomorphic factors, each ascending. All signs in the
//! crate follow from this single convention.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Bidegree = (usize, usize);

/// A canonical monomial `η^{holo} ∧ η^{\bar anti}`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BasisForm {
    holo: Vec<usize>,
    anti: Vec<usize>,
}

impl BasisForm {
    /// Builds a monomial from already strictly increasing index lists.
    pub fn new(holo: Vec<usize>, anti: Vec<usize>) -> Result<Self> {
        let increasing = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]) && v.iter().all(|&i| i >= 1);
        if !increasing(&holo) || !increasing(&anti) {
            return Err(Error::Invalid(format!(
                "basis indices must be strictly increasing and positive: {holo:?};{anti:?}"
            )));
        }
        Ok(BasisForm { holo, anti })
    }

    pub fn unit() -> Self {
        BasisForm::default()
    }

    pub fn holo(&self) -> &[usize] {
        &self.holo
    }

    pub fn anti(&self) -> &[usize] {
        &self.anti
    }

    pub fn bidegree(&self) -> Bidegree {
        (self.holo.len(), self.anti.len())
    }

    pub fn degree(&self) -> usize {
        self.holo.len() + self.anti.len()
    }

    pub fn max_index(&self) -> usize {
        self.holo.iter().chain(&self.anti).copied().max().unwrap_or(0)
    }

    /// The factor word in the signed-index notation: `j` for `η^j`, `-j` for
    /// `η^{j̄}`.
    pub fn word(&self) -> Vec<i64> {
        self.holo
            .iter()
            .map(|&j| j as i64)
            .chain(self.anti.iter().map(|&j| -(j as i64)))
            .collect()
    }

    /// Sorts an arbitrary word of signed indices into canonical order.
    /// Returns `None` when a factor repeats (the product vanishes) and
    /// otherwise the sign of the sorting permutation.
    pub fn from_word(word: &[i64]) -> Result<Option<(bool, BasisForm)>> {
        if word.contains(&0) {
            return Err(Error::IndexOutOfRange { index: 0, n: 0 });
        }
        let key = |x: i64| if x > 0 { (0, x) } else { (1, -x) };
        let mut letters: Vec<i64> = word.to_vec();
        // insertion sort, counting transpositions
        let mut negative = false;
        for i in 1..letters.len() {
            let mut j = i;
            while j > 0 {
                match key(letters[j - 1]).cmp(&key(letters[j])) {
                    Ordering::Greater => {
                        letters.swap(j - 1, j);
                        negative = !negative;
                        j -= 1;
                    }
                    Ordering::Equal => return Ok(None),
                    Ordering::Less => break,
                }
            }
        }
        let holo = letters.iter().filter(|&&x| x > 0).map(|&x| x as usize).collect();
        let anti = letters.iter().filter(|&&x| x < 0).map(|&x| (-x) as usize).collect();
        Ok(Some((negative, BasisForm { holo, anti })))
    }

    /// `self ∧ other` as `(negative sign, product)`, or `None` if it vanishes.
    pub fn wedge(&self, other: &BasisForm) -> Option<(bool, BasisForm)> {
        let (holo, s1) = merge_sorted(&self.holo, &other.holo)?;
        let (anti, s2) = merge_sorted(&self.anti, &other.anti)?;
        // moving other's holomorphic block past self's antiholomorphic block
        let s3 = self.anti.len() * other.holo.len() % 2 == 1;
        Some((s1 ^ s2 ^ s3, BasisForm { holo, anti }))
    }

    /// Complex conjugate `(η^H ∧ η^{Ā})‾ = η^{H̄} ∧ η^A = ± η^A ∧ η^{H̄}`.
    pub fn conjugate(&self) -> (bool, BasisForm) {
        let negative = self.holo.len() * self.anti.len() % 2 == 1;
        (negative, BasisForm { holo: self.anti.clone(), anti: self.holo.clone() })
    }
}

/// Merges two strictly increasing lists; the flag is the parity of the
/// shuffle. `None` if they share an element.
fn merge_sorted(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut inversions = 0usize;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                inversions += a.len() - i;
                j += 1;
            }
            Ordering::Equal => return None,
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, inversions % 2 == 1))
}

impl Ord for BasisForm {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.holo.len(), self.anti.len(), &self.holo, &self.anti).cmp(&(
            other.holo.len(),
            other.anti.len(),
            &other.holo,
            &other.anti,
        ))
    }
}

impl PartialOrd for BasisForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasisForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.word().iter().map(|x| x.to_string()).collect();
        write!(f, "e({})", w.join(","))
    }
}

impl fmt::Debug for BasisForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All strictly increasing `k`-subsets of `1..=n`, lexicographically.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            if n - i + 1 < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(1, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Ordered basis of `Λ^{p,q}` in complex dimension `n`.
pub fn basis(p: usize, q: usize, n: usize) -> Result<Vec<BasisForm>> {
    if p > n || q > n {
        return Err(Error::BidegreeOutOfRange { p, q, n });
    }
    let holos = combinations(n, p);
    let antis = combinations(n, q);
    let mut out = Vec::with_capacity(holos.len() * antis.len());
    for h in &holos {
        for a in &antis {
            out.push(BasisForm { holo: h.clone(), anti: a.clone() });
        }
    }
    Ok(out)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// A finitely supported element of the exterior algebra with exact
/// coefficients. Zero coefficients are never stored.
///
/// A `Form` may mix bidegrees (e.g. a real 1-form, or the image of a
/// generator under a coframe change); [`Form::bidegree`] reports whether it is
/// homogeneous.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Form {
    terms: BTreeMap<BasisForm, Scalar>,
}

impl Form {
    pub fn zero() -> Self {
        Form::default()
    }

    pub fn one() -> Self {
        Form::term(Scalar::one(), BasisForm::unit())
    }

    pub fn term(coef: Scalar, basis: BasisForm) -> Self {
        let mut f = Form::zero();
        f.add_term(coef, basis);
        f
    }

    /// A single monomial in signed-index notation, e.g. `e(&[1, -2])`.
    pub fn from_word(coef: Scalar, word: &[i64]) -> Self {
        match BasisForm::from_word(word).expect("nonzero indices") {
            None => Form::zero(),
            Some((neg, b)) => Form::term(if neg { -coef } else { coef }, b),
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BasisForm, Scalar)>) -> Self {
        let mut f = Form::zero();
        for (b, c) in terms {
            f.add_term(c, b);
        }
        f
    }

    pub fn add_term(&mut self, coef: Scalar, basis: BasisForm) {
        if coef.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(basis) {
            Entry::Vacant(v) => {
                v.insert(coef);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &coef;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: &BasisForm) -> Scalar {
        self.terms.get(b).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisForm, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common bidegree of all terms; `None` for zero or mixed forms.
    pub fn bidegree(&self) -> Option<Bidegree> {
        let mut it = self.terms.keys().map(BasisForm::bidegree);
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// True if zero or homogeneous of bidegree `(p,q)`.
    pub fn has_bidegree(&self, p: usize, q: usize) -> bool {
        self.terms.keys().all(|b| b.bidegree() == (p, q))
    }

    pub fn component(&self, p: usize, q: usize) -> Form {
        Form {
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.bidegree() == (p, q))
                .map(|(b, c)| (b.clone(), c.clone()))
                .collect(),
        }
    }

    /// Splits into homogeneous components.
    pub fn components(&self) -> BTreeMap<Bidegree, Form> {
        let mut out: BTreeMap<Bidegree, Form> = BTreeMap::new();
        for (b, c) in &self.terms {
            out.entry(b.bidegree()).or_default().terms.insert(b.clone(), c.clone());
        }
        out
    }

    pub fn max_index(&self) -> usize {
        self.terms.keys().map(BasisForm::max_index).max().unwrap_or(0)
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        if s.is_zero() {
            return Form::zero();
        }
        Form { terms: self.terms.iter().map(|(b, c)| (b.clone(), c * s)).collect() }
    }

    pub fn wedge(&self, other: &Form) -> Form {
        let mut out = Form::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((neg, prod)) = a.wedge(b) {
                    let c = ca * cb;
                    out.add_term(if neg { -c } else { c }, prod);
                }
            }
        }
        out
    }

    /// `self^k` under the wedge product (`self^0 = 1`).
    pub fn power(&self, k: usize) -> Form {
        (0..k).fold(Form::one(), |acc, _| acc.wedge(self))
    }

    pub fn conjugate(&self) -> Form {
        let mut out = Form::zero();
        for (b, c) in &self.terms {
            let (neg, cb) = b.conjugate();
            let c = c.conj();
            out.add_term(if neg { -c } else { c }, cb);
        }
        out
    }

    pub fn is_real(&self) -> bool {
        self.conjugate() == *self
    }

    /// Coefficient vector against an ordered basis. Terms outside the basis
    /// are an error.
    pub fn to_vector(&self, basis: &[BasisForm]) -> Result<Vec<Scalar>> {
        let mut v = vec![Scalar::zero(); basis.len()];
        for (b, c) in &self.terms {
            let idx = basis
                .binary_search(b)
                .map_err(|_| Error::Invalid(format!("term {b} not in the target basis")))?;
            v[idx] = c.clone();
        }
        Ok(v)
    }

    pub fn from_vector(basis: &[BasisForm], v: &[Scalar]) -> Form {
        Form::from_terms(basis.iter().cloned().zip(v.iter().cloned()))
    }
}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        for (b, c) in &rhs.terms {
            out.add_term(c.clone(), b.clone());
        }
        out
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self + &(-rhs)
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        Form { terms: self.terms.iter().map(|(b, c)| (b.clone(), -c)).collect() }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{b}")?;
        }
        Ok(())
    }
}

/// Serialized in the textual form syntax.
impl serde::Serialize for Form {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Form {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        crate::expr::SymbolicForm::parse(&s)
            .and_then(|f| f.eval(&Default::default()))
            .map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(word: &[i64]) -> Form {
        Form::from_word(Scalar::one(), word)
    }

    #[test]
    fn repeated_factor_vanishes() {
        assert!(e(&[1]).wedge(&e(&[1])).is_zero());
        assert!(e(&[1, 2, 1]).is_zero());
    }

    #[test]
    fn transposition_sign() {
        assert_eq!(e(&[1]).wedge(&e(&[-1])), e(&[1, -1]));
        assert_eq!(e(&[-1]).wedge(&e(&[1])), -&e(&[1, -1]));
    }

    #[test]
    fn conjugate_of_mixed_monomial() {
        // conj(η^1 ∧ η^{2̄}) = η^{1̄} ∧ η^2 = -η^2 ∧ η^{1̄}
        assert_eq!(e(&[1, -2]).conjugate(), -&e(&[2, -1]));
        // i η^{1 1̄} is real
        let w = Form::from_word(Scalar::i(), &[1, -1]);
        assert!(w.is_real());
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(basis(2, 2, 3).unwrap().len(), 9);
        assert_eq!(basis(0, 0, 3).unwrap(), vec![BasisForm::unit()]);
        assert_eq!(basis(3, 3, 3).unwrap().len(), 1);
        assert!(basis(4, 0, 3).is_err());
        let b = basis(1, 2, 3).unwrap();
        assert!(b.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn bidegree_tracking() {
        let f = &e(&[1, -1]) + &e(&[2, -3]);
        assert_eq!(f.bidegree(), Some((1, 1)));
        let g = &e(&[1]) + &e(&[-1]);
        assert_eq!(g.bidegree(), None);
        assert_eq!(g.components().len(), 2);
    }
}
