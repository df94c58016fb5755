//! Invariant Hermitian metrics: exact positivity, the balanced, Gauduchon,
//! strongly Gauduchon and locally conformally balanced conditions, and a
//! seeded search for closed positive `(n-1,n-1)` forms.
//!
//! All operators are taken from the matrices of an exterior
//! [`DoubleComplex`], so the same code serves structure-equation input and
//! exterior raw complexes.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::DoubleComplex;
use crate::criteria::real_solutions;
use crate::error::{Error, Result};
use crate::exterior::{BasisForm, Form};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::Scalar;

fn pair(j: usize, k: usize) -> BasisForm {
    BasisForm::new(vec![j], vec![k]).expect("valid (1,1) monomial")
}

/// `H` with `ω = i Σ H_{jk} η^j ∧ η^{k̄}`. Errors if `ω` is not a real
/// `(1,1)` form.
pub fn hermitian_matrix(omega: &Form, n: usize) -> Result<Matrix> {
    if !omega.has_bidegree(1, 1) {
        return Err(Error::WrongBidegree { p: 1, q: 1 });
    }
    if omega.max_index() > n {
        return Err(Error::IndexOutOfRange { index: omega.max_index() as i64, n });
    }
    if !omega.is_real() {
        return Err(Error::NotReal);
    }
    let minus_i = -Scalar::i();
    let mut h = Matrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            h[(j, k)] = &omega.coeff(&pair(j + 1, k + 1)) * &minus_i;
        }
    }
    Ok(h)
}

/// The `(1,1)` form `i Σ H_{jk} η^j ∧ η^{k̄}`.
pub fn form_from_hermitian(h: &Matrix) -> Form {
    let i = Scalar::i();
    let mut out = Form::zero();
    for j in 0..h.rows() {
        for k in 0..h.cols() {
            out.add_term(&h[(j, k)] * &i, pair(j + 1, k + 1));
        }
    }
    out
}

/// `vol = Π_j (i η^j ∧ η^{j̄})`.
pub fn volume_form(n: usize) -> Form {
    (1..=n).fold(Form::one(), |acc, j| acc.wedge(&Form::term(Scalar::i(), pair(j, j))))
}

/// `H(Ω)` with `Ω ∧ (i φ ∧ φ̄) = (φ* H(Ω) φ) vol` for `(1,0)`-forms `φ`.
pub fn power_hermitian_matrix(big_omega: &Form, n: usize) -> Result<Matrix> {
    if n == 0 || !big_omega.has_bidegree(n - 1, n - 1) {
        return Err(Error::WrongBidegree { p: n.saturating_sub(1), q: n.saturating_sub(1) });
    }
    if !big_omega.is_real() {
        return Err(Error::NotReal);
    }
    let vol = volume_form(n);
    let (top, vol_coef) = vol.terms().next().map(|(b, c)| (b.clone(), c.clone())).expect("nonzero volume");
    let mut h = Matrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            let w = big_omega.wedge(&Form::term(Scalar::i(), pair(j + 1, k + 1)));
            // c_{jk} lands in H_{kj}
            h[(k, j)] = &w.coeff(&top) / &vol_coef;
        }
    }
    Ok(h)
}

/// Sylvester's criterion: every leading principal minor is real and positive.
pub fn is_positive_definite(h: &Matrix) -> bool {
    (1..=h.rows()).all(|k| {
        let m = h.leading(k).determinant();
        m.real_sign() == Some(std::cmp::Ordering::Greater)
    })
}

/// Positivity of a real `(1,1)` form, or of a real `(n-1,n-1)` form through
/// `H(Ω)`. For `n = 2` the two readings coincide and the `(1,1)` one is used.
pub fn check_positive(form: &Form, n: usize) -> Result<bool> {
    if form.has_bidegree(1, 1) && !form.is_zero() {
        return Ok(is_positive_definite(&hermitian_matrix(form, n)?));
    }
    if n >= 1 && form.has_bidegree(n - 1, n - 1) {
        return Ok(is_positive_definite(&power_hermitian_matrix(form, n)?));
    }
    match form.bidegree() {
        Some((p, q)) if p != 1 || q != 1 => Err(Error::WrongBidegree { p: n.saturating_sub(1), q: n.saturating_sub(1) }),
        _ => Err(Error::WrongBidegree { p: 1, q: 1 }),
    }
}

pub fn verify_power(omega: &Form, big_omega: &Form, n: usize) -> bool {
    n >= 1 && omega.power(n - 1) == *big_omega
}

fn require_exterior(dc: &DoubleComplex) -> Result<()> {
    if dc.is_exterior() {
        Ok(())
    } else {
        Err(Error::Invalid("metric checks need an exterior double complex".into()))
    }
}

/// `∂` of a homogeneous `(p,q)` form.
pub fn del(dc: &DoubleComplex, f: &Form, p: usize, q: usize) -> Result<Form> {
    if p + 1 > dc.n() {
        return Ok(Form::zero());
    }
    let v = dc.to_vector(f, p, q)?;
    dc.from_vector(&dc.del(p, q).apply(&v), p + 1, q)
}

/// `∂̄` of a homogeneous `(p,q)` form.
pub fn delbar(dc: &DoubleComplex, f: &Form, p: usize, q: usize) -> Result<Form> {
    if q + 1 > dc.n() {
        return Ok(Form::zero());
    }
    let v = dc.to_vector(f, p, q)?;
    dc.from_vector(&dc.delbar(p, q).apply(&v), p, q + 1)
}

/// `d` of an arbitrary form, component by component.
pub fn d(dc: &DoubleComplex, f: &Form) -> Result<Form> {
    let mut out = Form::zero();
    for ((p, q), c) in f.components() {
        out = &out + &del(dc, &c, p, q)?;
        out = &out + &delbar(dc, &c, p, q)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Lcb {
    /// `dω^{n-1} = θ ∧ ω^{n-1}` with `θ` real, invariant and closed.
    Yes { theta: Form },
    No { reason: String },
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub positive: bool,
    pub balanced: bool,
    pub gauduchon: bool,
    pub strongly_gauduchon: bool,
    pub lcb: Lcb,
    /// `ω^{n-1}`
    pub power: Form,
}

/// Balanced, Gauduchon and strongly Gauduchon conditions on `ω^{n-1}`;
/// `lcb` is only attempted for positive `ω`.
pub fn check_metric(dc: &DoubleComplex, omega: &Form) -> Result<MetricReport> {
    require_exterior(dc)?;
    let n = dc.n();
    let h = hermitian_matrix(omega, n)?;
    let positive = is_positive_definite(&h);
    let power = omega.power(n - 1);
    let (p, q) = (n - 1, n - 1);
    let del_power = del(dc, &power, p, q)?;
    let delbar_power = delbar(dc, &power, p, q)?;
    let balanced = del_power.is_zero() && delbar_power.is_zero();
    let gauduchon = delbar(dc, &del_power, p + 1, q)?.is_zero();
    let strongly_gauduchon = if n >= 2 {
        let v = dc.to_vector(&del_power, n, n - 1)?;
        Subspace::image(dc.delbar(n, n - 2)).contains(&v)
    } else {
        del_power.is_zero()
    };
    let lcb = if positive { check_lcb(dc, omega, &power)? } else { Lcb::NotApplicable };
    Ok(MetricReport { positive, balanced, gauduchon, strongly_gauduchon, lcb, power })
}

/// Solves `∂ω^{n-1} = θ^{1,0} ∧ ω^{n-1}` for the invariant `(1,0)` part of
/// the Lee form, then checks the full `dω^{n-1} = θ ∧ ω^{n-1}` and `dθ = 0`
/// with `θ = θ^{1,0} + conj(θ^{1,0})`.
pub fn check_lcb(dc: &DoubleComplex, omega: &Form, power: &Form) -> Result<Lcb> {
    let n = dc.n();
    debug_assert!(verify_power(omega, power, n));
    let target_basis = dc.form_basis(n, n - 1)?;
    let columns: Vec<Vec<Scalar>> = (1..=n)
        .map(|j| Form::from_word(Scalar::one(), &[j as i64]).wedge(power).to_vector(&target_basis))
        .collect::<Result<_>>()?;
    let system = Matrix::from_columns(target_basis.len(), &columns);
    let rhs = dc.to_vector(&del(dc, power, n - 1, n - 1)?, n, n - 1)?;
    let Some(a) = system.solve(&rhs) else {
        return Ok(Lcb::No { reason: "no invariant Lee form".into() });
    };
    let theta10 = Form::from_terms(a.into_iter().enumerate().map(|(j, c)| (BasisForm::new(vec![j + 1], vec![]).expect("generator"), c)));
    let theta = &theta10 + &theta10.conjugate();
    if d(dc, power)? != theta.wedge(power) {
        return Ok(Lcb::No { reason: "dω^{n-1} is not θ ∧ ω^{n-1}".into() });
    }
    if !d(dc, &theta)?.is_zero() {
        return Ok(Lcb::No { reason: "Lee form is not closed".into() });
    }
    Ok(Lcb::Yes { theta })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BalancedSearch {
    /// A closed positive real `(n-1,n-1)` form.
    Certificate { omega_power: Form, trial: usize, method: String },
    Unknown { trials: usize },
}

/// Real basis of the closed real `(n-1,n-1)` forms.
pub fn closed_real_forms(dc: &DoubleComplex) -> Result<Vec<Form>> {
    require_exterior(dc)?;
    let n = dc.n();
    let (p, q) = (n - 1, n - 1);
    let conj = dc.conj(p, q).ok_or(Error::NoConjugation)?;
    let none_del = Matrix::zeros(dc.dim(p + 1, q), 0);
    let none_delbar = Matrix::zeros(dc.dim(p, q + 1), 0);
    let vectors = real_solutions(conj, &[(dc.del(p, q), &none_del), (dc.delbar(p, q), &none_delbar)]);
    vectors.iter().map(|v| dc.from_vector(v, p, q)).collect()
}

fn realify(v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(|s| Scalar::real(s.re().clone())).chain(v.iter().map(|s| Scalar::real(s.im().clone()))).collect()
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(Scalar::zero(), |acc, (x, y)| &acc + &(x * y))
}

/// Orthogonal projection (in real coordinates) of `target` onto the real
/// span of `basis`.
fn project(dc: &DoubleComplex, basis: &[Form], target: &Form) -> Result<Form> {
    let (p, q) = (dc.n() - 1, dc.n() - 1);
    let rs: Vec<Vec<Scalar>> = basis.iter().map(|f| dc.to_vector(f, p, q).map(|v| realify(&v))).collect::<Result<_>>()?;
    let t = realify(&dc.to_vector(target, p, q)?);
    let gram = Matrix::from_rows(rs.iter().map(|a| rs.iter().map(|b| dot(a, b)).collect()).collect())?;
    let rhs: Vec<Scalar> = rs.iter().map(|a| dot(a, &t)).collect();
    let coef = gram.solve(&rhs).expect("Gram matrix of an independent set is invertible");
    Ok(basis.iter().zip(&coef).fold(Form::zero(), |acc, (f, c)| &acc + &f.scale(c)))
}

fn random_combination(basis: &[Form], base: &Form, seed: u64, trial: usize) -> Form {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let scale = Scalar::ratio(1, 1 << (trial % 4));
    basis.iter().fold(base.clone(), |acc, f| {
        let c = Scalar::ratio(rng.gen_range(-16..=16), 16);
        &acc + &f.scale(&(&c * &scale))
    })
}

/// Semidecision for a closed positive `(n-1,n-1)` form. Candidates, one
/// budget unit each: the diagonal `ω_0^{n-1}`, its projection onto the closed
/// real forms, then seeded random perturbations of that projection. Trial `k`
/// depends only on `(seed, k)`.
pub fn find_balanced(dc: &DoubleComplex, budget: usize, seed: u64) -> Result<BalancedSearch> {
    require_exterior(dc)?;
    let n = dc.n();
    let closed = closed_real_forms(dc)?;
    let omega0 = form_from_hermitian(&Matrix::identity(n));
    let diagonal = omega0.power(n - 1);
    let accept = |f: &Form| -> Result<bool> { Ok(!f.is_zero() && d(dc, f)?.is_zero() && is_positive_definite(&power_hermitian_matrix(f, n)?)) };

    let mut projection: Option<Form> = None;
    for trial in 0..budget {
        let (candidate, method) = match trial {
            0 => (diagonal.clone(), "diagonal"),
            1 => {
                let pr = project(dc, &closed, &diagonal)?;
                projection = Some(pr.clone());
                (pr, "projection")
            }
            _ => {
                let base = projection.as_ref().expect("set at trial 1");
                (random_combination(&closed, base, seed, trial), "random")
            }
        };
        if accept(&candidate)? {
            return Ok(BalancedSearch::Certificate { omega_power: candidate, trial, method: method.into() });
        }
    }
    Ok(BalancedSearch::Unknown { trials: budget })
}
