//! Random nilpotent structure equations, for property testing.
//!
//! `dη^k` only involves `η^j, η^{j̄}` with `j < k`, so the underlying Lie
//! algebra is nilpotent (hence unimodular). Terms are `(2,0)` or `(1,1)`,
//! so the structure is integrable. `d² = 0` is not automatic and is enforced
//! by rejection.

use rand::Rng;

use crate::exterior::{BasisForm, Form};
use crate::scalar::Scalar;
use crate::structure::Structure;

fn small_gaussian<R: Rng>(rng: &mut R) -> Scalar {
    let re = rng.gen_range(-2..=2);
    let im = if rng.gen_bool(0.3) { rng.gen_range(-1..=1) } else { 0 };
    Scalar::from_ratios(re, 1, im, 1)
}

/// One candidate; `None` if it fails `d² = 0` or is trivial.
pub fn nilpotent_candidate<R: Rng>(n: usize, density: f64, rng: &mut R) -> Option<Structure> {
    let mut d_eta = vec![Form::zero(); n];
    for (k, slot) in d_eta.iter_mut().enumerate().skip(1) {
        let lower = k; // generators 1..=k are below η^{k+1}
        let mut f = Form::zero();
        for a in 1..=lower {
            for b in (a + 1)..=lower {
                if rng.gen_bool(density) {
                    f.add_term(small_gaussian(rng), BasisForm::new(vec![a, b], vec![]).expect("sorted"));
                }
            }
            for b in 1..=lower {
                if rng.gen_bool(density) {
                    f.add_term(small_gaussian(rng), BasisForm::new(vec![a], vec![b]).expect("sorted"));
                }
            }
        }
        *slot = f;
    }
    if d_eta.iter().all(Form::is_zero) {
        return None;
    }
    let s = Structure::new(n, d_eta).ok()?;
    s.d_squared_residues().is_empty().then_some(s)
}

/// Rejection-samples up to `attempts` candidates.
pub fn nilpotent_structure<R: Rng>(n: usize, density: f64, attempts: usize, rng: &mut R) -> Option<Structure> {
    (0..attempts).find_map(|_| nilpotent_candidate(n, density, rng))
}
