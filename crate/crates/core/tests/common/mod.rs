#![allow(dead_code)]

use std::collections::BTreeMap;

use ddbar::random::nilpotent_structure;
use ddbar::{parse_assignment, parse_manifold, DoubleComplex, Scalar, Structure};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn fixture_text(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn structure(name: &str, params: &str) -> Structure {
    let eq = parse_manifold(&fixture_text(name)).unwrap();
    eq.instantiate(&parse_assignment(params).unwrap()).unwrap()
}

pub fn complex(s: &Structure) -> DoubleComplex {
    DoubleComplex::from_structure("fixture", s).unwrap()
}

/// Paper fixtures at their sample parameters, plus 24 seeded random
/// nilpotent structures (12 with n = 3, 12 with n = 4).
pub fn unimodular_fixtures() -> Vec<(String, Structure)> {
    let mut out = vec![
        ("torus".to_string(), structure("torus.cplx", "")),
        ("parallelizable".to_string(), structure("iwasawa_holomorphically_parallelizable.cplx", "")),
    ];
    for d in ["0", "1/8", "1/5"] {
        out.push((format!("abelian D={d}"), structure("iwasawa_abelian.cplx", &format!("D={d}"))));
    }
    for (d, t) in [("0", "1/4"), ("1/8", "1/2"), ("1/8", "i/3"), ("1/5", "1/4")] {
        out.push((format!("J_t D={d} t={t}"), structure("iwasawa_abelian_jt.cplx", &format!("D={d},t={t}"))));
    }
    out.extend(random_fixtures(24));
    out
}

pub fn random_fixtures(count: usize) -> Vec<(String, Structure)> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    (0..count)
        .map(|k| {
            let n = if k % 2 == 0 { 3 } else { 4 };
            let density = if n == 3 { 0.5 } else { 0.3 };
            let s = nilpotent_structure(n, density, 100_000, &mut rng).expect("rejection sampling found a structure");
            (format!("random #{k} (n={n})"), s)
        })
        .collect()
}

/// Sorts a word of signed generator indices into the canonical order
/// (holomorphic ascending, then antiholomorphic ascending) by counting
/// inversions. `None` if a generator repeats. Returns (negative, word).
pub fn normalize(word: &[i64]) -> Option<(bool, Vec<i64>)> {
    let key = |x: i64| if x > 0 { (0, x) } else { (1, -x) };
    for i in 0..word.len() {
        for j in (i + 1)..word.len() {
            if word[i] == word[j] {
                return None;
            }
        }
    }
    let mut inversions = 0usize;
    for i in 0..word.len() {
        for j in (i + 1)..word.len() {
            if key(word[i]) > key(word[j]) {
                inversions += 1;
            }
        }
    }
    let mut sorted = word.to_vec();
    sorted.sort_by_key(|&x| key(x));
    Some((inversions % 2 == 1, sorted))
}

pub type WordForm = BTreeMap<Vec<i64>, Scalar>;

pub fn add_word(acc: &mut WordForm, coef: Scalar, word: &[i64]) {
    if let Some((neg, w)) = normalize(word) {
        let c = if neg { -coef } else { coef };
        let entry = acc.entry(w).or_insert_with(|| Scalar::from(0));
        *entry += &c;
    }
}

/// `dη^x` as words, with `dη^{j̄}` obtained by conjugating coefficients and
/// negating indices in place (no sign rules from the library).
fn d_letter(s: &Structure, x: i64) -> Vec<(Scalar, Vec<i64>)> {
    let j = x.unsigned_abs() as usize;
    s.d_eta()[j - 1]
        .terms()
        .map(|(b, c)| {
            if x > 0 {
                (c.clone(), b.word())
            } else {
                (c.conj(), b.word().iter().map(|y| -y).collect())
            }
        })
        .collect()
}

/// Leibniz expansion `d(x_1 ... x_m) = Σ_k (-1)^k x_1 .. dx_k .. x_m`.
pub fn leibniz_d(s: &Structure, word: &[i64]) -> WordForm {
    let mut acc = WordForm::new();
    for k in 0..word.len() {
        for (c, dw) in d_letter(s, word[k]) {
            let mut w = word[..k].to_vec();
            w.extend(&dw);
            w.extend(&word[k + 1..]);
            let c = if k % 2 == 1 { -c } else { c };
            add_word(&mut acc, c, &w);
        }
    }
    acc.retain(|_, c| *c != Scalar::from(0));
    acc
}

/// Entries of the `∂`, `∂̄` matrices that disagree with [`leibniz_d`].
pub fn leibniz_mismatches(name: &str, s: &Structure) -> Vec<String> {
    let dc = complex(s);
    let n = s.n();
    let mut bad = Vec::new();
    for p in 0..=n {
        for q in 0..=n {
            for (col, b) in ddbar::basis(p, q, n).unwrap().iter().enumerate() {
                let oracle = leibniz_d(s, &b.word());
                let mut matched = 0;
                for (label, m, (tp, tq)) in [("del", dc.del(p, q), (p + 1, q)), ("delbar", dc.delbar(p, q), (p, q + 1))] {
                    if tp > n || tq > n {
                        continue;
                    }
                    for (row, t) in ddbar::basis(tp, tq, n).unwrap().iter().enumerate() {
                        let expected = oracle.get(&t.word()).cloned().unwrap_or_else(|| Scalar::from(0));
                        if m[(row, col)] != expected {
                            bad.push(format!("{name}: {label} {b} -> {t}: {} vs {expected}", m[(row, col)]));
                        }
                        if expected != Scalar::from(0) {
                            matched += 1;
                        }
                    }
                }
                if matched != oracle.len() {
                    bad.push(format!("{name}: d{b} leaves the two target bidegrees"));
                }
            }
        }
    }
    bad
}

fn random_word<R: rand::Rng>(rng: &mut R, n: i64, len: usize) -> Vec<i64> {
    (0..len)
        .map(|_| {
            let j = rng.gen_range(1..=n);
            if rng.gen_bool(0.5) {
                j
            } else {
                -j
            }
        })
        .collect()
}

fn as_words(f: &ddbar::Form) -> WordForm {
    f.terms().map(|(b, c)| (b.word(), c.clone())).collect()
}

/// Compares wedge products and conjugates of random monomials with the
/// permutation-parity oracle.
pub fn parity_mismatches(cases: usize, seed: u64) -> Vec<String> {
    use rand::Rng;
    let zero = Scalar::from(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for case in 0..cases {
        let n = rng.gen_range(2..=4);
        let (la, lb) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
        let a = random_word(&mut rng, n, la);
        let b = random_word(&mut rng, n, lb);
        let c = Scalar::from_ratios(rng.gen_range(-5..=5), rng.gen_range(1..=4), rng.gen_range(-5..=5), rng.gen_range(1..=4));
        let fa = ddbar::Form::from_word(c.clone(), &a);
        let fb = ddbar::Form::from_word(Scalar::from(1), &b);

        let mut expected = WordForm::new();
        let mut ab = a.clone();
        ab.extend(&b);
        add_word(&mut expected, c.clone(), &ab);
        expected.retain(|_, v| *v != zero);
        if as_words(&fa.wedge(&fb)) != expected {
            bad.push(format!("case {case}: wedge {a:?} ^ {b:?}"));
        }

        // conj(c x_1..x_m) = c̄ x̄_1..x̄_m, then reorder
        let mut expected = WordForm::new();
        let conj_word: Vec<i64> = a.iter().map(|x| -x).collect();
        add_word(&mut expected, c.conj(), &conj_word);
        expected.retain(|_, v| *v != zero);
        if as_words(&fa.conjugate()) != expected {
            bad.push(format!("case {case}: conj {a:?}"));
        }
    }
    bad
}

/// Duality, symmetry and numerical-characterization violations on one
/// unimodular structure.
pub fn duality_violations(name: &str, s: &Structure) -> Vec<String> {
    use ddbar::criteria::delta_degree;
    let dc = complex(s);
    let coh = ddbar::Cohomology::new(&dc);
    let table = coh.table();
    let n = s.n();
    let mut bad = Vec::new();
    for p in 0..=n {
        for q in 0..=n {
            if table.bott_chern(p, q) != table.aeppli(n - q, n - p) {
                bad.push(format!("{name}: h_BC({p},{q}) != h_A({},{})", n - q, n - p));
            }
        }
    }
    for k in 0..=2 * n {
        let dk = delta_degree(&table, k);
        if dk < 0 {
            bad.push(format!("{name}: Delta^{k} = {dk} < 0"));
        }
        if dk != delta_degree(&table, 2 * n - k) {
            bad.push(format!("{name}: Delta^{k} != Delta^{}", 2 * n - k));
        }
    }
    let (bc, dbar, a) = (table.bott_chern(0, 1), table.dolbeault(0, 1), table.aeppli(0, 1));
    if !(bc <= dbar && dbar <= a) {
        bad.push(format!("{name}: h01 BC {bc}, dbar {dbar}, A {a} out of order"));
    }
    if table.betti(1) > 2 * dbar {
        bad.push(format!("{name}: b1 = {} > 2 h01 = {}", table.betti(1), 2 * dbar));
    }
    bad
}

/// `None` if the direct strong-lemma check equals `sGG && Δ^1 = 0`.
pub fn main_equivalence_discrepancy(name: &str, s: &Structure) -> Option<String> {
    let dc = complex(s);
    let coh = ddbar::Cohomology::new(&dc);
    let direct = ddbar::criteria::check_strong_lemma(&coh).direct;
    let sgg = ddbar::criteria::check_sgg(&coh).verdict;
    let delta1 = ddbar::criteria::delta_degree(&coh.table(), 1);
    (direct != (sgg && delta1 == 0)).then(|| format!("{name}: strong {direct}, sGG {sgg}, Delta^1 {delta1}"))
}
