//! Structure equations of a Lie algebra with a complex structure: the
//! manifold file format, validation, the induced derivation on the exterior
//! algebra, and coframe changes realizing deformation families.
//!
//! Only `dη^k` for the holomorphic generators is input; `dη^{k̄}` is its
//! conjugate.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{basis, BasisForm, Form};
use crate::expr::{Assignment, SymbolicForm};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Parsed manifold definition. Parameter values are never stored here; one
/// parsed object serves every assignment of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureEquations {
    pub name: String,
    pub n: usize,
    pub params: Vec<String>,
    /// `d_eta[k-1]` is the right-hand side of `dη^k`.
    pub d_eta: Vec<SymbolicForm>,
    /// Optional new (1,0)-coframe applied after evaluation.
    pub coframe: Option<CoframeChange>,
}

/// New generators `η^k_t` written as 1-forms in the old generators
/// `η^1..η^n, η^{1̄}..η^{n̄}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoframeChange {
    pub generators: Vec<SymbolicForm>,
}

impl CoframeChange {
    pub fn identity(n: usize) -> Self {
        CoframeChange {
            generators: (1..=n)
                .map(|k| SymbolicForm::from_form(&Form::from_word(Scalar::one(), &[k as i64])))
                .collect(),
        }
    }

    /// The `n x 2n` coefficient matrix at the given parameters: columns
    /// `0..n` hold the `η^j` coefficients, `n..2n` the `η^{j̄}` ones.
    pub fn matrix(&self, n: usize, assignment: &Assignment) -> Result<Matrix> {
        if self.generators.len() != n {
            return Err(Error::Invalid(format!(
                "coframe change lists {} generators, expected {n}",
                self.generators.len()
            )));
        }
        let mut m = Matrix::zeros(n, 2 * n);
        for (k, g) in self.generators.iter().enumerate() {
            let f = g.eval(assignment)?;
            for (b, c) in f.terms() {
                let col = match (b.holo(), b.anti()) {
                    ([j], []) => j - 1,
                    ([], [j]) => n + j - 1,
                    _ => {
                        return Err(Error::Invalid(format!(
                            "coframe generator f{} must be a 1-form, found {b}",
                            k + 1
                        )))
                    }
                };
                if col >= 2 * n {
                    return Err(Error::IndexOutOfRange { index: b.max_index() as i64, n });
                }
                m[(k, col)] = c.clone();
            }
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub d_squared_zero: bool,
    pub integrable: bool,
    pub abelian: bool,
    pub unimodular: bool,
    /// Human-readable description of every failed check.
    pub issues: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.d_squared_zero && self.integrable
    }
}

/// Structure equations evaluated at a parameter assignment: exact `dη^k` for
/// each holomorphic generator.
#[derive(Clone, PartialEq)]
pub struct Structure {
    n: usize,
    d_holo: Vec<Form>,
    d_anti: Vec<Form>,
}

impl Structure {
    pub fn new(n: usize, d_eta: Vec<Form>) -> Result<Self> {
        if d_eta.len() != n {
            return Err(Error::Invalid(format!("expected {n} differentials, got {}", d_eta.len())));
        }
        for (k, f) in d_eta.iter().enumerate() {
            if f.terms().any(|(b, _)| b.degree() != 2) {
                return Err(Error::Invalid(format!("d{} is not a 2-form", k + 1)));
            }
            if f.max_index() > n {
                return Err(Error::IndexOutOfRange { index: f.max_index() as i64, n });
            }
        }
        let d_anti = d_eta.iter().map(Form::conjugate).collect();
        Ok(Structure { n, d_holo: d_eta, d_anti })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `dη^k` for `k = 1..n`.
    pub fn d_eta(&self) -> &[Form] {
        &self.d_holo
    }

    /// `d` of the generator with signed index `x` (`-j` is `η^{j̄}`).
    pub fn d_generator(&self, x: i64) -> &Form {
        if x > 0 {
            &self.d_holo[x as usize - 1]
        } else {
            &self.d_anti[(-x) as usize - 1]
        }
    }

    /// The unique degree-one derivation extending `d` on generators:
    /// `d(x ∧ rest) = dx ∧ rest - x ∧ d(rest)`.
    pub fn d_monomial(&self, b: &BasisForm) -> Form {
        let word = b.word();
        self.d_word(&word)
    }

    fn d_word(&self, word: &[i64]) -> Form {
        let Some((&x, rest)) = word.split_first() else {
            return Form::zero();
        };
        let rest_form = Form::from_word(Scalar::one(), rest);
        let head = Form::from_word(Scalar::one(), &[x]);
        let first = self.d_generator(x).wedge(&rest_form);
        let second = head.wedge(&self.d_word(rest));
        &first - &second
    }

    pub fn d(&self, f: &Form) -> Form {
        let mut out = Form::zero();
        for (b, c) in f.terms() {
            out = &out + &self.d_monomial(b).scale(c);
        }
        out
    }

    /// `∂` and `∂̄` are the (+1,0) and (0,+1) components of `d`; valid only
    /// when the structure is integrable.
    pub fn del(&self, f: &Form) -> Form {
        self.shifted_component(f, 1, 0)
    }

    pub fn delbar(&self, f: &Form) -> Form {
        self.shifted_component(f, 0, 1)
    }

    fn shifted_component(&self, f: &Form, dp: usize, dq: usize) -> Form {
        let mut out = Form::zero();
        for (b, c) in f.terms() {
            let (p, q) = b.bidegree();
            out = &out + &self.d_monomial(b).component(p + dp, q + dq).scale(c);
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.d_holo.iter().all(|f| f.has_bidegree(1, 1))
    }

    /// The (0,2) components of the `dη^k`; all zero iff integrable.
    pub fn obstructions(&self) -> Vec<(usize, Form)> {
        self.d_holo
            .iter()
            .enumerate()
            .map(|(k, f)| (k + 1, f.component(0, 2)))
            .filter(|(_, f)| !f.is_zero())
            .collect()
    }

    pub fn is_integrable(&self) -> bool {
        self.obstructions().is_empty()
    }

    /// `d(dη^k)` for every holomorphic generator that fails `d² = 0`. It is
    /// enough to test the holomorphic generators: `d²` is a derivation and
    /// commutes with conjugation.
    pub fn d_squared_residues(&self) -> Vec<(usize, Form)> {
        self.d_holo
            .iter()
            .enumerate()
            .map(|(k, f)| (k + 1, self.d(f)))
            .filter(|(_, r)| !r.is_zero())
            .collect()
    }

    /// Unimodularity: `d` vanishes on forms of degree `2n-1`, equivalently
    /// every `ad_X` is traceless.
    pub fn is_unimodular(&self) -> bool {
        let n = self.n;
        (0..=n).all(|p| {
            let q = 2 * n - 1 - p;
            q > n || basis(p, q, n).expect("in range").iter().all(|b| self.d_monomial(b).is_zero())
        })
    }

    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        let residues = self.d_squared_residues();
        for (k, r) in &residues {
            issues.push(format!("d(d{k}) = {r}"));
        }
        let obstructions = self.obstructions();
        for (k, o) in &obstructions {
            issues.push(format!("d{k} has (0,2) component {o}"));
        }
        let unimodular = self.is_unimodular();
        if !unimodular {
            issues.push("not unimodular".into());
        }
        ValidationReport {
            d_squared_zero: residues.is_empty(),
            integrable: obstructions.is_empty(),
            abelian: self.is_abelian(),
            unimodular,
            issues,
        }
    }

    /// Rewrites the equations in a new coframe `η^k_t = Σ A_kj η^j + B_kj η^{j̄}`
    /// given by the `n x 2n` matrix `[A | B]`.
    pub fn change_coframe(&self, change: &Matrix) -> Result<Structure> {
        let n = self.n;
        assert_eq!((change.rows(), change.cols()), (n, 2 * n));
        // full real-linear map on (η, η̄): [[A, B], [B̄, Ā]]
        let mut full = Matrix::zeros(2 * n, 2 * n);
        for k in 0..n {
            for j in 0..n {
                full[(k, j)] = change[(k, j)].clone();
                full[(k, n + j)] = change[(k, n + j)].clone();
                full[(n + k, j)] = change[(k, n + j)].conj();
                full[(n + k, n + j)] = change[(k, j)].conj();
            }
        }
        let inv = full.inverse().ok_or(Error::SingularChange)?;
        // old generator g = Σ_h inv[g][h] new_h, as a 1-form in the new letters
        let letter = |g: usize| if g < n { (g + 1) as i64 } else { -((g - n + 1) as i64) };
        let images: Vec<Form> = (0..2 * n)
            .map(|g| {
                let mut f = Form::zero();
                for h in 0..2 * n {
                    f = &f + &Form::from_word(inv[(g, h)].clone(), &[letter(h)]);
                }
                f
            })
            .collect();
        let image_of = |x: i64| -> &Form {
            if x > 0 {
                &images[x as usize - 1]
            } else {
                &images[n + (-x) as usize - 1]
            }
        };
        let mut d_new = Vec::with_capacity(n);
        for k in 0..n {
            // d η^k_t in the old coframe
            let mut old = Form::zero();
            for j in 0..n {
                old = &old + &self.d_holo[j].scale(&change[(k, j)]);
                old = &old + &self.d_anti[j].scale(&change[(k, n + j)]);
            }
            let mut new = Form::zero();
            for (b, c) in old.terms() {
                let prod = b.word().iter().fold(Form::one(), |acc, &x| acc.wedge(image_of(x)));
                new = &new + &prod.scale(c);
            }
            d_new.push(new);
        }
        Structure::new(n, d_new)
    }
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Structure(n = {})", self.n)?;
        for (k, d) in self.d_holo.iter().enumerate() {
            writeln!(f, "  d{} = {d}", k + 1)?;
        }
        Ok(())
    }
}

impl StructureEquations {
    /// Evaluates the equations at `assignment` (no coframe change applied).
    pub fn evaluate_raw(&self, assignment: &Assignment) -> Result<Structure> {
        let forms = self.d_eta.iter().map(|f| f.eval(assignment)).collect::<Result<Vec<_>>>()?;
        Structure::new(self.n, forms)
    }

    /// Evaluates the equations and applies the file's coframe change, if any.
    pub fn instantiate(&self, assignment: &Assignment) -> Result<Structure> {
        let s = self.evaluate_raw(assignment)?;
        match &self.coframe {
            None => Ok(s),
            Some(c) => s.change_coframe(&c.matrix(self.n, assignment)?),
        }
    }

    pub fn validate(&self, assignment: &Assignment) -> Result<ValidationReport> {
        Ok(self.instantiate(assignment)?.validate())
    }

    /// Applies `change` at `assignment` and returns literal equations in the
    /// new coframe.
    pub fn change_coframe(&self, change: &CoframeChange, assignment: &Assignment) -> Result<StructureEquations> {
        let s = self.instantiate(assignment)?;
        let t = s.change_coframe(&change.matrix(self.n, assignment)?)?;
        Ok(StructureEquations::from_structure(&self.name, &t))
    }

    pub fn from_structure(name: &str, s: &Structure) -> Self {
        StructureEquations {
            name: name.to_string(),
            n: s.n,
            params: Vec::new(),
            d_eta: s.d_holo.iter().map(SymbolicForm::from_form).collect(),
            coframe: None,
        }
    }

    pub fn used_params(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self.d_eta.iter().flat_map(|f| f.params()).collect();
        if let Some(c) = &self.coframe {
            out.extend(c.generators.iter().flat_map(|f| f.params()));
        }
        out
    }

    /// Renders in the manifold file format.
    pub fn to_manifold_text(&self) -> String {
        let mut s = String::new();
        s.push_str("[manifold]\n");
        s.push_str(&format!("name = \"{}\"\n", self.name));
        s.push_str(&format!("dim = {}\n", self.n));
        s.push_str(&format!("params = {}\n\n", self.params.join(", ")));
        s.push_str("[structure]\n");
        for (k, f) in self.d_eta.iter().enumerate() {
            s.push_str(&format!("d{} = \"{}\"\n", k + 1, f));
        }
        if let Some(c) = &self.coframe {
            s.push_str("\n[coframe]\n");
            for (k, f) in c.generators.iter().enumerate() {
                s.push_str(&format!("f{} = \"{}\"\n", k + 1, f));
            }
        }
        s
    }
}

/// Parses the manifold file format:
///
/// ```text
/// [manifold]
/// name = "Iwasawa, Abelian structure"
/// dim = 3
/// params = D
///
/// [structure]
/// d1 = "0"
/// d3 = "e(1,-1) + e(1,-2) + D*e(2,-2)"
///
/// [coframe]            # optional
/// f2 = "e(2) + t*e(-2)"
/// ```
///
/// Omitted `d<k>` lines mean `dη^k = 0`; omitted `f<k>` lines mean
/// `η^k_t = η^k`. `#` starts a comment.
pub fn parse_manifold(text: &str) -> Result<StructureEquations> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Manifold,
        Structure,
        Coframe,
    }
    let mut section = Section::None;
    let mut name = String::new();
    let mut dim: Option<usize> = None;
    let mut params: Vec<String> = Vec::new();
    let mut d_lines: Vec<(usize, usize, usize, String)> = Vec::new();
    let mut f_lines: Vec<(usize, usize, usize, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();
        if trimmed.starts_with('[') {
            section = match trimmed {
                "[manifold]" => Section::Manifold,
                "[structure]" => Section::Structure,
                "[coframe]" => Section::Coframe,
                _ => return Err(Error::syntax(line_no, indent + 1, format!("unknown section {trimmed}"))),
            };
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(Error::syntax(line_no, indent + 1, "expected key = value"));
        };
        let key = line[..eq].trim();
        let value_raw = &line[eq + 1..];
        let value_col = eq + 2 + (value_raw.len() - value_raw.trim_start().len());
        let value = value_raw.trim();
        match section {
            Section::None => {
                return Err(Error::syntax(line_no, indent + 1, "key outside of a section"));
            }
            Section::Manifold => match key {
                "name" => name = unquote(value, line_no, value_col)?.0.to_string(),
                "dim" => {
                    let d: usize = value
                        .parse()
                        .map_err(|_| Error::syntax(line_no, value_col, "dim must be a positive integer"))?;
                    if d == 0 {
                        return Err(Error::syntax(line_no, value_col, "dim must be a positive integer"));
                    }
                    dim = Some(d);
                }
                "params" => {
                    params = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(str::to_string)
                        .collect();
                    for p in &params {
                        let valid = p.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                            && p.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                            && !matches!(p.as_str(), "i" | "e" | "conj");
                        if !valid {
                            return Err(Error::syntax(line_no, value_col, format!("invalid parameter name '{p}'")));
                        }
                    }
                }
                _ => return Err(Error::syntax(line_no, indent + 1, format!("unknown key '{key}'"))),
            },
            Section::Structure | Section::Coframe => {
                let prefix = if section == Section::Structure { 'd' } else { 'f' };
                let k = key
                    .strip_prefix(prefix)
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| Error::syntax(line_no, indent + 1, format!("expected {prefix}<k> = \"...\"")))?;
                let (body, body_col) = unquote(value, line_no, value_col)?;
                let entry = (k, line_no, body_col, body.to_string());
                if section == Section::Structure {
                    d_lines.push(entry);
                } else {
                    f_lines.push(entry);
                }
            }
        }
    }

    let n = dim.ok_or_else(|| Error::syntax(1, 1, "missing dim in [manifold]"))?;
    let declared: BTreeSet<&str> = params.iter().map(String::as_str).collect();

    let collect = |lines: &[(usize, usize, usize, String)], want_degree: usize| -> Result<Vec<Option<SymbolicForm>>> {
        let mut out: Vec<Option<SymbolicForm>> = vec![None; n];
        for (k, line_no, col, body) in lines {
            if *k == 0 || *k > n {
                return Err(Error::IndexOutOfRange { index: *k as i64, n });
            }
            if out[k - 1].is_some() {
                return Err(Error::DuplicateGenerator(*k));
            }
            let f = SymbolicForm::parse_at(body, *line_no, *col)?;
            if f.max_index() > n {
                return Err(Error::IndexOutOfRange { index: f.max_index() as i64, n });
            }
            if let Some((b, _)) = f.terms().find(|(b, _)| b.degree() != want_degree) {
                return Err(Error::syntax(
                    *line_no,
                    *col,
                    format!("term {b} has degree {}, expected {want_degree}", b.degree()),
                ));
            }
            if let Some(p) = f.params().into_iter().find(|p| !declared.contains(p.as_str())) {
                return Err(Error::syntax(*line_no, *col, format!("undeclared parameter '{p}'")));
            }
            out[k - 1] = Some(f);
        }
        Ok(out)
    };

    let d_eta = collect(&d_lines, 2)?.into_iter().map(Option::unwrap_or_default).collect();
    let coframe = if f_lines.is_empty() {
        None
    } else {
        let identity = CoframeChange::identity(n);
        let gens = collect(&f_lines, 1)?
            .into_iter()
            .zip(identity.generators)
            .map(|(f, id)| f.unwrap_or(id))
            .collect();
        Some(CoframeChange { generators: gens })
    };

    Ok(StructureEquations { name, n, params, d_eta, coframe })
}

fn strip_comment(line: &str) -> &str {
    let mut in_quote = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quote = !in_quote,
            '#' if !in_quote => return &line[..i],
            _ => {}
        }
    }
    line
}

/// Strips surrounding double quotes; returns the body and its column.
fn unquote(value: &str, line: usize, col: usize) -> Result<(&str, usize)> {
    if value.len() >= 2 && value.starts_with('"') && value.ends_with('"') {
        Ok((&value[1..value.len() - 1], col + 1))
    } else if value.starts_with('"') {
        Err(Error::syntax(line, col, "unterminated string"))
    } else {
        Ok((value, col))
    }
}
