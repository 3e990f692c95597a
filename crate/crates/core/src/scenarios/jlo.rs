//! JLO-type cochains of nilpotent supermatrix models and verification of
//! their cocycle relations.
//!
//! With `X = d𝔸 + 𝔸²` and `θ_i = dρ(a_i) + [𝔸, ρ(a_i)]`,
//! `ψ_{n+1}(a_0, …, a_n) = (-1)^n ∫_{Δ_n} τ(ρ(a_0) e^{-s_0 X} θ_1 … θ_n e^{-s_n X})`
//! and `φ_n(a_1, …, a_n) = ψ_{n+1}(1, a_1, …, a_n)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bar::{beta, single_letter_bar_words, BarChain, BarWord};
use crate::cochains::{bb_cocycle_check, tau_natural_unchecked, BarCochain, CochainError, HochschildCochain};
use crate::heat::{differentiation_formula, simplex_integral};
use crate::ncalg::{AlgebraBuilder, GradedElement, NcalgError};
use crate::ncforms::{connes_b, hochschild_b, single_letter_basis, AWord, Form, FormWord};
use crate::scalars::Scalar;
use crate::superalg::{CoeffAlgebra, DgAlgebra, MatrixAlgebra, MatrixDifferential, SuperMatrix};
use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JloError {
    #[error("curvature is not nilpotent within bound {0}")]
    ModelNotNilpotent(usize),
    #[error("invalid model: {0}")]
    Spec(String),
    #[error(transparent)]
    Ncalg(#[from] NcalgError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
}

/// Coefficient generator of the commutative nilpotent ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffGenSpec {
    pub name: String,
    pub zdegree: i32,
    #[serde(default)]
    pub weight: u32,
    /// Name of the generator `d(name)`; absent means closed.
    #[serde(default)]
    pub differential: Option<String>,
}

/// Entry as a sum of `coef · word`, the word a space-separated list of
/// coefficient generators (empty for 1).
pub type EntrySpec = Vec<(i64, String)>;
pub type MatrixSpec = Vec<Vec<EntrySpec>>;

/// Declarative description of a nilpotent JLO model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JloModelSpec {
    pub name: String,
    pub parities: Vec<u8>,
    pub coefficients: Vec<CoeffGenSpec>,
    /// Cap on total coefficient weight.
    pub cap: u32,
    /// Whether the coefficients carry a differential (base-form sector).
    pub bivariant: bool,
    /// The odd operator `D`.
    pub d: MatrixSpec,
    /// Connection form added to `D`, odd.
    #[serde(default)]
    pub connection: Option<MatrixSpec>,
    /// `ρ` on the generators of the free algebra; even matrices.
    pub rho: BTreeMap<String, MatrixSpec>,
    pub depth: usize,
}

pub struct JloModel {
    pub name: String,
    pub depth: usize,
    pub bivariant: bool,
    pub coeff: Arc<CoeffAlgebra>,
    pub target: Arc<MatrixAlgebra>,
    pub alphabet: Vec<Symbol>,
    rho: BTreeMap<Symbol, SuperMatrix>,
    /// `𝔸 = D + connection`.
    pub superconnection: SuperMatrix,
    /// `X = d𝔸 + 𝔸²`.
    pub curvature: SuperMatrix,
    bound: usize,
}

impl std::fmt::Debug for JloModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("JloModel").field("name", &self.name).field("depth", &self.depth).finish()
    }
}

impl JloModelSpec {
    pub fn build(&self) -> Result<JloModel, JloError> {
        let mut b = AlgebraBuilder::new();
        for g in &self.coefficients {
            b.weighted_generator(&g.name, g.zdegree, 1, g.weight)?;
        }
        b.graded_commutative(1).nil_cap(self.cap);
        let alg = b.build();
        let coeff = if self.bivariant {
            let mut rule = std::collections::HashMap::new();
            for g in &self.coefficients {
                if let Some(dn) = &g.differential {
                    rule.insert(alg.gen(&g.name)?, GradedElement::named(&alg, dn)?);
                }
            }
            CoeffAlgebra::with_differential(alg.clone(), rule)
        } else {
            CoeffAlgebra::new(alg.clone())
        };
        let diff = if self.bivariant { MatrixDifferential::Coefficients } else { MatrixDifferential::None };
        let target = Arc::new(MatrixAlgebra::new(coeff.clone(), self.parities.clone()).with_differential(diff));
        let n = self.parities.len();
        let matrix = |spec: &MatrixSpec, what: &str| -> Result<SuperMatrix, JloError> {
            if spec.len() != n || spec.iter().any(|r| r.len() != n) {
                return Err(JloError::Spec(format!("{} is not {}x{}", what, n, n)));
            }
            let mut entries = Vec::with_capacity(n * n);
            for row in spec {
                for e in row {
                    let mut terms = Vec::new();
                    for (c, w) in e {
                        let mut word = Vec::new();
                        for name in w.split_whitespace() {
                            word.push(alg.gen(name)?);
                        }
                        terms.push((word, Scalar::from_int(*c)));
                    }
                    entries.push(GradedElement::from_terms(&alg, terms));
                }
            }
            Ok(target.from_entries(entries))
        };
        let d = matrix(&self.d, "D")?;
        if target.parity(&d).is_none_or(|p| p != 1) && !DgAlgebra::is_zero(target.as_ref(), &d) {
            return Err(JloError::Spec("D must be odd".into()));
        }
        let mut sc = d;
        if let Some(c) = &self.connection {
            let a = matrix(c, "connection")?;
            if target.parity(&a).is_none_or(|p| p != 1) {
                return Err(JloError::Spec("connection must be odd".into()));
            }
            sc = target.add(&sc, &a);
        }
        let mut rho = BTreeMap::new();
        for (k, v) in &self.rho {
            let m = matrix(v, k)?;
            if target.parity(&m).is_none_or(|p| p != 0) {
                return Err(JloError::Spec(format!("rho({}) must be even", k)));
            }
            rho.insert(Symbol::new(k), m);
        }
        let curvature = target.add(&target.d(&sc), &target.mul(&sc, &sc));
        let bound = 2 * self.cap as usize + 2;
        let mut p = curvature.clone();
        let mut steps = 0;
        while !DgAlgebra::is_zero(target.as_ref(), &p) {
            steps += 1;
            if steps > bound {
                return Err(JloError::ModelNotNilpotent(bound));
            }
            p = target.mul(&p, &curvature);
        }
        Ok(JloModel {
            name: self.name.clone(),
            depth: self.depth,
            bivariant: self.bivariant,
            coeff: Arc::new(coeff),
            alphabet: rho.keys().cloned().collect(),
            target,
            rho,
            superconnection: sc,
            curvature,
            bound,
        })
    }
}

impl JloModel {
    /// `ρ` extended multiplicatively to words; the empty word maps to 1.
    pub fn rho_word(&self, w: &AWord) -> SuperMatrix {
        let t = &self.target;
        let mut acc = t.one();
        for s in w {
            match self.rho.get(s) {
                Some(m) => acc = t.mul(&acc, m),
                None => return DgAlgebra::zero(t.as_ref()),
            }
        }
        acc
    }

    /// `θ = dρ(w) + [𝔸, ρ(w)]`.
    pub fn theta(&self, w: &AWord) -> SuperMatrix {
        let t = &self.target;
        let r = self.rho_word(w);
        t.add(&t.d(&r), &t.supercommutator(&self.superconnection, &r))
    }

    /// `(-1)^n ∫_{Δ_n} e^{-s_0 X} θ_1 … θ_n e^{-s_n X}`.
    pub fn heat_chain(&self, entries: &[AWord]) -> SuperMatrix {
        let thetas: Vec<SuperMatrix> = entries.iter().map(|w| self.theta(w)).collect();
        let v = simplex_integral(self.target.as_ref(), &self.curvature, &thetas, self.bound)
            .expect("curvature checked nilpotent");
        if entries.len() % 2 == 1 {
            self.target.neg(&v)
        } else {
            v
        }
    }

    /// Both sides of the differentiation formula for the inner derivation
    /// `[ρ(w), ·]` against the curvature.
    pub fn differentiation_formula(&self, w: &AWord) -> Result<(SuperMatrix, SuperMatrix), JloError> {
        let y = self.rho_word(w);
        Ok(differentiation_formula(self.target.as_ref(), &self.curvature, &y, self.bound)?)
    }

    pub fn psi_value(&self, w: &FormWord) -> GradedElement {
        let t = &self.target;
        t.supertrace(&t.mul(&self.rho_word(&w.a0), &self.heat_chain(&w.tail)))
    }
}

/// `(ψ, φ)` as cochains into the coefficient ring. `ψ` has odd total degree;
/// `φ` is even.
pub fn jlo_cochains(model: &Arc<JloModel>) -> (HochschildCochain<CoeffAlgebra>, BarCochain<CoeffAlgebra>) {
    let m1 = model.clone();
    let psi = HochschildCochain::new(model.coeff.clone(), 1, move |w: &FormWord| m1.psi_value(w));
    let m2 = model.clone();
    let phi = BarCochain::new(model.coeff.clone(), 0, move |x: &BarWord| {
        m2.psi_value(&FormWord { a0: vec![], tail: x.0.clone() })
    });
    (psi, phi)
}

/// Closing signs at one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JloDegree {
    pub degree: usize,
    pub forms_checked: usize,
    /// `(s_b, s_d)` with `ψ∘B + s_b ψ∘b + s_d d∘ψ = 0` on forms of this degree.
    pub hochschild_closing: Vec<(i64, i64)>,
    pub bar_words_checked: usize,
    /// `(s, s_d)` with `φ∘b' + s ψ∘β + s_d d∘φ = 0` on bar words of this length.
    pub bar_closing: Vec<(i64, i64)>,
    /// `s` with `τ♮(∂ρ · e^{-𝐃²}) = s ψ` at this degree.
    pub dual_route_sign: Option<i64>,
    pub nonzero_psi_values: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JloReport {
    pub model: String,
    pub depth: usize,
    pub bivariant: bool,
    pub unit_hypothesis: bool,
    pub phi_consistent: bool,
    /// `ψ∘B = φ∘∂̄`, which holds by construction.
    pub b_matches_partial: bool,
    /// `[Y, e^{-X}] = -∫ e^{-sX}[Y, X]e^{-(1-s)X} ds` for `Y = ρ(a)`, each letter `a`.
    pub differentiation_formula: bool,
    pub degrees: Vec<JloDegree>,
}

impl JloReport {
    pub fn passed(&self) -> bool {
        self.unit_hypothesis
            && self.phi_consistent
            && self.b_matches_partial
            && self.differentiation_formula
            && !self.hochschild_signs().is_empty()
            && !self.bar_signs().is_empty()
            && self.degrees.iter().all(|d| d.dual_route_sign.is_some())
    }

    /// Sign pairs closing the Hochschild-side relation at every degree.
    pub fn hochschild_signs(&self) -> Vec<(i64, i64)> {
        intersect(self.degrees.iter().map(|d| &d.hochschild_closing))
    }

    /// Sign pairs closing the bar-side relation at every degree.
    pub fn bar_signs(&self) -> Vec<(i64, i64)> {
        intersect(self.degrees.iter().map(|d| &d.bar_closing))
    }

    /// ψ components `ψ_{n+1}` with a nonzero value.
    pub fn nonzero_components(&self) -> Vec<usize> {
        self.degrees.iter().filter(|d| d.nonzero_psi_values > 0).map(|d| d.degree + 1).collect()
    }
}

pub fn intersect<'a>(sets: impl IntoIterator<Item = &'a Vec<(i64, i64)>>) -> Vec<(i64, i64)> {
    let mut acc: Vec<(i64, i64)> = vec![(1, 1), (1, -1), (-1, 1), (-1, -1)];
    for s in sets {
        acc.retain(|p| s.contains(p));
    }
    acc
}

fn closing_pairs<L: DgAlgebra>(alg: &L, rows: &[(L::Elem, L::Elem, L::Elem)]) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for s1 in [1i64, -1] {
        for s2 in [1i64, -1] {
            let ok = rows.iter().all(|(a, b, c)| {
                let r = alg.add(
                    &alg.add(a, &alg.scale(b, &Scalar::from_int(s1))),
                    &alg.scale(c, &Scalar::from_int(s2)),
                );
                alg.is_zero(&r)
            });
            if ok {
                out.push((s1, s2));
            }
        }
    }
    out
}

pub fn jlo_verify(model: &Arc<JloModel>) -> Result<JloReport, JloError> {
    let (psi, phi) = jlo_cochains(model);
    let c = model.coeff.as_ref();
    let alphabet = &model.alphabet;
    let depth = model.depth;
    let (unit_hypothesis, phi_consistent, bb) = match bb_cocycle_check(&psi, &phi, alphabet, depth) {
        Ok(r) => (true, r.phi_consistent, Some(r)),
        Err(CochainError::HypothesisViolated(_)) => (false, false, None),
        Err(e) => return Err(e.into()),
    };
    // route through the bar construction: τ♮(∂ρ · E)
    let target = model.target.clone();
    let m = model.clone();
    let heat = BarCochain::new(target.clone(), 0, move |x: &BarWord| m.heat_chain(&x.0));
    let m = model.clone();
    let rho = BarCochain::linear(target.clone(), move |w: &AWord| m.rho_word(w));
    let t2 = target.clone();
    let tau: Arc<dyn Fn(&SuperMatrix) -> GradedElement + Send + Sync> = Arc::new(move |x| t2.supertrace(x));
    let dual = tau_natural_unchecked(tau, model.coeff.clone(), 0, &rho.unital_partial().act_right(&heat));

    let mut b_matches_partial = true;
    let mut degrees = Vec::new();
    for k in 0..=depth {
        let forms = single_letter_basis(alphabet, k);
        let mut nonzero = 0;
        let mut rows = Vec::new();
        let mut plus = true;
        let mut minus = true;
        for w in &forms {
            let v = psi.eval(w);
            if !c.is_zero(&v) {
                nonzero += 1;
            }
            let f = Form::basis(w.clone());
            let via_b = psi.eval_chain(&connes_b(&f));
            let via_partial = phi.eval_chain(&crate::bar::partial_bar(&f));
            if !c.is_zero(&c.sub(&via_b, &via_partial)) {
                b_matches_partial = false;
            }
            rows.push((via_b, psi.eval_chain(&hochschild_b(&f)), c.d(&v)));
            let dv = dual.eval(w);
            plus &= c.is_zero(&c.sub(&dv, &v));
            minus &= c.is_zero(&c.add(&dv, &v));
        }
        let words = single_letter_bar_words(alphabet, k);
        let bar_rows: Vec<_> = words
            .iter()
            .map(|x| {
                let chain = BarChain::basis(x.clone());
                (
                    phi.eval_chain(&crate::bar::bar_bprime(&chain)),
                    psi.eval_chain(&beta(&chain)),
                    c.d(&phi.eval(x)),
                )
            })
            .collect();
        let hochschild_closing = match &bb {
            Some(r) => r.degrees[k].closing.clone(),
            None => closing_pairs(c, &rows),
        };
        degrees.push(JloDegree {
            degree: k,
            forms_checked: forms.len(),
            hochschild_closing,
            bar_words_checked: words.len(),
            bar_closing: closing_pairs(c, &bar_rows),
            dual_route_sign: if plus { Some(1) } else if minus { Some(-1) } else { None },
            nonzero_psi_values: nonzero,
        });
    }
    let mut differentiation_formula = true;
    for a in alphabet {
        let (lhs, rhs) = model.differentiation_formula(&vec![*a])?;
        differentiation_formula &= DgAlgebra::is_zero(model.target.as_ref(), &model.target.sub(&lhs, &rhs));
    }
    Ok(JloReport {
        model: model.name.clone(),
        differentiation_formula,
        depth,
        bivariant: model.bivariant,
        unit_hypothesis,
        phi_consistent,
        b_matches_partial,
        degrees,
    })
}

const CORPUS: &str = r#"[
  {"name": "zero-D", "parities": [0, 0, 1], "coefficients": [{"name": "eps", "zdegree": 0, "weight": 1}],
   "cap": 3, "bivariant": false,
   "d": [[[], [], []], [[], [], []], [[], [], []]],
   "rho": {"a": [[[[1, ""]], [[2, ""]], []], [[], [[1, ""]], []], [[], [], [[3, ""]]]],
           "b": [[[], [[1, ""]], []], [[[1, ""]], [], []], [[], [], [[-1, ""]]]]},
   "depth": 4},
  {"name": "central-rho", "parities": [0, 0, 1], "coefficients": [{"name": "eps", "zdegree": 0, "weight": 1}],
   "cap": 3, "bivariant": false,
   "d": [[[], [], [[1, "eps"]]], [[], [], [[2, "eps"]]], [[[1, "eps"]], [[-1, "eps"]], []]],
   "rho": {"a": [[[[2, ""]], [], []], [[], [[2, ""]], []], [[], [], [[2, ""]]]],
           "b": [[[[-1, ""]], [], []], [[], [[-1, ""]], []], [[], [], [[-1, ""]]]]},
   "depth": 4},
  {"name": "generic-2x2", "parities": [0, 1],
   "coefficients": [{"name": "eps", "zdegree": 0, "weight": 1}, {"name": "th", "zdegree": 1},
                    {"name": "ph", "zdegree": 1}],
   "cap": 3, "bivariant": false,
   "d": [[[[1, "eps th"]], [[1, "eps"]]], [[[2, "eps"]], [[1, "ph"]]]],
   "rho": {"a": [[[[1, ""]], [[1, "th"]]], [[[1, "ph"]], [[2, ""]]]],
           "b": [[[[3, ""]], [[1, "ph"]]], [[[1, "th"]], [[-1, ""]]]]},
   "depth": 4},
  {"name": "bivariant-flat", "parities": [0, 1],
   "coefficients": [{"name": "y", "zdegree": 0, "differential": "dy"}, {"name": "dy", "zdegree": 1, "weight": 1},
                    {"name": "eps", "zdegree": 0, "weight": 1}],
   "cap": 3, "bivariant": true,
   "d": [[[], [[1, "eps y"]]], [[[1, "eps"]], []]],
   "rho": {"a": [[[[1, "y"]], []], [[], [[1, ""]]]],
           "b": [[[[1, ""]], []], [[], [[1, "y"], [1, ""]]]]},
   "depth": 4},
  {"name": "bivariant-connection", "parities": [0, 1],
   "coefficients": [{"name": "y", "zdegree": 0, "differential": "dy"}, {"name": "dy", "zdegree": 1, "weight": 1},
                    {"name": "z", "zdegree": 0, "differential": "dz"}, {"name": "dz", "zdegree": 1, "weight": 1},
                    {"name": "eps", "zdegree": 0, "weight": 1}, {"name": "th", "zdegree": 1}],
   "cap": 3, "bivariant": true,
   "d": [[[], [[1, "eps"]]], [[[1, "eps z"]], []]],
   "connection": [[[[1, "z dy"]], []], [[], [[1, "dz"]]]],
   "rho": {"a": [[[[1, "y"]], []], [[], [[1, "z"]]]],
           "b": [[[[1, ""]], [[1, "th"]]], [[[1, "th"]], [[1, "y"]]]]},
   "depth": 4}
]"#;

/// The five-model corpus: zero `D`, central `ρ`, generic 2×2, bivariant
/// flat, bivariant with a connection.
pub fn jlo_corpus() -> Vec<JloModelSpec> {
    serde_json::from_str(CORPUS).expect("corpus parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(name: &str, depth: usize) -> Arc<JloModel> {
        let mut spec = jlo_corpus().into_iter().find(|s| s.name == name).unwrap();
        spec.depth = depth;
        Arc::new(spec.build().unwrap())
    }

    #[test]
    fn zero_d_concentrates_in_degree_one() {
        let m = model("zero-D", 3);
        let r = jlo_verify(&m).unwrap();
        assert_eq!(r.nonzero_components(), vec![1]);
        let a = vec![Symbol::new("a")];
        assert_eq!(m.psi_value(&FormWord::new(a.clone(), vec![])), m.target.supertrace(&m.rho_word(&a)));
        assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn central_rho_concentrates_in_degree_one() {
        let r = jlo_verify(&model("central-rho", 3)).unwrap();
        assert_eq!(r.nonzero_components(), vec![1]);
        assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn generic_model_relations() {
        let r = jlo_verify(&model("generic-2x2", 3)).unwrap();
        assert!(r.nonzero_components().len() > 1, "{:?}", r.nonzero_components());
        assert!(r.passed(), "{:?}", r);
        assert_eq!(r.hochschild_signs(), vec![(1, 1), (1, -1)]);
    }

    #[test]
    fn bivariant_models_relations() {
        for name in ["bivariant-flat", "bivariant-connection"] {
            let r = jlo_verify(&model(name, 2)).unwrap();
            assert!(r.passed(), "{}: {:?}", name, r);
            assert_eq!(r.hochschild_signs(), vec![(1, 1)], "{}", name);
        }
    }

    #[test]
    fn rejects_non_nilpotent_curvature() {
        let mut spec = jlo_corpus().into_iter().find(|s| s.name == "generic-2x2").unwrap();
        spec.d = vec![vec![vec![], vec![(1, String::new())]], vec![vec![(1, String::new())], vec![]]];
        assert!(matches!(spec.build(), Err(JloError::ModelNotNilpotent(_))));
    }
}
