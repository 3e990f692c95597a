//! Verification suites: exhaustive low-degree identity checks grouped by
//! area, collected into a serializable run report.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bar::{
    bar_bprime, beta, bprime_bimodule, bprime_tensor, coproduct, coproduct_triple, cotrace, counit_left, counit_right,
    embed, partial_bar, partial_proj, single_letter_bar_words, single_letter_o1_words, BarChain, BarWord, O1Word,
};
use crate::cliffext::{chirality, clifford_mul, supertrace, supertrace_matrix, CliffordElement};
use crate::cochains::{bianchi_check, curvature, tau_natural, BarCochain, ProductSign};
use crate::conventions;
use crate::heat::{HeatModel, HeatModelSpec};
use crate::ncforms::{
    connes_b, hochschild_b, karoubi_d, natural_quotient, single_letter_basis, universal_d, AWord, Form, FormWord,
};
use crate::scalars::Scalar;
use crate::scenarios::{bott_pairing, bott_psi, jlo_corpus, jlo_verify, mq_supertrace, mq_verify, todd_det_series, ThomScenario};
use crate::superalg::{CoeffAlgebra, DgAlgebra, MatrixAlgebra, MatrixDifferential, SuperMatrix};
use crate::symbol::Symbol;

/// Report format version.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Forms,
    Bar,
    Cochains,
    Clifford,
    Heat,
    Jlo,
    Mq,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] =
        [Suite::Forms, Suite::Bar, Suite::Cochains, Suite::Clifford, Suite::Heat, Suite::Jlo, Suite::Mq];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Forms => "forms",
            Suite::Bar => "bar",
            Suite::Cochains => "cochains",
            Suite::Clifford => "clifford",
            Suite::Heat => "heat",
            Suite::Jlo => "jlo",
            Suite::Mq => "mq",
            Suite::All => "all",
        }
    }

    fn default_degree(self) -> usize {
        match self {
            Suite::Forms => 5,
            Suite::Clifford => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = VerifyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::EACH
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| VerifyError::UnknownSuite(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[derive(Default)]
pub struct VerifyOptions {
    /// Overrides each suite's default degree bound.
    pub max_degree: Option<usize>,
    pub seed: u64,
}


impl VerifyOptions {
    fn degree(&self, suite: Suite) -> usize {
        self.max_degree.unwrap_or(suite.default_degree())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Reported but not asserted.
    Unverified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub cases: usize,
    /// `"0"` when every residual vanished, otherwise a count and first witness.
    pub residual: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn from_failures(name: impl Into<String>, cases: usize, failures: Vec<String>) -> Self {
        let (status, residual) = match failures.first() {
            None => (CheckStatus::Pass, "0".to_owned()),
            Some(first) => (CheckStatus::Fail, format!("{} of {} nonzero; first: {}", failures.len(), cases, first)),
        };
        CheckResult { name: name.into(), status, cases, residual, detail: None }
    }

    pub fn boolean(name: impl Into<String>, ok: bool, witness: impl Into<String>) -> Self {
        let failures = if ok { vec![] } else { vec![witness.into()] };
        Self::from_failures(name, 1, failures)
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

/// Sign conventions in force for a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    pub beta_chain_sign: i64,
    pub product_sign: String,
    pub partial_leibniz_sign: i64,
    pub unit_middle: String,
    pub thom_heat_sign: String,
}

impl Conventions {
    pub fn current() -> Self {
        Conventions {
            beta_chain_sign: conventions::BETA_CHAIN_SIGN,
            product_sign: format!("{:?}", conventions::PRODUCT_SIGN),
            partial_leibniz_sign: conventions::PARTIAL_LEIBNIZ_SIGN,
            unit_middle: "annihilate".into(),
            thom_heat_sign: "auto".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub suite: Suite,
    pub seed: u64,
    pub max_degree: Option<usize>,
    /// Sorted by name.
    pub checks: Vec<CheckResult>,
    pub conventions: Conventions,
    pub wall_time_ms: u64,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// A deferred batch of checks.
pub type Check = Box<dyn FnOnce() -> Vec<CheckResult> + Send>;

/// Runs check batches in parallel and sorts the results by name.
pub fn run_checks(jobs: Vec<Check>) -> Vec<CheckResult> {
    let mut checks: Vec<CheckResult> = jobs.into_par_iter().flat_map(|j| j()).collect();
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    checks
}

/// Run a suite; checks run in parallel and are reported sorted by name.
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> RunReport {
    let start = Instant::now();
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let jobs: Vec<Check> = suites.into_iter().flat_map(|s| suite_checks(s, opts)).collect();
    let checks = run_checks(jobs);
    RunReport {
        schema: SCHEMA_VERSION,
        suite,
        seed: opts.seed,
        max_degree: opts.max_degree,
        checks,
        conventions: Conventions::current(),
        wall_time_ms: start.elapsed().as_millis() as u64,
    }
}

fn suite_checks(s: Suite, opts: &VerifyOptions) -> Vec<Check> {
    let k = opts.degree(s);
    let seed = opts.seed;
    match s {
        Suite::Forms => forms_checks(k),
        Suite::Bar => bar_checks(k),
        Suite::Cochains => cochain_checks(k, seed),
        Suite::Clifford => clifford_checks(k),
        Suite::Heat => heat_checks(),
        Suite::Jlo => jlo_checks(k),
        Suite::Mq => mq_checks(),
        Suite::All => unreachable!("expanded by run_suite"),
    }
}

pub fn alphabet(n: usize) -> Vec<Symbol> {
    ["a", "b", "c", "e"][..n].iter().map(|s| Symbol::new(s)).collect()
}

fn forms_upto(alpha: &[Symbol], k: usize) -> Vec<FormWord> {
    (0..=k).flat_map(|j| single_letter_basis(alpha, j)).collect()
}

fn bar_upto(alpha: &[Symbol], k: usize) -> Vec<BarWord> {
    (0..=k).flat_map(|j| single_letter_bar_words(alpha, j)).collect()
}

fn o1_upto(alpha: &[Symbol], k: usize) -> Vec<O1Word> {
    (1..=k).flat_map(|j| single_letter_o1_words(alpha, j)).collect()
}

/// One check evaluating `residual` on every key; nonzero residuals are failures.
fn exhaustive<K: fmt::Debug + Sync, F: fmt::Display + Send>(
    name: &str,
    keys: &[K],
    residual: impl Fn(&K) -> Option<F> + Sync,
) -> CheckResult {
    let failures: Vec<String> = keys.par_iter().filter_map(|k| residual(k).map(|r| format!("{:?}: {}", k, r))).collect();
    CheckResult::from_failures(name, keys.len(), failures)
}

fn nonzero_form(x: Form) -> Option<Form> {
    (!x.is_zero()).then_some(x)
}

/// `b² = 0`, `B² = 0`, `bB + Bb = 0` on the full basis over three
/// generators, plus `d² = 0` and the Karoubi `♮d` squaring to zero.
pub fn forms_checks(k: usize) -> Vec<Check> {
    let keys = Arc::new(forms_upto(&alphabet(3), k));
    let mut out: Vec<Check> = Vec::new();
    let ks = keys.clone();
    out.push(Box::new(move || {
        vec![exhaustive("forms.b_squared", &ks, |w| nonzero_form(hochschild_b(&hochschild_b(&Form::basis(w.clone())))))]
    }));
    let ks = keys.clone();
    out.push(Box::new(move || {
        vec![exhaustive("forms.connes_b_squared", &ks, |w| nonzero_form(connes_b(&connes_b(&Form::basis(w.clone())))))]
    }));
    let ks = keys.clone();
    out.push(Box::new(move || {
        vec![exhaustive("forms.bb_anticommute", &ks, |w| {
            let f = Form::basis(w.clone());
            nonzero_form(hochschild_b(&connes_b(&f)).add(&connes_b(&hochschild_b(&f))))
        })]
    }));
    let ks = keys.clone();
    out.push(Box::new(move || {
        vec![exhaustive("forms.d_squared", &ks, |w| nonzero_form(universal_d(&universal_d(&Form::basis(w.clone())))))]
    }));
    let ks = keys;
    out.push(Box::new(move || {
        vec![exhaustive("forms.karoubi_d_squared", &ks, |w| {
            let c = karoubi_d(&karoubi_d(&natural_quotient(&Form::basis(w.clone()))));
            (!c.is_zero()).then(|| format!("{:?}", c))
        })]
    }));
    out
}

/// Coalgebra axioms on bar words and the structure maps linking forms,
/// `Ω₁B̄` and the bar construction.
pub fn bar_checks(k: usize) -> Vec<Check> {
    let alpha = alphabet(2);
    let words = Arc::new(bar_upto(&alpha, k));
    let forms = Arc::new(forms_upto(&alpha, k));
    let o1 = Arc::new(o1_upto(&alpha, k));
    let mut out: Vec<Check> = Vec::new();
    let w = words.clone();
    out.push(Box::new(move || {
        let basis = |x: &BarWord| BarChain::basis(x.clone());
        vec![
            exhaustive("bar.coassociativity", &w, |x| {
                let x = basis(x);
                (coproduct_triple(&x, true) != coproduct_triple(&x, false)).then(|| "differs".to_owned())
            }),
            exhaustive("bar.counit", &w, |x| {
                let x = basis(x);
                let t = coproduct(&x);
                (counit_left(&t) != x || counit_right(&t) != x).then(|| "differs".to_owned())
            }),
            exhaustive("bar.bprime_coderivation", &w, |x| {
                let x = basis(x);
                (coproduct(&bar_bprime(&x)) != bprime_tensor(&coproduct(&x))).then(|| "differs".to_owned())
            }),
            exhaustive("bar.bprime_squared", &w, |x| {
                let r = bar_bprime(&bar_bprime(&basis(x)));
                (!r.is_zero()).then(|| r.to_string())
            }),
            exhaustive("bar.beta_chain_map", &w, |x| {
                let x = basis(x);
                let s = Scalar::from_int(conventions::BETA_CHAIN_SIGN);
                nonzero_form(hochschild_b(&beta(&x)).sub(&beta(&bar_bprime(&x)).scale(&s)))
            }),
            exhaustive("bar.partial_beta_vanishes", &w, |x| {
                let r = partial_bar(&beta(&basis(x)));
                (!r.is_zero()).then(|| r.to_string())
            }),
        ]
    }));
    let f = forms.clone();
    out.push(Box::new(move || {
        vec![
            exhaustive("bar.natural_b_double_prime", &f, |w| {
                let x = Form::basis(w.clone());
                (bprime_bimodule(&cotrace(&x)) != cotrace(&hochschild_b(&x))).then(|| "differs".to_owned())
            }),
            exhaustive("bar.partial_bar_factors", &f, |w| {
                let x = Form::basis(w.clone());
                (partial_bar(&x) != partial_proj(&cotrace(&x))).then(|| "differs".to_owned())
            }),
            exhaustive("bar.connes_b_embed_partial", &f, |w| {
                let x = Form::basis(w.clone());
                nonzero_form(connes_b(&x).sub(&embed(&partial_bar(&x))))
            }),
        ]
    }));
    let o = o1;
    out.push(Box::new(move || {
        vec![exhaustive("bar.b_double_prime_squared", &o, |w| {
            let r = bprime_bimodule(&bprime_bimodule(&crate::linear::LinComb::basis(w.clone())));
            (!r.is_zero()).then(|| r.to_string())
        })]
    }));
    out
}

/// Seeded integer sample source for matrix-valued test cochains.
#[derive(Debug, Clone, Copy)]
pub struct Samples {
    seed: u64,
}

impl Samples {
    pub fn new(seed: u64) -> Self {
        Samples { seed }
    }

    fn rng(&self, key: u64) -> StdRng {
        StdRng::seed_from_u64(self.seed ^ key.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    /// The 2×2 super matrix algebra, parities `(0, 1)`, with `d = [E₁₂, ·]`.
    pub fn target() -> Arc<MatrixAlgebra> {
        let m = MatrixAlgebra::new(CoeffAlgebra::scalars(), vec![0, 1]);
        let q = m.from_ints(&[&[0, 1], &[0, 0]]);
        Arc::new(m.with_differential(MatrixDifferential::Inner(q)))
    }

    /// Integer entries in `[-3, 3]`, restricted to one parity when given.
    pub fn matrix(&self, t: &MatrixAlgebra, key: u64, parity: Option<u8>) -> SuperMatrix {
        let mut rng = self.rng(key);
        let n = t.dim();
        let ps = t.parities().to_vec();
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let p = (ps[i] + ps[j]) % 2;
                        if parity.is_none_or(|q| q == p) {
                            rng.random_range(-3..=3)
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        t.from_ints(&refs)
    }

    fn word_key(salt: u64, w: &BarWord) -> u64 {
        let mut h = salt.wrapping_add(w.len() as u64 * 1000);
        for e in &w.0 {
            for s in e {
                h = h.wrapping_mul(31).wrapping_add(s.as_str().bytes().map(u64::from).sum::<u64>());
            }
            h = h.wrapping_mul(17).wrapping_add(1);
        }
        h
    }

    /// Homogeneous cochain of parity `parity`: value parity `parity + len`.
    pub fn cochain(&self, t: &Arc<MatrixAlgebra>, parity: u8, salt: u64) -> BarCochain<MatrixAlgebra> {
        let (tt, me) = (t.clone(), *self);
        BarCochain::new(t.clone(), parity, move |w: &BarWord| {
            me.matrix(&tt, Self::word_key(salt, w), Some(((parity as usize + w.len()) % 2) as u8))
        })
    }

    /// Linear even 1-cochain `ρ`, arbitrary on each word.
    pub fn rho(&self, t: &Arc<MatrixAlgebra>, salt: u64) -> BarCochain<MatrixAlgebra> {
        let (tt, me) = (t.clone(), *self);
        BarCochain::linear(t.clone(), move |w: &AWord| {
            me.matrix(&tt, Self::word_key(salt, &BarWord(vec![w.clone()])), Some(0))
        })
    }
}

fn cochain_residuals(
    name: &str,
    lhs: &BarCochain<MatrixAlgebra>,
    rhs: &BarCochain<MatrixAlgebra>,
    keys: &[BarWord],
) -> CheckResult {
    let failures: Vec<String> = lhs.residuals(rhs, keys).into_iter().map(|(w, r)| format!("{:?}: {:?}", w, r)).collect();
    CheckResult::from_failures(name, keys.len(), failures)
}

/// The cochain dg-algebra axioms and the curvature calculus with random
/// `2×2` matrix values.
pub fn cochain_checks(k: usize, seed: u64) -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    out.push(Box::new(move || {
        let t = Samples::target();
        let s = Samples::new(seed);
        let keys = bar_upto(&alphabet(2), k);
        let mut res = Vec::new();
        for pf in 0..2u8 {
            let f = s.cochain(&t, pf, 5 + pf as u64);
            let zero = BarCochain::zero(t.clone(), pf);
            res.push(cochain_residuals(&format!("cochains.delta_squared.p{}", pf), &f.delta().delta(), &zero, &keys));
            for pg in 0..2u8 {
                let g = s.cochain(&t, pg, 17 + pg as u64);
                let failures: Vec<String> = f
                    .leibniz_residuals(&g, conventions::PRODUCT_SIGN, &keys)
                    .into_iter()
                    .map(|(w, r)| format!("{:?}: {:?}", w, r))
                    .collect();
                res.push(CheckResult::from_failures(format!("cochains.leibniz.p{}{}", pf, pg), keys.len(), failures));
            }
            let g = s.cochain(&t, 1, 41);
            let h = s.cochain(&t, 0, 43);
            res.push(cochain_residuals(
                &format!("cochains.associativity.p{}", pf),
                &f.mul(&g).mul(&h),
                &f.mul(&g.mul(&h)),
                &keys,
            ));
            let u = BarCochain::unit(t.clone());
            res.push(cochain_residuals(&format!("cochains.unit.p{}", pf), &u.mul(&f).mul(&u), &f, &keys));
        }
        res
    }));
    out.push(Box::new(move || {
        let t = Samples::target();
        let s = Samples::new(seed);
        let keys = bar_upto(&alphabet(2), k);
        let passing: Vec<ProductSign> = ProductSign::ALL
            .into_iter()
            .filter(|conv| {
                (0..2u8).all(|pf| {
                    (0..2u8).all(|pg| {
                        let f = s.cochain(&t, pf, 11 + pf as u64);
                        let g = s.cochain(&t, pg, 23 + pg as u64);
                        f.leibniz_residuals(&g, *conv, &keys).is_empty()
                    })
                })
            })
            .collect();
        vec![CheckResult::boolean(
            "cochains.product_sign_unique",
            passing == vec![conventions::PRODUCT_SIGN],
            format!("passing {:?}", passing),
        )
        .with_detail(format!("{:?}", conventions::PRODUCT_SIGN))]
    }));
    out.push(Box::new(move || {
        let t = Samples::target();
        let s = Samples::new(seed);
        let rho = s.rho(&t, 3);
        let omega = curvature(&rho);
        let pairs = single_letter_bar_words(&alphabet(2), 2);
        let curv = exhaustive("cochains.curvature_pairs", &pairs, |w| {
            let direct = t.sub(
                &rho.eval(&BarWord(vec![[w.0[0].clone(), w.0[1].clone()].concat()])),
                &t.mul(&rho.eval(&BarWord(vec![w.0[0].clone()])), &rho.eval(&BarWord(vec![w.0[1].clone()]))),
            );
            let got = omega.eval(w);
            (got != direct).then(|| format!("{:?} vs {:?}", got, direct))
        });
        let mut res = vec![curv];
        for n in 1..=3 {
            let keys = bar_upto(&alphabet(2), (2 * n + 1).min(k.max(2 * n)));
            let r = bianchi_check(&rho, n, &keys);
            res.push(CheckResult::boolean(format!("cochains.bianchi.n{}", n), r.passed(), format!("{:?}", r)).with_detail(
                format!("{} bar words", keys.len()),
            ));
        }
        res
    }));
    out.push(Box::new(move || {
        let t = Samples::target();
        let s = Samples::new(seed);
        let keys = o1_upto(&alphabet(2), k.min(3));
        let g1 = s.cochain(&t, 1, 3);
        let g2 = s.cochain(&t, 0, 4);
        let gamma = s.cochain(&t, 1, 8).partial_pullback();
        let u = BarCochain::unit(t.clone());
        let eq = |name: &str, a: &crate::cochains::OmegaCochain<MatrixAlgebra>, b: &crate::cochains::OmegaCochain<MatrixAlgebra>| {
            let failures: Vec<String> = a.residuals(b, &keys).into_iter().map(|(w, r)| format!("{:?}: {:?}", w, r)).collect();
            CheckResult::from_failures(name, keys.len(), failures)
        };
        let mut res = vec![
            eq("cochains.bimodule.left_unit", &u.act_left(&gamma), &gamma),
            eq("cochains.bimodule.right_unit", &gamma.act_right(&u), &gamma),
            eq(
                "cochains.bimodule.left_assoc",
                &g1.mul(&g2).act_left(&gamma),
                &g1.act_left(&g2.act_left(&gamma)),
            ),
            eq(
                "cochains.bimodule.right_assoc",
                &gamma.act_right(&g1.mul(&g2)),
                &gamma.act_right(&g1).act_right(&g2),
            ),
            eq(
                "cochains.bimodule.middle_assoc",
                &g1.act_left(&gamma).act_right(&g2),
                &g1.act_left(&gamma.act_right(&g2)),
            ),
        ];
        let sign = Scalar::from_int(conventions::PARTIAL_LEIBNIZ_SIGN);
        let nonunit: Vec<O1Word> = keys.iter().filter(|w| !w.middle.is_empty()).cloned().collect();
        let mut failures = Vec::new();
        for (pf, pg) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
            let f = s.cochain(&t, pf, 31);
            let g = s.cochain(&t, pg, 37);
            let lhs = f.mul(&g).partial_pullback();
            let rhs = f.partial_pullback().act_right(&g).add(&f.act_left(&g.partial_pullback()).scale(&sign));
            for (w, r) in lhs.residuals(&rhs, &nonunit) {
                failures.push(format!("p{}{} {:?}: {:?}", pf, pg, w, r));
            }
        }
        res.push(CheckResult::from_failures("cochains.partial_derivation", 4 * nonunit.len(), failures));
        let scal = Arc::new(CoeffAlgebra::scalars());
        let tt = t.clone();
        let tau: Arc<dyn Fn(&SuperMatrix) -> crate::ncalg::GradedElement + Send + Sync> =
            Arc::new(move |m| tt.supertrace(m));
        let samples: Vec<SuperMatrix> = (0..4).map(|i| s.matrix(&t, 500 + i, Some((i % 2) as u8))).collect();
        let forms = forms_upto(&alphabet(2), k.min(3));
        let mut failures = Vec::new();
        for parity in 0..2u8 {
            let f = s.cochain(&t, parity, 91).partial_pullback();
            match (
                tau_natural(tau.clone(), scal.clone(), 0, &f, &samples),
                tau_natural(tau.clone(), scal.clone(), 0, &f.delta(), &samples),
            ) {
                (Ok(psi), Ok(lhs)) => {
                    for (w, r) in lhs.residuals(&psi.delta(), &forms) {
                        failures.push(format!("p{} {:?}: {}", parity, w, r));
                    }
                }
                (a, b) => failures.push(format!("{:?} {:?}", a.err(), b.err())),
            }
        }
        res.push(CheckResult::from_failures("cochains.tau_natural_chain_map", 2 * forms.len(), failures));
        res
    }));
    out
}

/// Supertrace table over all basis words and the matrix cross-check.
pub fn clifford_checks(max_n: usize) -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    for n in 1..=max_n.max(1) {
        out.push(Box::new(move || {
            let top = (Scalar::from_int(2) * Scalar::i()).pow(n as u32);
            let words: Vec<u32> = (0..1u32 << (2 * n)).collect();
            let expect = |mask: u32| if mask == (1u32 << (2 * n)) - 1 { top.clone() } else { Scalar::zero() };
            let element = |mask: u32| {
                let idx: Vec<usize> = (0..2 * n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
                CliffordElement::word(n, &idx).expect("index in range")
            };
            let mut res = vec![exhaustive(&format!("clifford.supertrace_table.n{}", n), &words, |m| {
                let got = supertrace(&element(*m));
                (got != expect(*m)).then(|| got.to_string())
            })];
            if n <= 2 {
                res.push(exhaustive(&format!("clifford.matrix_cross_check.n{}", n), &words, |m| {
                    let e = element(*m);
                    let (a, b) = (supertrace(&e), supertrace_matrix(&e));
                    (a != b).then(|| format!("{} vs {}", a, b))
                }));
            }
            let g = chirality(n);
            let sq = clifford_mul(&g, &g).expect("same dimension");
            res.push(CheckResult::boolean(
                format!("clifford.chirality_involution.n{}", n),
                sq == CliffordElement::one(n),
                sq.to_string(),
            ));
            res
        }));
    }
    out
}

/// Bott closed form and pairing, and exact Duhamel volumes.
pub fn heat_checks() -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    for n in 1..=3usize {
        out.push(Box::new(move || {
            let (_, _, r) = bott_psi(n);
            vec![
                CheckResult::boolean(
                    format!("heat.bott_closed_form.n{}", n),
                    r.matches_closed_form,
                    format!("coefficient {} vs (2it)^{} = {}", r.coefficient, n, r.expected),
                )
                .with_detail(r.text.clone()),
                CheckResult::boolean(format!("heat.bott_lower_degrees_vanish.n{}", n), r.lower_degrees_vanish, "nonzero"),
            ]
        }));
    }
    for n in 1..=2usize {
        out.push(Box::new(move || {
            let (normalized, raw) = bott_pairing(n);
            vec![CheckResult::boolean(format!("heat.bott_pairing.n{}", n), normalized == Scalar::one(), normalized.to_string())
                .with_detail(format!("unnormalized {}", raw))]
        }));
    }
    out.push(Box::new(|| {
        let spec = HeatModelSpec {
            endo: vec![("g1".into(), Scalar::one())],
            fiber: vec!["x1".into()],
            base: vec![("c".into(), 0, 1)],
            cap: 3,
            ..Default::default()
        };
        let m = HeatModel::new(&spec).expect("fresh names");
        let c = m.el("c");
        let th = m.el("dx1");
        let zero = m.scalar(Scalar::zero());
        let one = m.duhamel_terms(&c, &zero, std::slice::from_ref(&th), 1);
        let e = m.heat_exponential(&c.scale(&Scalar::zero()), &c);
        let ok1 = match (&one, &e) {
            (Ok(t), Ok(e)) => t.len() == 2 && t[1].body == e.body.super_mul(&th).expect("same algebra").neg(),
            _ => false,
        };
        let two = m.duhamel_terms(&zero, &zero, &[th.clone(), th.clone()], 2);
        let p = th.add(&th).expect("same algebra");
        let half_sq = p.super_mul(&p).expect("same algebra").scale(&Scalar::rat(1, 2));
        let ok2 = two.as_ref().is_ok_and(|t| t.len() <= 3 && t.get(2).is_none_or(|x| x.body == half_sq));
        vec![
            CheckResult::boolean("heat.duhamel_order_one", ok1, format!("{:?}", one)),
            CheckResult::boolean("heat.duhamel_order_two_volume", ok2, format!("{:?}", two)),
        ]
    }));
    out.push(Box::new(|| {
        jlo_corpus()
            .into_iter()
            .map(|spec| {
                let name = format!("heat.differentiation_formula.{}", spec.name);
                match spec.build() {
                    Ok(model) => {
                        let mut failures = Vec::new();
                        for a in &model.alphabet {
                            match model.differentiation_formula(&vec![*a]) {
                                Ok((l, r)) => {
                                    let d = model.target.sub(&l, &r);
                                    if !DgAlgebra::is_zero(model.target.as_ref(), &d) {
                                        failures.push(format!("{}: {:?}", a, d));
                                    }
                                }
                                Err(e) => failures.push(e.to_string()),
                            }
                        }
                        CheckResult::from_failures(name, model.alphabet.len(), failures)
                    }
                    Err(e) => CheckResult::boolean(name, false, e.to_string()),
                }
            })
            .collect()
    }));
    out
}

/// Cocycle relations on the nilpotent corpus.
pub fn jlo_checks(depth: usize) -> Vec<Check> {
    jlo_corpus()
        .into_iter()
        .map(|mut spec| {
            spec.depth = depth;
            Box::new(move || {
                let name = format!("jlo.{}", spec.name);
                let report = spec.build().map(Arc::new).and_then(|m| jlo_verify(&m));
                match report {
                    Ok(r) => {
                        let count: usize = r.degrees.iter().map(|d| d.forms_checked + d.bar_words_checked).sum();
                        let detail = format!(
                            "hochschild signs {:?}; bar signs {:?}; nonzero psi components {:?}",
                            r.hochschild_signs(),
                            r.bar_signs(),
                            r.nonzero_components()
                        );
                        let ok = r.passed();
                        let mut c = CheckResult::boolean(name, ok, format!("{:?}", r));
                        c.cases = count;
                        vec![c.with_detail(detail)]
                    }
                    Err(e) => vec![CheckResult::boolean(name, false, e.to_string())],
                }
            }) as Check
        })
        .collect()
}

/// Thom form fiber normalization, Todd series and the cochain formula.
pub fn mq_checks() -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    for m in 1..=2usize {
        out.push(Box::new(move || {
            let name = format!("mq.flat_normalization.m{}", m);
            vec![match mq_supertrace(&ThomScenario::flat(m)) {
                Ok((_, _, r)) => CheckResult::boolean(
                    name,
                    r.normalized_to_unit_modulus(),
                    format!("{:?}", r.normalization),
                )
                .with_detail(format!("{:?}; {}", r.normalization, r.note)),
                Err(e) => CheckResult::boolean(name, false, e.to_string()),
            }]
        }));
    }
    out.push(Box::new(|| {
        let name = "mq.curved_todd.m1.order2";
        vec![match mq_supertrace(&ThomScenario::curved(1, 2)) {
            Ok((_, _, r)) => match r.todd {
                Some(t) => CheckResult::boolean(name, t.matching_exponent_sign.is_some(), t.ratio.clone()).with_detail(
                    format!(
                        "ratio {}; matches (-1)^m det((1-e^(sW))/(sW)) with s = {:?} (W the curvature of E; s = -1 is the curvature of E*); unnormalized match {}",
                        t.ratio, t.matching_exponent_sign, t.matches_unnormalized
                    ),
                ),
                None => CheckResult::boolean(name, false, "no comparison"),
            },
            Err(e) => CheckResult::boolean(name, false, e.to_string()),
        }]
    }));
    out.push(Box::new(|| {
        (1..=4)
            .map(|order| {
                let t = todd_det_series(2, order);
                let alg = t.algebra().clone();
                let diag = t.filter(|w| {
                    w.iter().all(|g| matches!(alg.generator(*g).name.as_str(), "W11" | "W22"))
                });
                // product of the two rank-one series, each by its own power-series coefficients
                let series = |name: &str| {
                    let x = crate::ncalg::GradedElement::named(&alg, name).expect("declared");
                    let mut acc = crate::ncalg::GradedElement::zero(&alg);
                    let mut fact = 1i64;
                    for j in 0..=order {
                        fact *= (j + 1) as i64;
                        let term = x.pow(j).expect("same algebra").scale(&Scalar::rat(-1, fact));
                        acc = acc.add(&term).expect("same algebra");
                    }
                    acc
                };
                let prod = series("W11").super_mul(&series("W22")).expect("same algebra");
                CheckResult::boolean(format!("mq.todd_multiplicativity.order{}", order), diag == prod, diag.to_string())
            })
            .collect()
    }));
    out.push(Box::new(|| {
        [("mq.cochain_formula.flat.m1", ThomScenario::flat(1), 2), ("mq.cochain_formula.curved.m1", ThomScenario::curved(1, 2), 2)]
            .into_iter()
            .map(|(name, s, k)| match mq_verify(&s, k) {
                Ok(r) => {
                    let consts: Vec<String> =
                        r.degrees.iter().map(|d| format!("C{}={:?}", d.k, d.constant.as_ref().map(|c| c.to_string()))).collect();
                    CheckResult::boolean(name, r.passed(), format!("{:?}", r)).with_detail(format!(
                        "{}; fiber normalization {:?}",
                        consts.join(", "),
                        r.fiber_normalization
                    ))
                }
                Err(e) => CheckResult::boolean(name, false, e.to_string()),
            })
            .collect()
    }));
    out.push(Box::new(|| {
        vec![CheckResult {
            name: "mq.global_constant".into(),
            status: CheckStatus::Unverified,
            cases: 0,
            residual: "n/a".into(),
            detail: Some(
                "the (i/2pi)^(2 dim M) constant of the index composition needs the manifold model; only the fiber-direction content is checked"
                    .into(),
            ),
        }]
    }));
    out
}
