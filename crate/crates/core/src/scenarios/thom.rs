//! The Gaussian Thom form of a rank `m` complex bundle, modeled on the
//! `2m` real fiber directions `ξ_j = u_j + i v_j` with `ΛE*` realized by the
//! Clifford generators `c_j, c'_j` (squares `−1`).
//!
//! `L = Σ u_j c_j + v_j c'_j`, `(∇ + L)² = −‖ξ‖² + Σ (du_j c_j + dv_j c'_j) + R`
//! with `R = −Σ Ω_jk w_k ι_j`, `w_j = (c_j + i c'_j)/2`, `ι_j = (i c'_j − c_j)/2`.

use serde::{Deserialize, Serialize};

use crate::heat::{simplex_integral, GradedLatex, HeatError, HeatForm, HeatModel, HeatModelSpec, HeatSign, Superconnection};
use crate::ncalg::{AlgebraBuilder, GradedElement};
use crate::scalars::Scalar;

/// Base form-degree cap beyond the fiber directions.
pub const BASE_FORM_CAP: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThomScenario {
    pub m: usize,
    pub curved: bool,
    /// Truncation order in powers of `Ω`.
    pub order: usize,
    /// `None` lets the engine choose: `e^{-F}` unless its fiber integral
    /// diverges, then `e^{+F}`.
    pub sign: Option<HeatSign>,
}

impl ThomScenario {
    pub fn flat(m: usize) -> Self {
        ThomScenario { m, curved: false, order: 0, sign: None }
    }

    pub fn curved(m: usize, order: usize) -> Self {
        ThomScenario { m, curved: true, order, sign: None }
    }

    pub fn order_bound(m: usize) -> usize {
        2 * m + BASE_FORM_CAP
    }

    /// Clamp the order to the bound; returns a warning if it was lowered.
    pub fn capped(mut self) -> (Self, Option<String>) {
        let bound = Self::order_bound(self.m);
        if self.order > bound {
            let w = format!("order {} exceeds the form-degree bound {}; using {}", self.order, bound, bound);
            self.order = bound;
            (self, Some(w))
        } else {
            (self, None)
        }
    }

    fn model(&self, bases: &[(String, i32, u32)], diffs: &[(String, String)], extra_cap: u32) -> HeatModel {
        let mut endo = Vec::new();
        let mut fiber = Vec::new();
        for j in 1..=self.m {
            endo.push((format!("c{}", j), Scalar::from_int(-1)));
            endo.push((format!("c{}'", j), Scalar::from_int(-1)));
            fiber.push(format!("u{}", j));
            fiber.push(format!("v{}", j));
        }
        let mut base = Vec::new();
        if self.curved {
            for j in 1..=self.m {
                for k in 1..=self.m {
                    base.push((omega_name(j, k), 2, 2));
                }
            }
        }
        base.extend(bases.iter().cloned());
        let cap = (2 * self.m + 2 * if self.curved { self.order } else { 0 }) as u32 + extra_cap;
        HeatModel::new(&HeatModelSpec { endo, fiber, base, base_differentials: diffs.to_vec(), cap })
            .expect("fresh generator names")
    }
}

fn omega_name(j: usize, k: usize) -> String {
    format!("W{}{}", j, k)
}

fn omega_count(m: &HeatModel, w: &[crate::ncalg::GenId]) -> usize {
    let alg = m.coeff().algebra();
    w.iter().filter(|g| alg.generator(**g).name.as_str().starts_with('W')).count()
}

/// `L` and the curvature action `R`.
fn superconnection(s: &ThomScenario, m: &HeatModel) -> Superconnection {
    let mut l = m.scalar(Scalar::zero());
    let mut r = m.scalar(Scalar::zero());
    let half = Scalar::rat(1, 2);
    let i = Scalar::i();
    let mut w = Vec::new();
    let mut iota = Vec::new();
    for j in 1..=s.m {
        let c = m.el(&format!("c{}", j));
        let cp = m.el(&format!("c{}'", j));
        let u = m.el(&format!("u{}", j)).super_mul(&c).expect("same algebra");
        let v = m.el(&format!("v{}", j)).super_mul(&cp).expect("same algebra");
        l = l.add(&u).and_then(|x| x.add(&v)).expect("same algebra");
        w.push(c.add(&cp.scale(&i)).expect("same algebra").scale(&half));
        iota.push(cp.scale(&i).sub(&c).expect("same algebra").scale(&half));
    }
    if s.curved {
        for j in 1..=s.m {
            for k in 1..=s.m {
                let t = m
                    .el(&omega_name(j, k))
                    .super_mul(&w[k - 1])
                    .and_then(|x| x.super_mul(&iota[j - 1]))
                    .expect("same algebra");
                r = r.sub(&t).expect("same algebra");
            }
        }
    }
    Superconnection { endo: l, curvature: r }
}

/// `(√π)^{...}`-free normalizer `(i/2π)^m`.
fn normalizer(m: usize) -> Scalar {
    let half_pi = (Scalar::from_int(2) * Scalar::pi()).inv().expect("nonzero");
    (Scalar::i() * half_pi).pow(m as u32)
}

/// Comparison of the curved fiber integral against the determinant series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToddComparison {
    /// Curved fiber integral divided by the flat one, truncated at the order.
    pub ratio: String,
    /// `s` for which `ratio = (−1)^m det((1 − e^{sΩ})/(sΩ))`.
    pub matching_exponent_sign: Option<i64>,
    /// `ratio = det((1 − e^Ω)/Ω)` with no normalization of the constant term.
    pub matches_unnormalized: bool,
    pub series: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MqResult {
    pub scenario: ThomScenario,
    pub sign: HeatSign,
    pub text: String,
    pub latex: String,
    /// `∫_fiber tr_s(e^{±F})`; absent when the Gaussian diverges.
    pub fiber_integral: Option<String>,
    /// `(i/2π)^m` times the fiber integral, when it is a constant.
    pub normalization: Option<Scalar>,
    pub todd: Option<ToddComparison>,
    pub note: String,
}

impl MqResult {
    pub fn normalized_to_unit_modulus(&self) -> bool {
        self.normalization.as_ref().is_some_and(|c| *c == Scalar::one() || *c == Scalar::from_int(-1))
    }
}

/// `e^{±(F' + perturbation)}` pieces: `(rate, nilpotent n)` with
/// `e^{±F} = G(rate) e^{-n}`.
fn split_heat(m: &HeatModel, f: &GradedElement, sign: HeatSign) -> (Scalar, GradedElement) {
    let g = m.norm_sq();
    // F = −‖ξ‖² + F'
    let rest = f.add(&g).expect("same algebra");
    match sign {
        HeatSign::Plus => (Scalar::one(), rest.neg()),
        HeatSign::Minus => (Scalar::from_int(-1), rest),
    }
}

fn heat_form(s: &ThomScenario, m: &HeatModel, sign: HeatSign) -> Result<(GradedElement, HeatForm), HeatError> {
    let sc = superconnection(s, m);
    let (f, _) = m.curvature_superform(&sc, &[])?;
    let (rate, n) = split_heat(m, &f, sign);
    let c = m.norm_sq().scale(&rate);
    let h = m.heat_exponential(&c, &n)?;
    Ok((f, h))
}

fn fiber_integral(m: &HeatModel, psi: &HeatForm) -> Result<GradedElement, HeatError> {
    m.gaussian_fiber_integral(psi)
}

/// Supertrace of the heat element under one sign.
fn supertrace_with(s: &ThomScenario, sign: HeatSign) -> Result<(HeatModel, HeatForm, Option<GradedElement>), HeatError> {
    let m = s.model(&[], &[], 0);
    let (_, h) = heat_form(s, &m, sign)?;
    let psi = m.supertrace_form(&h);
    let integral = match fiber_integral(&m, &psi) {
        Ok(v) => Some(v),
        Err(HeatError::NonIntegrableTerm(_)) => None,
        Err(e) => return Err(e),
    };
    Ok((m, psi, integral))
}

/// Fiberwise supertrace `tr_s(e^{±(∇+L)²})` with its fiber integral and,
/// for curved scenarios, the comparison with the determinant series.
pub fn mq_supertrace(s: &ThomScenario) -> Result<(HeatModel, HeatForm, MqResult), HeatError> {
    let (s, _) = s.clone().capped();
    let (sign, (m, psi, integral)) = match s.sign {
        Some(sign) => (sign, supertrace_with(&s, sign)?),
        None => match supertrace_with(&s, HeatSign::Minus)? {
            (m, psi, Some(v)) => (HeatSign::Minus, (m, psi, Some(v))),
            _ => (HeatSign::Plus, supertrace_with(&s, HeatSign::Plus)?),
        },
    };
    let normalization = integral.as_ref().and_then(|v| {
        let k = normalizer(s.m);
        let c = v.constant();
        (v.terms().len() <= 1 && (v.is_zero() || v.terms().contains_key(&vec![]))).then(|| &c * &k)
    });
    let todd = match (&integral, s.curved) {
        (Some(v), true) => Some(todd_comparison(&s, sign, &m, v)?),
        _ => None,
    };
    let note = format!(
        "heat element e^{{{}F}}; fiber integral normalized by (i/2pi)^{}; the global constant of the index composition is unverified",
        if sign == HeatSign::Plus { "+" } else { "-" },
        s.m
    );
    let result = MqResult {
        scenario: s.clone(),
        sign,
        text: psi.to_string(),
        latex: psi.to_latex(),
        fiber_integral: integral.as_ref().map(|v| v.to_string()),
        normalization: if s.curved { None } else { normalization },
        todd,
        note,
    };
    Ok((m, psi, result))
}

fn todd_comparison(s: &ThomScenario, sign: HeatSign, m: &HeatModel, curved: &GradedElement) -> Result<ToddComparison, HeatError> {
    let flat = ThomScenario { curved: false, sign: Some(sign), ..s.clone() };
    let (_, _, flat_integral) = supertrace_with(&flat, sign)?;
    let c = flat_integral.map(|v| v.constant()).unwrap_or_else(Scalar::zero);
    let inv = c.inv().map_err(|_| HeatError::NonIntegrableTerm("flat fiber integral vanishes".into()))?;
    let ratio = curved.scale(&inv).filter(|w| omega_count(m, w) <= s.order);
    let omega = omega_matrix(m, s.m);
    let sign_m = if s.m % 2 == 1 { Scalar::from_int(-1) } else { Scalar::one() };
    let mut matching = None;
    for e in [1i64, -1] {
        let series = todd_det_series_in(&omega, s.order, e).filter(|w| omega_count(m, w) <= s.order);
        if series.scale(&sign_m) == ratio {
            matching = Some(e);
            break;
        }
    }
    let plain = todd_det_series_in(&omega, s.order, 1).filter(|w| omega_count(m, w) <= s.order);
    Ok(ToddComparison {
        ratio: ratio.to_string(),
        matching_exponent_sign: matching,
        matches_unnormalized: plain == ratio,
        series: plain.to_string(),
    })
}

fn omega_matrix(m: &HeatModel, rank: usize) -> Vec<Vec<GradedElement>> {
    (1..=rank).map(|j| (1..=rank).map(|k| m.el(&omega_name(j, k))).collect()).collect()
}

fn mat_mul(a: &[Vec<GradedElement>], b: &[Vec<GradedElement>]) -> Vec<Vec<GradedElement>> {
    let n = a.len();
    let zero = GradedElement::zero(a[0][0].algebra());
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(zero.clone(), |acc, k| {
                        acc.add(&a[i][k].super_mul(&b[k][j]).expect("same algebra")).expect("same algebra")
                    })
                })
                .collect()
        })
        .collect()
}

fn determinant(a: &[Vec<GradedElement>]) -> GradedElement {
    let n = a.len();
    let alg = a[0][0].algebra();
    let mut total = GradedElement::zero(alg);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut emit = |p: &[usize]| {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let mut term = GradedElement::one(alg);
        for (i, &j) in p.iter().enumerate() {
            term = term.super_mul(&a[i][j]).expect("same algebra");
        }
        if inversions % 2 == 1 {
            term = term.neg();
        }
        total = total.add(&term).expect("same algebra");
    };
    permutations(&mut perm, 0, &mut emit);
    total
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

/// `det((1 − e^{sΩ})/(sΩ))` for a matrix of commuting even entries, with the
/// power series `−Σ (sΩ)^n/(n+1)!` truncated at `n ≤ order`.
pub fn todd_det_series_in(omega: &[Vec<GradedElement>], order: usize, s: i64) -> GradedElement {
    let n = omega.len();
    let alg = omega[0][0].algebra().clone();
    let zero = GradedElement::zero(&alg);
    let identity: Vec<Vec<GradedElement>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { GradedElement::one(&alg) } else { zero.clone() }).collect())
        .collect();
    let mut series: Vec<Vec<GradedElement>> = vec![vec![zero.clone(); n]; n];
    let mut power = identity;
    let mut fact = num_rational::Ratio::from_integer(1i128);
    for k in 0..=order {
        fact *= num_rational::Ratio::from_integer((k + 1) as i128);
        let c = Scalar::from_rational(-fact.recip() * num_rational::Ratio::from_integer((s as i128).pow(k as u32)));
        for i in 0..n {
            for j in 0..n {
                series[i][j] = series[i][j].add(&power[i][j].scale(&c)).expect("same algebra");
            }
        }
        power = mat_mul(&power, omega);
    }
    determinant(&series)
}

/// `det((1 − e^Ω)/Ω)` for a generic `m×m` matrix of generators `W_jk`,
/// truncated at total degree `order`.
pub fn todd_det_series(m: usize, order: usize) -> GradedElement {
    let mut b = AlgebraBuilder::new();
    for j in 1..=m {
        for k in 1..=m {
            b.weighted_generator(&omega_name(j, k), 0, 0, 1).expect("fresh names");
        }
    }
    b.graded_commutative(0).nil_cap(order as u32);
    let alg = b.build();
    let omega: Vec<Vec<GradedElement>> = (1..=m)
        .map(|j| (1..=m).map(|k| GradedElement::named(&alg, &omega_name(j, k)).expect("declared")).collect())
        .collect();
    todd_det_series_in(&omega, order, 1)
}

/// Per-degree check of `ψ_k(a_0, …, a_k) = C_k a_0 da_1 … da_k ∧ tr_s(e^{±F})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MqDegree {
    pub k: usize,
    /// `C_k` found, when `ψ_k` is a multiple of the displayed product.
    pub constant: Option<Scalar>,
    /// `(±1)^k / k!`, the simplex volume with the heat sign.
    pub expected: Scalar,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MqVerifyReport {
    pub scenario: ThomScenario,
    pub sign: HeatSign,
    pub degrees: Vec<MqDegree>,
    /// `(i/2π)^m ∫_fiber ψ_0(a_0) = ± a_0` in the flat case.
    pub fiber_normalization: Option<bool>,
    pub todd: Option<ToddComparison>,
    pub note: String,
}

impl MqVerifyReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.matches) && self.fiber_normalization != Some(false)
    }
}

/// The bivariant cochain with abstract base entries `a_0, …, a_k`, `k ≤ max_k`.
pub fn mq_verify(s: &ThomScenario, max_k: usize) -> Result<MqVerifyReport, HeatError> {
    let (s, _) = s.clone().capped();
    let (_, _, base) = mq_supertrace(&s)?;
    let sign = base.sign;
    let mut bases = Vec::new();
    let mut diffs = Vec::new();
    for i in 0..=max_k {
        bases.push((format!("a{}", i), 0, 0));
        bases.push((format!("da{}", i), 1, 1));
        diffs.push((format!("a{}", i), format!("da{}", i)));
    }
    let m = s.model(&bases, &diffs, max_k as u32);
    let sc = superconnection(&s, &m);
    let rho: Vec<_> = (0..=max_k)
        .map(|i| (crate::symbol::Symbol::new(&format!("a{}", i)), m.el(&format!("a{}", i))))
        .collect();
    let (f, rule) = m.curvature_superform(&sc, &rho)?;
    let (rate, n) = split_heat(&m, &f, sign);
    let h = m.heat_exponential(&m.norm_sq().scale(&rate), &n)?;
    let trace = m.supertrace_form(&h);
    let bound = 2 * m.cap() as usize + 2 * m.endo_generators().len() + 2;
    let mut degrees = Vec::new();
    let mut fact = Scalar::one();
    for k in 0..=max_k {
        if k > 0 {
            fact = fact * Scalar::from_int(k as i64);
        }
        let thetas: Vec<GradedElement> = rule[1..=k].iter().map(|(_, t)| t.clone()).collect();
        let mut body = simplex_integral(m.coeff(), &n, &thetas, bound).map_err(HeatError::from_exp)?;
        if sign == HeatSign::Minus && k % 2 == 1 {
            body = body.neg();
        }
        let body = m.el("a0").super_mul(&body)?;
        let psi = m.supertrace_form(&HeatForm { rate: rate.clone(), body });
        let mut product = m.el("a0");
        for i in 1..=k {
            product = product.super_mul(&m.el(&format!("da{}", i)))?;
        }
        let displayed = product.super_mul(&trace.body)?;
        let constant = proportionality(&psi.body, &displayed);
        let mut expected = fact.inv().expect("nonzero");
        if sign == HeatSign::Minus && k % 2 == 1 {
            expected = -expected;
        }
        degrees.push(MqDegree { k, matches: constant.as_ref() == Some(&expected), constant, expected });
    }
    let fiber_normalization = if s.curved {
        None
    } else {
        let psi0 = HeatForm { rate: rate.clone(), body: m.el("a0").super_mul(&trace.body)? };
        match m.gaussian_fiber_integral(&psi0) {
            Ok(v) => {
                let v = v.scale(&normalizer(s.m));
                let a0 = m.el("a0");
                Some(v == a0 || v == a0.neg())
            }
            Err(HeatError::NonIntegrableTerm(_)) => None,
            Err(e) => return Err(e),
        }
    };
    Ok(MqVerifyReport { scenario: s, sign, degrees, fiber_normalization, todd: base.todd, note: base.note })
}

/// `c` with `x = c·y`, if one exists.
fn proportionality(x: &GradedElement, y: &GradedElement) -> Option<Scalar> {
    let (w, cy) = y.terms().iter().next()?;
    let c = &x.coefficient(w) * &cy.inv().ok()?;
    (y.scale(&c) == *x).then_some(c)
}

/// LaTeX of a base form.
pub fn base_form_latex(x: &GradedElement) -> String {
    GradedLatex(x).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cliffext::{supertrace_ext, thom_generators};

    #[test]
    fn clifford_convention_matches_exterior_model() {
        // str(c_1 c'_1 … c_m c'_m) on ΛE* is the (2i)^m the heat model assigns
        for m in 1..=2 {
            let gens = thom_generators(m);
            let mut p = gens[0].clone();
            for g in &gens[1..] {
                p = p.mul(g).unwrap();
            }
            assert_eq!(supertrace_ext(&p), (Scalar::from_int(2) * Scalar::i()).pow(m as u32));
        }
    }

    #[test]
    fn flat_rank_one_form() {
        let s = ThomScenario { sign: Some(HeatSign::Plus), ..ThomScenario::flat(1) };
        let (m, psi, r) = mq_supertrace(&s).unwrap();
        let expected = m.fiber_volume().scale(&(Scalar::from_int(-2) * Scalar::i()));
        assert_eq!(psi, HeatForm { rate: Scalar::one(), body: expected });
        assert_eq!(r.normalization, Some(Scalar::one()));
    }

    #[test]
    fn flat_rank_one_matches_bott_up_to_sign() {
        let s = ThomScenario { sign: Some(HeatSign::Plus), ..ThomScenario::flat(1) };
        let (_, psi, _) = mq_supertrace(&s).unwrap();
        let (_, bott, _) = crate::scenarios::bott_psi(1);
        let bott_coef = bott.body.terms().values().next().unwrap().substitute("t", 1.into());
        let mq_coef = psi.body.terms().values().next().unwrap().clone();
        assert_eq!(mq_coef, bott_coef);
    }

    #[test]
    fn minus_sign_diverges_and_auto_selects_plus() {
        let s = ThomScenario { sign: Some(HeatSign::Minus), ..ThomScenario::flat(1) };
        let (_, _, r) = mq_supertrace(&s).unwrap();
        assert!(r.fiber_integral.is_none());
        let (_, _, r) = mq_supertrace(&ThomScenario::flat(1)).unwrap();
        assert_eq!(r.sign, HeatSign::Plus);
    }

    #[test]
    fn flat_normalization_rank_two() {
        let (_, _, r) = mq_supertrace(&ThomScenario::flat(2)).unwrap();
        assert!(r.normalized_to_unit_modulus(), "{:?}", r.normalization);
    }

    #[test]
    fn todd_series_rank_one() {
        let t = todd_det_series(1, 2);
        let alg = t.algebra().clone();
        let w = GradedElement::named(&alg, "W11").unwrap();
        let one = GradedElement::one(&alg);
        let oracle = one
            .add(&w.scale(&Scalar::rat(1, 2)))
            .unwrap()
            .add(&w.pow(2).unwrap().scale(&Scalar::rat(1, 6)))
            .unwrap()
            .neg();
        assert_eq!(t, oracle);
        assert_eq!(todd_det_series(1, 0).constant(), Scalar::from_int(-1));
        assert_eq!(todd_det_series(2, 0).constant(), Scalar::one());
    }

    #[test]
    fn todd_block_multiplicativity() {
        for order in 1..=4 {
            let t = todd_det_series(2, order);
            let alg = t.algebra().clone();
            let diag = t.filter(|w| {
                w.iter().all(|g| {
                    let n = alg.generator(*g).name.as_str();
                    n == "W11" || n == "W22"
                })
            });
            let a = GradedElement::named(&alg, "W11").unwrap();
            let b = GradedElement::named(&alg, "W22").unwrap();
            let om = |x: &GradedElement| vec![vec![x.clone()]];
            let prod = todd_det_series_in(&om(&a), order, 1)
                .super_mul(&todd_det_series_in(&om(&b), order, 1))
                .unwrap();
            assert_eq!(diag, prod, "order {}", order);
        }
    }

    #[test]
    fn curved_rank_one_matches_series() {
        let (_, _, r) = mq_supertrace(&ThomScenario::curved(1, 2)).unwrap();
        let t = r.todd.unwrap();
        assert!(t.matching_exponent_sign.is_some(), "{:?}", t);
    }

    #[test]
    fn verify_flat_and_curved() {
        let r = mq_verify(&ThomScenario::flat(1), 2).unwrap();
        assert!(r.passed(), "{:?}", r);
        assert_eq!(r.fiber_normalization, Some(true));
        let r = mq_verify(&ThomScenario::curved(1, 2), 1).unwrap();
        assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn order_is_capped() {
        let (s, w) = ThomScenario::curved(1, 99).capped();
        assert_eq!(s.order, ThomScenario::order_bound(1));
        assert!(w.is_some());
    }
}
