//! Superconnection curvature, heat exponentials of central-plus-nilpotent
//! curvatures, exact Duhamel expansions, fiberwise supertraces and Gaussian
//! fiber integration.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ncalg::{AlgebraBuilder, GenId, GradedElement, NcalgError, Word};
use crate::scalars::{Rational, Scalar};
use crate::superalg::{CoeffAlgebra, DgAlgebra};
use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeatError {
    #[error("scalar part is not central: {0}")]
    NotCentral(String),
    #[error("element not nilpotent within bound {0}")]
    NotNilpotentWithinBound(usize),
    #[error("perturbation does not commute with the scalar part")]
    NonCommutingScalar,
    #[error("term cannot be integrated over the fiber: {0}")]
    NonIntegrableTerm(String),
    #[error("endomorphism part must be odd")]
    EvenEndomorphism,
    #[error(transparent)]
    Ncalg(#[from] NcalgError),
}

impl HeatError {
    pub(crate) fn from_exp(e: NcalgError) -> Self {
        match e {
            NcalgError::NotNilpotentWithinBound(b) => HeatError::NotNilpotentWithinBound(b),
            other => HeatError::Ncalg(other),
        }
    }
}

/// Sign of the exponent in the heat element `e^{∓F}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HeatSign {
    /// `e^{-F}`.
    Minus,
    /// `e^{+F}`.
    Plus,
}

impl HeatSign {
    pub fn factor(self) -> Scalar {
        match self {
            HeatSign::Minus => Scalar::from_int(-1),
            HeatSign::Plus => Scalar::one(),
        }
    }
}

/// Description of the sector-tensor algebra `End ⊗ Ω(base)`.
#[derive(Debug, Clone, Default)]
pub struct HeatModelSpec {
    /// Odd endomorphism generators with their squares; they form a Clifford
    /// system whose top word has supertrace `(2i)^{len/2}`.
    pub endo: Vec<(String, Scalar)>,
    /// Fiber coordinates `x` with partners `dx`; the Gaussian atom is
    /// `e^{-r Σ x²}` over these.
    pub fiber: Vec<String>,
    /// Further base generators `(name, zdegree, weight)`.
    pub base: Vec<(String, i32, u32)>,
    /// Base generators with a differential partner: `(a, da)`.
    pub base_differentials: Vec<(String, String)>,
    /// Cap on total form weight (`dx`, `da` weigh 1).
    pub cap: u32,
}

/// The sector-tensor algebra with its de Rham differential.
pub struct HeatModel {
    coeff: CoeffAlgebra,
    endo: Vec<GenId>,
    fiber: Vec<(GenId, GenId)>,
    cap: u32,
}

impl fmt::Debug for HeatModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HeatModel")
            .field("endo", &self.endo.len())
            .field("fiber", &self.fiber.len())
            .field("cap", &self.cap)
            .finish()
    }
}

/// `G(r) · body` with `G(r) = e^{-r‖x‖²}`; `r = 0` means no Gaussian.
#[derive(Clone, PartialEq, Eq)]
pub struct HeatForm {
    pub rate: Scalar,
    pub body: GradedElement,
}

impl fmt::Debug for HeatForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for HeatForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rate.is_zero() {
            write!(f, "{}", self.body)
        } else {
            write!(f, "G({}) * ({})", self.rate, self.body)
        }
    }
}

impl HeatForm {
    pub fn plain(body: GradedElement) -> Self {
        HeatForm { rate: Scalar::zero(), body }
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn mul(&self, o: &Self) -> Result<Self, HeatError> {
        Ok(HeatForm { rate: &self.rate + &o.rate, body: self.body.super_mul(&o.body)? })
    }

    /// Sum of forms with the same Gaussian rate.
    pub fn add(&self, o: &Self) -> Result<Self, HeatError> {
        if self.body.is_zero() {
            return Ok(o.clone());
        }
        if o.body.is_zero() {
            return Ok(self.clone());
        }
        if self.rate != o.rate {
            return Err(HeatError::NonIntegrableTerm("sum of different Gaussian rates".into()));
        }
        Ok(HeatForm { rate: self.rate.clone(), body: self.body.add(&o.body)? })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        HeatForm { rate: self.rate.clone(), body: self.body.scale(c) }
    }

    pub fn to_latex(&self) -> String {
        let body = GradedLatex(&self.body).to_string();
        if self.rate.is_zero() {
            body
        } else {
            format!("e^{{-{}\\|x\\|^2}} \\left({}\\right)", self.rate.to_latex(), body)
        }
    }
}

/// LaTeX rendering of a graded element.
pub struct GradedLatex<'a>(pub &'a GradedElement);

impl fmt::Display for GradedLatex<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.0;
        if x.is_zero() {
            return f.write_str("0");
        }
        let alg = x.algebra();
        for (n, (w, c)) in x.terms().iter().enumerate() {
            let (neg, mag) = if c.is_negative_monomial() { (true, -c) } else { (false, c.clone()) };
            if n == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let word: String = w
                .iter()
                .map(|g| latex_generator(alg.generator(*g).name.as_str()))
                .collect::<Vec<_>>()
                .join(" ");
            let coef = if mag.len() > 1 { format!("({})", mag.to_latex()) } else { mag.to_latex() };
            if w.is_empty() {
                f.write_str(&coef)?;
            } else if mag.is_one() {
                f.write_str(&word)?;
            } else {
                write!(f, "{}\\,{}", coef, word)?;
            }
        }
        Ok(())
    }
}

fn latex_generator(name: &str) -> String {
    if let Some(rest) = name.strip_prefix("Om") {
        return format!("\\Omega_{{{}}}", rest);
    }
    if let Some(rest) = name.strip_prefix('g') {
        if rest.chars().all(|c| c.is_ascii_digit()) && !rest.is_empty() {
            return format!("\\gamma^{{{}}}", rest);
        }
    }
    if let Some(rest) = name.strip_prefix('d') {
        if !rest.is_empty() {
            return format!("d{}", crate::scalars::latex_symbol(rest));
        }
    }
    crate::scalars::latex_symbol(name)
}

impl HeatModel {
    pub fn new(spec: &HeatModelSpec) -> Result<Self, HeatError> {
        let mut b = AlgebraBuilder::new();
        let mut endo = Vec::new();
        let mut squares = Vec::new();
        for (name, sq) in &spec.endo {
            endo.push(b.generator(name, 1, 0)?);
            squares.push(sq.clone());
        }
        b.clifford(&endo, &squares);
        let mut fiber = Vec::new();
        for x in &spec.fiber {
            let xg = b.generator(x, 0, 1)?;
            let dx = b.weighted_generator(&format!("d{}", x), 1, 1, 1)?;
            fiber.push((xg, dx));
        }
        for (name, z, w) in &spec.base {
            b.weighted_generator(name, *z, 1, *w)?;
        }
        b.graded_commutative(1);
        b.nil_cap(spec.cap);
        let alg = b.build();
        let mut rule: HashMap<GenId, GradedElement> = fiber
            .iter()
            .map(|(x, dx)| (*x, GradedElement::gen(&alg, *dx)))
            .collect();
        for (a, da) in &spec.base_differentials {
            rule.insert(alg.gen(a)?, GradedElement::named(&alg, da)?);
        }
        Ok(HeatModel { coeff: CoeffAlgebra::with_differential(alg, rule), endo, fiber, cap: spec.cap })
    }

    /// Spinor model over `ℝ^{2n}`: `γ^1..γ^{2n}` with `(γ^μ)² = 1`.
    pub fn bott(n: usize) -> Self {
        let spec = HeatModelSpec {
            endo: (1..=2 * n).map(|m| (format!("g{}", m), Scalar::one())).collect(),
            fiber: (1..=2 * n).map(|m| format!("x{}", m)).collect(),
            cap: 2 * n as u32,
            ..Default::default()
        };
        Self::new(&spec).expect("fresh generator names")
    }

    pub fn coeff(&self) -> &CoeffAlgebra {
        &self.coeff
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn el(&self, name: &str) -> GradedElement {
        self.coeff.el(name)
    }

    pub fn scalar(&self, c: Scalar) -> GradedElement {
        self.coeff.scalar(c)
    }

    pub fn endo_generators(&self) -> &[GenId] {
        &self.endo
    }

    pub fn fiber(&self) -> &[(GenId, GenId)] {
        &self.fiber
    }

    /// `Σ x²` over the fiber coordinates.
    pub fn norm_sq(&self) -> GradedElement {
        let alg = self.coeff.algebra();
        GradedElement::from_terms(alg, self.fiber.iter().map(|(x, _)| (vec![*x, *x], Scalar::one())))
    }

    /// Fiber volume `dx_1 … dx_d`.
    pub fn fiber_volume(&self) -> GradedElement {
        let alg = self.coeff.algebra();
        GradedElement::word(alg, self.fiber.iter().map(|(_, dx)| *dx).collect())
    }

    /// The de Rham differential, with `d G(r) = −r d(‖x‖²) G(r)`.
    pub fn d(&self, x: &HeatForm) -> HeatForm {
        let mut body = self.coeff.d(&x.body);
        if !x.rate.is_zero() {
            let dn = self.coeff.d(&self.norm_sq()).scale(&-&x.rate);
            body = body.add(&dn.super_mul(&x.body).expect("same algebra")).expect("same algebra");
        }
        HeatForm { rate: x.rate.clone(), body }
    }

    /// Split `c = r‖x‖² + z` with `z` free of pure fiber squares.
    fn split_gaussian(&self, c: &GradedElement) -> (Scalar, GradedElement) {
        let Some((x0, _)) = self.fiber.first() else {
            return (Scalar::zero(), c.clone());
        };
        let r = c.coefficient(&[*x0, *x0]);
        if r.is_zero() {
            return (r, c.clone());
        }
        let rest = c.sub(&self.norm_sq().scale(&r)).expect("same algebra");
        (r, rest)
    }

    /// `e^{-(c + n)}` for central `c` commuting with nilpotent `n`: the
    /// Gaussian atom of the `‖x‖²` part of `c` times the finite exponential of
    /// the rest.
    pub fn heat_exponential(&self, c: &GradedElement, n: &GradedElement) -> Result<HeatForm, HeatError> {
        for g in &self.endo {
            let e = GradedElement::gen(self.coeff.algebra(), *g);
            if !c.super_commutator(&e)?.is_zero() {
                return Err(HeatError::NotCentral(format!("{}", c)));
            }
        }
        if !c.super_commutator(n)?.is_zero() {
            return Err(HeatError::NotCentral(format!("{} against {}", c, n)));
        }
        let (rate, z) = self.split_gaussian(c);
        let bound = 2 * self.cap as usize + 2 * self.endo.len() + 2;
        let rest = z.add(n)?.neg();
        let body = rest.exp_nilpotent(bound).map_err(HeatError::from_exp)?;
        Ok(HeatForm { rate, body })
    }

    /// Duhamel expansion of `e^{-(c + n0 + P)}` for `P = Σ theta`, one term
    /// per order `k ≤ order`, each including its exact simplex integral.
    pub fn duhamel_terms(
        &self,
        c: &GradedElement,
        n0: &GradedElement,
        theta: &[GradedElement],
        order: usize,
    ) -> Result<Vec<HeatForm>, HeatError> {
        let (rate, z) = self.split_gaussian(c);
        let mut p = GradedElement::zero(self.coeff.algebra());
        for t in theta {
            if !c.super_commutator(t)?.is_zero() {
                return Err(HeatError::NonCommutingScalar);
            }
            p = p.add(t)?;
        }
        let inner = n0.add(&z)?;
        let bound = 2 * self.cap as usize + 2 * self.endo.len() + 2;
        // every slot adds at least the minimal form weight of P
        let alg = self.coeff.algebra();
        let min_weight = p
            .terms()
            .keys()
            .map(|w| w.iter().map(|g| alg.generator(*g).weight).sum::<u32>())
            .min();
        let max_k = match min_weight {
            None => 0,
            Some(0) => order,
            Some(w) => (self.cap / w) as usize,
        };
        let mut out = Vec::new();
        for k in 0..=order {
            if k > max_k {
                break;
            }
            let slots = vec![p.clone(); k];
            let term = simplex_integral(&self.coeff, &inner, &slots, bound).map_err(HeatError::from_exp)?;
            let term = if k % 2 == 1 { term.neg() } else { term };
            out.push(HeatForm { rate: rate.clone(), body: term });
        }
        Ok(out)
    }

    /// Fiberwise supertrace: the top endomorphism word contributes
    /// `(2i)^{len/2}`, every other word zero.
    pub fn supertrace_form(&self, x: &HeatForm) -> HeatForm {
        let alg = self.coeff.algebra();
        let k = self.endo.len();
        let factor = (Scalar::from_int(2) * Scalar::i()).pow((k / 2) as u32);
        let mut terms: Vec<(Word, Scalar)> = Vec::new();
        for (w, c) in x.body.terms() {
            let prefix = w.iter().take_while(|g| self.endo.contains(g)).count();
            if prefix == k && w[..k] == self.endo[..] {
                terms.push((w[k..].to_vec(), c * &factor));
            }
        }
        HeatForm { rate: x.rate.clone(), body: GradedElement::from_terms(alg, terms) }
    }

    /// Integrate over the fiber against `G(r)`: only terms containing the
    /// full fiber volume contribute, which is moved to the right end.
    pub fn gaussian_fiber_integral(&self, x: &HeatForm) -> Result<GradedElement, HeatError> {
        let alg = self.coeff.algebra().clone();
        let mut terms: Vec<(Word, Scalar)> = Vec::new();
        let dxs: Vec<GenId> = self.fiber.iter().map(|(_, dx)| *dx).collect();
        for (w, c) in x.body.terms() {
            if w.iter().any(|g| self.endo.contains(g)) {
                return Err(HeatError::NonIntegrableTerm("endomorphism letters remain".into()));
            }
            if !dxs.iter().all(|d| w.contains(d)) {
                continue;
            }
            let mut sign_odd = false;
            let mut rest: Word = Vec::new();
            let mut powers = vec![0usize; self.fiber.len()];
            // Koszul sign of moving the fiber differentials to the end, in order
            for (pos, g) in w.iter().enumerate() {
                if dxs.contains(g) {
                    let odd_after = w[pos + 1..]
                        .iter()
                        .filter(|h| !dxs.contains(h) && alg.generator(**h).parity() == 1)
                        .count();
                    sign_odd ^= odd_after % 2 == 1;
                } else if let Some(i) = self.fiber.iter().position(|(xg, _)| xg == g) {
                    powers[i] += 1;
                } else {
                    rest.push(*g);
                }
            }
            // dx's appear in generator order, so no reordering among them
            let mut coef = if sign_odd { -c } else { c.clone() };
            for p in &powers {
                match gaussian_moment(*p, &x.rate)? {
                    Some(m) => coef = &coef * &m,
                    None => {
                        coef = Scalar::zero();
                        break;
                    }
                }
            }
            if !coef.is_zero() {
                terms.push((rest, coef));
            }
        }
        Ok(GradedElement::from_terms(&alg, terms))
    }

    /// `(𝐃 = d + E)²` pieces: the curvature `F = ∇² + [d, E] + E²` and the
    /// rule `a ↦ d ρ(a) + [E, ρ(a)]`.
    pub fn curvature_superform(
        &self,
        sc: &Superconnection,
        rho: &[(Symbol, GradedElement)],
    ) -> Result<(GradedElement, Vec<(Symbol, GradedElement)>), HeatError> {
        if sc.endo.parity()? != 1 && !sc.endo.is_zero() {
            return Err(HeatError::EvenEndomorphism);
        }
        let e = &sc.endo;
        let f = sc.curvature.add(&self.coeff.d(e))?.add(&e.super_mul(e)?)?;
        let mut rule = Vec::new();
        for (a, r) in rho {
            let comm = self.coeff.d(r).add(&e.super_commutator(r)?)?;
            rule.push((*a, comm));
        }
        Ok((f, rule))
    }
}

/// `∇ = d + endo` with bundle curvature `∇²` (zero for the trivial connection).
#[derive(Debug, Clone)]
pub struct Superconnection {
    pub endo: GradedElement,
    pub curvature: GradedElement,
}

/// `∫ e^{-r x²} x^p dx`; `None` for odd `p`.
pub fn gaussian_moment(p: usize, rate: &Scalar) -> Result<Option<Scalar>, HeatError> {
    if p % 2 == 1 {
        return Ok(None);
    }
    let j = (p / 2) as i32;
    // (2j-1)!! / 2^j · π^{1/2} · r^{-j-1/2}
    let mut dfact = Rational::one();
    let mut k = 2 * j as i128 - 1;
    while k > 1 {
        dfact *= Rational::from_integer(k);
        k -= 2;
    }
    let c = dfact / Rational::from_integer(1i128 << j);
    let sqrt_pi = Scalar::sym_half_pow("pi", 1).expect("pi is radical");
    Ok(Some(Scalar::from_rational(c) * sqrt_pi * rate_half_power(rate, -(2 * j + 1))?))
}

/// `r^{h/2}` for a positive single-term rate whose coefficient is a square.
pub fn rate_half_power(rate: &Scalar, halfsteps: i32) -> Result<Scalar, HeatError> {
    let bad = || HeatError::NonIntegrableTerm(format!("Gaussian rate {} is not a positive monomial", rate));
    let mut it = rate.terms();
    let (m, c) = it.next().ok_or_else(bad)?;
    if it.next().is_some() || m.imag || !c.is_positive() {
        return Err(bad());
    }
    let root = rational_sqrt(*c).ok_or_else(bad)?;
    let base = if halfsteps >= 0 { root } else { root.recip() };
    let mut out = Scalar::one();
    for _ in 0..halfsteps.abs() {
        out = out.scale(base);
    }
    for (s, e) in m.exps() {
        let h = e * halfsteps;
        if h % 2 != 0 {
            return Err(bad());
        }
        out = &out * &Scalar::sym_half_pow(s.as_str(), h / 2).map_err(|_| bad())?;
    }
    Ok(out)
}

fn rational_sqrt(r: Rational) -> Option<Rational> {
    let isqrt = |n: i128| -> Option<i128> {
        if n < 0 {
            return None;
        }
        let s = (n as f64).sqrt() as i128;
        (s.saturating_sub(2)..=s + 2).find(|k| *k >= 0 && k * k == n)
    };
    Some(Rational::new(isqrt(*r.numer())?, isqrt(*r.denom())?))
}

/// `∫_{Δ_k} e^{-s_0 N} θ_1 e^{-s_1 N} … θ_k e^{-s_k N} ds` for nilpotent `N`,
/// using `∫_{Δ_k} Π s_i^{j_i} = Π j_i! / (k + Σ j_i)!`.
pub fn simplex_integral<L: DgAlgebra>(
    alg: &L,
    n: &L::Elem,
    theta: &[L::Elem],
    bound: usize,
) -> Result<L::Elem, NcalgError> {
    let mut powers = vec![alg.one()];
    loop {
        let next = alg.mul(powers.last().expect("nonempty"), n);
        if alg.is_zero(&next) {
            break;
        }
        if powers.len() > bound {
            return Err(NcalgError::NotNilpotentWithinBound(bound));
        }
        powers.push(next);
    }
    // coefficient of N^j in e^{-sN} is (-s)^j / j!, so the j_i! cancel and
    // each composition weighs (-1)^{Σj} / (k + Σj)!
    let k = theta.len();
    let mut acc = alg.zero();
    let mut stack: Vec<(usize, L::Elem, usize)> = Vec::new();
    for (j, p) in powers.iter().enumerate() {
        stack.push((0, p.clone(), j));
    }
    while let Some((slot, prefix, jsum)) = stack.pop() {
        if alg.is_zero(&prefix) {
            continue;
        }
        if slot == k {
            let mut f = Rational::one();
            for i in 1..=(k + jsum) as i128 {
                f *= Rational::from_integer(i);
            }
            let c = Scalar::from_rational(f.recip());
            let c = if jsum % 2 == 1 { -c } else { c };
            acc = alg.add(&acc, &alg.scale(&prefix, &c));
            continue;
        }
        let with_theta = alg.mul(&prefix, &theta[slot]);
        for (j, p) in powers.iter().enumerate() {
            stack.push((slot + 1, alg.mul(&with_theta, p), jsum + j));
        }
    }
    Ok(acc)
}

/// `∫_0^1 s^a (1-s)^b ds = a! b! / (a+b+1)!`.
pub fn beta_integral(a: u32, b: u32) -> Rational {
    let fact = |n: u32| (1..=n as i128).fold(Rational::one(), |acc, i| acc * Rational::from_integer(i));
    fact(a) * fact(b) / fact(a + b + 1)
}

/// Both sides of `[Y, e^{-X}] = ∫_0^1 e^{-sX} [Y, -X] e^{-(1-s)X} ds` for
/// nilpotent `X`, with the right side expanded into Beta rationals.
pub fn differentiation_formula<L: DgAlgebra>(
    alg: &L,
    x: &L::Elem,
    y: &L::Elem,
    bound: usize,
) -> Result<(L::Elem, L::Elem), NcalgError> {
    let mut powers = vec![alg.one()];
    loop {
        let next = alg.mul(powers.last().expect("nonempty"), x);
        if alg.is_zero(&next) {
            break;
        }
        if powers.len() > bound {
            return Err(NcalgError::NotNilpotentWithinBound(bound));
        }
        powers.push(next);
    }
    let fact = |n: usize| (1..=n as i128).fold(Rational::one(), |acc, i| acc * Rational::from_integer(i));
    let mut exp = alg.zero();
    for (j, p) in powers.iter().enumerate() {
        let c = Scalar::from_rational(fact(j).recip());
        let c = if j % 2 == 1 { -c } else { c };
        exp = alg.add(&exp, &alg.scale(p, &c));
    }
    let lhs = alg.supercommutator(y, &exp);
    let alpha = alg.neg(&alg.supercommutator(y, x));
    let mut rhs = alg.zero();
    for (a, pa) in powers.iter().enumerate() {
        for (b, pb) in powers.iter().enumerate() {
            // e^{-sX} ∋ (-s)^a X^a / a!, e^{-(1-s)X} ∋ (-(1-s))^b X^b / b!
            let w = beta_integral(a as u32, b as u32) / (fact(a) * fact(b));
            let c = Scalar::from_rational(if (a + b) % 2 == 1 { -w } else { w });
            let term = alg.mul(&alg.mul(pa, &alpha), pb);
            rhs = alg.add(&rhs, &alg.scale(&term, &c));
        }
    }
    Ok((lhs, rhs))
}


#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt_t() -> Scalar {
        Scalar::sqrt_t()
    }

    fn bott_pieces(m: &HeatModel, n: usize) -> (GradedElement, GradedElement) {
        let mut e = m.scalar(Scalar::zero());
        for mu in 1..=2 * n {
            let term = m.el(&format!("x{}", mu)).super_mul(&m.el(&format!("g{}", mu))).unwrap();
            e = e.add(&term.scale(&sqrt_t())).unwrap();
        }
        let sc = Superconnection { endo: e, curvature: m.scalar(Scalar::zero()) };
        let (f, _) = m.curvature_superform(&sc, &[]).unwrap();
        let c = m.norm_sq().scale(&Scalar::sym("t"));
        (c.clone(), f.sub(&c).unwrap())
    }

    #[test]
    fn bott_curvature_matches_closed_form() {
        let m = HeatModel::bott(1);
        let (c, n) = bott_pieces(&m, 1);
        let mut expect = m.scalar(Scalar::zero());
        for mu in 1..=2 {
            let t = m.el(&format!("dx{}", mu)).super_mul(&m.el(&format!("g{}", mu))).unwrap();
            expect = expect.add(&t.scale(&sqrt_t())).unwrap();
        }
        assert_eq!(n, expect);
        assert_eq!(c.add(&n).unwrap().coefficient(&[m.fiber()[0].0, m.fiber()[0].0]), Scalar::sym("t"));
    }

    #[test]
    fn heat_exponential_examples() {
        let m = HeatModel::bott(1);
        let c = m.norm_sq().scale(&Scalar::sym("t"));
        let zero = m.scalar(Scalar::zero());
        let g = m.heat_exponential(&c, &zero).unwrap();
        assert_eq!(g, HeatForm { rate: Scalar::sym("t"), body: m.scalar(Scalar::one()) });
        // product of (1 - √t dx_μ γ^μ): the factors are even and commute
        let (c, n) = bott_pieces(&m, 1);
        let h = m.heat_exponential(&c, &n).unwrap();
        let mut prod = m.scalar(Scalar::one());
        for mu in 1..=2 {
            let t = m.el(&format!("dx{}", mu)).super_mul(&m.el(&format!("g{}", mu))).unwrap();
            prod = prod.super_mul(&m.scalar(Scalar::one()).sub(&t.scale(&sqrt_t())).unwrap()).unwrap();
        }
        assert_eq!(h.body, prod);
        // e^{-n} = 1 - n when n² = 0
        let dx = m.el("dx1");
        let e = m.heat_exponential(&zero, &dx).unwrap();
        assert_eq!(e.body, m.scalar(Scalar::one()).sub(&dx).unwrap());
    }

    #[test]
    fn heat_exponential_rejects_noncentral() {
        let m = HeatModel::bott(1);
        let g = m.el("g1");
        assert!(matches!(m.heat_exponential(&g, &m.el("dx1")), Err(HeatError::NotCentral(_))));
    }

    #[test]
    fn splitting_independence() {
        let spec = HeatModelSpec {
            endo: vec![("g1".into(), Scalar::one()), ("g2".into(), Scalar::one())],
            fiber: vec!["x1".into(), "x2".into()],
            base: vec![("Om".into(), 2, 2)],
            cap: 6,
            ..Default::default()
        };
        let m = HeatModel::new(&spec).unwrap();
        let c = m.norm_sq().scale(&Scalar::sym("t"));
        let z = m.el("Om");
        let n = m.el("dx1").super_mul(&m.el("g1")).unwrap();
        let a = m.heat_exponential(&c.add(&z).unwrap(), &n).unwrap();
        let b = m.heat_exponential(&c, &n.add(&z).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn duhamel_examples() {
        let m = HeatModel::bott(1);
        let zero = m.scalar(Scalar::zero());
        let c = m.norm_sq().scale(&Scalar::sym("t"));
        let terms = m.duhamel_terms(&c, &zero, &[], 3).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0], m.heat_exponential(&c, &zero).unwrap());
        let theta = m.el("dx1").super_mul(&m.el("g1")).unwrap();
        let one = m.duhamel_terms(&c, &zero, std::slice::from_ref(&theta), 1).unwrap();
        assert_eq!(one[1], HeatForm { rate: Scalar::sym("t"), body: theta.neg() });
        let th = m.el("dx1").super_mul(&m.el("g1")).unwrap().add(&m.el("dx2").super_mul(&m.el("g2")).unwrap()).unwrap();
        let two = m.duhamel_terms(&zero, &zero, std::slice::from_ref(&th), 2).unwrap();
        assert_eq!(two[2].body, th.super_mul(&th).unwrap().scale_rational(Rational::new(1, 2)));
        assert!(matches!(
            m.duhamel_terms(&m.el("g1").super_mul(&m.el("g2")).unwrap(), &zero, &[m.el("g1")], 1),
            Err(HeatError::NonCommutingScalar)
        ));
    }

    #[test]
    fn duhamel_sums_to_exponential_for_noncommuting_pieces() {
        let m = HeatModel::bott(1);
        let n0 = m.el("dx1").super_mul(&m.el("g1")).unwrap().scale(&sqrt_t());
        let p = m.el("x2").super_mul(&m.el("g1")).unwrap().super_mul(&m.el("dx2")).unwrap();
        assert!(!n0.super_commutator(&p).unwrap().is_zero());
        let zero = m.scalar(Scalar::zero());
        let terms = m.duhamel_terms(&zero, &n0, std::slice::from_ref(&p), 4).unwrap();
        let mut sum = HeatForm::plain(zero.clone());
        for t in &terms {
            sum = sum.add(t).unwrap();
        }
        assert_eq!(sum, m.heat_exponential(&zero, &n0.add(&p).unwrap()).unwrap());
    }

    #[test]
    fn supertrace_form_examples() {
        let m = HeatModel::bott(1);
        let t = Scalar::sym("t");
        let w = m.el("g1").super_mul(&m.el("g2")).unwrap().super_mul(&m.fiber_volume()).unwrap();
        let st = m.supertrace_form(&HeatForm { rate: t.clone(), body: w });
        assert_eq!(st.body, m.fiber_volume().scale(&(Scalar::from_int(2) * Scalar::i())));
        let short = m.el("g1").super_mul(&m.fiber_volume()).unwrap();
        assert!(m.supertrace_form(&HeatForm { rate: t.clone(), body: short }).is_zero());
        assert!(m.supertrace_form(&HeatForm { rate: t, body: m.fiber_volume() }).is_zero());
    }

    #[test]
    fn fiber_integral_examples() {
        let m = HeatModel::bott(1);
        let t = Scalar::sym("t");
        let vol = m.fiber_volume();
        let g = |b: GradedElement| HeatForm { rate: t.clone(), body: b };
        let r = m.gaussian_fiber_integral(&g(vol.clone())).unwrap();
        assert_eq!(r, m.scalar(Scalar::pi() * Scalar::sym_pow("t", -1)));
        let odd = m.el("x1").super_mul(&vol).unwrap();
        assert!(m.gaussian_fiber_integral(&g(odd)).unwrap().is_zero());
        assert!(m.gaussian_fiber_integral(&g(m.el("dx1"))).unwrap().is_zero());
        let even = m.el("x1").super_mul(&m.el("x1")).unwrap().super_mul(&vol).unwrap();
        let r = m.gaussian_fiber_integral(&g(even)).unwrap();
        assert_eq!(r, m.scalar(Scalar::pi() * Scalar::sym_pow("t", -2) * Scalar::rat(1, 2)));
        let bad = HeatForm { rate: Scalar::from_int(-1), body: vol };
        assert!(matches!(m.gaussian_fiber_integral(&bad), Err(HeatError::NonIntegrableTerm(_))));
    }

    #[test]
    fn gaussian_differential_rule() {
        let m = HeatModel::bott(1);
        let t = Scalar::sym("t");
        let g = HeatForm { rate: t.clone(), body: m.scalar(Scalar::one()) };
        let dg = m.d(&g);
        let mut expect = m.scalar(Scalar::zero());
        for mu in 1..=2 {
            let term = m.el(&format!("x{}", mu)).super_mul(&m.el(&format!("dx{}", mu))).unwrap();
            expect = expect.add(&term.scale(&(Scalar::from_int(-2) * t.clone()))).unwrap();
        }
        assert_eq!(dg.body, expect);
    }

    #[test]
    fn heat_element_is_flat() {
        // ∇ e^{-∇²} = 0 with ∇ = d + E
        let m = HeatModel::bott(1);
        let mut e = m.scalar(Scalar::zero());
        for mu in 1..=2 {
            let term = m.el(&format!("x{}", mu)).super_mul(&m.el(&format!("g{}", mu))).unwrap();
            e = e.add(&term.scale(&sqrt_t())).unwrap();
        }
        let (c, n) = bott_pieces(&m, 1);
        let h = m.heat_exponential(&c, &n).unwrap();
        let comm = HeatForm { rate: h.rate.clone(), body: e.super_commutator(&h.body).unwrap() };
        assert!(m.d(&h).add(&comm).unwrap().is_zero());
    }

    #[test]
    fn central_rho_has_no_commutator_rule() {
        let m = HeatModel::bott(1);
        let mut e = m.scalar(Scalar::zero());
        for mu in 1..=2 {
            e = e.add(&m.el(&format!("x{}", mu)).super_mul(&m.el(&format!("g{}", mu))).unwrap()).unwrap();
        }
        let sc = Superconnection { endo: e, curvature: m.scalar(Scalar::zero()) };
        let (_, rule) = m.curvature_superform(&sc, &[(Symbol::new("e"), m.scalar(Scalar::one()))]).unwrap();
        assert!(rule[0].1.is_zero());
        let bad = Superconnection { endo: m.el("x1"), curvature: m.scalar(Scalar::zero()) };
        assert!(matches!(m.curvature_superform(&bad, &[]), Err(HeatError::EvenEndomorphism)));
    }

    #[test]
    fn beta_matches_binomial_expansion() {
        // ∫ s^a (1-s)^b = Σ_i C(b,i) (-1)^i / (a+i+1)
        for a in 0..6u32 {
            for b in 0..6u32 {
                let mut acc = Rational::from_integer(0);
                let mut binom = Rational::one();
                for i in 0..=b {
                    let term = binom / Rational::from_integer((a + i + 1) as i128);
                    acc += if i % 2 == 1 { -term } else { term };
                    binom = binom * Rational::from_integer((b - i) as i128) / Rational::from_integer((i + 1) as i128);
                }
                assert_eq!(beta_integral(a, b), acc);
            }
        }
    }

    #[test]
    fn differentiation_formula_inner() {
        let m = HeatModel::bott(1);
        let x = m.el("dx1").super_mul(&m.el("g1")).unwrap().add(&m.el("x1").super_mul(&m.el("dx2")).unwrap().super_mul(&m.el("g2")).unwrap()).unwrap();
        let y = m.el("g1").super_mul(&m.el("g2")).unwrap();
        let (l, r) = differentiation_formula(m.coeff(), &x, &y, 8).unwrap();
        assert!(!l.is_zero());
        assert_eq!(l, r);
    }
}
