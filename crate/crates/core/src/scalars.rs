//! Exact coefficients: Gaussian-rational combinations of Laurent monomials in
//! a few designated symbols.
//!
//! Exponents are stored in half-steps, so `t^{1/2}` is the pair `(t, 1)`.
//! Only the radical symbols `t` and `pi` may carry odd half-step exponents.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::symbol::Symbol;

pub type Rational = Ratio<i128>;

/// Symbols allowed to carry half-integer exponents.
pub const RADICALS: [&str; 2] = ["t", "pi"];

pub fn is_radical(s: Symbol) -> bool {
    RADICALS.contains(&s.as_str())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("scalar is not a single nonzero monomial")]
    NotAMonomial,
    #[error("symbol `{0}` only admits integer exponents")]
    NonRadicalHalfExponent(String),
    #[error("malformed scalar json: {0}")]
    Json(String),
}

/// `i^{imag} * prod sym^{halfsteps/2}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial {
    pub imag: bool,
    exps: Vec<(Symbol, i32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn exps(&self) -> &[(Symbol, i32)] {
        &self.exps
    }

    pub fn halfsteps(&self, s: Symbol) -> i32 {
        self.exps
            .iter()
            .find(|(k, _)| *k == s)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    fn from_parts(imag: bool, mut exps: Vec<(Symbol, i32)>) -> Self {
        exps.retain(|(_, e)| *e != 0);
        exps.sort();
        Monomial { imag, exps }
    }

    /// Product of monomials; the returned sign comes from `i*i = -1`.
    fn mul(&self, other: &Monomial) -> (Monomial, bool) {
        let negate = self.imag && other.imag;
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut a, mut b) = (self.exps.iter().peekable(), other.exps.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(sa, ea)), Some(&&(sb, eb))) => {
                    if sa == sb {
                        if ea + eb != 0 {
                            exps.push((sa, ea + eb));
                        }
                        a.next();
                        b.next();
                    } else if sa < sb {
                        exps.push((sa, ea));
                        a.next();
                    } else {
                        exps.push((sb, eb));
                        b.next();
                    }
                }
                (Some(&&x), None) => {
                    exps.push(x);
                    a.next();
                }
                (None, Some(&&y)) => {
                    exps.push(y);
                    b.next();
                }
                (None, None) => break,
            }
        }
        (
            Monomial {
                imag: self.imag ^ other.imag,
                exps,
            },
            negate,
        )
    }

    pub fn is_one(&self) -> bool {
        !self.imag && self.exps.is_empty()
    }
}

/// Canonical finite sum `sum coef * monomial` with no zero coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<Monomial, Rational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(Rational::from_integer(n as i128))
    }

    pub fn rat(num: i64, den: i64) -> Self {
        Scalar::from_rational(Rational::new(num as i128, den as i128))
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Monomial::one(), r);
        }
        Scalar { terms }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::term(Rational::one(), Monomial::from_parts(true, vec![]))
    }

    /// `name^n` for integer `n`.
    pub fn sym_pow(name: &str, n: i32) -> Self {
        Scalar::term(
            Rational::one(),
            Monomial::from_parts(false, vec![(Symbol::new(name), 2 * n)]),
        )
    }

    pub fn sym(name: &str) -> Self {
        Scalar::sym_pow(name, 1)
    }

    /// `name^{halfsteps/2}`; odd half-steps only for radical symbols.
    pub fn sym_half_pow(name: &str, halfsteps: i32) -> Result<Self, ScalarError> {
        let s = Symbol::new(name);
        if halfsteps % 2 != 0 && !is_radical(s) {
            return Err(ScalarError::NonRadicalHalfExponent(name.to_owned()));
        }
        Ok(Scalar::term(
            Rational::one(),
            Monomial::from_parts(false, vec![(s, halfsteps)]),
        ))
    }

    /// `sqrt(t)`.
    pub fn sqrt_t() -> Self {
        Scalar::sym_half_pow("t", 1).expect("t is radical")
    }

    pub fn pi() -> Self {
        Scalar::sym("pi")
    }

    pub fn term(coef: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(m, coef);
        }
        Scalar { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_one() && c.is_one())
                .unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value, if the scalar has no `i` and no symbols.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then_some(*c)
            }
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, r: Rational) -> Scalar {
        if r.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), *c * r)).collect(),
        }
    }

    /// Multiplicative inverse of a single-term scalar.
    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.terms.len() != 1 {
            return Err(ScalarError::NotAMonomial);
        }
        let (m, c) = self.terms.iter().next().expect("one term");
        // 1/i = -i
        let coef = if m.imag { -c.recip() } else { c.recip() };
        let exps = m.exps.iter().map(|(s, e)| (*s, -e)).collect();
        Ok(Scalar::term(coef, Monomial::from_parts(m.imag, exps)))
    }

    pub fn pow(&self, n: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute a rational value for a symbol, which must appear with
    /// integer exponents only.
    pub fn substitute(&self, name: &str, value: Rational) -> Scalar {
        let s = Symbol::new(name);
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let e = m.halfsteps(s);
            assert!(e % 2 == 0, "cannot substitute a value into a half power");
            let mut k = Rational::one();
            let base = if e >= 0 { value } else { value.recip() };
            for _ in 0..(e.abs() / 2) {
                k *= base;
            }
            let exps = m.exps.iter().filter(|(x, _)| *x != s).cloned().collect();
            out.add_term(Monomial::from_parts(m.imag, exps), *c * k);
        }
        out
    }

    pub fn to_latex(&self) -> String {
        self.render(true)
    }

    /// True for a single term with negative coefficient.
    pub fn is_negative_monomial(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(|c| c.is_negative())
    }

    fn render(&self, latex: bool) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                if latex && !a.is_integer() {
                    factors.push(format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom()));
                } else {
                    factors.push(a.to_string());
                }
            }
            if m.imag {
                factors.push("i".into());
            }
            for (s, e) in &m.exps {
                let name = if latex { latex_symbol(s.as_str()) } else { s.as_str().to_string() };
                let exp = if e % 2 == 0 {
                    (e / 2).to_string()
                } else {
                    format!("{}/2", e)
                };
                if *e == 2 {
                    factors.push(name.to_string());
                } else if latex {
                    factors.push(format!("{}^{{{}}}", name, exp));
                } else if e % 2 == 0 && *e > 0 {
                    factors.push(format!("{}^{}", name, exp));
                } else {
                    factors.push(format!("{}^({})", name, exp));
                }
            }
            out.push_str(&factors.join(if latex { "" } else { " " }));
        }
        out
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), *c);
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -*c);
        }
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self += &rhs;
        self
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(mut self, rhs: Scalar) -> Scalar {
        self -= &rhs;
        self
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -*c)).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let (m, negate) = ma.mul(mb);
                let c = *ca * *cb;
                out.add_term(m, if negate { -c } else { c });
            }
        }
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

// JSON: {"terms":[{"coef":[num,den],"ipow":0..3,"exps":{"t":halfsteps}}]}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coef: [i128; 2],
    ipow: u8,
    #[serde(default)]
    exps: BTreeMap<String, i32>,
}

#[derive(Serialize, Deserialize)]
struct ScalarJson {
    terms: Vec<TermJson>,
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| TermJson {
                coef: [*c.numer(), *c.denom()],
                ipow: m.imag as u8,
                exps: m.exps.iter().map(|(k, e)| (k.as_str().to_owned(), *e)).collect(),
            })
            .collect();
        ScalarJson { terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = ScalarJson::deserialize(d)?;
        let mut out = Scalar::zero();
        for t in raw.terms {
            if t.coef[1] == 0 {
                return Err(D::Error::custom("zero denominator"));
            }
            if t.ipow > 3 {
                return Err(D::Error::custom("ipow must lie in 0..=3"));
            }
            let mut c = Rational::new(t.coef[0], t.coef[1]);
            if t.ipow >= 2 {
                c = -c;
            }
            let mut exps = Vec::new();
            for (k, e) in t.exps {
                let s = Symbol::new(&k);
                if e % 2 != 0 && !is_radical(s) {
                    return Err(D::Error::custom(
                        ScalarError::NonRadicalHalfExponent(k).to_string(),
                    ));
                }
                exps.push((s, e));
            }
            out.add_term(Monomial::from_parts(t.ipow % 2 == 1, exps), c);
        }
        Ok(out)
    }
}

/// LaTeX spelling of a symbol name: `pi` becomes `\pi`, trailing digits
/// become a subscript.
pub fn latex_symbol(name: &str) -> String {
    if name == "pi" {
        return "\\pi".into();
    }
    let split = name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    if split == 0 || split == name.len() {
        name.to_string()
    } else {
        format!("{}_{}", &name[..split], &name[split..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn addition_examples() {
        assert_eq!(&Scalar::rat(1, 2) + &Scalar::rat(1, 2), Scalar::one());
        let x = Scalar::sym("x");
        assert!((&x + &(-&x)).is_empty());
        assert_eq!(&Scalar::i() + &Scalar::i(), Scalar::i().scale(Rational::from_integer(2)));
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::from_int(-1));
        assert_eq!(&Scalar::sqrt_t() * &Scalar::sqrt_t(), Scalar::sym("t"));
        let two_i = Scalar::i().scale(Rational::from_integer(2));
        assert_eq!(&two_i * &two_i, Scalar::from_int(-4));
    }

    #[test]
    fn inverse_examples() {
        let two_pi_i = &(&Scalar::from_int(2) * &Scalar::pi()) * &Scalar::i();
        let inv = two_pi_i.inv().unwrap();
        let expected = &(&Scalar::rat(-1, 2) * &Scalar::sym_pow("pi", -1)) * &Scalar::i();
        assert_eq!(inv, expected);
        assert_eq!(&inv * &two_pi_i, Scalar::one());
        assert_eq!(Scalar::sym("t").inv().unwrap(), Scalar::sym_pow("t", -1));
        assert_eq!(Scalar::zero().inv(), Err(ScalarError::NotAMonomial));
        assert_eq!((&Scalar::one() + &Scalar::i()).inv(), Err(ScalarError::NotAMonomial));
    }

    #[test]
    fn half_powers_only_for_radicals() {
        assert!(Scalar::sym_half_pow("pi", 1).is_ok());
        assert!(matches!(
            Scalar::sym_half_pow("x", 1),
            Err(ScalarError::NonRadicalHalfExponent(_))
        ));
        assert!(Scalar::sym_half_pow("x", 4).is_ok());
    }

    #[test]
    fn display() {
        let s = &(&Scalar::from_int(2) * &Scalar::i()) * &Scalar::sym("t");
        assert_eq!(s.to_string(), "2 i t");
        assert_eq!(Scalar::sqrt_t().to_string(), "t^(1/2)");
        assert_eq!(Scalar::sqrt_t().to_latex(), "t^{1/2}");
        assert_eq!((-Scalar::rat(1, 2)).to_latex(), "-\\frac{1}{2}");
    }

    #[test]
    fn json_accepts_unreduced_ipow() {
        let s: Scalar =
            serde_json::from_str(r#"{"terms":[{"coef":[3,1],"ipow":3,"exps":{"t":1}}]}"#).unwrap();
        let expected = &(&Scalar::from_int(-3) * &Scalar::i()) * &Scalar::sqrt_t();
        assert_eq!(s, expected);
        assert!(serde_json::from_str::<Scalar>(r#"{"terms":[{"coef":[1,1],"ipow":0,"exps":{"x":1}}]}"#).is_err());
    }

    pub(crate) fn arb_scalar() -> impl Strategy<Value = Scalar> {
        let term = (-4i64..=4, 1i64..=3, any::<bool>(), -2i32..=2, -1i32..=1);
        proptest::collection::vec(term, 0..4).prop_map(|ts| {
            let mut acc = Scalar::zero();
            for (n, d, im, th, pe) in ts {
                let m = Monomial::from_parts(
                    im,
                    vec![(Symbol::new("t"), th), (Symbol::new("pi"), 2 * pe)],
                );
                acc += &Scalar::term(Rational::new(n as i128, d as i128), m);
            }
            acc
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn json_round_trip(a in arb_scalar()) {
            let j = serde_json::to_string(&a).unwrap();
            let back: Scalar = serde_json::from_str(&j).unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn canonical_form_idempotent(a in arb_scalar()) {
            // re-accumulating a canonical scalar term by term reproduces it
            let mut again = Scalar::zero();
            for (m, c) in a.terms() {
                again += &Scalar::term(*c, m.clone());
            }
            prop_assert_eq!(again, a);
        }
    }
}
