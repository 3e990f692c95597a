//! Finite linear combinations of basis keys with [`Scalar`] coefficients.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalars::{Rational, Scalar};

/// Rendering of a basis element; `None` marks the unit basis element, which
/// prints as its bare coefficient.
pub trait Basis: Ord + Clone {
    fn render(&self) -> Option<String>;

    fn render_latex(&self) -> Option<String> {
        self.render()
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(k: K) -> Self {
        Self::term(k, Scalar::one())
    }

    pub fn term(k: K, c: Scalar) -> Self {
        let mut out = Self::zero();
        out.add_term(k, c);
        out
    }

    pub fn add_term(&mut self, k: K, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn add_int(&mut self, k: K, c: i64) {
        self.add_term(k, Scalar::from_int(c));
    }

    pub fn terms(&self) -> &BTreeMap<K, Scalar> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, k: &K) -> Scalar {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Self, s: &Scalar) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * s);
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1));
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c * s);
        }
        out
    }

    pub fn scale_rational(&self, r: Rational) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.scale(r));
        }
        out
    }

    /// Apply a linear map given on basis elements.
    pub fn map_linear<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> LinComb<L>) -> LinComb<L> {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k), c);
        }
        out
    }

    pub fn filter(&self, mut keep: impl FnMut(&K) -> bool) -> Self {
        LinComb {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }
}

impl<K: Ord + Clone> FromIterator<(K, Scalar)> for LinComb<K> {
    fn from_iter<I: IntoIterator<Item = (K, Scalar)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

fn render_terms<K: Basis>(
    lc: &LinComb<K>,
    f: &mut fmt::Formatter<'_>,
    basis: impl Fn(&K) -> Option<String>,
    coef: impl Fn(&Scalar) -> String,
    sep: &str,
) -> fmt::Result {
    if lc.is_zero() {
        return f.write_str("0");
    }
    for (n, (k, c)) in lc.terms.iter().enumerate() {
        let (neg, mag) = if c.is_negative_monomial() { (true, -c) } else { (false, c.clone()) };
        if n == 0 {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        let mag_str = if mag.len() > 1 {
            format!("({})", coef(&mag))
        } else {
            coef(&mag)
        };
        match basis(k) {
            None => f.write_str(&mag_str)?,
            Some(b) if mag.is_one() => f.write_str(&b)?,
            Some(b) => write!(f, "{}{}{}", mag_str, sep, b)?,
        }
    }
    Ok(())
}

impl<K: Basis> fmt::Display for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render_terms(self, f, |k| k.render(), |c| c.to_string(), " ")
    }
}

impl<K: Basis> fmt::Debug for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct Latex<'a, K: Ord>(&'a LinComb<K>);

impl<K: Basis> fmt::Display for Latex<'_, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render_terms(self.0, f, |k| k.render_latex(), |c| c.to_latex(), "\\,")
    }
}

impl<K: Basis> LinComb<K> {
    pub fn to_latex(&self) -> String {
        Latex(self).to_string()
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr<K> {
    basis: K,
    coef: Scalar,
}

impl<K: Ord + Clone + Serialize> Serialize for LinComb<K> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<TermRepr<&K>> = self
            .terms
            .iter()
            .map(|(k, c)| TermRepr { basis: k, coef: c.clone() })
            .collect();
        v.serialize(s)
    }
}

impl<'de, K: Ord + Clone + DeserializeOwned> Deserialize<'de> for LinComb<K> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<TermRepr<K>> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|t| (t.basis, t.coef)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
    struct K(u8);

    impl Basis for K {
        fn render(&self) -> Option<String> {
            if self.0 == 0 {
                None
            } else {
                Some(format!("k{}", self.0))
            }
        }
    }

    #[test]
    fn cancellation_and_display() {
        let mut x = LinComb::basis(K(1));
        x.add_int(K(2), -3);
        x.add_int(K(0), 2);
        assert_eq!(x.to_string(), "2 + k1 - 3 k2");
        x.add_int(K(1), -1);
        assert_eq!(x.len(), 2);
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn json_round_trip() {
        let mut x = LinComb::basis(K(1));
        x.add_term(K(3), Scalar::i());
        let s = serde_json::to_string(&x).unwrap();
        let back: LinComb<K> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }
}
