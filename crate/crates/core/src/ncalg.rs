//! Graded (super)algebras presented by generators and adjacent-pair rewrite
//! rules, with Koszul-signed multiplication.
//!
//! Every relation the crate needs (graded commutativity, Clifford relations,
//! canonical anticommutation, sector sorting) is expressed as a rule rewriting
//! an adjacent pair `x y` into a linear combination of words. A word is in
//! normal form when no adjacent pair has a rule. Rules are only generated for
//! pairs that are out of order (or equal), and every replacement is either a
//! transposition or strictly shorter, so rewriting terminates.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalars::{Rational, Scalar};
use crate::symbol::Symbol;

pub type GenId = u16;
pub type Word = Vec<GenId>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NcalgError {
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("element is not homogeneous")]
    NonHomogeneous,
    #[error("element is not nilpotent within bound {0}")]
    NotNilpotentWithinBound(usize),
    #[error("derivation undefined on generator `{0}`")]
    UndefinedOnGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid algebra descriptor: {0}")]
    Descriptor(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: Symbol,
    pub zdegree: i32,
    /// Tensor factor the generator lives in; lower sectors sort first.
    pub sector: u8,
    /// Contribution to the nilpotency weight checked against `nil_cap`.
    pub weight: u32,
}

impl Generator {
    pub fn parity(&self) -> u8 {
        self.zdegree.rem_euclid(2) as u8
    }
}

pub type Replacement = Vec<(Word, Scalar)>;

/// Read-only presentation of a graded algebra.
pub struct Algebra {
    id: u64,
    gens: Vec<Generator>,
    by_name: HashMap<Symbol, GenId>,
    rules: Vec<Option<Replacement>>,
    nil_cap: Option<u32>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("id", &self.id)
            .field("generators", &self.gens.iter().map(|g| g.name).collect::<Vec<_>>())
            .field("nil_cap", &self.nil_cap)
            .finish()
    }
}

/// Reduction order used when rewriting; both must reach the same normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewriteOrder {
    Leftmost,
    Rightmost,
}

impl Algebra {
    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn gen(&self, name: &str) -> Result<GenId, NcalgError> {
        self.by_name
            .get(&Symbol::new(name))
            .copied()
            .ok_or_else(|| NcalgError::UnknownGenerator(name.to_owned()))
    }

    pub fn generator(&self, id: GenId) -> &Generator {
        &self.gens[id as usize]
    }

    pub fn nil_cap(&self) -> Option<u32> {
        self.nil_cap
    }

    fn rule(&self, x: GenId, y: GenId) -> Option<&Replacement> {
        self.rules[x as usize * self.gens.len() + y as usize].as_ref()
    }

    pub fn word_degree(&self, w: &[GenId]) -> i32 {
        w.iter().map(|g| self.gens[*g as usize].zdegree).sum()
    }

    pub fn word_parity(&self, w: &[GenId]) -> u8 {
        (self.word_degree(w).rem_euclid(2)) as u8
    }

    fn word_weight(&self, w: &[GenId]) -> u32 {
        w.iter().map(|g| self.gens[*g as usize].weight).sum()
    }

    fn over_cap(&self, w: &[GenId]) -> bool {
        matches!(self.nil_cap, Some(cap) if self.word_weight(w) > cap)
    }

    pub fn is_normal(&self, w: &[GenId]) -> bool {
        !self.over_cap(w) && w.windows(2).all(|p| self.rule(p[0], p[1]).is_none())
    }

    /// Rewrite a linear combination of words to normal form.
    pub fn normalize_with(
        &self,
        input: impl IntoIterator<Item = (Word, Scalar)>,
        strategy: RewriteOrder,
    ) -> BTreeMap<Word, Scalar> {
        let mut out: BTreeMap<Word, Scalar> = BTreeMap::new();
        let mut stack: Vec<(Word, Scalar)> = input.into_iter().collect();
        while let Some((w, c)) = stack.pop() {
            if c.is_zero() || self.over_cap(&w) {
                continue;
            }
            let pos = match strategy {
                RewriteOrder::Leftmost => (0..w.len().saturating_sub(1))
                    .find(|&i| self.rule(w[i], w[i + 1]).is_some()),
                RewriteOrder::Rightmost => (0..w.len().saturating_sub(1))
                    .rev()
                    .find(|&i| self.rule(w[i], w[i + 1]).is_some()),
            };
            match pos {
                None => {
                    let e = out.entry(w).or_default();
                    *e += &c;
                }
                Some(i) => {
                    let rep = self.rule(w[i], w[i + 1]).expect("rule found");
                    for (r, rc) in rep {
                        let mut nw = Vec::with_capacity(w.len() + r.len());
                        nw.extend_from_slice(&w[..i]);
                        nw.extend_from_slice(r);
                        nw.extend_from_slice(&w[i + 2..]);
                        stack.push((nw, &c * rc));
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn normalize(&self, input: impl IntoIterator<Item = (Word, Scalar)>) -> BTreeMap<Word, Scalar> {
        self.normalize_with(input, RewriteOrder::Leftmost)
    }

    pub fn word_to_string(&self, w: &[GenId]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter()
            .map(|g| self.gens[*g as usize].name.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Builder for [`Algebra`] presentations.
#[derive(Default)]
pub struct AlgebraBuilder {
    gens: Vec<Generator>,
    pair_rules: Vec<((GenId, GenId), Replacement)>,
    commutative_sectors: Vec<u8>,
    nil_cap: Option<u32>,
}

impl AlgebraBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn generator(&mut self, name: &str, zdegree: i32, sector: u8) -> Result<GenId, NcalgError> {
        self.weighted_generator(name, zdegree, sector, 0)
    }

    pub fn weighted_generator(
        &mut self,
        name: &str,
        zdegree: i32,
        sector: u8,
        weight: u32,
    ) -> Result<GenId, NcalgError> {
        let sym = Symbol::new(name);
        if self.gens.iter().any(|g| g.name == sym) {
            return Err(NcalgError::DuplicateGenerator(name.to_owned()));
        }
        self.gens.push(Generator {
            name: sym,
            zdegree,
            sector,
            weight,
        });
        Ok((self.gens.len() - 1) as GenId)
    }

    /// Generators of `sector` supercommute: `y x -> (-1)^{|x||y|} x y` for
    /// `x < y`, and odd generators square to zero.
    pub fn graded_commutative(&mut self, sector: u8) -> &mut Self {
        self.commutative_sectors.push(sector);
        self
    }

    /// Clifford relations `e_j e_i = -e_i e_j` (i<j) and `e_i^2 = square_i`.
    pub fn clifford(&mut self, gens: &[GenId], squares: &[Scalar]) -> &mut Self {
        for (a, &x) in gens.iter().enumerate() {
            self.pair_rules.push(((x, x), vec![(vec![], squares[a].clone())]));
            for &y in &gens[..a] {
                self.pair_rules.push(((x, y), vec![(vec![y, x], Scalar::from_int(-1))]));
            }
        }
        self
    }

    /// Canonical anticommutation relations for creators `c_j` and
    /// annihilators `a_j`; normal order puts creators first.
    pub fn car(&mut self, creators: &[GenId], annihilators: &[GenId]) -> &mut Self {
        let anti = |rules: &mut Vec<_>, list: &[GenId]| {
            for (a, &x) in list.iter().enumerate() {
                rules.push(((x, x), vec![]));
                for &y in &list[..a] {
                    rules.push(((x, y), vec![(vec![y, x], Scalar::from_int(-1))]));
                }
            }
        };
        anti(&mut self.pair_rules, creators);
        anti(&mut self.pair_rules, annihilators);
        for (j, &a) in annihilators.iter().enumerate() {
            for (k, &c) in creators.iter().enumerate() {
                let mut rep = vec![(vec![c, a], Scalar::from_int(-1))];
                if j == k {
                    rep.push((vec![], Scalar::one()));
                }
                self.pair_rules.push(((a, c), rep));
            }
        }
        self
    }

    pub fn rule(&mut self, x: GenId, y: GenId, replacement: Replacement) -> &mut Self {
        self.pair_rules.push(((x, y), replacement));
        self
    }

    pub fn nil_cap(&mut self, cap: u32) -> &mut Self {
        self.nil_cap = Some(cap);
        self
    }

    pub fn build(&self) -> Arc<Algebra> {
        let n = self.gens.len();
        let mut rules: Vec<Option<Replacement>> = vec![None; n * n];
        let parity = |g: GenId| self.gens[g as usize].parity();
        for x in 0..n as GenId {
            for y in 0..n as GenId {
                let (sx, sy) = (self.gens[x as usize].sector, self.gens[y as usize].sector);
                let sign = if parity(x) * parity(y) == 1 { -1 } else { 1 };
                if sx > sy {
                    rules[x as usize * n + y as usize] =
                        Some(vec![(vec![y, x], Scalar::from_int(sign))]);
                } else if sx == sy && self.commutative_sectors.contains(&sx) {
                    if x > y {
                        rules[x as usize * n + y as usize] =
                            Some(vec![(vec![y, x], Scalar::from_int(sign))]);
                    } else if x == y && parity(x) == 1 {
                        rules[x as usize * n + y as usize] = Some(vec![]);
                    }
                }
            }
        }
        for ((x, y), rep) in &self.pair_rules {
            rules[*x as usize * n + *y as usize] = Some(rep.clone());
        }
        let by_name = self
            .gens
            .iter()
            .enumerate()
            .map(|(i, g)| (g.name, i as GenId))
            .collect();
        Arc::new(Algebra {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            gens: self.gens.clone(),
            by_name,
            rules,
            nil_cap: self.nil_cap,
        })
    }
}

/// Element of a graded algebra: a normal-form linear combination of words.
#[derive(Clone)]
pub struct GradedElement {
    alg: Arc<Algebra>,
    terms: BTreeMap<Word, Scalar>,
}

impl PartialEq for GradedElement {
    fn eq(&self, other: &Self) -> bool {
        self.alg.id == other.alg.id && self.terms == other.terms
    }
}

impl Eq for GradedElement {}

impl fmt::Debug for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let cs = if c.len() == 1 { c.to_string() } else { format!("({})", c) };
                if w.is_empty() {
                    cs
                } else if c.is_one() {
                    self.alg.word_to_string(w)
                } else {
                    format!("{} {}", cs, self.alg.word_to_string(w))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl GradedElement {
    pub fn zero(alg: &Arc<Algebra>) -> Self {
        GradedElement {
            alg: alg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alg: &Arc<Algebra>) -> Self {
        Self::scalar(alg, Scalar::one())
    }

    pub fn scalar(alg: &Arc<Algebra>, c: Scalar) -> Self {
        Self::from_terms(alg, [(vec![], c)])
    }

    pub fn gen(alg: &Arc<Algebra>, g: GenId) -> Self {
        Self::from_terms(alg, [(vec![g], Scalar::one())])
    }

    pub fn named(alg: &Arc<Algebra>, name: &str) -> Result<Self, NcalgError> {
        Ok(Self::gen(alg, alg.gen(name)?))
    }

    pub fn word(alg: &Arc<Algebra>, w: Word) -> Self {
        Self::from_terms(alg, [(w, Scalar::one())])
    }

    pub fn from_terms(alg: &Arc<Algebra>, terms: impl IntoIterator<Item = (Word, Scalar)>) -> Self {
        GradedElement {
            alg: alg.clone(),
            terms: alg.normalize(terms),
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn terms(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, Scalar> {
        self.terms
    }

    pub fn coefficient(&self, w: &[GenId]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Scalar part (coefficient of the empty word).
    pub fn constant(&self) -> Scalar {
        self.coefficient(&[])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn same_algebra(&self, other: &Self) -> bool {
        self.alg.id == other.alg.id
    }

    fn check(&self, other: &Self) -> Result<(), NcalgError> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(NcalgError::AlgebraMismatch)
        }
    }

    /// Parity of a homogeneous element; zero counts as even.
    pub fn parity(&self) -> Result<u8, NcalgError> {
        let mut it = self.terms.keys().map(|w| self.alg.word_parity(w));
        let first = match it.next() {
            None => return Ok(0),
            Some(p) => p,
        };
        if it.all(|p| p == first) {
            Ok(first)
        } else {
            Err(NcalgError::NonHomogeneous)
        }
    }

    /// Z-degree of a homogeneous element.
    pub fn degree(&self) -> Result<i32, NcalgError> {
        let mut it = self.terms.keys().map(|w| self.alg.word_degree(w));
        let first = match it.next() {
            None => return Ok(0),
            Some(d) => d,
        };
        if it.all(|d| d == first) {
            Ok(first)
        } else {
            Err(NcalgError::NonHomogeneous)
        }
    }

    /// Split into parity components `(even, odd)`.
    pub fn split_parity(&self) -> (GradedElement, GradedElement) {
        let (mut e, mut o) = (BTreeMap::new(), BTreeMap::new());
        for (w, c) in &self.terms {
            if self.alg.word_parity(w) == 0 {
                e.insert(w.clone(), c.clone());
            } else {
                o.insert(w.clone(), c.clone());
            }
        }
        (
            GradedElement { alg: self.alg.clone(), terms: e },
            GradedElement { alg: self.alg.clone(), terms: o },
        )
    }

    pub fn filter(&self, mut keep: impl FnMut(&[GenId]) -> bool) -> GradedElement {
        GradedElement {
            alg: self.alg.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn map_coefficients(&self, mut f: impl FnMut(&Scalar) -> Scalar) -> GradedElement {
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                terms.insert(w.clone(), v);
            }
        }
        GradedElement { alg: self.alg.clone(), terms }
    }

    pub fn add(&self, other: &Self) -> Result<Self, NcalgError> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            let e = terms.entry(w.clone()).or_default();
            *e += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(GradedElement { alg: self.alg.clone(), terms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, NcalgError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coefficients(|c| -c)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return GradedElement::zero(&self.alg);
        }
        self.map_coefficients(|c| c * s)
    }

    pub fn scale_rational(&self, r: Rational) -> Self {
        self.map_coefficients(|c| c.scale(r))
    }

    /// Product with Koszul signs, rewritten to normal form.
    pub fn super_mul(&self, other: &Self) -> Result<Self, NcalgError> {
        self.check(other)?;
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut w = Vec::with_capacity(wa.len() + wb.len());
                w.extend_from_slice(wa);
                w.extend_from_slice(wb);
                raw.push((w, ca * cb));
            }
        }
        Ok(GradedElement {
            alg: self.alg.clone(),
            terms: self.alg.normalize(raw),
        })
    }

    /// `xy - (-1)^{|x||y|} yx` for homogeneous `x`, `y`.
    pub fn super_commutator(&self, other: &Self) -> Result<Self, NcalgError> {
        self.check(other)?;
        let (p, q) = (self.parity()?, other.parity()?);
        let xy = self.super_mul(other)?;
        let yx = other.super_mul(self)?;
        if p * q == 1 {
            xy.add(&yx)
        } else {
            xy.sub(&yx)
        }
    }

    pub fn pow(&self, n: usize) -> Result<Self, NcalgError> {
        let mut acc = GradedElement::one(&self.alg);
        for _ in 0..n {
            acc = acc.super_mul(self)?;
        }
        Ok(acc)
    }

    /// `sum_{j<k} n^j / j!` where `n^k = 0` for some `k <= bound`.
    pub fn exp_nilpotent(&self, bound: usize) -> Result<Self, NcalgError> {
        let mut sum = GradedElement::one(&self.alg);
        let mut power = GradedElement::one(&self.alg);
        let mut fact = Rational::from_integer(1);
        for j in 1..=bound {
            power = power.super_mul(self)?;
            if power.is_zero() {
                return Ok(sum);
            }
            fact *= Rational::from_integer(j as i128);
            sum = sum.add(&power.scale_rational(fact.recip()))?;
        }
        Err(NcalgError::NotNilpotentWithinBound(bound))
    }

    /// Extend `rule` on generators to a derivation of parity `parity` by the
    /// graded Leibniz rule.
    pub fn apply_derivation(
        &self,
        rule: &dyn Fn(GenId) -> Option<GradedElement>,
        parity: u8,
    ) -> Result<Self, NcalgError> {
        let mut raw: Vec<(Word, Scalar)> = Vec::new();
        let mut cache: HashMap<GenId, GradedElement> = HashMap::new();
        for (w, c) in &self.terms {
            let mut prefix_parity = 0u8;
            for (i, &g) in w.iter().enumerate() {
                let image = match cache.get(&g) {
                    Some(v) => v.clone(),
                    None => {
                        let v = rule(g).ok_or_else(|| {
                            NcalgError::UndefinedOnGenerator(self.alg.gens[g as usize].name.to_string())
                        })?;
                        self.check(&v)?;
                        cache.insert(g, v.clone());
                        v
                    }
                };
                let sign = if parity * prefix_parity == 1 { -c } else { c.clone() };
                for (iw, ic) in image.terms() {
                    let mut nw = Vec::with_capacity(w.len() + iw.len());
                    nw.extend_from_slice(&w[..i]);
                    nw.extend_from_slice(iw);
                    nw.extend_from_slice(&w[i + 1..]);
                    raw.push((nw, &sign * ic));
                }
                prefix_parity ^= self.alg.gens[g as usize].parity();
            }
        }
        Ok(GradedElement {
            alg: self.alg.clone(),
            terms: self.alg.normalize(raw),
        })
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(w, c)| TermJson {
                word: w.iter().map(|g| self.alg.gens[*g as usize].name.to_string()).collect(),
                coef: c.clone(),
            })
            .collect()
    }

    pub fn from_json(alg: &Arc<Algebra>, terms: &[TermJson]) -> Result<Self, NcalgError> {
        let mut raw = Vec::new();
        for t in terms {
            let w = t.word.iter().map(|n| alg.gen(n)).collect::<Result<Word, _>>()?;
            raw.push((w, t.coef.clone()));
        }
        Ok(GradedElement::from_terms(alg, raw))
    }
}

/// `{"word":["g1","g2",...],"coef":Scalar}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub word: Vec<String>,
    pub coef: Scalar,
}

/// Declarative algebra descriptor, as read from descriptor files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub families: Vec<FamilySpec>,
    #[serde(default)]
    pub rules: Vec<RuleSpec>,
    #[serde(default)]
    pub nil_cap: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub zdegree: i32,
    #[serde(default)]
    pub sector: u8,
    #[serde(default)]
    pub weight: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    GradedCommutative { sector: u8 },
    Clifford { generators: Vec<String> },
    Car { creators: Vec<String>, annihilators: Vec<String> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuleSpec {
    pub left: String,
    pub right: String,
    pub replacement: Vec<TermJson>,
}

impl AlgebraSpec {
    pub fn build(&self) -> Result<Arc<Algebra>, NcalgError> {
        let mut b = AlgebraBuilder::new();
        for g in &self.generators {
            b.weighted_generator(&g.name, g.zdegree, g.sector, g.weight)?;
        }
        let lookup = |b: &AlgebraBuilder, n: &str| -> Result<GenId, NcalgError> {
            b.gens
                .iter()
                .position(|g| g.name.as_str() == n)
                .map(|i| i as GenId)
                .ok_or_else(|| NcalgError::UnknownGenerator(n.to_owned()))
        };
        for f in &self.families {
            match f {
                FamilySpec::GradedCommutative { sector } => {
                    b.graded_commutative(*sector);
                }
                FamilySpec::Clifford { generators } => {
                    let ids = generators
                        .iter()
                        .map(|n| lookup(&b, n))
                        .collect::<Result<Vec<_>, _>>()?;
                    let squares = vec![Scalar::one(); ids.len()];
                    b.clifford(&ids, &squares);
                }
                FamilySpec::Car { creators, annihilators } => {
                    if creators.len() != annihilators.len() {
                        return Err(NcalgError::Descriptor("car families need matching lists".into()));
                    }
                    let c = creators.iter().map(|n| lookup(&b, n)).collect::<Result<Vec<_>, _>>()?;
                    let a = annihilators.iter().map(|n| lookup(&b, n)).collect::<Result<Vec<_>, _>>()?;
                    b.car(&c, &a);
                }
            }
        }
        for r in &self.rules {
            let (x, y) = (lookup(&b, &r.left)?, lookup(&b, &r.right)?);
            let mut rep = Vec::new();
            for t in &r.replacement {
                let w = t.word.iter().map(|n| lookup(&b, n)).collect::<Result<Word, _>>()?;
                rep.push((w, t.coef.clone()));
            }
            b.rule(x, y, rep);
        }
        if let Some(c) = self.nil_cap {
            b.nil_cap(c);
        }
        Ok(b.build())
    }
}
