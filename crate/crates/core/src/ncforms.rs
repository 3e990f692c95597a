//! Noncommutative differential forms over the free algebra on a finite set of
//! symbols, with `d`, the Hochschild boundary `b`, Connes' `B`, and the
//! quotient by graded commutators.
//!
//! A basis form `a0 da1 ... dak` is stored as `(a0, [a1, ..., ak])` where each
//! entry is a word in the symbols; `a0` may be the empty word, which stands
//! for the adjoined unit.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linear::{Basis, LinComb};
use crate::scalars::Scalar;
use crate::symbol::Symbol;

/// Word in the free algebra; the empty word is the adjoined unit.
pub type AWord = Vec<Symbol>;

pub fn aword(names: &[&str]) -> AWord {
    names.iter().map(|n| Symbol::new(n)).collect()
}

pub fn render_aword(w: &[Symbol]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" ")
}

fn render_d(w: &[Symbol]) -> String {
    if w.len() == 1 {
        format!("d {}", w[0])
    } else {
        format!("d({})", render_aword(w))
    }
}

fn latex_aword(w: &[Symbol]) -> String {
    w.iter().map(|s| crate::scalars::latex_symbol(s.as_str())).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FormWord {
    pub a0: AWord,
    pub tail: Vec<AWord>,
}

impl FormWord {
    pub fn new(a0: AWord, tail: Vec<AWord>) -> Self {
        debug_assert!(tail.iter().all(|w| !w.is_empty()), "unit in a d-slot");
        FormWord { a0, tail }
    }

    pub fn degree(&self) -> usize {
        self.tail.len()
    }

    /// All entries `(a0, a1, ..., ak)`.
    pub fn entries(&self) -> Vec<AWord> {
        let mut v = Vec::with_capacity(self.tail.len() + 1);
        v.push(self.a0.clone());
        v.extend(self.tail.iter().cloned());
        v
    }
}

impl Basis for FormWord {
    fn render(&self) -> Option<String> {
        if self.a0.is_empty() && self.tail.is_empty() {
            return None;
        }
        let mut parts = Vec::new();
        if !self.a0.is_empty() {
            parts.push(render_aword(&self.a0));
        }
        parts.extend(self.tail.iter().map(|w| render_d(w)));
        Some(parts.join(" "))
    }

    fn render_latex(&self) -> Option<String> {
        if self.a0.is_empty() && self.tail.is_empty() {
            return None;
        }
        let mut parts = Vec::new();
        if !self.a0.is_empty() {
            parts.push(latex_aword(&self.a0));
        }
        for w in &self.tail {
            if w.len() == 1 {
                parts.push(format!("d{}", latex_aword(w)));
            } else {
                parts.push(format!("d({})", latex_aword(w)));
            }
        }
        Some(parts.join("\\,"))
    }
}

pub type Form = LinComb<FormWord>;

pub fn form_basis(a0: &[&str], tail: &[&[&str]]) -> Form {
    Form::basis(FormWord::new(aword(a0), tail.iter().map(|w| aword(w)).collect()))
}

pub fn form_unit() -> Form {
    Form::basis(FormWord::new(vec![], vec![]))
}

/// Degree-`k` component.
pub fn component(x: &Form, k: usize) -> Form {
    x.filter(|w| w.degree() == k)
}

/// `omega * b0` for a basis form and an algebra word, moving `b0` into the
/// last d-slot with `(w' da) b0 = w' d(a b0) - (w' a) db0`.
fn mul_word_right(w: &FormWord, b0: &[Symbol]) -> Form {
    if b0.is_empty() {
        return Form::basis(w.clone());
    }
    match w.tail.split_last() {
        None => {
            let mut a0 = w.a0.clone();
            a0.extend_from_slice(b0);
            Form::basis(FormWord::new(a0, vec![]))
        }
        Some((ak, rest)) => {
            let prefix = FormWord::new(w.a0.clone(), rest.to_vec());
            let mut merged = ak.clone();
            merged.extend_from_slice(b0);
            let mut t1 = rest.to_vec();
            t1.push(merged);
            let mut out = Form::basis(FormWord::new(w.a0.clone(), t1));
            for (pw, pc) in mul_word_right(&prefix, ak).iter() {
                let mut t = pw.tail.clone();
                t.push(b0.to_vec());
                out.add_term(FormWord::new(pw.a0.clone(), t), -pc);
            }
            out
        }
    }
}

pub fn form_mul(x: &Form, y: &Form) -> Form {
    let mut out = Form::zero();
    for (xw, xc) in x.iter() {
        for (yw, yc) in y.iter() {
            let c = xc * yc;
            for (pw, pc) in mul_word_right(xw, &yw.a0).iter() {
                let mut t = pw.tail.clone();
                t.extend(yw.tail.iter().cloned());
                out.add_term(FormWord::new(pw.a0.clone(), t), &c * pc);
            }
        }
    }
    out
}

pub fn universal_d(x: &Form) -> Form {
    x.map_linear(|w| {
        if w.a0.is_empty() {
            return Form::zero();
        }
        let mut t = Vec::with_capacity(w.tail.len() + 1);
        t.push(w.a0.clone());
        t.extend(w.tail.iter().cloned());
        Form::basis(FormWord::new(vec![], t))
    })
}

fn concat(a: &[Symbol], b: &[Symbol]) -> AWord {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

pub fn hochschild_b(x: &Form) -> Form {
    x.map_linear(|w| {
        let n = w.tail.len();
        let mut out = Form::zero();
        if n == 0 {
            return out;
        }
        // a0 a1 da2 ... dan
        out.add_int(FormWord::new(concat(&w.a0, &w.tail[0]), w.tail[1..].to_vec()), 1);
        for i in 1..n {
            let mut t = w.tail[..i - 1].to_vec();
            t.push(concat(&w.tail[i - 1], &w.tail[i]));
            t.extend(w.tail[i + 1..].iter().cloned());
            out.add_int(FormWord::new(w.a0.clone(), t), if i % 2 == 1 { -1 } else { 1 });
        }
        let last = concat(&w.tail[n - 1], &w.a0);
        out.add_int(
            FormWord::new(last, w.tail[..n - 1].to_vec()),
            if n % 2 == 1 { -1 } else { 1 },
        );
        out
    })
}

/// `B(a0 da1..dak) = sum_j (-1)^{jk} da_{k-j+1}..dak da0..da_{k-j}`, zero when
/// `a0` is the unit.
pub fn connes_b(x: &Form) -> Form {
    x.map_linear(|w| {
        let mut out = Form::zero();
        if w.a0.is_empty() {
            return out;
        }
        let e = w.entries();
        let n = e.len();
        let k = n - 1;
        for j in 0..n {
            let mut t = Vec::with_capacity(n);
            t.extend(e[n - j..].iter().cloned());
            t.extend(e[..n - j].iter().cloned());
            out.add_int(FormWord::new(vec![], t), if (j * k) % 2 == 1 { -1 } else { 1 });
        }
        out
    })
}

// ---------------------------------------------------------------------------
// Commutator quotient

/// Letter of the free graded algebra on `{x, dx}` that `Ω𝒜` is isomorphic to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub sym: Symbol,
    pub d: bool,
}

/// Letter word in signed-cyclic normal form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CyclicWord(pub Vec<Letter>);

impl Basis for CyclicWord {
    fn render(&self) -> Option<String> {
        if self.0.is_empty() {
            return None;
        }
        Some(
            self.0
                .iter()
                .map(|l| if l.d { format!("d {}", l.sym) } else { l.sym.to_string() })
                .collect::<Vec<_>>()
                .join(" "),
        )
    }
}

/// Element of `Ω𝒜/[Ω𝒜, Ω𝒜]` stored by canonical cyclic letter words.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CyclicClass {
    terms: LinComb<CyclicWord>,
}

impl fmt::Display for CyclicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "♮({})", self.terms)
    }
}

impl fmt::Debug for CyclicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn odd_count(w: &[Letter]) -> usize {
    w.iter().filter(|l| l.d).count()
}

/// Expand a basis form into letter words.
fn letters_of(w: &FormWord) -> Vec<Vec<Letter>> {
    let mut acc: Vec<Vec<Letter>> = vec![w.a0.iter().map(|&s| Letter { sym: s, d: false }).collect()];
    for a in &w.tail {
        let mut next = Vec::with_capacity(acc.len() * a.len());
        for prefix in &acc {
            for j in 0..a.len() {
                let mut v = prefix.clone();
                v.extend(a.iter().enumerate().map(|(i, &s)| Letter { sym: s, d: i == j }));
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

/// Canonical signed rotation; `None` when the word is forced to equal its own
/// negative.
fn canonical_rotation(w: &[Letter]) -> Option<(Vec<Letter>, bool)> {
    let n = w.len();
    if n == 0 {
        return Some((vec![], false));
    }
    let total = odd_count(w);
    let mut cur = w.to_vec();
    let mut neg = false;
    let mut best = (cur.clone(), neg);
    for _ in 1..n {
        let g = cur.pop().expect("nonempty");
        if g.d && (total - 1) % 2 == 1 {
            neg = !neg;
        }
        cur.insert(0, g);
        if cur < best.0 {
            best = (cur.clone(), neg);
        } else if cur == best.0 && neg != best.1 {
            return None;
        }
    }
    // Rotations equal to the starting word were only compared if they were
    // minimal; check the full orbit once more for a sign clash.
    let mut cur = w.to_vec();
    let mut neg = false;
    for _ in 0..n {
        if cur == best.0 && neg != best.1 {
            return None;
        }
        let g = cur.pop().expect("nonempty");
        if g.d && (total - 1) % 2 == 1 {
            neg = !neg;
        }
        cur.insert(0, g);
    }
    Some(best)
}

impl CyclicClass {
    pub fn zero() -> Self {
        Self::default()
    }

    fn add_letters(&mut self, w: &[Letter], c: &Scalar) {
        if let Some((rep, neg)) = canonical_rotation(w) {
            self.terms.add_term(CyclicWord(rep), if neg { -c } else { c.clone() });
        }
    }

    pub fn terms(&self) -> &LinComb<CyclicWord> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        CyclicClass { terms: self.terms.add(&other.terms) }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        CyclicClass { terms: self.terms.scale(s) }
    }

    /// Representative form of the class.
    pub fn representative(&self) -> Form {
        let mut out = Form::zero();
        for (w, c) in self.terms.iter() {
            let mut f = form_unit();
            for l in &w.0 {
                let letter = if l.d {
                    Form::basis(FormWord::new(vec![], vec![vec![l.sym]]))
                } else {
                    Form::basis(FormWord::new(vec![l.sym], vec![]))
                };
                f = form_mul(&f, &letter);
            }
            out.add_scaled(&f, c);
        }
        out
    }
}

pub fn natural_quotient(x: &Form) -> CyclicClass {
    let mut out = CyclicClass::zero();
    for (w, c) in x.iter() {
        for lw in letters_of(w) {
            out.add_letters(&lw, c);
        }
    }
    out
}

/// `♮d` on the commutator quotient.
pub fn karoubi_d(x: &CyclicClass) -> CyclicClass {
    let mut out = CyclicClass::zero();
    for (w, c) in x.terms.iter() {
        let mut odd = 0usize;
        for j in 0..w.0.len() {
            if !w.0[j].d {
                let mut v = w.0.clone();
                v[j].d = true;
                let s = if odd % 2 == 1 { -c } else { c.clone() };
                out.add_letters(&v, &s);
            } else {
                odd += 1;
            }
        }
    }
    out
}

/// Graded commutator `[x, y]` in `Ω𝒜` for forms of pure degree.
pub fn form_commutator(x: &Form, y: &Form) -> Form {
    let mut out = form_mul(x, y);
    for (xw, xc) in x.iter() {
        for (yw, yc) in y.iter() {
            let s = if xw.degree() * yw.degree() % 2 == 1 { 1 } else { -1 };
            let p = form_mul(&Form::basis(yw.clone()), &Form::basis(xw.clone()));
            out.add_scaled(&p, &(xc * yc).scale(s.into()));
        }
    }
    out
}

/// All basis forms of degree `k` whose entries are single symbols from
/// `alphabet`; `a0` ranges over the unit and the alphabet.
pub fn single_letter_basis(alphabet: &[Symbol], k: usize) -> Vec<FormWord> {
    let mut tails: Vec<Vec<AWord>> = vec![vec![]];
    for _ in 0..k {
        tails = tails
            .into_iter()
            .flat_map(|t| {
                alphabet.iter().map(move |&s| {
                    let mut v = t.clone();
                    v.push(vec![s]);
                    v
                })
            })
            .collect();
    }
    let mut heads: Vec<AWord> = vec![vec![]];
    heads.extend(alphabet.iter().map(|&s| vec![s]));
    let mut out = Vec::with_capacity(heads.len() * tails.len());
    for h in &heads {
        for t in &tails {
            out.push(FormWord::new(h.clone(), t.clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(a0: &[&str], tail: &[&[&str]]) -> Form {
        form_basis(a0, tail)
    }

    #[test]
    fn mul_examples() {
        // Leibniz oracle: d(a1 a2) - a1 da2
        let x = form_mul(&f(&[], &[&["a1"]]), &f(&["a2"], &[]));
        let oracle = f(&[], &[&["a1", "a2"]]).sub(&f(&["a1"], &[&["a2"]]));
        assert_eq!(x, oracle);
        let w = f(&["a0"], &[&["a1"], &["a2"]]);
        assert_eq!(form_mul(&form_unit(), &w), w);
        assert_eq!(form_mul(&f(&["a0"], &[]), &f(&[], &[&["b1"]])), f(&["a0"], &[&["b1"]]));
    }

    #[test]
    fn d_examples() {
        assert_eq!(universal_d(&f(&["a0"], &[&["a1"]])), f(&[], &[&["a0"], &["a1"]]));
        assert!(universal_d(&f(&[], &[&["a1"], &["a2"]])).is_zero());
        assert!(universal_d(&universal_d(&f(&["a0"], &[]))).is_zero());
    }

    #[test]
    fn b_examples() {
        let got = hochschild_b(&f(&["a0"], &[&["a1"]]));
        assert_eq!(got, f(&["a0", "a1"], &[]).sub(&f(&["a1", "a0"], &[])));
        assert_eq!(got.to_string(), "a0 a1 - a1 a0");
        assert!(hochschild_b(&f(&[], &[&["a1"]])).is_zero());
        let got = hochschild_b(&f(&["a0"], &[&["a1"], &["a2"]]));
        let oracle = f(&["a0", "a1"], &[&["a2"]])
            .sub(&f(&["a0"], &[&["a1", "a2"]]))
            .add(&f(&["a2", "a0"], &[&["a1"]]));
        assert_eq!(got, oracle);
    }

    #[test]
    fn b_is_d_dual_on_unit_check() {
        // b agrees with the expansion b(w da) = (-1)^{|w|}[w, a] on small cases
        let w = f(&["a0"], &[&["a1"]]);
        let a = f(&["a2"], &[]);
        let wda = form_mul(&w, &universal_d(&a));
        let lhs = hochschild_b(&wda);
        let rhs = form_mul(&w, &a).sub(&form_mul(&a, &w)).neg();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn connes_b_examples() {
        assert_eq!(connes_b(&f(&["a0"], &[])), f(&[], &[&["a0"]]));
        let got = connes_b(&f(&["a0"], &[&["a1"]]));
        assert_eq!(got, f(&[], &[&["a0"], &["a1"]]).sub(&f(&[], &[&["a1"], &["a0"]])));
        assert!(connes_b(&got).is_zero());
        assert!(connes_b(&f(&[], &[&["a1"]])).is_zero());
        assert_eq!(connes_b(&f(&["a0"], &[])).to_string(), "d a0");
    }

    #[test]
    fn identities_exhaustive_small() {
        let alphabet = [Symbol::new("a"), Symbol::new("b"), Symbol::new("c")];
        for k in 0..=3 {
            for w in single_letter_basis(&alphabet, k) {
                let x = Form::basis(w);
                assert!(hochschild_b(&hochschild_b(&x)).is_zero());
                assert!(connes_b(&connes_b(&x)).is_zero());
                assert!(hochschild_b(&connes_b(&x)).add(&connes_b(&hochschild_b(&x))).is_zero());
            }
        }
    }

    #[test]
    fn natural_quotient_examples() {
        let s = f(&[], &[&["a1"], &["a2"]]).add(&f(&[], &[&["a2"], &["a1"]]));
        assert!(natural_quotient(&s).is_zero());
        // degree 0 single word: minimal rotation oracle
        let w = ["c", "a", "b"];
        let rotations: Vec<Vec<&str>> = (0..3).map(|r| (0..3).map(|i| w[(i + r) % 3]).collect()).collect();
        let min = rotations.iter().min().unwrap().clone();
        let q = natural_quotient(&f(&w, &[]));
        assert_eq!(q, natural_quotient(&f(&min, &[])));
        assert_eq!(q.terms().len(), 1);
        let (rep, _) = q.terms().iter().next().unwrap();
        assert_eq!(rep.0.iter().map(|l| l.sym.as_str()).collect::<Vec<_>>(), min);
        // da da = (1/2)[da, da] is a commutator
        assert!(natural_quotient(&f(&[], &[&["a"], &["a"]])).is_zero());
    }

    #[test]
    fn karoubi_examples() {
        let a0 = f(&["a0"], &[]);
        assert_eq!(karoubi_d(&natural_quotient(&a0)), natural_quotient(&universal_d(&a0)));
        let x = f(&["a0"], &[&["a1"]]);
        assert_eq!(karoubi_d(&natural_quotient(&x)), natural_quotient(&f(&[], &[&["a0"], &["a1"]])));
        assert!(karoubi_d(&karoubi_d(&natural_quotient(&f(&["a0", "a1"], &[&["a2"]])))).is_zero());
    }

    #[test]
    fn representative_round_trip() {
        let x = f(&["a0"], &[&["a1", "a2"], &["b"]]);
        let q = natural_quotient(&x);
        assert_eq!(natural_quotient(&q.representative()), q);
    }

    fn arb_aword() -> impl Strategy<Value = AWord> {
        proptest::collection::vec(prop_oneof![Just("a"), Just("b"), Just("c")], 1..3)
            .prop_map(|v| v.iter().map(|s| Symbol::new(s)).collect())
    }

    fn arb_form_word() -> impl Strategy<Value = FormWord> {
        (
            prop_oneof![Just(vec![]), arb_aword()],
            proptest::collection::vec(arb_aword(), 0..3),
        )
            .prop_map(|(a0, tail)| FormWord::new(a0, tail))
    }

    fn arb_form() -> impl Strategy<Value = Form> {
        proptest::collection::vec((arb_form_word(), -2i64..=2), 1..3)
            .prop_map(|v| v.into_iter().map(|(w, c)| (w, Scalar::from_int(c))).collect())
    }

    proptest! {
        #[test]
        fn mul_associative(x in arb_form(), y in arb_form(), z in arb_form()) {
            prop_assert_eq!(form_mul(&form_mul(&x, &y), &z), form_mul(&x, &form_mul(&y, &z)));
        }

        #[test]
        fn d_is_graded_derivation(x in arb_form_word(), y in arb_form()) {
            let xf = Form::basis(x.clone());
            let lhs = universal_d(&form_mul(&xf, &y));
            let sign = Scalar::from_int(if x.degree() % 2 == 1 { -1 } else { 1 });
            let rhs = form_mul(&universal_d(&xf), &y).add(&form_mul(&xf, &universal_d(&y)).scale(&sign));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn no_unit_in_tail(x in arb_form(), y in arb_form()) {
            prop_assert!(form_mul(&x, &y).iter().all(|(w, _)| w.tail.iter().all(|a| !a.is_empty())));
        }

        #[test]
        fn quotient_kills_commutators(x in arb_form_word(), y in arb_form_word()) {
            let c = form_commutator(&Form::basis(x), &Form::basis(y));
            prop_assert!(natural_quotient(&c).is_zero());
            prop_assert!(natural_quotient(&universal_d(&c)).is_zero());
        }

        #[test]
        fn quotient_idempotent(x in arb_form()) {
            let q = natural_quotient(&x);
            prop_assert_eq!(natural_quotient(&q.representative()), q.clone());
            prop_assert!(karoubi_d(&karoubi_d(&q)).is_zero());
            prop_assert_eq!(karoubi_d(&q), natural_quotient(&universal_d(&x)));
        }
    }
}
