//! Differential graded target algebras for cochains: graded-commutative
//! coefficient algebras with a derivation, and supermatrices over them.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::ncalg::{Algebra, AlgebraBuilder, GenId, GradedElement};
use crate::scalars::Scalar;

/// Interface cochains need from their value algebra.
pub trait DgAlgebra: Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, a: &Self::Elem, s: &Scalar) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// The differential; the zero map when the algebra carries none.
    fn d(&self, a: &Self::Elem) -> Self::Elem;
    /// Parity of a homogeneous element (zero is even); `None` if mixed.
    fn parity(&self, a: &Self::Elem) -> Option<u8>;

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.scale(a, &Scalar::from_int(-1))
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// `ab - (-1)^{|a||b|} ba` for homogeneous elements.
    fn supercommutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let odd = self.parity(a).unwrap_or(0) * self.parity(b).unwrap_or(0) == 1;
        let ba = self.mul(b, a);
        let ab = self.mul(a, b);
        if odd {
            self.add(&ab, &ba)
        } else {
            self.sub(&ab, &ba)
        }
    }
}

/// A graded-commutative (or any presented) algebra with an optional odd
/// derivation given on generators.
#[derive(Clone)]
pub struct CoeffAlgebra {
    alg: Arc<Algebra>,
    d_rule: Option<Arc<HashMap<GenId, GradedElement>>>,
}

impl fmt::Debug for CoeffAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoeffAlgebra").field("alg", &self.alg).finish()
    }
}

impl CoeffAlgebra {
    pub fn new(alg: Arc<Algebra>) -> Self {
        CoeffAlgebra { alg, d_rule: None }
    }

    /// Plain scalars: the algebra with no generators.
    pub fn scalars() -> Self {
        static SCALARS: std::sync::OnceLock<Arc<Algebra>> = std::sync::OnceLock::new();
        Self::new(SCALARS.get_or_init(|| AlgebraBuilder::new().build()).clone())
    }

    /// Attach `d`; generators absent from `rule` are closed.
    pub fn with_differential(alg: Arc<Algebra>, rule: HashMap<GenId, GradedElement>) -> Self {
        CoeffAlgebra {
            alg,
            d_rule: Some(Arc::new(rule)),
        }
    }

    /// de Rham model: even coordinates `x_i` with odd partners `dx_i`, plus
    /// extra closed generators `(name, zdegree)`; all in one graded-commutative
    /// sector, with an optional nilpotency cap on total weight.
    pub fn de_rham(coords: &[&str], extra: &[(&str, i32, u32)], cap: Option<u32>) -> Self {
        let mut b = AlgebraBuilder::new();
        let mut pairs = Vec::new();
        for c in coords {
            let x = b.generator(c, 0, 1).expect("fresh name");
            let dx = b.generator(&format!("d{}", c), 1, 1).expect("fresh name");
            pairs.push((x, dx));
        }
        for (n, z, w) in extra {
            b.weighted_generator(n, *z, 1, *w).expect("fresh name");
        }
        b.graded_commutative(1);
        if let Some(c) = cap {
            b.nil_cap(c);
        }
        let alg = b.build();
        let rule = pairs
            .into_iter()
            .map(|(x, dx)| (x, GradedElement::gen(&alg, dx)))
            .collect();
        Self::with_differential(alg, rule)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn has_differential(&self) -> bool {
        self.d_rule.is_some()
    }

    pub fn el(&self, name: &str) -> GradedElement {
        GradedElement::named(&self.alg, name).expect("generator exists")
    }

    pub fn scalar(&self, s: Scalar) -> GradedElement {
        GradedElement::scalar(&self.alg, s)
    }
}

impl DgAlgebra for CoeffAlgebra {
    type Elem = GradedElement;

    fn zero(&self) -> GradedElement {
        GradedElement::zero(&self.alg)
    }

    fn one(&self) -> GradedElement {
        GradedElement::one(&self.alg)
    }

    fn add(&self, a: &GradedElement, b: &GradedElement) -> GradedElement {
        a.add(b).expect("same coefficient algebra")
    }

    fn mul(&self, a: &GradedElement, b: &GradedElement) -> GradedElement {
        a.super_mul(b).expect("same coefficient algebra")
    }

    fn scale(&self, a: &GradedElement, s: &Scalar) -> GradedElement {
        a.scale(s)
    }

    fn is_zero(&self, a: &GradedElement) -> bool {
        a.is_zero()
    }

    fn d(&self, a: &GradedElement) -> GradedElement {
        match &self.d_rule {
            None => self.zero(),
            Some(rule) => {
                let zero = self.zero();
                a.apply_derivation(&|g| Some(rule.get(&g).cloned().unwrap_or_else(|| zero.clone())), 1)
                    .expect("derivation total")
            }
        }
    }

    fn parity(&self, a: &GradedElement) -> Option<u8> {
        a.parity().ok()
    }
}

/// Element of `End(H) ⊗ C` with `H = C^n` graded by row parities; entry
/// `(i, j)` stands for `E_ij ⊗ x_ij`.
#[derive(Clone, PartialEq)]
pub struct SuperMatrix {
    n: usize,
    entries: Vec<GradedElement>,
}

impl fmt::Debug for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.n {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.entries[i * self.n + j])?;
            }
        }
        f.write_str("]")
    }
}

impl SuperMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &GradedElement {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[GradedElement] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }
}

#[derive(Clone)]
pub enum MatrixDifferential {
    None,
    /// `d = [Q, ·]` for an odd `Q` with `Q² = 0`.
    Inner(SuperMatrix),
    /// `d(E_ij ⊗ c) = (-1)^{p_i+p_j} E_ij ⊗ dc` from the coefficient derivation.
    Coefficients,
}

/// The dg-algebra of `n × n` supermatrices over a coefficient algebra.
#[derive(Clone)]
pub struct MatrixAlgebra {
    coeff: CoeffAlgebra,
    parities: Vec<u8>,
    diff: MatrixDifferential,
}

impl MatrixAlgebra {
    pub fn new(coeff: CoeffAlgebra, parities: Vec<u8>) -> Self {
        MatrixAlgebra {
            coeff,
            parities,
            diff: MatrixDifferential::None,
        }
    }

    pub fn with_differential(mut self, diff: MatrixDifferential) -> Self {
        self.diff = diff;
        self
    }

    pub fn coeff(&self) -> &CoeffAlgebra {
        &self.coeff
    }

    pub fn parities(&self) -> &[u8] {
        &self.parities
    }

    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    pub fn from_entries(&self, entries: Vec<GradedElement>) -> SuperMatrix {
        assert_eq!(entries.len(), self.dim() * self.dim(), "wrong entry count");
        SuperMatrix { n: self.dim(), entries }
    }

    pub fn from_scalars(&self, rows: &[&[Scalar]]) -> SuperMatrix {
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|s| self.coeff.scalar(s.clone())))
            .collect();
        self.from_entries(entries)
    }

    pub fn from_ints(&self, rows: &[&[i64]]) -> SuperMatrix {
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&s| self.coeff.scalar(Scalar::from_int(s))))
            .collect();
        self.from_entries(entries)
    }

    pub fn elementary(&self, i: usize, j: usize, c: GradedElement) -> SuperMatrix {
        let mut m = DgAlgebra::zero(self);
        m.entries[i * self.dim() + j] = c;
        m
    }

    /// `c · 1` with `c` placed on the diagonal; for even `c` this is central.
    pub fn diagonal(&self, c: &GradedElement) -> SuperMatrix {
        let mut m = DgAlgebra::zero(self);
        for i in 0..self.dim() {
            m.entries[i * self.dim() + i] = c.clone();
        }
        m
    }

    pub fn map_entries(&self, m: &SuperMatrix, f: impl Fn(&GradedElement) -> GradedElement) -> SuperMatrix {
        SuperMatrix {
            n: m.n,
            entries: m.entries.iter().map(f).collect(),
        }
    }

    fn entry_parity(&self, i: usize, j: usize) -> u8 {
        (self.parities[i] + self.parities[j]) % 2
    }

    pub fn supertrace(&self, m: &SuperMatrix) -> GradedElement {
        let mut acc = self.coeff.zero();
        for i in 0..self.dim() {
            let e = m.get(i, i);
            acc = if self.parities[i] == 1 { acc.sub(e) } else { acc.add(e) }.expect("same algebra");
        }
        acc
    }

    /// Ordinary trace, which is not a graded trace when odd parts exist.
    pub fn trace(&self, m: &SuperMatrix) -> GradedElement {
        let mut acc = self.coeff.zero();
        for i in 0..self.dim() {
            acc = acc.add(m.get(i, i)).expect("same algebra");
        }
        acc
    }
}

impl DgAlgebra for MatrixAlgebra {
    type Elem = SuperMatrix;

    fn zero(&self) -> SuperMatrix {
        SuperMatrix {
            n: self.dim(),
            entries: vec![self.coeff.zero(); self.dim() * self.dim()],
        }
    }

    fn one(&self) -> SuperMatrix {
        self.diagonal(&self.coeff.one())
    }

    fn add(&self, a: &SuperMatrix, b: &SuperMatrix) -> SuperMatrix {
        SuperMatrix {
            n: a.n,
            entries: a
                .entries
                .iter()
                .zip(&b.entries)
                .map(|(x, y)| x.add(y).expect("same algebra"))
                .collect(),
        }
    }

    fn mul(&self, a: &SuperMatrix, b: &SuperMatrix) -> SuperMatrix {
        let n = self.dim();
        let mut out = DgAlgebra::zero(self);
        for i in 0..n {
            for j in 0..n {
                let x = a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let (xe, xo) = x.split_parity();
                for l in 0..n {
                    let y = b.get(j, l);
                    if y.is_zero() {
                        continue;
                    }
                    let mut term = xe.super_mul(y).expect("same algebra");
                    if !xo.is_zero() {
                        let t = xo.super_mul(y).expect("same algebra");
                        term = if self.entry_parity(j, l) == 1 { term.sub(&t) } else { term.add(&t) }
                            .expect("same algebra");
                    }
                    let idx = i * n + l;
                    out.entries[idx] = out.entries[idx].add(&term).expect("same algebra");
                }
            }
        }
        out
    }

    fn scale(&self, a: &SuperMatrix, s: &Scalar) -> SuperMatrix {
        self.map_entries(a, |e| e.scale(s))
    }

    fn is_zero(&self, a: &SuperMatrix) -> bool {
        a.is_zero()
    }

    fn d(&self, a: &SuperMatrix) -> SuperMatrix {
        match &self.diff {
            MatrixDifferential::None => DgAlgebra::zero(self),
            MatrixDifferential::Inner(q) => self.supercommutator(q, a),
            MatrixDifferential::Coefficients => {
                let n = self.dim();
                let mut out = DgAlgebra::zero(self);
                for i in 0..n {
                    for j in 0..n {
                        let de = self.coeff.d(a.get(i, j));
                        out.entries[i * n + j] = if self.entry_parity(i, j) == 1 { de.neg() } else { de };
                    }
                }
                out
            }
        }
    }

    fn parity(&self, a: &SuperMatrix) -> Option<u8> {
        let mut seen: Option<u8> = None;
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let e = a.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let p = (e.parity().ok()? + self.entry_parity(i, j)) % 2;
                match seen {
                    None => seen = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
        Some(seen.unwrap_or(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_2x2() -> MatrixAlgebra {
        let m = MatrixAlgebra::new(CoeffAlgebra::scalars(), vec![0, 1]);
        let q = m.from_ints(&[&[0, 1], &[0, 0]]);
        m.with_differential(MatrixDifferential::Inner(q))
    }

    #[test]
    fn inner_differential_squares_to_zero() {
        let m = scalar_2x2();
        let x = m.from_ints(&[&[1, 2], &[3, 4]]);
        let (e, o) = (m.from_ints(&[&[1, 0], &[0, 4]]), m.from_ints(&[&[0, 2], &[3, 0]]));
        assert!(m.d(&m.d(&e)).is_zero());
        assert!(m.d(&m.d(&o)).is_zero());
        assert_eq!(m.parity(&x), None);
        assert_eq!(m.parity(&o), Some(1));
    }

    #[test]
    fn supertrace_kills_supercommutators() {
        let m = scalar_2x2();
        let a = m.from_ints(&[&[0, 2], &[5, 0]]);
        let b = m.from_ints(&[&[0, 1], &[7, 0]]);
        assert!(m.supertrace(&m.supercommutator(&a, &b)).is_zero());
        // the ordinary trace fails on the odd anticommutator
        assert!(!m.trace(&m.supercommutator(&a, &b)).is_zero());
    }

    #[test]
    fn coefficient_differential_is_graded_derivation() {
        let c = CoeffAlgebra::de_rham(&["x1", "x2"], &[], None);
        let m = MatrixAlgebra::new(c.clone(), vec![0, 1]).with_differential(MatrixDifferential::Coefficients);
        let x1 = c.el("x1");
        let dx2 = c.el("dx2");
        let a = m.elementary(0, 1, x1.clone());
        let b = m.elementary(1, 1, dx2.super_mul(&x1).unwrap()).clone();
        let b = m.add(&b, &m.elementary(1, 0, x1.super_mul(&x1).unwrap()));
        let pa = m.parity(&a).unwrap();
        let lhs = m.d(&m.mul(&a, &b));
        let mut rhs2 = m.mul(&a, &m.d(&b));
        if pa == 1 {
            rhs2 = m.neg(&rhs2);
        }
        let rhs = m.add(&m.mul(&m.d(&a), &b), &rhs2);
        assert_eq!(lhs, rhs);
        assert!(m.d(&m.d(&b)).is_zero());
        assert_eq!(c.d(&m.supertrace(&b)), m.supertrace(&m.d(&b)));
    }

    #[test]
    fn matrix_product_associative_with_odd_coefficients() {
        let c = CoeffAlgebra::de_rham(&["x"], &[], None);
        let m = MatrixAlgebra::new(c.clone(), vec![0, 1]);
        let dx = c.el("dx");
        let x = c.el("x");
        let a = m.add(&m.elementary(0, 1, dx.clone()), &m.elementary(1, 1, x.clone()));
        let b = m.add(&m.elementary(1, 0, x.clone()), &m.elementary(0, 0, dx.clone()));
        let cc = m.elementary(0, 1, c.one());
        assert_eq!(m.mul(&m.mul(&a, &b), &cc), m.mul(&a, &m.mul(&b, &cc)));
    }
}
