//! Clifford algebras `Cl(2n)` with chirality and supertrace, and operators on
//! exterior algebras `ΛE*` realizing the Thom multiplier.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linear::{Basis, LinComb};
use crate::scalars::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliffError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("index {0} out of range for {1} generators")]
    IndexOutOfRange(usize, usize),
}

/// Strictly increasing generator indices, stored as a bit mask (bit `μ-1`
/// for `γ^μ`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CliffordWord(pub u32);

impl CliffordWord {
    pub fn indices(&self) -> Vec<usize> {
        (0..32).filter(|b| self.0 >> b & 1 == 1).map(|b| b + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }
}

impl Basis for CliffordWord {
    fn render(&self) -> Option<String> {
        if self.0 == 0 {
            return None;
        }
        Some(self.indices().iter().map(|i| format!("g{}", i)).collect::<Vec<_>>().join(" "))
    }

    fn render_latex(&self) -> Option<String> {
        if self.0 == 0 {
            return None;
        }
        Some(self.indices().iter().map(|i| format!("\\gamma^{{{}}}", i)).collect())
    }
}

/// Sign of `γ_A γ_B` relative to `γ_{A△B}` when every generator squares to 1.
fn merge_sign(a: u32, b: u32) -> bool {
    // count pairs (i in A, j in B) with i > j
    let mut odd = false;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros();
        rest &= rest - 1;
        let below = b & ((1u32 << i) - 1);
        odd ^= below.count_ones() % 2 == 1;
    }
    odd
}

/// Element of `Cl(2n)`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliffordElement {
    pub n: usize,
    pub terms: LinComb<CliffordWord>,
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.terms)
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.terms)
    }
}

impl CliffordElement {
    pub fn zero(n: usize) -> Self {
        CliffordElement { n, terms: LinComb::zero() }
    }

    pub fn one(n: usize) -> Self {
        CliffordElement { n, terms: LinComb::basis(CliffordWord(0)) }
    }

    pub fn scalar(n: usize, c: Scalar) -> Self {
        CliffordElement { n, terms: LinComb::term(CliffordWord(0), c) }
    }

    /// `γ^μ`, `1 ≤ μ ≤ 2n`.
    pub fn gamma(n: usize, mu: usize) -> Result<Self, CliffError> {
        if mu == 0 || mu > 2 * n {
            return Err(CliffError::IndexOutOfRange(mu, 2 * n));
        }
        Ok(CliffordElement { n, terms: LinComb::basis(CliffordWord(1 << (mu - 1))) })
    }

    /// Product of generators in the given (arbitrary) order.
    pub fn word(n: usize, indices: &[usize]) -> Result<Self, CliffError> {
        let mut acc = Self::one(n);
        for &mu in indices {
            acc = clifford_mul(&acc, &Self::gamma(n, mu)?)?;
        }
        Ok(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self, CliffError> {
        check_dim(self.n, other.n)?;
        Ok(CliffordElement { n: self.n, terms: self.terms.add(&other.terms) })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CliffError> {
        check_dim(self.n, other.n)?;
        Ok(CliffordElement { n: self.n, terms: self.terms.sub(&other.terms) })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        CliffordElement { n: self.n, terms: self.terms.scale(c) }
    }

    /// Parity if homogeneous.
    pub fn parity(&self) -> Option<u8> {
        let mut it = self.terms.iter().map(|(w, _)| (w.len() % 2) as u8);
        let first = it.next().unwrap_or(0);
        it.all(|p| p == first).then_some(first)
    }

    pub fn supercommutator(&self, other: &Self) -> Result<Self, CliffError> {
        let xy = clifford_mul(self, other)?;
        let yx = clifford_mul(other, self)?;
        // split into homogeneous pieces
        let mut out = xy.sub(&yx)?;
        for (wa, ca) in self.terms.iter() {
            for (wb, cb) in other.terms.iter() {
                if wa.len() % 2 == 1 && wb.len() % 2 == 1 {
                    let a = CliffordElement { n: self.n, terms: LinComb::term(*wa, ca.clone()) };
                    let b = CliffordElement { n: self.n, terms: LinComb::term(*wb, cb.clone()) };
                    let ba = clifford_mul(&b, &a)?;
                    out = out.add(&ba.scale(&Scalar::from_int(2)))?;
                }
            }
        }
        Ok(out)
    }
}

fn check_dim(a: usize, b: usize) -> Result<(), CliffError> {
    if a == b {
        Ok(())
    } else {
        Err(CliffError::DimensionMismatch(a, b))
    }
}

pub fn clifford_mul(x: &CliffordElement, y: &CliffordElement) -> Result<CliffordElement, CliffError> {
    check_dim(x.n, y.n)?;
    let mut out = LinComb::zero();
    for (a, ca) in x.terms.iter() {
        for (b, cb) in y.terms.iter() {
            let c = ca * cb;
            let c = if merge_sign(a.0, b.0) { -c } else { c };
            out.add_term(CliffordWord(a.0 ^ b.0), c);
        }
    }
    Ok(CliffordElement { n: x.n, terms: out })
}

/// `Γ = (-i)^n γ^1 … γ^{2n}`.
pub fn chirality(n: usize) -> CliffordElement {
    let top = CliffordWord(((1u64 << (2 * n)) - 1) as u32);
    CliffordElement { n, terms: LinComb::term(top, Scalar::i().pow(n as u32) * Scalar::from_int(-1).pow(n as u32)) }
}

/// Closed form: only the top word contributes, with `tr_s(γ^1…γ^{2n}) = (2i)^n`.
pub fn supertrace(x: &CliffordElement) -> Scalar {
    let top = CliffordWord(((1u64 << (2 * x.n)) - 1) as u32);
    x.terms.coefficient(&top) * (Scalar::from_int(2) * Scalar::i()).pow(x.n as u32)
}

/// Dense square matrix over [`Scalar`].
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarMatrix {
    pub dim: usize,
    pub entries: Vec<Scalar>,
}

impl fmt::Debug for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        write!(f, "{:?}", rows)
    }
}

impl ScalarMatrix {
    pub fn zero(dim: usize) -> Self {
        ScalarMatrix { dim, entries: vec![Scalar::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        ScalarMatrix { dim: self.dim, entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ScalarMatrix { dim: self.dim, entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        ScalarMatrix { dim: self.dim, entries: self.entries.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Scalar {
        (0..self.dim).fold(Scalar::zero(), |acc, i| &acc + self.get(i, i))
    }

    /// Kronecker product `self ⊗ o`.
    pub fn kron(&self, o: &Self) -> Self {
        let (n, m) = (self.dim, o.dim);
        let mut out = Self::zero(n * m);
        for i in 0..n {
            for j in 0..n {
                for k in 0..m {
                    for l in 0..m {
                        out.set(i * m + k, j * m + l, self.get(i, j) * o.get(k, l));
                    }
                }
            }
        }
        out
    }

    fn from_rows(rows: &[&[Scalar]]) -> Self {
        let dim = rows.len();
        ScalarMatrix { dim, entries: rows.iter().flat_map(|r| r.iter().cloned()).collect() }
    }
}

/// Explicit `2^n × 2^n` representation:
/// `γ^{2k-1} = σ_z^{⊗(k-1)} ⊗ σ_x ⊗ 1`, `γ^{2k} = σ_z^{⊗(k-1)} ⊗ σ_y ⊗ 1`.
pub fn gamma_matrix(n: usize, mu: usize) -> ScalarMatrix {
    let (o, l, i) = (Scalar::zero(), Scalar::one(), Scalar::i());
    let sx = ScalarMatrix::from_rows(&[&[o.clone(), l.clone()], &[l.clone(), o.clone()]]);
    let sy = ScalarMatrix::from_rows(&[&[o.clone(), -&i], &[i.clone(), o.clone()]]);
    let sz = ScalarMatrix::from_rows(&[&[l.clone(), o.clone()], &[o.clone(), -&l]]);
    let k = (mu - 1) / 2;
    let mut m = ScalarMatrix::identity(1);
    for slot in 0..n {
        let f = if slot < k {
            sz.clone()
        } else if slot == k {
            if mu % 2 == 1 { sx.clone() } else { sy.clone() }
        } else {
            ScalarMatrix::identity(2)
        };
        m = m.kron(&f);
    }
    m
}

pub fn clifford_matrix(x: &CliffordElement) -> ScalarMatrix {
    let dim = 1usize << x.n;
    let mut out = ScalarMatrix::zero(dim);
    for (w, c) in x.terms.iter() {
        let mut m = ScalarMatrix::identity(dim);
        for mu in w.indices() {
            m = m.mul(&gamma_matrix(x.n, mu));
        }
        out = out.add(&m.scale(c));
    }
    out
}

/// `tr(Γ x)` computed in the matrix representation.
pub fn supertrace_matrix(x: &CliffordElement) -> Scalar {
    clifford_matrix(&chirality(x.n)).mul(&clifford_matrix(x)).trace()
}

/// Linear operator on `ΛE*`, `dim E = m`; basis index `S` is the bit mask of
/// the subset.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExteriorOperator {
    pub m: usize,
    pub matrix: ScalarMatrix,
    pub parity: Option<u8>,
}

impl fmt::Debug for ExteriorOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExteriorOperator(m={}, parity={:?}, {:?})", self.m, self.parity, self.matrix)
    }
}

fn mask_parity(s: usize) -> u8 {
    (s.count_ones() % 2) as u8
}

impl ExteriorOperator {
    pub fn from_matrix(m: usize, matrix: ScalarMatrix) -> Self {
        let mut parity = None;
        let mut mixed = false;
        for s in 0..1usize << m {
            for r in 0..1usize << m {
                if !matrix.get(r, s).is_zero() {
                    let p = mask_parity(r) ^ mask_parity(s);
                    match parity {
                        None => parity = Some(p),
                        Some(q) if q != p => mixed = true,
                        _ => {}
                    }
                }
            }
        }
        ExteriorOperator { m, matrix, parity: if mixed { None } else { Some(parity.unwrap_or(0)) } }
    }

    pub fn identity(m: usize) -> Self {
        Self::from_matrix(m, ScalarMatrix::identity(1 << m))
    }

    pub fn zero(m: usize) -> Self {
        Self::from_matrix(m, ScalarMatrix::zero(1 << m))
    }

    /// Projector onto the basis vector of subset `s`.
    pub fn projector(m: usize, s: usize) -> Self {
        let mut mat = ScalarMatrix::zero(1 << m);
        mat.set(s, s, Scalar::one());
        Self::from_matrix(m, mat)
    }

    pub fn mul(&self, o: &Self) -> Result<Self, CliffError> {
        check_dim(self.m, o.m)?;
        Ok(Self::from_matrix(self.m, self.matrix.mul(&o.matrix)))
    }

    pub fn add(&self, o: &Self) -> Result<Self, CliffError> {
        check_dim(self.m, o.m)?;
        Ok(Self::from_matrix(self.m, self.matrix.add(&o.matrix)))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, CliffError> {
        check_dim(self.m, o.m)?;
        Ok(Self::from_matrix(self.m, self.matrix.sub(&o.matrix)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_matrix(self.m, self.matrix.scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn supercommutator(&self, o: &Self) -> Result<Self, CliffError> {
        let xy = self.mul(o)?;
        let yx = o.mul(self)?;
        if self.parity == Some(1) && o.parity == Some(1) {
            xy.add(&yx)
        } else {
            xy.sub(&yx)
        }
    }
}

/// Basis of `ΛE*` wedge `e_j` on the left: `(sign, new mask)` or `None`.
fn wedge_basis(j: usize, s: usize) -> Option<(bool, usize)> {
    if s >> j & 1 == 1 {
        return None;
    }
    let below = (s & ((1 << j) - 1)).count_ones();
    Some((below % 2 == 1, s | 1 << j))
}

fn contract_basis(j: usize, s: usize) -> Option<(bool, usize)> {
    if s >> j & 1 == 0 {
        return None;
    }
    let below = (s & ((1 << j) - 1)).count_ones();
    Some((below % 2 == 1, s & !(1 << j)))
}

fn elementary_op(m: usize, v: &[Scalar], f: fn(usize, usize) -> Option<(bool, usize)>) -> Result<ExteriorOperator, CliffError> {
    check_dim(m, v.len())?;
    let mut mat = ScalarMatrix::zero(1 << m);
    for (j, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for s in 0..1usize << m {
            if let Some((neg, r)) = f(j, s) {
                let cur = mat.get(r, s).clone();
                mat.set(r, s, if neg { &cur - c } else { &cur + c });
            }
        }
    }
    Ok(ExteriorOperator { m, matrix: mat, parity: Some(1) })
}

/// `ξ* ∧ ·` for the covector with coefficients `covector`.
pub fn wedge_op(m: usize, covector: &[Scalar]) -> Result<ExteriorOperator, CliffError> {
    elementary_op(m, covector, wedge_basis)
}

/// `ι_v`.
pub fn contract_op(m: usize, vector: &[Scalar]) -> Result<ExteriorOperator, CliffError> {
    elementary_op(m, vector, contract_basis)
}

/// `L(ξ) = ξ*∧ − ι_ξ`, squaring to `−‖ξ‖²` for the symmetric bilinear norm.
pub fn thom_multiplier(m: usize, xi: &[Scalar]) -> Result<ExteriorOperator, CliffError> {
    wedge_op(m, xi)?.sub(&contract_op(m, xi)?)
}

/// The printed form `i(ξ*∧ − ι_ξ)`, which squares to `+‖ξ‖²`.
pub fn thom_multiplier_with_i(m: usize, xi: &[Scalar]) -> Result<ExteriorOperator, CliffError> {
    Ok(thom_multiplier(m, xi)?.scale(&Scalar::i()))
}

/// Fiber Clifford generators of the Thom model on the `2m` real directions
/// `ξ_j = u_j + i v_j`: `c_j = e_j∧ − ι_j`, `c'_j = −i(e_j∧ + ι_j)`, so that
/// `L(ξ) = Σ u_j c_j + v_j c'_j`. Each squares to `−1`.
pub fn thom_generators(m: usize) -> Vec<ExteriorOperator> {
    let mut out = Vec::with_capacity(2 * m);
    for j in 0..m {
        let mut e = vec![Scalar::zero(); m];
        e[j] = Scalar::one();
        let w = wedge_op(m, &e).expect("dimension");
        let c = contract_op(m, &e).expect("dimension");
        out.push(w.sub(&c).expect("dimension"));
        out.push(w.add(&c).expect("dimension").scale(&-Scalar::i()));
    }
    out
}

/// Number operator `e_j∧ι_j` of direction `j`.
pub fn number_op(m: usize, j: usize) -> ExteriorOperator {
    let mut e = vec![Scalar::zero(); m];
    e[j] = Scalar::one();
    wedge_op(m, &e).expect("dimension").mul(&contract_op(m, &e).expect("dimension")).expect("dimension")
}

/// `Σ_S (−1)^{|S|} T_{SS}`.
pub fn supertrace_ext(t: &ExteriorOperator) -> Scalar {
    let mut acc = Scalar::zero();
    for s in 0..1usize << t.m {
        let d = t.matrix.get(s, s);
        if mask_parity(s) == 1 {
            acc -= d;
        } else {
            acc += d;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(n: usize, mu: usize) -> CliffordElement {
        CliffordElement::gamma(n, mu).unwrap()
    }

    #[test]
    fn clifford_examples() {
        assert_eq!(clifford_mul(&g(1, 1), &g(1, 1)).unwrap(), CliffordElement::one(1));
        let g12 = clifford_mul(&g(1, 1), &g(1, 2)).unwrap();
        assert_eq!(clifford_mul(&g(1, 2), &g(1, 1)).unwrap(), g12.scale(&Scalar::from_int(-1)));
        assert_eq!(clifford_mul(&g12, &g12).unwrap(), CliffordElement::scalar(1, Scalar::from_int(-1)));
        assert!(matches!(clifford_mul(&g(1, 1), &g(2, 1)), Err(CliffError::DimensionMismatch(1, 2))));
    }

    #[test]
    fn chirality_properties() {
        let c1 = chirality(1);
        assert_eq!(c1, CliffordElement::word(1, &[1, 2]).unwrap().scale(&-Scalar::i()));
        let c2 = chirality(2);
        assert_eq!(c2, CliffordElement::word(2, &[1, 2, 3, 4]).unwrap().scale(&Scalar::from_int(-1)));
        for n in 1..=3 {
            let c = chirality(n);
            assert_eq!(clifford_mul(&c, &c).unwrap(), CliffordElement::one(n));
            for mu in 1..=2 * n {
                let anti = clifford_mul(&c, &g(n, mu)).unwrap().add(&clifford_mul(&g(n, mu), &c).unwrap()).unwrap();
                assert!(anti.is_zero());
            }
        }
    }

    #[test]
    fn supertrace_examples() {
        assert_eq!(supertrace(&CliffordElement::word(1, &[1, 2]).unwrap()), Scalar::from_int(2) * Scalar::i());
        assert!(supertrace(&g(1, 1)).is_zero());
        assert!(supertrace(&CliffordElement::one(1)).is_zero());
    }

    #[test]
    fn supertrace_matches_matrix_model() {
        for n in 1..=2 {
            let dim = 1 << n;
            for mu in 1..=2 * n {
                let m = gamma_matrix(n, mu);
                assert_eq!(m.mul(&m), ScalarMatrix::identity(dim));
            }
            for mask in 0..(1u32 << (2 * n)) {
                let x = CliffordElement { n, terms: LinComb::basis(CliffordWord(mask)) };
                assert_eq!(supertrace(&x), supertrace_matrix(&x), "n={} mask={:b}", n, mask);
            }
        }
    }

    #[test]
    fn exterior_examples() {
        let e = [Scalar::one()];
        let w = wedge_op(1, &e).unwrap();
        let c = contract_op(1, &e).unwrap();
        assert_eq!(w.matrix.get(1, 0), &Scalar::one());
        assert!(w.matrix.get(0, 1).is_zero());
        assert_eq!(c.matrix.get(0, 1), &Scalar::one());
        let anti = w.mul(&c).unwrap().add(&c.mul(&w).unwrap()).unwrap();
        assert_eq!(anti, ExteriorOperator::identity(1));
        assert!(supertrace_ext(&ExteriorOperator::identity(1)).is_zero());
        assert_eq!(supertrace_ext(&ExteriorOperator::projector(1, 0)), Scalar::one());
        assert_eq!(supertrace_ext(&w.mul(&c).unwrap()), Scalar::from_int(-1));
    }

    #[test]
    fn thom_multiplier_squares() {
        let l0 = thom_multiplier(2, &[Scalar::zero(), Scalar::zero()]).unwrap();
        assert!(l0.is_zero());
        let l1 = thom_multiplier(1, &[Scalar::one()]).unwrap();
        assert_eq!(l1.mul(&l1).unwrap(), ExteriorOperator::identity(1).scale(&Scalar::from_int(-1)));
        let l2 = thom_multiplier(2, &[Scalar::one(), Scalar::one()]).unwrap();
        assert_eq!(l2.parity, Some(1));
        assert_eq!(l2.mul(&l2).unwrap(), ExteriorOperator::identity(2).scale(&Scalar::from_int(-2)));
        let li = thom_multiplier_with_i(1, &[Scalar::one()]).unwrap();
        assert_eq!(li.mul(&li).unwrap(), ExteriorOperator::identity(1));
    }

    #[test]
    fn thom_generators_form_clifford_system() {
        for m in 1..=2 {
            let gens = thom_generators(m);
            for (a, x) in gens.iter().enumerate() {
                for (b, y) in gens.iter().enumerate() {
                    let anti = x.mul(y).unwrap().add(&y.mul(x).unwrap()).unwrap();
                    let expect = if a == b {
                        ExteriorOperator::identity(m).scale(&Scalar::from_int(-2))
                    } else {
                        ExteriorOperator::zero(m)
                    };
                    assert_eq!(anti, expect);
                }
            }
            let top = gens.iter().skip(1).fold(gens[0].clone(), |acc, x| acc.mul(x).unwrap());
            assert_eq!(supertrace_ext(&top), (Scalar::from_int(2) * Scalar::i()).pow(m as u32));
        }
    }

    #[test]
    fn module_dimensions() {
        assert_eq!(clifford_matrix(&CliffordElement::one(3)).dim, 8);
        assert_eq!(ExteriorOperator::identity(3).matrix.dim, 8);
    }

    fn small_int() -> impl Strategy<Value = i64> {
        -3i64..=3
    }

    proptest! {
        #[test]
        fn clifford_supertrace_kills_supercommutators(
            n in 1usize..=3,
            xs in proptest::collection::vec((0u32..64, small_int()), 1..5),
            ys in proptest::collection::vec((0u32..64, small_int()), 1..5),
        ) {
            let mask = ((1u64 << (2 * n)) - 1) as u32;
            let mk = |v: &[(u32, i64)]| CliffordElement {
                n,
                terms: v.iter().map(|(w, c)| (CliffordWord(w & mask), Scalar::from_int(*c))).collect(),
            };
            let (x, y) = (mk(&xs), mk(&ys));
            prop_assert!(supertrace(&x.supercommutator(&y).unwrap()).is_zero());
            let gamma = chirality(n);
            let conj = clifford_mul(&clifford_mul(&gamma, &x).unwrap(), &gamma).unwrap();
            if let Some(p) = x.parity() {
                let expect = if p == 0 { supertrace(&x) } else { -supertrace(&x) };
                prop_assert_eq!(supertrace(&conj), expect);
            }
        }

        #[test]
        fn exterior_supertrace_kills_supercommutators(
            m in 1usize..=3,
            a in proptest::collection::vec(small_int(), 3),
            b in proptest::collection::vec(small_int(), 3),
            c in proptest::collection::vec(small_int(), 3),
        ) {
            let v = |k: &[i64]| k[..m].iter().map(|x| Scalar::from_int(*x)).collect::<Vec<_>>();
            let x = wedge_op(m, &v(&a)).unwrap();
            let y = contract_op(m, &v(&b)).unwrap();
            let z = number_op(m, 0).add(&wedge_op(m, &v(&c)).unwrap().mul(&contract_op(m, &v(&a)).unwrap()).unwrap()).unwrap();
            prop_assert!(supertrace_ext(&x.supercommutator(&y).unwrap()).is_zero());
            prop_assert!(supertrace_ext(&z.supercommutator(&x).unwrap()).is_zero());
            prop_assert!(supertrace_ext(&z.supercommutator(&z.mul(&y).unwrap().mul(&x).unwrap()).unwrap()).is_zero());
        }
    }
}
