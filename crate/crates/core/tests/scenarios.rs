use std::sync::Arc;

use algcochain::scenarios::{bott_pairing, bott_psi, jlo_corpus, jlo_verify, mq_supertrace, todd_det_series, ThomScenario};
use algcochain::Scalar;

/// Top coefficient of `tr_s(exp(-sqrt(t) dx_mu g_mu))` by direct bitmask
/// expansion. Forms and Clifford generators are odd, `g_mu^2 = 1`,
/// products are normal ordered form part first, and the top Clifford
/// word has supertrace `(2i)^n`.
fn bott_oracle(n: usize) -> Scalar {
    let dim = 2 * n;
    // (form mask, clifford mask) -> integer coefficient
    let mut acc: std::collections::BTreeMap<(u32, u32), i64> = [((0, 0), 1)].into();
    for _ in 0..dim {
        let mut next = std::collections::BTreeMap::new();
        for (&(f, g), &c) in &acc {
            for mu in 0..dim {
                if f & (1 << mu) != 0 {
                    continue;
                }
                // (f g) (dx_mu g_mu): move dx_mu past g, then into f, then g_mu into g.
                let mut sign = if g.count_ones() % 2 == 1 { -1 } else { 1 };
                if (f >> (mu + 1)).count_ones() % 2 == 1 {
                    sign = -sign;
                }
                // g_mu enters from the right: it passes the generators of g above mu.
                let above = (g >> (mu + 1)).count_ones();
                if above % 2 == 1 {
                    sign = -sign;
                }
                *next.entry((f | 1 << mu, g ^ 1 << mu)).or_insert(0) += sign * c;
            }
        }
        acc = next;
    }
    let full = (1u32 << dim) - 1;
    let count = acc.get(&(full, full)).copied().unwrap_or(0);
    let factorial: i64 = (1..=dim as i64).product();
    // exp(-X) has top term X^{2n}/(2n)!, the sign (-1)^{2n} is 1
    let two_i = Scalar::from_int(2) * Scalar::i();
    Scalar::rat(count, factorial) * Scalar::sym("t").pow(n as u32) * two_i.pow(n as u32)
}

#[test]
fn bott_coefficient_matches_bitmask_oracle() {
    for n in 1..=3 {
        let (_, _, r) = bott_psi(n);
        assert_eq!(r.coefficient, bott_oracle(n), "n = {}", n);
        assert!(r.lower_degrees_vanish);
    }
}

#[test]
fn bott_pairing_has_unit_modulus() {
    for n in 1..=2 {
        let (p, _) = bott_pairing(n);
        assert!(p == Scalar::one() || p == -Scalar::one(), "n = {}: {}", n, p);
    }
}

#[test]
fn jlo_corpus_closes_at_depth_four() {
    for mut spec in jlo_corpus() {
        spec.depth = 4;
        let model = Arc::new(spec.build().unwrap());
        let r = jlo_verify(&model).unwrap();
        assert!(r.passed(), "{}", spec.name);
        assert!(r.phi_consistent && r.differentiation_formula, "{}", spec.name);
    }
}

#[test]
fn thom_flat_normalizations() {
    for m in 1..=2 {
        let (_, _, r) = mq_supertrace(&ThomScenario::flat(m)).unwrap();
        assert_eq!(r.normalization, Some(Scalar::one()), "m = {}", m);
    }
}

#[test]
fn todd_series_leading_terms() {
    // det(-(1 + W/2 + W^2/6)) for m = 1
    let s = todd_det_series(1, 2).to_string();
    assert_eq!(s, "-1 + -1/2 W11 + -1/6 W11 W11");
}
