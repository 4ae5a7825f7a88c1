//! The bilinear composition identity attached to a sign matrix.
//!
//! For `f_c = sum_g M[g][gc] x_g y_{gc}` the identity reads
//! `(sum_g x_g^2) (sum_h y_h^2) = sum_c f_c^2`. Both sides are expanded into
//! integer coefficients on the monomials `x_g x_h y_k y_l` and compared.

use std::collections::BTreeMap;

use crate::signs::SignMatrix;

/// Monomial `x_a x_b y_c y_d` with `a <= b` and `c <= d`.
type Monomial = (usize, usize, usize, usize);

fn monomial(a: usize, b: usize, c: usize, d: usize) -> Monomial {
    (a.min(b), a.max(b), c.min(d), c.max(d))
}

fn add_term(poly: &mut BTreeMap<Monomial, i64>, key: Monomial, coefficient: i64) {
    let entry = poly.entry(key).or_insert(0);
    *entry += coefficient;
    if *entry == 0 {
        poly.remove(&key);
    }
}

/// Expansion of `sum_c f_c^2`.
pub fn sum_of_squared_forms(m: &SignMatrix) -> BTreeMap<Monomial, i64> {
    let n = m.order();
    let mut poly = BTreeMap::new();
    for c in 0..n {
        for g in 0..n {
            for h in 0..n {
                let coefficient = i64::from(m.get(g, g ^ c)) * i64::from(m.get(h, h ^ c));
                add_term(&mut poly, monomial(g, h, g ^ c, h ^ c), coefficient);
            }
        }
    }
    poly
}

/// Expansion of `(sum_g x_g^2)(sum_h y_h^2)`.
pub fn product_of_norms(order: usize) -> BTreeMap<Monomial, i64> {
    let mut poly = BTreeMap::new();
    for g in 0..order {
        for h in 0..order {
            add_term(&mut poly, (g, g, h, h), 1);
        }
    }
    poly
}

pub fn verify_composition_identity(m: &SignMatrix) -> bool {
    sum_of_squared_forms(m) == product_of_norms(m.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signs::examples;

    #[test]
    fn two_squares_identity() {
        // (x0^2 + x1^2)(y0^2 + y1^2) = (x0 y0 + x1 y1)^2 + (x0 y1 - x1 y0)^2
        assert!(verify_composition_identity(&examples::order2()));
    }

    #[test]
    fn examples_compose() {
        assert!(verify_composition_identity(&examples::order4()));
        assert!(verify_composition_identity(&examples::order8()));
    }

    #[test]
    fn one_flip_breaks_it() {
        let m = examples::order4().flipped(1, 2);
        assert!(!verify_composition_identity(&m));
        let residual: Vec<_> = sum_of_squared_forms(&m)
            .into_iter()
            .filter(|(k, _)| k.0 != k.1)
            .collect();
        assert!(!residual.is_empty());
    }

    #[test]
    fn all_ones_fails() {
        let j = SignMatrix::all_ones(crate::signs::Group2::new(1).unwrap());
        assert!(!verify_composition_identity(&j));
    }
}
