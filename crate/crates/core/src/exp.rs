//! The max-plus matrix exponential `e^(A) = I ⊕ ⊕_{k≥1} (−k!) ⊗ A^(k)`.
//!
//! [`mat_exp`] returns the exact value of the whole series. Terms are
//! accumulated until no later term can raise any entry: once every entry
//! reachable by a walk is finite (`k ≥ n`) and `k ≥ O(A)`, entry bounds
//! `k·max(A) − k!` are non-increasing in `k`, so the sum is final as soon as
//! that bound falls to the smallest finite accumulated entry.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::Result;
use crate::graph::{self, max_cycle_mean};
use crate::matrix::TropMatrix;
use crate::scalar::{scalar_exp, trop_factorial, TropScalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpResult {
    pub matrix: TropMatrix,
    /// Last `k` whose term raised some entry (`0` if only `I` contributes).
    pub terms_used: u64,
    /// `O(A)`.
    pub order_bound: u64,
}

fn neg_factorial(k: u64) -> TropScalar {
    trop_factorial(k).inverse().expect("finite factorial")
}

/// `I ⊕ ⊕_{k=1..terms} (−k!) ⊗ A^(k)`.
pub fn exp_partial_sum(a: &TropMatrix, terms: u64) -> Result<TropMatrix> {
    let n = a.require_square("exp_partial_sum")?;
    let mut acc = TropMatrix::identity(n)?;
    let mut power = TropMatrix::identity(n)?;
    for k in 1..=terms {
        power = power.otimes(a)?;
        acc = acc.oplus(&power.scale(&neg_factorial(k)))?;
    }
    Ok(acc)
}

fn min_finite(m: &TropMatrix) -> Option<&BigRational> {
    m.entries().iter().filter_map(TropScalar::finite).min()
}

pub fn mat_exp(a: &TropMatrix) -> Result<ExpResult> {
    let n = a.require_square("mat_exp")?;
    let order_bound = a.order_bound();
    let mut acc = TropMatrix::identity(n)?;
    let Some(top) = a.max_entry().finite().cloned() else {
        return Ok(ExpResult {
            matrix: acc,
            terms_used: 0,
            order_bound,
        });
    };
    let settle = order_bound.max(n as u64);
    let mut power = TropMatrix::identity(n)?;
    let mut terms_used = 0;
    let mut k = 0u64;
    loop {
        k += 1;
        power = power.otimes(a)?;
        if power.entries().iter().all(TropScalar::is_eps) {
            break;
        }
        let term = power.scale(&neg_factorial(k));
        let next = acc.oplus(&term)?;
        if next != acc {
            acc = next;
            terms_used = k;
        }
        if k >= settle {
            let kk = BigRational::from_integer(BigInt::from(k + 1));
            let fact = trop_factorial(k + 1);
            let bound = &kk * &top - fact.finite().unwrap();
            if min_finite(&acc).is_some_and(|lo| bound <= *lo) {
                break;
            }
        }
    }
    Ok(ExpResult {
        matrix: acc,
        terms_used,
        order_bound,
    })
}

/// `(μ(e^(A)), e^(μ(A)))` for irreducible `A`; the two agree.
pub fn exp_eigenvalue_check(a: &TropMatrix) -> Result<(TropScalar, TropScalar)> {
    graph::require_irreducible(a, "exp_eigenvalue_check")?;
    let lhs = max_cycle_mean(&mat_exp(a)?.matrix)?;
    let rhs = scalar_exp(&max_cycle_mean(a)?);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::graph::frobenius_normal_form;

    const E: Option<i64> = None;

    fn m(rows: &[&[i64]]) -> TropMatrix {
        TropMatrix::from_ints(rows).unwrap()
    }

    #[test]
    fn example1_negative_matrix() {
        let a = m(&[&[-2, -4, -1], &[-3, -8, -4], &[-1, -5, -6]]);
        let r = mat_exp(&a).unwrap();
        assert_eq!(r.matrix, m(&[&[0, -5, -2], &[-4, 0, -5], &[-2, -6, 0]]));
        assert_eq!(r.order_bound, 2);
        assert!(r.terms_used <= r.order_bound);
    }

    #[test]
    fn example2_four_by_four() {
        let b = m(&[&[3, 1, 2, 4], &[2, 3, 1, 1], &[4, 2, 2, 1], &[3, 2, 1, 2]]);
        let r = mat_exp(&b).unwrap();
        assert_eq!(r.matrix, m(&[&[4, 3, 3, 5], &[3, 3, 1, 3], &[5, 4, 3, 5], &[4, 3, 2, 4]]));
    }

    #[test]
    fn example3_exponential() {
        let a = m(&[&[4, 3, 2], &[5, 2, 6], &[3, 4, 2]]);
        let r = mat_exp(&a).unwrap();
        assert_eq!(r.matrix, m(&[&[8, 8, 9], &[10, 10, 11], &[9, 9, 10]]));
        assert_eq!(r.order_bound, 6);
        assert!(r.terms_used <= 6);
        assert_eq!(exp_partial_sum(&a, 6).unwrap(), r.matrix);
    }

    #[test]
    fn all_eps_exponential_is_identity() {
        let r = mat_exp(&TropMatrix::eps(3, 3).unwrap()).unwrap();
        assert_eq!(r.matrix, TropMatrix::identity(3).unwrap());
        assert_eq!(r.terms_used, 0);
    }

    #[test]
    fn sparse_cycle_needs_terms_past_order_bound() {
        // A 4-cycle of zero weights: entry (1,4) first appears at k = 3 > O(A) = 2.
        let a = TropMatrix::from_opt_ints(&[
            [E, Some(0), E, E],
            [E, E, Some(0), E],
            [E, E, E, Some(0)],
            [Some(0), E, E, E],
        ])
        .unwrap();
        let r = mat_exp(&a).unwrap();
        assert_eq!(r.order_bound, 2);
        assert_eq!(r.matrix.get(0, 3), &TropScalar::int(-6));
        assert_eq!(r.terms_used, 3);
        assert_eq!(exp_partial_sum(&a, 2).unwrap().get(0, 3), &TropScalar::Eps);
        assert_eq!(exp_partial_sum(&a, 40).unwrap(), r.matrix);
    }

    #[test]
    fn nilpotent_input_stops_early() {
        let a = TropMatrix::from_opt_ints(&[[E, Some(7)], [E, E]]).unwrap();
        let r = mat_exp(&a).unwrap();
        assert_eq!(r.matrix, TropMatrix::from_opt_ints(&[[Some(0), Some(6)], [E, Some(0)]]).unwrap());
        assert_eq!(r.terms_used, 1);
    }

    #[test]
    fn eigenvalue_check_examples() {
        let a = m(&[&[4, 3, 2], &[5, 2, 6], &[3, 4, 2]]);
        assert_eq!(exp_eigenvalue_check(&a).unwrap(), (TropScalar::int(10), TropScalar::int(10)));
        assert_eq!(exp_eigenvalue_check(&m(&[&[0]])).unwrap(), (TropScalar::zero(), TropScalar::zero()));
        let reducible = TropMatrix::from_opt_ints(&[[Some(0), E], [E, Some(0)]]).unwrap();
        assert!(matches!(exp_eigenvalue_check(&reducible), Err(Error::Reducible { .. })));
    }

    #[test]
    fn fnf_blocks_survive_exponential() {
        let a = TropMatrix::from_opt_ints(&[
            [Some(2), E, E],
            [Some(1), Some(3), Some(1)],
            [E, Some(0), Some(-1)],
        ])
        .unwrap();
        let f = frobenius_normal_form(&a).unwrap();
        let e = mat_exp(&f.permuted_matrix).unwrap().matrix;
        let ranges = f.block_ranges();
        for (r, block) in ranges.iter().zip(&f.diagonal_blocks) {
            let idx: Vec<usize> = r.clone().collect();
            assert_eq!(e.principal_submatrix(&idx).unwrap(), mat_exp(block).unwrap().matrix);
        }
        for (bi, ri) in ranges.iter().enumerate() {
            for rj in &ranges[bi + 1..] {
                for i in ri.clone() {
                    for j in rj.clone() {
                        assert!(e.get(i, j).is_eps());
                    }
                }
            }
        }
    }
}
