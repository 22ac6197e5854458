//! Metric matrix, Kleene star and eigenvectors from critical columns.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{self, critical_graph, max_cycle_mean};
use crate::matrix::{is_eps_vector, vec_scale, TropMatrix};
use crate::scalar::TropScalar;

/// Floyd–Warshall closure. Caller guarantees `μ(A) ≤ 0`, so every pivot's
/// diagonal star is `0` and the plain relaxation is exact.
pub(crate) fn closure_nonpositive(a: &TropMatrix, with_identity: bool) -> Result<TropMatrix> {
    let n = a.require_square("closure")?;
    let mut g = a.clone();
    for k in 0..n {
        let pivot_row = g.row(k).to_vec();
        for i in 0..n {
            let gik = g.get(i, k).clone();
            if gik.is_eps() {
                continue;
            }
            for (j, gkj) in pivot_row.iter().enumerate() {
                let cand = gik.otimes(gkj);
                if &cand > g.get(i, j) {
                    g.set(i, j, cand);
                }
            }
        }
    }
    if with_identity {
        g = g.oplus(&TropMatrix::identity(n)?)?;
    }
    Ok(g)
}

fn require_convergent(a: &TropMatrix) -> Result<()> {
    let mu = max_cycle_mean(a)?;
    if mu > TropScalar::zero() {
        return Err(Error::Divergent { mu });
    }
    Ok(())
}

/// `Γ(A) = A ⊕ A^(2) ⊕ …`, heaviest-walk weights over all lengths ≥ 1.
pub fn metric_matrix(a: &TropMatrix) -> Result<TropMatrix> {
    a.require_square("metric_matrix")?;
    require_convergent(a)?;
    closure_nonpositive(a, false)
}

/// `Δ(A) = I ⊕ Γ(A)`.
pub fn kleene_star(a: &TropMatrix) -> Result<TropMatrix> {
    a.require_square("kleene_star")?;
    require_convergent(a)?;
    closure_nonpositive(a, true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenBasis {
    pub eigenvalue: TropScalar,
    /// `(critical node, column of Γ((−λ) ⊗ A))`, one per class of
    /// proportional columns, keyed by its smallest node.
    pub vectors: Vec<(usize, Vec<TropScalar>)>,
}

/// `w = c ⊗ v` for some finite `c`.
pub fn proportional(v: &[TropScalar], w: &[TropScalar]) -> bool {
    if v.len() != w.len() {
        return false;
    }
    let mut shift = None;
    for (a, b) in v.iter().zip(w) {
        match (a.finite(), b.finite()) {
            (None, None) => {}
            (Some(a), Some(b)) => {
                let d = b - a;
                match &shift {
                    None => shift = Some(d),
                    Some(s) if *s == d => {}
                    Some(_) => return false,
                }
            }
            _ => return false,
        }
    }
    shift.is_some()
}

/// Eigenvectors of an irreducible matrix: the critical columns of
/// `Γ((−λ) ⊗ A)` with `λ = μ(A)`.
pub fn eigenvectors(a: &TropMatrix) -> Result<EigenBasis> {
    graph::require_irreducible(a, "eigenvectors")?;
    let spectrum = critical_graph(a)?;
    let lambda = spectrum.lambda.clone();
    let normalized = a.scale(&lambda.inverse().expect("finite lambda"));
    let gamma = closure_nonpositive(&normalized, false)?;
    let mut vectors: Vec<(usize, Vec<TropScalar>)> = Vec::new();
    for &node in &spectrum.critical_nodes {
        let v = gamma.column(node);
        if !vectors.iter().any(|(_, w)| proportional(w, &v)) {
            vectors.push((node, v));
        }
    }
    Ok(EigenBasis {
        eigenvalue: lambda,
        vectors,
    })
}

/// `A ⊗ x = λ ⊗ x`, exactly.
pub fn check_eigen(a: &TropMatrix, x: &[TropScalar], lambda: &TropScalar) -> Result<bool> {
    if is_eps_vector(x) {
        return Err(Error::AllEpsilonVector);
    }
    Ok(a.mul_vec(x)? == vec_scale(lambda, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: Option<i64> = None;

    fn m(rows: &[&[i64]]) -> TropMatrix {
        TropMatrix::from_ints(rows).unwrap()
    }

    fn example3() -> TropMatrix {
        m(&[&[4, 3, 2], &[5, 2, 6], &[3, 4, 2]])
    }

    fn example5() -> TropMatrix {
        m(&[
            &[2, 0, -1, 3, 1],
            &[3, -1, 1, 2, 0],
            &[0, 4, -1, 2, 1],
            &[1, 2, 2, 1, 0],
            &[-1, 0, 1, 0, 0],
        ])
    }

    fn series(a: &TropMatrix, terms: u64) -> TropMatrix {
        let mut acc = a.clone();
        let mut p = a.clone();
        for _ in 1..terms {
            p = p.otimes(a).unwrap();
            acc = acc.oplus(&p).unwrap();
        }
        acc
    }

    #[test]
    fn metric_examples() {
        let eps = TropMatrix::eps(3, 3).unwrap();
        assert_eq!(metric_matrix(&eps).unwrap(), eps);
        assert_eq!(metric_matrix(&m(&[&[-1]])).unwrap(), m(&[&[-1]]));

        let b = example3().scale(&TropScalar::int(-5));
        let gamma = metric_matrix(&b).unwrap();
        assert_eq!(gamma, series(&b, 3));
        assert_eq!(
            gamma.diagonal(),
            vec![TropScalar::int(-1), TropScalar::int(0), TropScalar::int(0)]
        );
    }

    #[test]
    fn metric_divergence_carries_mu() {
        match metric_matrix(&example3()) {
            Err(Error::Divergent { mu }) => assert_eq!(mu, TropScalar::int(5)),
            other => panic!("expected divergence, got {other:?}"),
        }
        assert!(matches!(kleene_star(&m(&[&[1]])), Err(Error::Divergent { .. })));
    }

    #[test]
    fn kleene_examples() {
        assert_eq!(
            kleene_star(&TropMatrix::eps(2, 2).unwrap()).unwrap(),
            TropMatrix::identity(2).unwrap()
        );
        let a = TropMatrix::from_opt_ints(&[[Some(-1), Some(0)], [E, Some(-1)]]).unwrap();
        let star = kleene_star(&a).unwrap();
        assert_eq!(star, TropMatrix::from_opt_ints(&[[Some(0), Some(0)], [E, Some(0)]]).unwrap());
        assert_eq!(star.otimes(&star).unwrap(), star);
    }

    #[test]
    fn eigenvector_examples() {
        let basis = eigenvectors(&m(&[&[0]])).unwrap();
        assert_eq!(basis.eigenvalue, TropScalar::zero());
        assert_eq!(basis.vectors, vec![(0, vec![TropScalar::zero()])]);

        let a = example3();
        let basis = eigenvectors(&a).unwrap();
        assert_eq!(basis.eigenvalue, TropScalar::int(5));
        // Columns 2 and 3 lie on the same critical cycle and are proportional.
        assert_eq!(basis.vectors.len(), 1);
        assert_eq!(basis.vectors[0].0, 1);
        for (_, v) in &basis.vectors {
            assert!(check_eigen(&a, v, &basis.eigenvalue).unwrap());
        }

        let a = example5();
        let basis = eigenvectors(&a).unwrap();
        assert_eq!(basis.eigenvalue, TropScalar::int(3));
        assert!(!basis.vectors.is_empty());
        for (_, v) in &basis.vectors {
            assert!(check_eigen(&a, v, &basis.eigenvalue).unwrap());
        }
    }

    #[test]
    fn eigenvectors_reject_reducible() {
        let a = TropMatrix::from_opt_ints(&[[Some(0), E], [E, Some(0)]]).unwrap();
        assert!(matches!(eigenvectors(&a), Err(Error::Reducible { .. })));
    }

    #[test]
    fn check_eigen_examples() {
        assert!(check_eigen(&m(&[&[0]]), &[TropScalar::int(5)], &TropScalar::zero()).unwrap());
        let v: Vec<TropScalar> = [0, -1, 1, -1, -2].into_iter().map(TropScalar::int).collect();
        assert!(!check_eigen(&example5(), &v, &TropScalar::int(3)).unwrap());
        assert!(matches!(
            check_eigen(&example3(), &vec![TropScalar::Eps; 3], &TropScalar::int(5)),
            Err(Error::AllEpsilonVector)
        ));
    }

    #[test]
    fn proportional_requires_matching_support() {
        let v = [TropScalar::int(0), TropScalar::Eps];
        let w = [TropScalar::int(3), TropScalar::Eps];
        assert!(proportional(&v, &w));
        assert!(!proportional(&v, &[TropScalar::int(3), TropScalar::int(0)]));
        assert!(!proportional(&[TropScalar::Eps], &[TropScalar::Eps]));
    }
}
