//! Brute-force reference implementations for small inputs.
//!
//! Nothing here calls into the graph, spectral or exponential modules; every
//! answer comes from exhaustive enumeration or naive iteration so it can be
//! used to check the fast paths.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::TropMatrix;
use crate::scalar::{trop_factorial, TropScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleConfig {
    pub max_nodes: usize,
    pub max_power: u64,
    pub max_cycle_len: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            max_nodes: 8,
            max_power: 512,
            max_cycle_len: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleEnumeration {
    pub mu: TropScalar,
    /// Critical simple cycles, each starting at its smallest node.
    pub cycles: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Default)]
pub struct Oracle {
    config: OracleConfig,
}

fn naive_product(a: &TropMatrix, b: &TropMatrix) -> TropMatrix {
    let n = a.rows();
    let mut out = TropMatrix::eps(n, n).expect("non-empty");
    for i in 0..n {
        for j in 0..n {
            let mut best = TropScalar::Eps;
            for k in 0..n {
                let t = a.get(i, k).otimes(b.get(k, j));
                if t > best {
                    best = t;
                }
            }
            out.set(i, j, best);
        }
    }
    out
}

fn naive_power(a: &TropMatrix, k: u64) -> TropMatrix {
    let mut p = TropMatrix::identity(a.rows()).expect("non-empty");
    for _ in 0..k {
        p = naive_product(&p, a);
    }
    p
}

fn entrywise_max(a: &TropMatrix, b: &TropMatrix) -> TropMatrix {
    let mut out = a.clone();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if b.get(i, j) > a.get(i, j) {
                out.set(i, j, b.get(i, j).clone());
            }
        }
    }
    out
}

fn shifted(a: &TropMatrix, c: &TropScalar) -> TropMatrix {
    let mut out = a.clone();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set(i, j, a.get(i, j).otimes(c));
        }
    }
    out
}

impl Oracle {
    /// Fails if a bound is zero or `max_nodes > 8`.
    pub fn new(config: OracleConfig) -> Result<Self> {
        if config.max_nodes == 0 || config.max_nodes > 8 {
            return Err(Error::OracleBound {
                what: "max_nodes",
                actual: config.max_nodes,
                bound: 8,
            });
        }
        if config.max_power == 0 || config.max_cycle_len == 0 {
            return Err(Error::OracleBound {
                what: "bound",
                actual: 0,
                bound: 1,
            });
        }
        Ok(Self { config })
    }

    pub fn config(&self) -> &OracleConfig {
        &self.config
    }

    fn check_size(&self, a: &TropMatrix) -> Result<usize> {
        let n = a.require_square("oracle")?;
        if n > self.config.max_nodes {
            return Err(Error::OracleBound {
                what: "nodes",
                actual: n,
                bound: self.config.max_nodes,
            });
        }
        if n > self.config.max_cycle_len {
            return Err(Error::OracleBound {
                what: "cycle length",
                actual: n,
                bound: self.config.max_cycle_len,
            });
        }
        Ok(n)
    }

    fn check_power(&self, k: u64) -> Result<()> {
        if k > self.config.max_power {
            return Err(Error::OracleBound {
                what: "power",
                actual: usize::try_from(k).unwrap_or(usize::MAX),
                bound: usize::try_from(self.config.max_power).unwrap_or(usize::MAX),
            });
        }
        Ok(())
    }

    /// Every simple cycle of `G_A` with its total weight.
    fn simple_cycles(&self, a: &TropMatrix) -> Result<Vec<(Vec<usize>, BigRational)>> {
        fn dfs(a: &TropMatrix, path: &mut Vec<usize>, weight: BigRational, out: &mut Vec<(Vec<usize>, BigRational)>) {
            let start = path[0];
            let v = *path.last().expect("non-empty path");
            for w in 0..a.rows() {
                let Some(e) = a.get(v, w).finite() else { continue };
                if w == start {
                    out.push((path.clone(), &weight + e));
                } else if w > start && !path.contains(&w) {
                    path.push(w);
                    dfs(a, path, &weight + e, out);
                    path.pop();
                }
            }
        }
        let n = self.check_size(a)?;
        let mut out = Vec::new();
        for start in 0..n {
            let mut path = vec![start];
            dfs(a, &mut path, BigRational::from_integer(BigInt::from(0)), &mut out);
        }
        Ok(out)
    }

    /// `μ(A)` and all simple cycles attaining it.
    pub fn enum_cycle_mean(&self, a: &TropMatrix) -> Result<CycleEnumeration> {
        let mut best: Option<BigRational> = None;
        let mut cycles = Vec::new();
        for (cycle, weight) in self.simple_cycles(a)? {
            let mean = weight / BigRational::from_integer(BigInt::from(cycle.len()));
            match &best {
                Some(b) if mean < *b => {}
                Some(b) if mean == *b => cycles.push(cycle),
                _ => {
                    best = Some(mean);
                    cycles = vec![cycle];
                }
            }
        }
        cycles.sort();
        Ok(CycleEnumeration {
            mu: best.map_or(TropScalar::Eps, TropScalar::Fin),
            cycles,
        })
    }

    /// `lcm` over groups of node-sharing critical cycles of the gcd of their
    /// lengths; `None` when `A` has no cycle.
    pub fn cyclicity_period(&self, a: &TropMatrix) -> Result<Option<u64>> {
        let cycles = self.enum_cycle_mean(a)?.cycles;
        if cycles.is_empty() {
            return Ok(None);
        }
        let n = a.rows();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            parent[x] = r;
            r
        }
        for c in &cycles {
            for w in c.windows(2) {
                let (x, y) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[x] = y;
            }
        }
        let mut gcds: Vec<(usize, u64)> = Vec::new();
        for c in &cycles {
            let root = find(&mut parent, c[0]);
            let len = c.len() as u64;
            match gcds.iter_mut().find(|(r, _)| *r == root) {
                Some((_, g)) => *g = g.gcd(&len),
                None => gcds.push((root, len)),
            }
        }
        Ok(Some(gcds.iter().fold(1u64, |acc, (_, g)| acc.lcm(g))))
    }

    /// First `k ≤ bound` with `A^(k) = λ^(k−j) ⊗ A^(j)` for some `j < k`,
    /// as `(k − j, j)`. `λ` comes from cycle enumeration.
    pub fn brute_period(&self, a: &TropMatrix, bound: u64) -> Result<Option<(u64, u64)>> {
        self.check_power(bound)?;
        let lambda = self.enum_cycle_mean(a)?.mu;
        if lambda.is_eps() {
            return Err(Error::Acyclic { op: "brute_period" });
        }
        let mut powers = vec![TropMatrix::identity(a.rows())?];
        for k in 1..=bound {
            let next = naive_product(powers.last().expect("non-empty"), a);
            for (j, earlier) in powers.iter().enumerate() {
                let j = j as u64;
                if shifted(earlier, &lambda.pow(k - j)) == next {
                    return Ok(Some((k - j, j)));
                }
            }
            powers.push(next);
        }
        Ok(None)
    }

    /// `I ⊕ ⊕_{k=1..terms} (−k!) ⊗ A^(k)`, each power recomputed from scratch.
    pub fn brute_exp(&self, a: &TropMatrix, terms: u64) -> Result<TropMatrix> {
        self.check_size(a)?;
        self.check_power(terms)?;
        let mut acc = TropMatrix::identity(a.rows())?;
        for k in 1..=terms {
            let coeff = trop_factorial(k).inverse().expect("finite factorial");
            acc = entrywise_max(&acc, &shifted(&naive_power(a, k), &coeff));
        }
        Ok(acc)
    }

    /// `A ⊕ A^(2) ⊕ … ⊕ A^(terms)`.
    pub fn metric_series(&self, a: &TropMatrix, terms: u64) -> Result<TropMatrix> {
        self.check_size(a)?;
        self.check_power(terms)?;
        let mut acc = TropMatrix::eps(a.rows(), a.rows())?;
        for k in 1..=terms {
            acc = entrywise_max(&acc, &naive_power(a, k));
        }
        Ok(acc)
    }

    /// `max_{0 ≤ k ≤ max_power} (k·a − k!)`.
    pub fn brute_scalar_exp(&self, a: &TropScalar) -> Result<TropScalar> {
        if let Some(v) = a.finite() {
            let bound = BigRational::from_integer(BigInt::from(self.config.max_power / 2));
            if *v > bound {
                return Err(Error::OracleBound {
                    what: "scalar",
                    actual: usize::try_from(v.ceil().to_integer()).unwrap_or(usize::MAX),
                    bound: usize::try_from(self.config.max_power / 2).unwrap_or(usize::MAX),
                });
            }
        }
        let mut best = TropScalar::zero();
        for k in 1..=self.config.max_power {
            let term = a.pow(k).otimes(&trop_factorial(k).inverse().expect("finite factorial"));
            if term > best {
                best = term;
            }
        }
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: Option<i64> = None;

    fn m(rows: &[&[i64]]) -> TropMatrix {
        TropMatrix::from_ints(rows).unwrap()
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

    #[test]
    fn cycle_enumeration_examples() {
        let o = Oracle::default();
        let r = o.enum_cycle_mean(&m(&[&[4, 3, 2], &[5, 2, 6], &[3, 4, 2]])).unwrap();
        assert_eq!(r.mu, TropScalar::int(5));
        assert_eq!(r.cycles, vec![vec![1, 2]]);

        let r = o.enum_cycle_mean(&m(&[&[-1]])).unwrap();
        assert_eq!((r.mu, r.cycles), (TropScalar::int(-1), vec![vec![0]]));

        let r = o.enum_cycle_mean(&example5()).unwrap();
        assert_eq!(r.mu, TropScalar::int(3));
        assert!(r.cycles.iter().any(|c| c.len() == 4));

        let r = o.enum_cycle_mean(&TropMatrix::from_opt_ints(&[[E, Some(1)], [E, E]]).unwrap()).unwrap();
        assert_eq!(r.mu, TropScalar::Eps);
        assert!(r.cycles.is_empty());
    }

    #[test]
    fn period_examples() {
        let o = Oracle::default();
        let (p, k0) = o.brute_period(&m(&[&[0]]), 10).unwrap().unwrap();
        assert_eq!(p, 1);
        assert!(k0 <= 1);
        assert_eq!(o.brute_period(&m(&[&[4, 3, 2], &[5, 2, 6], &[3, 4, 2]]), 50).unwrap().unwrap().0, 2);
        let tropical_swap = TropMatrix::from_opt_ints(&[
            [E, Some(0), E, E],
            [Some(0), E, E, E],
            [E, E, E, Some(0)],
            [E, E, Some(0), E],
        ])
        .unwrap();
        assert_eq!(o.brute_period(&tropical_swap, 10).unwrap(), Some((2, 0)));
        assert_eq!(o.cyclicity_period(&tropical_swap).unwrap(), Some(2));
        assert_eq!(o.brute_period(&example5(), 1).unwrap(), None);
        assert_eq!(o.brute_period(&example5(), 100).unwrap().unwrap().0, 4);
        assert_eq!(o.cyclicity_period(&example5()).unwrap(), Some(4));
    }

    #[test]
    fn exp_examples() {
        let o = Oracle::default();
        let a = m(&[&[-2, -4, -1], &[-3, -8, -4], &[-1, -5, -6]]);
        assert_eq!(o.brute_exp(&a, 10).unwrap(), m(&[&[0, -5, -2], &[-4, 0, -5], &[-2, -6, 0]]));
        assert_eq!(o.brute_exp(&TropMatrix::eps(3, 3).unwrap(), 5).unwrap(), TropMatrix::identity(3).unwrap());
        let b = m(&[&[3, 1, 2, 4], &[2, 3, 1, 1], &[4, 2, 2, 1], &[3, 2, 1, 2]]);
        assert_eq!(
            o.brute_exp(&b, 12).unwrap(),
            m(&[&[4, 3, 3, 5], &[3, 3, 1, 3], &[5, 4, 3, 5], &[4, 3, 2, 4]])
        );
    }

    #[test]
    fn scalar_exp_supremum() {
        let o = Oracle::default();
        assert_eq!(o.brute_scalar_exp(&TropScalar::int(5)).unwrap(), TropScalar::int(10));
        assert_eq!(o.brute_scalar_exp(&TropScalar::ratio(7, 2)).unwrap(), TropScalar::ratio(9, 2));
        assert_eq!(o.brute_scalar_exp(&TropScalar::int(-3)).unwrap(), TropScalar::zero());
        assert_eq!(o.brute_scalar_exp(&TropScalar::Eps).unwrap(), TropScalar::zero());
    }

    #[test]
    fn bounds_are_enforced() {
        assert!(Oracle::new(OracleConfig { max_nodes: 9, ..Default::default() }).is_err());
        let o = Oracle::new(OracleConfig {
            max_nodes: 2,
            ..Default::default()
        })
        .unwrap();
        assert!(matches!(
            o.enum_cycle_mean(&m(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]])),
            Err(Error::OracleBound { what: "nodes", actual: 3, bound: 2 })
        ));
        assert!(matches!(o.brute_exp(&m(&[&[0]]), 10_000), Err(Error::OracleBound { what: "power", .. })));
    }
}
