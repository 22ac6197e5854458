//! Ultimate periodicity, robustness and generalized eigenvectors of
//! irreducible matrices.
//!
//! All `λ` values here are `μ(A)`, the unique eigenvalue of an irreducible
//! matrix. Periods are searched on the normalized powers `((−λ) ⊗ A)^(k)`,
//! which are eventually periodic with period `per(A)`.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exp::mat_exp;
use crate::graph::{self, critical_graph, max_cycle_mean, simple_cycle_lengths};
use crate::matrix::{is_eps_vector, vec_oplus, vec_scale, TropMatrix};
use crate::scalar::TropScalar;

/// Power-search cap used when the caller gives none: `4n² + 64`.
pub fn default_cap(n: usize) -> u64 {
    4 * (n as u64) * (n as u64) + 64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicityCertificate {
    /// Minimal `p`.
    pub period: u64,
    /// Minimal `k₀` for that `p` (`Sper(A)`); may be `0`.
    pub transient: u64,
    pub lambda: TropScalar,
    /// `A^(k₀+p) = λ^(p) ⊗ A^(k₀)` re-checked on unnormalized powers.
    pub witness_equal: bool,
    /// `lcm(g_s)` from the critical graph.
    pub cyclicity_period: u64,
}

impl PeriodicityCertificate {
    /// The relation holds from `k = 1` on.
    pub fn strictly_periodic(&self) -> bool {
        self.transient <= 1
    }
}

fn lambda_of(a: &TropMatrix, op: &'static str) -> Result<TropScalar> {
    graph::require_irreducible(a, op)?;
    let lambda = max_cycle_mean(a)?;
    if lambda.is_eps() {
        return Err(Error::Acyclic { op });
    }
    Ok(lambda)
}

/// First repeat among `B^(0), B^(1), …, B^(cap)` with `B = (−λ) ⊗ A`.
pub fn ultimate_period(a: &TropMatrix, cap: u64) -> Result<PeriodicityCertificate> {
    let lambda = lambda_of(a, "ultimate_period")?;
    let n = a.rows();
    let normalized = a.scale(&lambda.inverse().expect("finite lambda"));
    let mut seen: HashMap<TropMatrix, u64> = HashMap::new();
    let mut current = TropMatrix::identity(n)?;
    for k in 0..=cap {
        if let Some(&first) = seen.get(&current) {
            let (period, transient) = (k - first, first);
            let lhs = a.power(transient + period)?;
            let rhs = a.power(transient)?.scale(&lambda.pow(period));
            return Ok(PeriodicityCertificate {
                period,
                transient,
                lambda,
                witness_equal: lhs == rhs,
                cyclicity_period: critical_graph(a)?.cyclicity_lcm(),
            });
        }
        let next = normalized.otimes(&current)?;
        seen.insert(current, k);
        current = next;
    }
    Err(Error::CapExceeded { cap, lambda })
}

/// `per(A) = 1`.
pub fn is_robust(a: &TropMatrix) -> Result<bool> {
    Ok(graph::period(a)? == 1)
}

/// A finite period is found within `cap` powers.
pub fn is_quasi_robust(a: &TropMatrix, cap: u64) -> Result<bool> {
    match ultimate_period(a, cap) {
        Ok(_) => Ok(true),
        Err(Error::CapExceeded { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenEigRecord {
    pub vector: Vec<TropScalar>,
    /// Least `m ≥ 1` with `A^(m) ⊗ x = λ^(m) ⊗ x`.
    pub order: u64,
    pub lambda: TropScalar,
}

/// Precomputed `λ` and `per(A)` for repeated order queries on one matrix.
#[derive(Clone, Debug)]
pub struct GenEigSolver<'a> {
    matrix: &'a TropMatrix,
    lambda: TropScalar,
    period: u64,
}

impl<'a> GenEigSolver<'a> {
    pub fn new(a: &'a TropMatrix) -> Result<Self> {
        let lambda = lambda_of(a, "gen_eig_order")?;
        let period = critical_graph(a)?.cyclicity_lcm();
        Ok(Self {
            matrix: a,
            lambda,
            period,
        })
    }

    pub fn lambda(&self) -> &TropScalar {
        &self.lambda
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// Least `m ≤ per(A)` with `A^(m) ⊗ x = λ^(m) ⊗ x`.
    pub fn order(&self, x: &[TropScalar]) -> Result<Option<u64>> {
        if is_eps_vector(x) {
            return Err(Error::AllEpsilonVector);
        }
        let mut y = x.to_vec();
        for m in 1..=self.period {
            y = self.matrix.mul_vec(&y)?;
            if y == vec_scale(&self.lambda.pow(m), x) {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }

    pub fn record(&self, x: &[TropScalar]) -> Result<Option<GenEigRecord>> {
        Ok(self.order(x)?.map(|order| GenEigRecord {
            vector: x.to_vec(),
            order,
            lambda: self.lambda.clone(),
        }))
    }
}

pub fn gen_eig_order(a: &TropMatrix, x: &[TropScalar]) -> Result<Option<u64>> {
    GenEigSolver::new(a)?.order(x)
}

/// Whether every order lies in `{1, p/2, p}` (`p/2` only for even `p`).
pub fn order_law_holds(orders: &BTreeSet<u64>, period: u64) -> bool {
    orders
        .iter()
        .all(|&m| m == 1 || m == period || (period.is_multiple_of(2) && m == period / 2))
}

fn random_start(rng: &mut ChaCha8Rng, n: usize) -> Vec<TropScalar> {
    loop {
        let v: Vec<TropScalar> = (0..n)
            .map(|_| {
                if rng.gen_ratio(1, 5) {
                    TropScalar::Eps
                } else {
                    TropScalar::int(rng.gen_range(-10..=10))
                }
            })
            .collect();
        if !is_eps_vector(&v) {
            return v;
        }
    }
}

/// Orders of generalized eigenvectors drawn from the columns of
/// `A^(k₀), …, A^(k₀+p−1)`, from `samples` seeded random starts and their
/// orbit tails `A^(k₀) ⊗ x`, and from any `extra_starts` with the same
/// treatment. For each divisor `d < p` the sums
/// `⊕_t λ^(−td) ⊗ A^(k₀+td) ⊗ c` over the columns `c` are included too;
/// their order divides `d`.
pub fn gen_orders_census_with(a: &TropMatrix, samples: usize, extra_starts: &[Vec<TropScalar>]) -> Result<BTreeSet<u64>> {
    let n = a.require_square("gen_orders_census")?;
    let cert = ultimate_period(a, default_cap(n))?;
    let solver = GenEigSolver::new(a)?;
    let mut orders = BTreeSet::new();

    let p = cert.period;
    let mut powers = vec![a.power(cert.transient)?];
    for _ in 1..p {
        let next = a.otimes(powers.last().expect("non-empty"))?;
        powers.push(next);
    }
    for power in &powers {
        for j in 0..n {
            if let Some(m) = solver.order(&power.column(j))? {
                orders.insert(m);
            }
        }
    }
    for d in (1..p).filter(|d| p % d == 0) {
        for j in 0..n {
            let mut x = vec![TropScalar::Eps; n];
            for t in 0..p / d {
                let shift = cert.lambda.pow(t * d).inverse().expect("finite lambda");
                x = vec_oplus(&x, &vec_scale(&shift, &powers[(t * d) as usize].column(j)));
            }
            if let Some(m) = solver.order(&x)? {
                orders.insert(m);
            }
        }
    }

    let tail = a.power(cert.transient)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e5f_ce05);
    let starts = (0..samples)
        .map(|_| random_start(&mut rng, n))
        .chain(extra_starts.iter().cloned());
    for x in starts {
        if x.len() != n || is_eps_vector(&x) {
            continue;
        }
        if let Some(m) = solver.order(&x)? {
            orders.insert(m);
        }
        if let Some(m) = solver.order(&tail.mul_vec(&x)?)? {
            orders.insert(m);
        }
    }
    Ok(orders)
}

pub fn gen_orders_census(a: &TropMatrix, samples: usize) -> Result<BTreeSet<u64>> {
    gen_orders_census_with(a, samples, &[])
}

/// Preconditions for every column of `e^(A)` to be a generalized eigenvector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpColumnsHypothesis {
    pub diagonal_at_least_one: bool,
    pub strictly_periodic: bool,
    /// `Sper(A) + 2·per(A) < O(A)`.
    pub transient_below_order_bound: bool,
    /// Reported, not required.
    pub entries_positive: bool,
    pub met: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColumnOrder {
    pub column: usize,
    pub vector: Vec<TropScalar>,
    pub order: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpColumnsReport {
    pub hypothesis: ExpColumnsHypothesis,
    pub certificate: PeriodicityCertificate,
    pub columns: Vec<ColumnOrder>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("hypothesis not met: {hypothesis:?}")]
pub struct HypothesisNotMet {
    pub hypothesis: ExpColumnsHypothesis,
    pub columns: Vec<ColumnOrder>,
}

impl ExpColumnsReport {
    /// The records, or the per-column results wrapped in an error when the
    /// hypothesis is not met.
    pub fn require_hypothesis(self) -> std::result::Result<Vec<GenEigRecord>, HypothesisNotMet> {
        if !self.hypothesis.met {
            return Err(HypothesisNotMet {
                hypothesis: self.hypothesis,
                columns: self.columns,
            });
        }
        let lambda = self.certificate.lambda;
        Ok(self
            .columns
            .into_iter()
            .filter_map(|c| {
                c.order.map(|order| GenEigRecord {
                    vector: c.vector,
                    order,
                    lambda: lambda.clone(),
                })
            })
            .collect())
    }
}

/// Checks each column of `e^(A)` for membership in `GV(A)`.
pub fn exp_columns_gen_eig(a: &TropMatrix) -> Result<ExpColumnsReport> {
    let n = a.require_square("exp_columns_gen_eig")?;
    let certificate = ultimate_period(a, default_cap(n))?;
    let one = TropScalar::int(1);
    let diagonal_at_least_one = a.diagonal().iter().all(|d| *d >= one);
    let strictly_periodic = certificate.strictly_periodic();
    let transient_below_order_bound =
        certificate.transient + 2 * certificate.period < a.order_bound();
    let entries_positive = a.entries().iter().all(|e| e.finite().is_some_and(|v| *v > Zero::zero()));
    let hypothesis = ExpColumnsHypothesis {
        diagonal_at_least_one,
        strictly_periodic,
        transient_below_order_bound,
        entries_positive,
        met: diagonal_at_least_one && (strictly_periodic || transient_below_order_bound),
    };
    let solver = GenEigSolver::new(a)?;
    let e = mat_exp(a)?.matrix;
    let columns = (0..n)
        .map(|j| {
            let vector = e.column(j);
            Ok(ColumnOrder {
                column: j,
                order: solver.order(&vector)?,
                vector,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExpColumnsReport {
        hypothesis,
        certificate,
        columns,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    /// `x(0), x(1), …` up to the entry state, or all `max_steps + 1` states.
    pub states: Vec<Vec<TropScalar>>,
    pub entry_index: Option<u64>,
    pub entry_order: Option<u64>,
    pub stable: bool,
}

/// Iterates `x(r+1) = A ⊗ x(r)` until some `x(r)` is a generalized eigenvector.
pub fn orbit(a: &TropMatrix, x0: &[TropScalar], max_steps: u64) -> Result<OrbitReport> {
    if is_eps_vector(x0) {
        return Err(Error::AllEpsilonVector);
    }
    let solver = GenEigSolver::new(a)?;
    let mut states = vec![x0.to_vec()];
    for r in 0..=max_steps {
        let x = states.last().expect("non-empty");
        if let Some(order) = solver.order(x)? {
            return Ok(OrbitReport {
                states,
                entry_index: Some(r),
                entry_order: Some(order),
                stable: true,
            });
        }
        if r == max_steps {
            break;
        }
        let next = a.mul_vec(x)?;
        states.push(next);
    }
    Ok(OrbitReport {
        states,
        entry_index: None,
        entry_order: None,
        stable: false,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentDivisibility {
    pub nodes: Vec<usize>,
    /// Lengths of the simple cycles of this critical component.
    pub cycle_lengths: Vec<usize>,
    /// A cycle length dividing `⌊λ⌋`, or `λ − 1` for positive integer `λ`.
    pub witness: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RobustnessCriterion {
    /// Every critical component has a witness; then `e^(A)` is robust.
    pub sufficient: bool,
    pub lambda: TropScalar,
    pub floor_lambda: TropScalar,
    pub components: Vec<ComponentDivisibility>,
}

fn divides(len: usize, target: &BigInt) -> bool {
    (target % BigInt::from(len)).is_zero()
}

/// Sufficient condition for `e^(A)` to be robust via critical-cycle lengths.
pub fn exp_robustness_criterion(a: &TropMatrix) -> Result<RobustnessCriterion> {
    let lambda = lambda_of(a, "exp_robustness_criterion")?;
    let spectrum = critical_graph(a)?;
    let floor = lambda.floor().expect("finite lambda");
    let alt = (lambda.is_integer() && floor > BigInt::zero()).then(|| &floor - 1);
    let components = (0..spectrum.components.len())
        .map(|c| {
            let (nodes, succ) = spectrum.component_successors(c);
            let cycle_lengths: Vec<usize> = simple_cycle_lengths(&succ).into_iter().collect();
            let witness = cycle_lengths
                .iter()
                .copied()
                .find(|&l| divides(l, &floor) || alt.as_ref().is_some_and(|t| divides(l, t)));
            ComponentDivisibility {
                nodes,
                cycle_lengths,
                witness,
            }
        })
        .collect::<Vec<_>>();
    Ok(RobustnessCriterion {
        sufficient: components.iter().all(|c| c.witness.is_some()),
        floor_lambda: TropScalar::Fin(num_rational::BigRational::from_integer(floor)),
        lambda,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: Option<i64> = None;

    fn m(rows: &[&[i64]]) -> TropMatrix {
        TropMatrix::from_ints(rows).unwrap()
    }

    fn v(xs: &[i64]) -> Vec<TropScalar> {
        xs.iter().map(|&x| TropScalar::int(x)).collect()
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

    /// Real 0/1 permutation matrix of (12)(34); fully finite, so irreducible.
    fn swap_pairs() -> TropMatrix {
        m(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]])
    }

    #[test]
    fn period_examples() {
        let c = ultimate_period(&m(&[&[0]]), 10).unwrap();
        assert_eq!((c.period, c.transient), (1, 0));
        let c = ultimate_period(&example3(), 100).unwrap();
        assert_eq!(c.period, 2);
        assert!(c.witness_equal);
        assert_eq!(c.cyclicity_period, 2);
        let c = ultimate_period(&example5(), 200).unwrap();
        assert_eq!(c.period, 4);
        assert_eq!(c.lambda, TropScalar::int(3));
    }

    #[test]
    fn period_cap_and_reducible() {
        assert!(matches!(ultimate_period(&example5(), 1), Err(Error::CapExceeded { cap: 1, .. })));
        assert!(!is_quasi_robust(&example5(), 1).unwrap());
        let reducible = TropMatrix::from_opt_ints(&[[Some(0), E], [E, Some(0)]]).unwrap();
        assert!(matches!(ultimate_period(&reducible, 10), Err(Error::Reducible { .. })));
        assert!(matches!(is_robust(&reducible), Err(Error::Reducible { .. })));
    }

    #[test]
    fn permutation_matrix_period() {
        let c = ultimate_period(&swap_pairs(), 10).unwrap();
        assert_eq!(c.lambda, TropScalar::int(1));
        assert_eq!((c.period, c.transient), (2, 1));
        assert!(c.strictly_periodic());
        assert_eq!(c.cyclicity_period, 2);
    }

    #[test]
    fn robustness_examples() {
        assert!(is_robust(&m(&[&[0]])).unwrap());
        assert!(!is_robust(&example3()).unwrap());
        assert!(is_robust(&mat_exp(&example3()).unwrap().matrix).unwrap());
        for a in [example3(), m(&[&[0]]), example5()] {
            assert!(is_quasi_robust(&a, default_cap(a.rows())).unwrap());
        }
    }

    #[test]
    fn gen_order_examples() {
        let a = example5();
        assert_eq!(gen_eig_order(&a, &v(&[0, -1, 1, -1, -2])).unwrap(), Some(2));
        assert_eq!(gen_eig_order(&a, &v(&[0, -1, 0, -1, -2])).unwrap(), Some(4));
        let basis = crate::spectral::eigenvectors(&a).unwrap();
        for (_, x) in &basis.vectors {
            assert_eq!(gen_eig_order(&a, x).unwrap(), Some(1));
        }
        assert!(matches!(gen_eig_order(&a, &vec![TropScalar::Eps; 5]), Err(Error::AllEpsilonVector)));
    }

    #[test]
    fn census_examples() {
        let orders = gen_orders_census(&example5(), 64).unwrap();
        assert!(orders.is_subset(&BTreeSet::from([1, 2, 4])), "{orders:?}");
        assert!(orders.contains(&4));

        let robust = mat_exp(&example3()).unwrap().matrix;
        assert_eq!(gen_orders_census(&robust, 32).unwrap(), BTreeSet::from([1]));

        let orders = gen_orders_census(&swap_pairs(), 32).unwrap();
        assert!(orders.is_subset(&BTreeSet::from([1, 2])), "{orders:?}");
    }

    #[test]
    fn six_cycle_has_order_two_vectors() {
        // Critical Hamiltonian 6-cycle of zeros, all other arcs -1.
        let mut rows = vec![vec![-1i64; 6]; 6];
        for i in 0..6 {
            rows[i][(i + 1) % 6] = 0;
        }
        let a = TropMatrix::from_ints(&rows).unwrap();
        assert_eq!(ultimate_period(&a, 200).unwrap().period, 6);
        assert_eq!(gen_eig_order(&a, &v(&[0, -1, 0, -1, 0, -1])).unwrap(), Some(2));
        let orders = gen_orders_census(&a, 16).unwrap();
        assert_eq!(orders, BTreeSet::from([1, 2, 3, 6]));
        assert!(!order_law_holds(&orders, 6));
    }

    #[test]
    fn order_law_helper() {
        assert!(order_law_holds(&BTreeSet::from([1, 2, 4]), 4));
        assert!(!order_law_holds(&BTreeSet::from([2]), 6));
        assert!(!order_law_holds(&BTreeSet::from([2]), 5));
    }

    #[test]
    fn exp_columns_of_idempotent_family() {
        // 2 ⊗ (0 matrix): strictly periodic, robust, diagonal ≥ 1.
        let a = m(&[&[2, 2], &[2, 2]]);
        let report = exp_columns_gen_eig(&a).unwrap();
        assert!(report.hypothesis.met);
        let records = report.require_hypothesis().unwrap();
        assert_eq!(records.len(), 2);
        assert!(records.iter().all(|r| r.order == 1));
    }

    #[test]
    fn exp_columns_permutation_powers() {
        let a = swap_pairs().scale(&TropScalar::int(1));
        let solver = GenEigSolver::new(&a).unwrap();
        for k in 1..=4 {
            let p = a.power(k).unwrap();
            for j in 0..4 {
                assert_eq!(solver.order(&p.column(j)).unwrap(), Some(2), "k={k} j={j}");
            }
        }
        let report = exp_columns_gen_eig(&a).unwrap();
        assert!(report.hypothesis.met);
        // e^(A) here is robust: its columns are eigenvectors of A, not order-2 vectors.
        assert!(report.columns.iter().all(|c| c.order == Some(1)));
        assert_eq!(report.columns[0].vector, v(&[1, 1, 0, 0]));
    }

    #[test]
    fn exp_columns_gate() {
        let report = exp_columns_gen_eig(&example5()).unwrap();
        assert!(!report.hypothesis.diagonal_at_least_one);
        assert!(!report.hypothesis.met);
        let err = report.require_hypothesis().unwrap_err();
        assert_eq!(err.columns.len(), 5);
    }

    #[test]
    fn orbit_examples() {
        let robust = mat_exp(&example3()).unwrap().matrix;
        let r = orbit(&robust, &v(&[0, 7, -3]), 50).unwrap();
        assert!(r.stable);
        assert_eq!(r.entry_order, Some(1));

        let a = example3();
        let r = orbit(&a, &v(&[0, 7, -3]), 50).unwrap();
        assert!(r.stable);
        assert_eq!(r.entry_order, Some(2));
        let idx = r.entry_index.unwrap() as usize;
        assert_eq!(gen_eig_order(&a, &r.states[idx]).unwrap(), Some(2));

        let basis = crate::spectral::eigenvectors(&a).unwrap();
        let r = orbit(&a, &basis.vectors[0].1, 5).unwrap();
        assert_eq!(r.entry_index, Some(0));
        assert_eq!(r.entry_order, Some(1));

        assert!(matches!(orbit(&a, &vec![TropScalar::Eps; 3], 5), Err(Error::AllEpsilonVector)));
    }

    #[test]
    fn orbit_that_never_settles_within_budget() {
        let a = example3();
        let r = orbit(&a, &v(&[0, 100, -100]), 0).unwrap();
        assert!(!r.stable);
        assert_eq!(r.states.len(), 1);
    }

    #[test]
    fn robustness_criterion_examples() {
        let c = exp_robustness_criterion(&example3()).unwrap();
        assert!(c.sufficient);
        assert_eq!(c.components[0].cycle_lengths, vec![2]);
        assert_eq!(c.components[0].witness, Some(2));

        let looped = m(&[&[3, 0], &[0, 1]]);
        assert!(exp_robustness_criterion(&looped).unwrap().sufficient);
    }
}
