//! The digraph view of a square matrix.
//!
//! Node `i` has an edge to node `j` with weight `a_ij` whenever `a_ij > ε`.
//! Everything here uses 0-based node indices; the CLI shifts to 1-based.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::TropMatrix;
use crate::scalar::TropScalar;
use crate::spectral;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: BigRational,
}

#[derive(Clone, Debug)]
pub struct Digraph {
    node_count: usize,
    edges: Vec<Edge>,
    successors: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn from_matrix(a: &TropMatrix) -> Result<Self> {
        let n = a.require_square("digraph")?;
        let mut edges = Vec::new();
        let mut successors = vec![Vec::new(); n];
        for (i, succ) in successors.iter_mut().enumerate() {
            for j in 0..n {
                if let Some(w) = a.get(i, j).finite() {
                    edges.push(Edge {
                        source: i,
                        target: j,
                        weight: w.clone(),
                    });
                    succ.push(j);
                }
            }
        }
        Ok(Self {
            node_count: n,
            edges,
            successors,
        })
    }

    /// Unweighted graph on `node_count` nodes; weights are set to zero.
    pub fn from_edges(node_count: usize, pairs: &[(usize, usize)]) -> Self {
        let mut successors = vec![Vec::new(); node_count];
        let edges = pairs
            .iter()
            .map(|&(s, t)| {
                successors[s].push(t);
                Edge {
                    source: s,
                    target: t,
                    weight: BigRational::from_integer(BigInt::from(0)),
                }
            })
            .collect();
        for s in &mut successors {
            s.sort_unstable();
            s.dedup();
        }
        Self {
            node_count,
            edges,
            successors,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.successors[v]
    }
}

/// Tarjan's algorithm, iterative. Components come out in reverse
/// topological order of the condensation.
fn tarjan(successors: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = successors.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next_index = 0usize;

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = successors[v].get(*pos) {
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps
}

/// Orders components topologically (`reverse = false`: edge sources first),
/// breaking ties by smallest node index.
fn order_components(successors: &[Vec<usize>], comps: Vec<Vec<usize>>, reverse: bool) -> Vec<Vec<usize>> {
    let mut comp_of = vec![0usize; successors.len()];
    for (c, nodes) in comps.iter().enumerate() {
        for &v in nodes {
            comp_of[v] = c;
        }
    }
    let k = comps.len();
    let mut out_edges: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
    for (v, succ) in successors.iter().enumerate() {
        for &w in succ {
            let (cv, cw) = (comp_of[v], comp_of[w]);
            if cv != cw {
                if reverse {
                    out_edges[cw].insert(cv);
                } else {
                    out_edges[cv].insert(cw);
                }
            }
        }
    }
    let mut indegree = vec![0usize; k];
    for targets in &out_edges {
        for &t in targets {
            indegree[t] += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<(usize, usize)>> = (0..k)
        .filter(|&c| indegree[c] == 0)
        .map(|c| Reverse((comps[c][0], c)))
        .collect();
    let mut order = Vec::with_capacity(k);
    while let Some(Reverse((_, c))) = ready.pop() {
        order.push(c);
        for &t in &out_edges[c] {
            indegree[t] -= 1;
            if indegree[t] == 0 {
                ready.push(Reverse((comps[t][0], t)));
            }
        }
    }
    let mut comps: Vec<Option<Vec<usize>>> = comps.into_iter().map(Some).collect();
    order.into_iter().map(|c| comps[c].take().unwrap()).collect()
}

/// Strongly connected components, each sorted, listed so that every
/// inter-component edge goes from an earlier component to a later one.
pub fn scc_decompose(g: &Digraph) -> Vec<Vec<usize>> {
    order_components(&g.successors, tarjan(&g.successors), false)
}

pub fn is_irreducible(a: &TropMatrix) -> Result<bool> {
    let g = Digraph::from_matrix(a)?;
    Ok(scc_decompose(&g).len() == 1)
}

pub(crate) fn require_irreducible(a: &TropMatrix, op: &'static str) -> Result<usize> {
    let n = a.require_square(op)?;
    if is_irreducible(a)? {
        Ok(n)
    } else {
        Err(Error::Reducible { op })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusForm {
    /// `permutation[r]` is the original index of the node placed at position `r`.
    pub permutation: Vec<usize>,
    /// Original node indices of each diagonal block, in block order.
    pub blocks: Vec<Vec<usize>>,
    pub diagonal_blocks: Vec<TropMatrix>,
    /// Block lower-triangular: every block above the diagonal is ε.
    pub permuted_matrix: TropMatrix,
}

impl FrobeniusForm {
    /// Position ranges of the diagonal blocks in `permuted_matrix`.
    pub fn block_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.blocks
            .iter()
            .map(|b| {
                let r = start..start + b.len();
                start += b.len();
                r
            })
            .collect()
    }

    /// Undo the permutation.
    pub fn original(&self) -> Result<TropMatrix> {
        let mut inverse = vec![0usize; self.permutation.len()];
        for (pos, &orig) in self.permutation.iter().enumerate() {
            inverse[orig] = pos;
        }
        self.permuted_matrix.permuted(&inverse)
    }
}

pub fn frobenius_normal_form(a: &TropMatrix) -> Result<FrobeniusForm> {
    let g = Digraph::from_matrix(a)?;
    let blocks = order_components(&g.successors, tarjan(&g.successors), true);
    let permutation: Vec<usize> = blocks.iter().flatten().copied().collect();
    let diagonal_blocks = blocks
        .iter()
        .map(|b| a.principal_submatrix(b))
        .collect::<Result<Vec<_>>>()?;
    let permuted_matrix = a.permuted(&permutation)?;
    Ok(FrobeniusForm {
        permutation,
        blocks,
        diagonal_blocks,
        permuted_matrix,
    })
}

/// Karp's recurrence on one strongly connected component.
#[allow(clippy::needless_range_loop)]
fn karp_component(a: &TropMatrix, comp: &[usize]) -> TropScalar {
    let s = comp.len();
    if s == 1 {
        return a.get(comp[0], comp[0]).clone();
    }
    // walks[k][v]: heaviest length-k walk from comp[0] to comp[v].
    let mut walks = vec![vec![TropScalar::Eps; s]; s + 1];
    walks[0][0] = TropScalar::zero();
    for k in 1..=s {
        for v in 0..s {
            let mut best = TropScalar::Eps;
            for u in 0..s {
                let cand = walks[k - 1][u].otimes(a.get(comp[u], comp[v]));
                if cand > best {
                    best = cand;
                }
            }
            walks[k][v] = best;
        }
    }
    let mut lambda = TropScalar::Eps;
    for v in 0..s {
        let Some(full) = walks[s][v].finite() else {
            continue;
        };
        let worst = (0..s)
            .filter_map(|k| {
                walks[k][v].finite().map(|dk| {
                    (full - dk) / BigRational::from_integer(BigInt::from(s - k))
                })
            })
            .min();
        if let Some(w) = worst {
            let w = TropScalar::Fin(w);
            if w > lambda {
                lambda = w;
            }
        }
    }
    lambda
}

/// Maximum cycle mean `μ(A)`; ε when `G_A` is acyclic.
pub fn max_cycle_mean(a: &TropMatrix) -> Result<TropScalar> {
    let g = Digraph::from_matrix(a)?;
    Ok(tarjan(&g.successors)
        .iter()
        .map(|comp| karp_component(a, comp))
        .max()
        .unwrap_or(TropScalar::Eps))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralData {
    /// `μ(A)`; equal to `λ(A)` for irreducible input.
    pub lambda: TropScalar,
    /// `E(A)`, sorted.
    pub critical_nodes: Vec<usize>,
    /// `C(A)`, sorted.
    pub critical_edges: Vec<(usize, usize)>,
    /// Strongly connected components of the critical graph, ordered by smallest node.
    pub components: Vec<Vec<usize>>,
    /// `g_s` for each entry of `components`.
    pub cyclicities: Vec<u64>,
    /// `lcm(g_s)`. `None` for reducible cyclic input; `Some(1)` by convention when acyclic.
    pub period: Option<u64>,
    pub irreducible: bool,
    /// Set when `G_A` has no cycle and the period is the conventional `1`.
    pub acyclic: bool,
}

impl SpectralData {
    /// `lcm(g_s)` regardless of irreducibility.
    pub fn cyclicity_lcm(&self) -> u64 {
        self.cyclicities.iter().fold(1u64, |acc, &g| acc.lcm(&g))
    }

    /// Adjacency of the critical graph restricted to one component.
    pub(crate) fn component_successors(&self, component: usize) -> (Vec<usize>, Vec<Vec<usize>>) {
        let nodes = self.components[component].clone();
        let local = |v: usize| nodes.binary_search(&v).ok();
        let mut succ = vec![Vec::new(); nodes.len()];
        for &(i, j) in &self.critical_edges {
            if let (Some(li), Some(lj)) = (local(i), local(j)) {
                succ[li].push(lj);
            }
        }
        (nodes, succ)
    }
}

/// BFS levels from the smallest node; `g = gcd(level(u) + 1 − level(v))` over edges.
fn cyclicity(succ: &[Vec<usize>]) -> u64 {
    let mut level: Vec<Option<i64>> = vec![None; succ.len()];
    level[0] = Some(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        let lu = level[u].unwrap();
        for &v in &succ[u] {
            if level[v].is_none() {
                level[v] = Some(lu + 1);
                queue.push_back(v);
            }
        }
    }
    let mut g = 0i64;
    for (u, targets) in succ.iter().enumerate() {
        for &v in targets {
            g = g.gcd(&(level[u].unwrap() + 1 - level[v].unwrap()));
        }
    }
    g.unsigned_abs()
}

fn critical_data(a: &TropMatrix, lambda: TropScalar) -> Result<SpectralData> {
    let n = a.rows();
    let shift = lambda.inverse().expect("finite lambda");
    let normalized = a.scale(&shift);
    let star = spectral::closure_nonpositive(&normalized, true)?;
    let zero = TropScalar::zero();
    let mut critical_edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let b = normalized.get(i, j);
            if b.is_finite() && b.otimes(star.get(j, i)) == zero {
                critical_edges.push((i, j));
            }
        }
    }
    let critical_nodes: Vec<usize> = critical_edges
        .iter()
        .flat_map(|&(i, j)| [i, j])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let mut succ = vec![Vec::new(); n];
    for &(i, j) in &critical_edges {
        succ[i].push(j);
    }
    let mut components: Vec<Vec<usize>> = tarjan(&succ)
        .into_iter()
        .filter(|c| critical_nodes.binary_search(&c[0]).is_ok())
        .collect();
    components.sort();

    let mut data = SpectralData {
        lambda,
        critical_nodes,
        critical_edges,
        components,
        cyclicities: Vec::new(),
        period: None,
        irreducible: is_irreducible(a)?,
        acyclic: false,
    };
    data.cyclicities = (0..data.components.len())
        .map(|c| cyclicity(&data.component_successors(c).1))
        .collect();
    if data.irreducible {
        data.period = Some(data.cyclicity_lcm());
    }
    Ok(data)
}

/// Critical graph, cyclicities and (for irreducible input) `per(A) = lcm(g_s)`.
pub fn critical_graph(a: &TropMatrix) -> Result<SpectralData> {
    a.require_square("critical_graph")?;
    let lambda = max_cycle_mean(a)?;
    if lambda.is_eps() {
        return Err(Error::Acyclic {
            op: "critical_graph",
        });
    }
    critical_data(a, lambda)
}

/// Like [`critical_graph`], but acyclic input yields `μ = ε`, an empty
/// critical graph and the conventional period `1` with `acyclic` set.
pub fn spectral_data(a: &TropMatrix) -> Result<SpectralData> {
    a.require_square("spectral_data")?;
    let lambda = max_cycle_mean(a)?;
    if lambda.is_finite() {
        return critical_data(a, lambda);
    }
    Ok(SpectralData {
        lambda,
        critical_nodes: Vec::new(),
        critical_edges: Vec::new(),
        components: Vec::new(),
        cyclicities: Vec::new(),
        period: Some(1),
        irreducible: is_irreducible(a)?,
        acyclic: true,
    })
}

/// `per(A)` by the cyclicity formula; irreducible input with a cycle only.
pub fn period(a: &TropMatrix) -> Result<u64> {
    require_irreducible(a, "period")?;
    Ok(critical_graph(a)?.cyclicity_lcm())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockSpectrum {
    pub nodes: Vec<usize>,
    pub lambda: TropScalar,
    /// `None` when the block is a single node without a loop.
    pub period: Option<u64>,
}

/// Per-block eigenvalue and period of the Frobenius normal form.
pub fn block_periods(a: &TropMatrix) -> Result<Vec<BlockSpectrum>> {
    let fnf = frobenius_normal_form(a)?;
    fnf.blocks
        .iter()
        .zip(&fnf.diagonal_blocks)
        .map(|(nodes, block)| {
            let lambda = max_cycle_mean(block)?;
            let period = if lambda.is_finite() {
                Some(critical_graph(block)?.cyclicity_lcm())
            } else {
                None
            };
            Ok(BlockSpectrum {
                nodes: nodes.clone(),
                lambda,
                period,
            })
        })
        .collect()
}

/// Lengths of all simple cycles reachable inside `succ`, found by DFS from
/// each start node over higher-numbered nodes only.
pub(crate) fn simple_cycle_lengths(succ: &[Vec<usize>]) -> BTreeSet<usize> {
    fn dfs(succ: &[Vec<usize>], start: usize, v: usize, depth: usize, on_path: &mut [bool], out: &mut BTreeSet<usize>) {
        for &w in &succ[v] {
            if w == start {
                out.insert(depth);
            } else if w > start && !on_path[w] {
                on_path[w] = true;
                dfs(succ, start, w, depth + 1, on_path, out);
                on_path[w] = false;
            }
        }
    }
    let mut out = BTreeSet::new();
    let mut on_path = vec![false; succ.len()];
    for start in 0..succ.len() {
        on_path[start] = true;
        dfs(succ, start, start, 1, &mut on_path, &mut out);
        on_path[start] = false;
    }
    out
}
