use crate::allocators::ItemValues;
use crate::{GoodSet, PartialAllocation, Rational, Value};

/// How edges of the envy graph are decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnvyGraphMode {
    /// `(i, j)` is an edge iff `v_i(P_i) < v_i(P_j)`.
    Standard,
    /// As standard, except that an edge `(i, j)` is dropped while agent `i`
    /// still holds her protected bundle and `alpha * v_i(P_i) > v_i(P_j)`.
    /// `protected[i]` is `None` for unprotected agents.
    Adjusted {
        alpha: Value,
        protected: Vec<Option<GoodSet>>,
    },
}

/// Directed envy relation over agents for one partial allocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvyGraph {
    edges: Vec<Vec<bool>>,
}

impl EnvyGraph {
    /// `values[i][j] = v_i(P_j)`.
    fn from_values(values: &[Vec<Rational>], alloc: &PartialAllocation, mode: &EnvyGraphMode) -> Self {
        let n = values.len();
        let mut edges = vec![vec![false; n]; n];
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                let own = &values[i][i];
                let other = &values[i][j];
                if own >= other {
                    continue;
                }
                if let EnvyGraphMode::Adjusted { alpha, protected } = mode {
                    let shielded = protected[i].as_ref() == Some(alloc.bundle(i))
                        && alpha.clone() * Value::from(own.clone()) > Value::from(other.clone());
                    if shielded {
                        continue;
                    }
                }
                edges[i][j] = true;
            }
        }
        EnvyGraph { edges }
    }

    pub fn build(values: &impl ItemValues, alloc: &PartialAllocation, mode: &EnvyGraphMode) -> Self {
        EnvyGraph::from_values(&value_matrix(values, alloc), alloc, mode)
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges[from][to]
    }

    pub fn in_degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|row| row[node]).count()
    }

    /// Lowest-index node nobody points at.
    pub fn first_source(&self) -> Option<usize> {
        (0..self.edges.len()).find(|&j| self.in_degree(j) == 0)
    }

    /// `reach[i][j]`: a nonempty path leads from `i` to `j`.
    fn reachability(&self) -> Vec<Vec<bool>> {
        let n = self.edges.len();
        let mut reach = self.edges.clone();
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        reach
    }

    /// A deterministic cycle: start at the lowest-index node lying on a
    /// cycle and repeatedly follow the lowest-index edge that stays in its
    /// strongly connected component until a node repeats.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        let n = self.edges.len();
        let reach = self.reachability();
        let start = (0..n).find(|&i| reach[i][i])?;
        let same_component = |j: usize| reach[start][j] && reach[j][start];
        let mut walk = vec![start];
        let mut pos = vec![usize::MAX; n];
        pos[start] = 0;
        let mut cur = start;
        loop {
            let next = (0..n)
                .find(|&j| self.edges[cur][j] && same_component(j))
                .expect("every node of a nontrivial component has an edge inside it");
            if pos[next] != usize::MAX {
                return Some(walk[pos[next]..].to_vec());
            }
            pos[next] = walk.len();
            walk.push(next);
            cur = next;
        }
    }
}

fn value_matrix(values: &impl ItemValues, alloc: &PartialAllocation) -> Vec<Vec<Rational>> {
    (0..values.agents())
        .map(|i| {
            alloc
                .bundles()
                .iter()
                .map(|b| values.set_value(i, b))
                .collect()
        })
        .collect()
}

/// Allocates `remaining` goods in index order, each to the lowest-index agent
/// nobody envies, first eliminating envy cycles by shifting bundles backwards
/// along them. Calls `observe` with the allocation after every good.
fn run(
    values: &impl ItemValues,
    partial: PartialAllocation,
    remaining: &GoodSet,
    mode: &EnvyGraphMode,
    mut observe: impl FnMut(&PartialAllocation),
) -> PartialAllocation {
    let n = values.agents();
    let mut alloc = partial;
    let mut mode = mode.clone();
    let mut matrix = value_matrix(values, &alloc);
    for &g in remaining {
        debug_assert!(alloc.unallocated().contains(&g));
        let source = loop {
            let graph = EnvyGraph::from_values(&matrix, &alloc, &mode);
            if let Some(s) = graph.first_source() {
                break s;
            }
            let cycle = graph
                .find_cycle()
                .expect("a graph without sources has a cycle");
            alloc.rotate(&cycle);
            // Column k of the value matrix follows the bundle now held by k.
            for row in matrix.iter_mut() {
                let first = row[cycle[0]].clone();
                for w in cycle.windows(2) {
                    row[w[0]] = row[w[1]].clone();
                }
                row[cycle[cycle.len() - 1]] = first;
            }
            if let EnvyGraphMode::Adjusted { protected, .. } = &mut mode {
                for &a in &cycle {
                    protected[a] = None;
                }
            }
        };
        alloc.assign(source, g);
        for (i, row) in matrix.iter_mut().enumerate() {
            row[source] += values.item_value(i, g);
        }
        if let EnvyGraphMode::Adjusted { protected, .. } = &mut mode {
            protected[source] = None;
        }
        debug_assert!(alloc.is_valid(alloc.num_goods()));
        observe(&alloc);
    }
    debug_assert_eq!(matrix.len(), n);
    alloc
}

pub fn envy_cycle_elimination(
    values: &impl ItemValues,
    partial: PartialAllocation,
    remaining: &GoodSet,
    mode: &EnvyGraphMode,
) -> PartialAllocation {
    run(values, partial, remaining, mode, |_| {})
}

/// As [`envy_cycle_elimination`], also returning the allocation after each
/// good is placed (first entry: the input).
pub fn envy_cycle_elimination_traced(
    values: &impl ItemValues,
    partial: PartialAllocation,
    remaining: &GoodSet,
    mode: &EnvyGraphMode,
) -> (PartialAllocation, Vec<PartialAllocation>) {
    let mut trace = vec![partial.clone()];
    let out = run(values, partial, remaining, mode, |a| trace.push(a.clone()));
    (out, trace)
}
